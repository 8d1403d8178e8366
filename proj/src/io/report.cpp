#include "mopkit/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "mopkit/errors.hpp"

namespace mopkit::io {

using nlohmann::json;

int Report::exit_code() const {
    for (const auto& v : verdicts)
        if (v.violation) return 1;
    return 0;
}

std::string fmt(double x) {
    if (x == 0.0) x = 0.0;  // no "-0"
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string fmt(cplx z) {
    if (z.imag() == 0.0) return fmt(z.real());
    std::string im = fmt(z.imag());
    if (z.real() == 0.0) return im + "j";
    if (im[0] != '-') im = "+" + im;
    return fmt(z.real()) + im + "j";
}

std::string fmt(const CMatrix& A) {
    if (A.rows() == 1 && A.cols() == 1) return fmt(A(0, 0));
    std::string s = "[";
    for (Index i = 0; i < A.rows(); ++i) {
        s += i ? ", [" : "[";
        for (Index j = 0; j < A.cols(); ++j) s += (j ? ", " : "") + fmt(A(i, j));
        s += "]";
    }
    return s + "]";
}

std::string fmt(const MatrixPolynomial& P) {
    if (P.is_zero()) return "0";
    std::string s;
    for (std::size_t k = 0; k < P.size(); ++k) {
        const CMatrix& c = P.coeffs()[k];
        if (c.isZero(0.0)) continue;
        std::string t = fmt(c);
        if (P.dim() == 1 && k > 0 && c(0, 0) == cplx(1.0)) t = "";
        if (P.dim() == 1 && k > 0 && c(0, 0) == cplx(-1.0)) t = "-";
        if (P.dim() == 1 && c(0, 0).imag() != 0.0 && c(0, 0).real() != 0.0) t = "(" + t + ")";
        const std::string sep = (t.empty() || t == "-") ? "" : " ";
        if (k == 1) t += sep + "x";
        if (k > 1) t += sep + "x^" + std::to_string(k);
        if (!s.empty() && P.dim() == 1 && t[0] == '-')
            s += " - " + t.substr(1);
        else
            s += (s.empty() ? "" : " + ") + t;
    }
    return s;
}

CMatrix chop(const CMatrix& A, double eps) {
    const double big = A.cwiseAbs().maxCoeff();
    CMatrix B = A;
    for (Index i = 0; i < B.rows(); ++i)
        for (Index j = 0; j < B.cols(); ++j) {
            cplx& z = B(i, j);
            if (std::abs(z) <= eps * big) z = 0.0;
            if (std::abs(z.real()) <= eps * big) z.real(0.0);
            if (std::abs(z.imag()) <= eps * big) z.imag(0.0);
        }
    return B;
}

MatrixPolynomial chop(const MatrixPolynomial& P, double eps) {
    double big = 0.0;
    for (const auto& c : P.coeffs()) big = std::max(big, c.cwiseAbs().maxCoeff());
    std::vector<CMatrix> c = P.coeffs();
    for (auto& m : c)
        for (Index i = 0; i < m.rows(); ++i)
            for (Index j = 0; j < m.cols(); ++j) {
                cplx& z = m(i, j);
                if (std::abs(z.real()) <= eps * big) z.real(0.0);
                if (std::abs(z.imag()) <= eps * big) z.imag(0.0);
            }
    return MatrixPolynomial(P.dim(), std::move(c));
}

std::string fmt_tol(const Tolerance& tol) {
    return "rel=" + fmt(tol.rel) + " abs=" + fmt(tol.abs) + " cond_max=" + fmt(tol.cond_max);
}

json to_json(const Report& r) {
    json j;
    j["schema"] = kReportSchema;
    j["command"] = r.command;
    j["verdicts"] = json::array();
    for (const auto& v : r.verdicts) j["verdicts"].push_back({{"name", v.name}, {"value", v.value}, {"violation", v.violation}});
    j["tables"] = json::array();
    for (const auto& t : r.tables)
        j["tables"].push_back({{"name", t.name}, {"tolerance", t.tolerance}, {"columns", t.columns}, {"rows", t.rows}});
    j["certificates"] = json::array();
    for (const auto& [k, v] : r.certificates) j["certificates"].push_back({{"name", k}, {"value", v}});
    j["notes"] = r.notes;
    j["exit_code"] = r.exit_code();
    return j;
}

Report from_json(const json& j) {
    try {
        if (!j.is_object() || j.value("schema", 0) != kReportSchema) throw ParseError("not a schema 1 report");
        Report r;
        r.command = j.at("command").get<std::string>();
        for (const auto& v : j.at("verdicts"))
            r.verdicts.push_back({v.at("name").get<std::string>(), v.at("value").get<std::string>(), v.at("violation").get<bool>()});
        for (const auto& t : j.at("tables"))
            r.tables.push_back({t.at("name").get<std::string>(), t.at("tolerance").get<std::string>(),
                                t.at("columns").get<std::vector<std::string>>(),
                                t.at("rows").get<std::vector<std::vector<std::string>>>()});
        for (const auto& c : j.at("certificates"))
            r.certificates.emplace_back(c.at("name").get<std::string>(), c.at("value").get<std::string>());
        r.notes = j.at("notes").get<std::vector<std::string>>();
        return r;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed report: ") + e.what());
    }
}

std::string render_text(const json& j) {
    const Report r = from_json(j);
    std::ostringstream os;
    os << "# " << r.command << "\n";
    for (const auto& v : r.verdicts) os << v.name << ": " << v.value << (v.violation ? "  [VIOLATION]" : "") << "\n";
    for (const auto& t : r.tables) {
        os << "\n" << t.name << "  (" << t.tolerance << ")\n";
        std::vector<std::size_t> w(t.columns.size());
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
            w[c] = t.columns[c].size();
            for (const auto& row : t.rows)
                if (c < row.size()) w[c] = std::max(w[c], row[c].size());
        }
        auto line = [&](const std::vector<std::string>& cells) {
            std::string s = " ";
            for (std::size_t c = 0; c < w.size(); ++c) {
                std::string cell = c < cells.size() ? cells[c] : "";
                cell.resize(w[c], ' ');
                s += " " + cell + (c + 1 < w.size() ? "  |" : "");
            }
            while (!s.empty() && s.back() == ' ') s.pop_back();
            os << s << "\n";
        };
        line(t.columns);
        for (const auto& row : t.rows) line(row);
    }
    if (!r.certificates.empty()) os << "\n";
    for (const auto& [k, v] : r.certificates) os << "certificate " << k << ": " << v << "\n";
    for (const auto& n : r.notes) os << n << "\n";
    return os.str();
}

}  // namespace mopkit::io
