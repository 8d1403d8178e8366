#include "mopkit/spec_json.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "mopkit/errors.hpp"

namespace mopkit::io {

using nlohmann::json;

namespace {

bool is_pair(const json& j) { return j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(); }
bool is_scalar(const json& j) { return j.is_number() || is_pair(j); }

[[noreturn]] void fail(const std::string& msg) { throw ParseError(msg); }

Index read_dim(const json& j) {
    if (!j.contains("dim")) return 0;
    if (!j["dim"].is_number_integer() || j["dim"].get<long>() < 1) fail("\"dim\" must be a positive integer");
    return static_cast<Index>(j["dim"].get<long>());
}

}  // namespace

cplx parse_scalar(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (is_pair(j)) return {j[0].get<double>(), j[1].get<double>()};
    fail("expected a number or [re, im], got " + j.dump());
}

CMatrix parse_matrix(const json& j, Index m) {
    if (is_scalar(j)) return parse_scalar(j) * identity(m);
    if (!j.is_array()) fail("expected a matrix, got " + j.dump());
    if (m == 1 && j.size() == 1 && is_scalar(j[0])) return CMatrix::Constant(1, 1, parse_scalar(j[0]));
    if (static_cast<Index>(j.size()) != m) fail("matrix needs " + std::to_string(m) + " rows: " + j.dump());
    CMatrix M(m, m);
    for (Index i = 0; i < m; ++i) {
        const json& row = j[static_cast<std::size_t>(i)];
        if (m == 1 && is_scalar(row)) {
            M(0, 0) = parse_scalar(row);
            continue;
        }
        if (!row.is_array() || static_cast<Index>(row.size()) != m)
            fail("matrix row needs " + std::to_string(m) + " entries: " + row.dump());
        for (Index k = 0; k < m; ++k) M(i, k) = parse_scalar(row[static_cast<std::size_t>(k)]);
    }
    return M;
}

std::vector<cplx> parse_shorthand(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) fail("empty polynomial");
    std::vector<cplx> out;
    std::size_t i = 0;
    while (i < s.size()) {
        double sign = 1.0;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1.0 : 1.0;
            ++i;
        } else if (!out.empty() || i > 0) {
            fail("expected + or - in \"" + text + "\"");
        }
        double coef = 1.0;
        bool have_num = false;
        if (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) {
            const char* begin = s.c_str() + i;
            char* end = nullptr;
            coef = std::strtod(begin, &end);
            if (end == begin) fail("bad number in \"" + text + "\"");
            i += static_cast<std::size_t>(end - begin);
            have_num = true;
            if (i < s.size() && s[i] == '*') ++i;
        }
        std::size_t power = 0;
        if (i < s.size() && s[i] == 'x') {
            ++i;
            power = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::size_t start = i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
                if (start == i) fail("bad exponent in \"" + text + "\"");
                power = static_cast<std::size_t>(std::stoul(s.substr(start, i - start)));
            }
        } else if (!have_num) {
            fail("cannot parse \"" + text + "\"");
        }
        if (out.size() <= power) out.resize(power + 1, 0.0);
        out[power] += sign * coef;
    }
    return out;
}

MatrixPolynomial parse_polynomial(const json& j, Index m) {
    if (j.is_string()) {
        if (m != 1) fail("polynomial shorthand strings are only accepted for dim 1");
        return MatrixPolynomial::scalar(parse_shorthand(j.get<std::string>()), 1);
    }
    if (!j.is_array()) fail("expected a list of coefficient matrices, got " + j.dump());
    std::vector<CMatrix> c;
    for (const auto& e : j) c.push_back(parse_matrix(e, m));
    return MatrixPolynomial(m, std::move(c));
}

gallery::Params parse_params(const json& j) {
    gallery::Params p;
    if (j.is_null()) return p;
    if (!j.is_object()) fail("\"params\" must be an object");
    for (const auto& [k, v] : j.items()) {
        if (is_scalar(v)) {
            p.scalars[k] = parse_scalar(v);
        } else if (v.is_array() && !v.empty() && v[0].is_array()) {
            p.matrices[k] = parse_matrix(v, static_cast<Index>(v.size()));
        } else {
            fail("parameter " + k + " must be a scalar or a square matrix");
        }
    }
    return p;
}

LoadedSpec load_spec(const json& j) {
    if (!j.is_object()) fail("spec must be a JSON object");
    const bool has_pearson = j.contains("phi") || j.contains("psi");
    const bool has_moments = j.contains("moments");
    const bool has_gallery = j.contains("gallery");
    // explicit moments may carry a claimed Pearson pair, which is then checked, not used
    if (has_gallery ? (has_pearson || has_moments) : !(has_pearson || has_moments))
        fail("spec needs a gallery name, or moments and/or phi/psi");

    LoadedSpec out;
    out.source = j.dump();
    try {
        if (has_gallery) {
            if (!j["gallery"].is_string()) fail("\"gallery\" must be a name");
            gallery::GalleryEntry e = gallery::build(j["gallery"].get<std::string>(),
                                                     parse_params(j.value("params", json())));
            out.u = e.functional;
            out.pearson = e.pearson;
            out.zero_class = e.zero_class;
            out.entry = std::move(e);
            return out;
        }
        Index m = read_dim(j);
        if (has_moments) {
            if (!j["moments"].is_array() || j["moments"].empty()) fail("\"moments\" must be a non-empty list");
            if (m == 0) m = j["moments"][0].is_array() && j["moments"][0].size() > 0 && j["moments"][0][0].is_array()
                                ? static_cast<Index>(j["moments"][0].size())
                                : 1;
            std::vector<CMatrix> mu;
            for (const auto& e : j["moments"]) mu.push_back(parse_matrix(e, m));
            out.u = Functional::from_moments(mu);
            if (has_pearson) {
                if (!j.contains("phi") || !j.contains("psi")) fail("a claimed Pearson pair needs both phi and psi");
                if (j.contains("mu0")) fail("\"mu0\" comes from the moment list when moments are given");
                PearsonSpec spec(parse_polynomial(j["phi"], m), parse_polynomial(j["psi"], m), mu[0]);
                out.pearson = spec;
                try {
                    out.zero_class = ZeroClassSpec::from_pearson(spec);
                } catch (const Error&) {
                }
            }
            return out;
        }
        if (!j.contains("phi") || !j.contains("psi") || !j.contains("mu0")) fail("a Pearson spec needs phi, psi and mu0");
        if (m == 0) m = 1;
        CMatrix mu0;
        if (j["mu0"].is_string()) {
            if (j["mu0"].get<std::string>() != "identity") fail("\"mu0\" string must be \"identity\"");
            mu0 = identity(m);
        } else {
            mu0 = parse_matrix(j["mu0"], m);
        }
        PearsonSpec spec(parse_polynomial(j["phi"], m), parse_polynomial(j["psi"], m), mu0);
        out.pearson = spec;
        out.u = Functional::from_pearson(spec);
        try {
            out.zero_class = ZeroClassSpec::from_pearson(spec);
        } catch (const Error&) {
        }
        return out;
    } catch (const ParseError&) {
        throw;
    } catch (const UnknownExample& e) {
        fail(e.what());
    } catch (const InvalidParameter& e) {
        fail(e.what());
    } catch (const DimensionMismatch& e) {
        fail(e.what());
    }
}

LoadedSpec load_spec(const std::string& text) {
    const std::string prefix = "gallery:";
    if (text.rfind(prefix, 0) == 0) {
        LoadedSpec s = load_spec(json{{"gallery", text.substr(prefix.size())}});
        s.source = text;
        return s;
    }
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail(std::string("spec is neither gallery:<name> nor valid JSON: ") + e.what());
    }
    LoadedSpec s = load_spec(j);
    s.source = text;
    return s;
}

}  // namespace mopkit::io
