#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mopkit/matrix_polynomial.hpp"

namespace mopkit::io {

inline constexpr int kReportSchema = 1;

struct Verdict {
    std::string name;
    std::string value;
    bool violation = false;
};

struct Table {
    std::string name;
    std::string tolerance;  // the regime every cell was computed under
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

struct Report {
    std::string command;
    std::vector<Verdict> verdicts;
    std::vector<Table> tables;
    std::vector<std::pair<std::string, std::string>> certificates;
    std::vector<std::string> notes;

    // 1 when any verdict is a violation, else 0
    int exit_code() const;
};

nlohmann::json to_json(const Report& r);
Report from_json(const nlohmann::json& j);  // ParseError on a malformed or wrong-schema report
// Text output is always produced from the JSON form.
std::string render_text(const nlohmann::json& j);
inline std::string render_text(const Report& r) { return render_text(to_json(r)); }

// 12 significant digits; complex as re+imj.
std::string fmt(double x);
std::string fmt(cplx z);
std::string fmt(const CMatrix& A);
std::string fmt(const MatrixPolynomial& P);
// Zero out entries below eps times the largest entry (display only).
CMatrix chop(const CMatrix& A, double eps = 1e-12);
MatrixPolynomial chop(const MatrixPolynomial& P, double eps = 1e-12);

std::string fmt_tol(const Tolerance& tol);

}  // namespace mopkit::io
