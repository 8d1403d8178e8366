#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mopkit/gallery.hpp"

namespace mopkit::io {

// A functional as read from the command line: inline JSON or "gallery:<name>".
struct LoadedSpec {
    std::string source;
    Functional u = Functional::from_moments({CMatrix::Identity(1, 1)});
    std::optional<PearsonSpec> pearson;
    std::optional<ZeroClassSpec> zero_class;
    std::optional<gallery::GalleryEntry> entry;
};

// All of these throw ParseError on malformed input.
LoadedSpec load_spec(const std::string& text);
LoadedSpec load_spec(const nlohmann::json& j);
inline LoadedSpec load_spec(const char* text) { return load_spec(std::string(text)); }

// number, [re, im]
cplx parse_scalar(const nlohmann::json& j);
// rows of entries; for m = 1 also a bare scalar or [scalar]; a bare scalar s means s I
CMatrix parse_matrix(const nlohmann::json& j, Index m);
// list of coefficient matrices (x^0 first), or a shorthand string when m = 1
MatrixPolynomial parse_polynomial(const nlohmann::json& j, Index m);
// "1-x^2", "-2x", "0.5*x^2 + 3": real coefficients, variable x
std::vector<cplx> parse_shorthand(const std::string& s);

gallery::Params parse_params(const nlohmann::json& j);

}  // namespace mopkit::io
