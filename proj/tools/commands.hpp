#pragma once

#include <optional>
#include <string>

#include "mopkit/report.hpp"
#include "mopkit/spec_json.hpp"

namespace mopkit::cli {

// Residual above which a computed identity is reported as a violation.
inline constexpr double kViolation = 1e-7;

io::Report moments(const io::LoadedSpec& s, std::size_t n, const Tolerance& tol);
io::Report mop(const io::LoadedSpec& s, std::size_t n, const Tolerance& tol);
io::Report check_pearson(const io::LoadedSpec& s, std::size_t n, const Tolerance& tol);
io::Report derivatives(const io::LoadedSpec& s, std::size_t depth, std::size_t n, const Tolerance& tol);
io::Report module_basis(const io::LoadedSpec& s, std::size_t p, std::size_t q, std::optional<std::size_t> horizon,
                        const Tolerance& tol);
io::Report class_of(const io::LoadedSpec& s, std::size_t d_max, const Tolerance& tol);
io::Report zeroclass(const std::string& action, const io::LoadedSpec& s, std::size_t n, const Tolerance& tol);
io::Report gallery_list();
io::Report gallery_show(const std::string& name);

}  // namespace mopkit::cli
