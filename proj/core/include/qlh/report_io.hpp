#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qlh/certify.hpp"
#include "qlh/grothendieck.hpp"
#include "qlh/rounding.hpp"
#include "qlh/sdp.hpp"

namespace qlh {

/// {"objective", "dual_bound", "M": row-major, "rho": [{"re", "im"}],
///  "residuals": {...}, "iterations", "converged"}.
std::string solution_to_json(const sdp::MomentSolution& sol, double tol, int indent = 2);

/// Every report carries "version", the seed and sample count, and the
/// solver diagnostics. Nothing depends on the worker count.
std::string ratio_report_to_json(const rounding::RatioReport& r, int indent = 2);
/// The ratio layout plus "classical_objective".
std::string traceless_report_to_json(const grothendieck::TracelessReport& r, int indent = 2);

struct BoundsEntry {
  hermite::QuadraticCertificate quadratic;
  hermite::GeneralBound general;
};
/// {"version", "grid", "samples", "seed", "ranks": [{"k", "certified_min",
///  "observed_min", "argmin_point", ...}]}.
std::string bounds_to_json(const std::vector<BoundsEntry>& entries, int indent = 2);

}  // namespace qlh
