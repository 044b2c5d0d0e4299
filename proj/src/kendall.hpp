#pragma once

#include <span>

namespace rvc {

// Kendall's tau-b: O(N^2) concordance count with tie correction in the
// denominator. Returns 0 when either margin is entirely tied.
double kendall_tau(std::span<const double> x, std::span<const double> y);

} // namespace rvc
