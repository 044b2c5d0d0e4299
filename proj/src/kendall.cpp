#include "kendall.hpp"

#include <cmath>
#include <cstddef>

#include "errors.hpp"

namespace rvc {

double kendall_tau(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (y.size() != n) fail(ErrorKind::invalid_argument, "kendall_tau: length mismatch");
    if (n < 2) fail(ErrorKind::invalid_argument, "kendall_tau: need at least two pairs");

    long long concordant = 0, discordant = 0;
    long long ties_x = 0, ties_y = 0, ties_both = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double dx = x[i] - x[j];
            double dy = y[i] - y[j];
            if (dx == 0.0 && dy == 0.0) ++ties_both;
            else if (dx == 0.0) ++ties_x;
            else if (dy == 0.0) ++ties_y;
            else if ((dx > 0.0) == (dy > 0.0)) ++concordant;
            else ++discordant;
        }
    }
    double n0 = 0.5 * static_cast<double>(n) * (static_cast<double>(n) - 1.0);
    double n1 = static_cast<double>(ties_x + ties_both);
    double n2 = static_cast<double>(ties_y + ties_both);
    double denom = std::sqrt((n0 - n1) * (n0 - n2));
    if (denom <= 0.0) return 0.0;
    return static_cast<double>(concordant - discordant) / denom;
}

} // namespace rvc
