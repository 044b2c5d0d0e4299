#include "marginal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.hpp"
#include "normal.hpp"
#include "util.hpp"

namespace rvc {

namespace {

// Type-7 quantile of a sorted sample.
double quantile7(const std::vector<double>& s, double p) {
    double h = (double(s.size()) - 1.0) * p;
    std::size_t lo = std::size_t(std::floor(h));
    if (lo + 1 >= s.size()) return s.back();
    return s[lo] + (h - double(lo)) * (s[lo + 1] - s[lo]);
}

} // namespace

MarginalModel MarginalModel::fit(std::span<const double> xs) {
    std::size_t n = xs.size();
    if (n < 10)
        fail(ErrorKind::invalid_argument,
             "margin fit needs at least 10 observations, got " + std::to_string(n));
    require_finite(xs, "margin fit");

    std::vector<double> s(xs.begin(), xs.end());
    std::sort(s.begin(), s.end());
    if (s.front() == s.back())
        fail(ErrorKind::degenerate_data, "margin fit: all values equal");

    double mean = 0.0;
    for (double x : s) mean += x;
    mean /= double(n);
    double ss = 0.0;
    for (double x : s) ss += (x - mean) * (x - mean);
    double sd = std::sqrt(ss / double(n - 1));

    double iqr = quantile7(s, 0.75) - quantile7(s, 0.25);
    double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
    double bw = 0.9 * spread * std::pow(double(n), -0.2);
    return MarginalModel(std::move(s), bw);
}

MarginalModel MarginalModel::from_parts(std::vector<double> sorted_sample,
                                        double bandwidth) {
    if (sorted_sample.size() < 2)
        fail(ErrorKind::invalid_argument, "margin needs at least 2 points");
    if (!std::is_sorted(sorted_sample.begin(), sorted_sample.end()))
        fail(ErrorKind::invalid_argument, "margin sample must be sorted");
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
        fail(ErrorKind::invalid_argument, "margin bandwidth must be positive");
    return MarginalModel(std::move(sorted_sample), bandwidth);
}

double MarginalModel::pdf(double x) const {
    if (!std::isfinite(x))
        fail(ErrorKind::invalid_argument, "margin pdf: non-finite input");
    double s = 0.0;
    for (double xi : sample_) s += norm_pdf((x - xi) / bandwidth_);
    double d = s / (double(sample_.size()) * bandwidth_);
    return std::max(d, 1e-20);
}

double MarginalModel::cdf(double x) const {
    if (!std::isfinite(x))
        fail(ErrorKind::invalid_argument, "margin cdf: non-finite input");
    auto lo = std::lower_bound(sample_.begin(), sample_.end(), x);
    auto hi = std::upper_bound(lo, sample_.end(), x);
    double below = double(lo - sample_.begin());
    double equal = double(hi - lo);
    return (below + 0.5 * equal + 0.5) / (double(sample_.size()) + 1.0);
}

} // namespace rvc
