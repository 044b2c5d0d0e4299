#pragma once

#include <span>
#include <vector>

namespace rvc {

// Univariate margin: gaussian kernel density with a fixed plug-in bandwidth
// for the pdf, and a rescaled empirical CDF that keeps probabilities strictly
// inside (0, 1) so downstream copula inputs never hit 0 or 1 exactly.
class MarginalModel {
public:
    static MarginalModel fit(std::span<const double> xs);

    // Reconstruct from stored parts; sample must already be sorted.
    static MarginalModel from_parts(std::vector<double> sorted_sample,
                                    double bandwidth);

    double pdf(double x) const;   // floored at 1e-20
    double cdf(double x) const;   // (#below + 0.5 #equal + 0.5) / (n + 1)

    double bandwidth() const { return bandwidth_; }
    const std::vector<double>& sample() const { return sample_; }

private:
    MarginalModel(std::vector<double> sorted, double bw)
        : sample_(std::move(sorted)), bandwidth_(bw) {}
    std::vector<double> sample_;   // ascending
    double bandwidth_;
};

} // namespace rvc
