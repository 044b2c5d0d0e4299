#pragma once

#include <utility>
#include <vector>

namespace rvc {

double norm_pdf(double x);
double norm_cdf(double x);

// Inverse standard-normal CDF. Rational approximation refined by one Newton
// step; absolute error below 1e-12 on [1e-300, 1 - 1e-16].
double norm_quantile(double p);

// Bivariate standard-normal CDF P(X <= x, Y <= y) for correlation rho.
// Absolute error around 5e-16, smooth in both arguments.
double bvn_cdf(double x, double y, double rho);

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(int n);

} // namespace rvc
