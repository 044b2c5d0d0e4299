#pragma once

#include <cstdint>
#include <span>

#include "family.hpp"
#include "util.hpp"

namespace rvc {

struct PairFitResult;

// Bivariate copula on (0,1)^2. All evaluation entry points clamp their
// unit-interval arguments to [kUnitEps, 1 - kUnitEps] before computing.
class PairCopula {
public:
    PairCopula() : family_(Family::independence), theta_(0.0) {}
    PairCopula(Family f, double theta);   // theta must lie in the family's box

    Family family() const { return family_; }
    double theta() const { return theta_; }

    double log_density(double u, double v) const;
    double density(double u, double v) const;
    double cdf(double u, double v) const;

    // hfunc(u, v) = dC(u, v)/dv = P(U <= u | V = v).
    double hfunc(double u, double v) const;
    // hinv(p, v): the u with hfunc(u, v) = p.
    double hinv(double p, double v) const;

    double tau() const;

    static PairCopula from_tau(Family f, double tau);

    using FitResult = PairFitResult;
    // One-dimensional MLE initialised at the tau inversion of the sample tau.
    // Never returns a fit whose loglik is below the initialiser's.
    static FitResult fit_mle(Family f, std::span<const double> u,
                             std::span<const double> v);

    // n rows (u, v); row i consumes two RNG draws, v first.
    Matrix sample(std::size_t n, std::uint64_t seed) const;

private:
    Family family_;
    double theta_;
};

struct PairFitResult {
    PairCopula copula;
    double loglik;
};

double param_to_tau(Family f, double theta);
double tau_to_param(Family f, double tau);

// First Debye function D1(x) = (1/x) * integral_0^x t/(e^t - 1) dt, x > 0.
double debye1(double x);

} // namespace rvc
