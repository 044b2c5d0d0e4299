#include "pair_copula.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"
#include "kendall.hpp"
#include "normal.hpp"
#include "optimize.hpp"
#include "rng.hpp"

namespace rvc {

namespace {

// Below this magnitude the frank formulas are evaluated in their
// independence limit; the parameter itself stays admissible.
constexpr double kFrankIndepEps = 1e-4;

// ---------------------------------------------------------------- gaussian

double gauss_logc(double rho, double u, double v) {
    double x = norm_quantile(u), y = norm_quantile(v);
    double q = (1.0 - rho) * (1.0 + rho);
    double xy = x * y;   // grouped so the value is exactly symmetric in (u, v)
    return -0.5 * std::log(q)
         - (rho * rho * (x * x + y * y) - 2.0 * rho * xy) / (2.0 * q);
}

double gauss_h(double rho, double u, double v) {
    double x = norm_quantile(u), y = norm_quantile(v);
    return norm_cdf((x - rho * y) / std::sqrt((1.0 - rho) * (1.0 + rho)));
}

double gauss_hinv(double rho, double p, double v) {
    double zp = norm_quantile(p), zv = norm_quantile(v);
    return norm_cdf(zp * std::sqrt((1.0 - rho) * (1.0 + rho)) + rho * zv);
}

// ---------------------------------------------------------------- clayton

// log(u^-t + v^-t - 1) without overflow; a = -t*log(u), b = -t*log(v) >= 0.
double clayton_logt(double a, double b) {
    double m = std::max(a, b);
    return m + std::log1p(std::exp(-m) * std::expm1(std::min(a, b)));
}

double clayton_logc(double th, double u, double v) {
    double lu = std::log(u), lv = std::log(v);
    double logt = clayton_logt(-th * lu, -th * lv);
    return std::log1p(th) - (1.0 + th) * (lu + lv) - (2.0 + 1.0 / th) * logt;
}

double clayton_h(double th, double u, double v) {
    double lu = std::log(u), lv = std::log(v);
    double logt = clayton_logt(-th * lu, -th * lv);
    return std::exp(-(th + 1.0) * lv - (1.0 / th + 1.0) * logt);
}

double clayton_hinv(double th, double p, double v) {
    double e = std::expm1(-th * std::log(p) / (1.0 + th));   // >= 0
    double av = std::exp(-th * std::log(v));                 // v^-theta
    return std::exp(-std::log1p(av * e) / th);
}

double clayton_cdf(double th, double u, double v) {
    double logt = clayton_logt(-th * std::log(u), -th * std::log(v));
    return std::exp(-logt / th);
}

// ----------------------------------------------------------------- gumbel

// log((-log u)^t + (-log v)^t); lx = log(-log u), ly = log(-log v).
double gumbel_logS(double th, double lx, double ly) {
    double a = th * lx, b = th * ly;
    return std::max(a, b) + std::log1p(std::exp(-std::fabs(a - b)));
}

double gumbel_logc(double th, double u, double v) {
    double lu = std::log(u), lv = std::log(v);
    double lx = std::log(-lu), ly = std::log(-lv);
    double logS = gumbel_logS(th, lx, ly);
    double t1 = std::exp(logS / th);   // S^(1/th)
    return -t1 - (lu + lv) + (th - 1.0) * (lx + ly)
         + (2.0 / th - 2.0) * logS + std::log1p((th - 1.0) / t1);
}

double gumbel_h(double th, double u, double v) {
    double lu = std::log(u), lv = std::log(v);
    double lx = std::log(-lu), ly = std::log(-lv);
    double logS = gumbel_logS(th, lx, ly);
    double t1 = std::exp(logS / th);
    double lh = -t1 - lv + (th - 1.0) * ly + (1.0 / th - 1.0) * logS;
    return std::min(std::exp(lh), 1.0);
}

double gumbel_cdf(double th, double u, double v) {
    double lx = std::log(-std::log(u)), ly = std::log(-std::log(v));
    return std::exp(-std::exp(gumbel_logS(th, lx, ly) / th));
}

// No closed inverse; monotone in u, so Newton guarded by bisection. The
// Newton step solves log h(u) = log p, which stays scaled where h is tiny.
double gumbel_hinv(double th, double p, double v) {
    double lo = kUnitEps, hi = 1.0 - kUnitEps;
    double u = std::clamp(p, lo, hi);
    for (int it = 0; it < 200; ++it) {
        double h = gumbel_h(th, u, v);
        if (h == p) break;
        if (h > p) hi = u; else lo = u;
        if (hi - lo <= 1e-14 * hi) break;
        double c = std::exp(gumbel_logc(th, u, v));
        double next = 0.5 * (lo + hi);
        if (c > 0.0 && h > 0.0) {
            double cand = u - (std::log(h) - std::log(p)) * h / c;
            if (cand > lo && cand < hi) next = cand;
        }
        u = next;
    }
    return u;
}

// ------------------------------------------------------------------ frank

// Denominator g(1) + g(u)g(v), g(x) = expm1(-theta x), expanded so the two
// addends share a sign for every admissible theta (no cancellation). Arguments
// are ordered first, which makes the value exactly symmetric in (u, v).
double frank_den(double th, double u, double v) {
    if (u > v) std::swap(u, v);
    double a = std::exp(-th * u), b = std::exp(-th * v);
    return a * std::expm1(-th * v) + b * std::expm1(-th * (1.0 - v));
}

double frank_logc(double th, double u, double v) {
    double den = frank_den(th, u, v);
    return std::log(-th * std::expm1(-th)) - th * (u + v)
         - 2.0 * std::log(std::fabs(den));
}

double frank_h(double th, double u, double v) {
    return std::expm1(-th * u) * std::exp(-th * v) / frank_den(th, u, v);
}

double frank_hinv(double th, double p, double v) {
    double b = std::exp(-th * v), w = std::exp(-th);
    double num = b * (1.0 - p) + p * w;
    double den = b * (1.0 - p) + p;
    return -std::log(num / den) / th;
}

double frank_cdf(double th, double u, double v) {
    double den = frank_den(th, u, v);
    return -(std::log(std::fabs(den)) - std::log(std::fabs(std::expm1(-th)))) / th;
}

double frank_tau(double th) {
    if (std::fabs(th) < 1e-5) return th / 9.0;
    double s = std::fabs(th);
    double t = 1.0 - 4.0 / s * (1.0 - debye1(s));
    return th > 0 ? t : -t;
}

void check_theta(Family f, double theta) {
    if (f == Family::independence) return;
    if (!std::isfinite(theta))
        fail(ErrorKind::invalid_argument, "copula parameter must be finite");
    double lo = family_param_lo(f), hi = family_param_hi(f);
    if (theta < lo || theta > hi)
        fail(ErrorKind::invalid_argument,
             std::string(family_name(f)) + " parameter " + std::to_string(theta) +
             " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    if (f == Family::frank && theta == 0.0)
        fail(ErrorKind::invalid_argument, "frank parameter must be nonzero");
}

} // namespace

double debye1(double x) {
    const GaussLegendre& gl = gauss_legendre(64);
    double s = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        double t = 0.5 * x * (gl.nodes[i] + 1.0);
        s += gl.weights[i] * (t > 1e-14 ? t / std::expm1(t) : 1.0);
    }
    return 0.5 * s;
}

double param_to_tau(Family f, double theta) {
    switch (f) {
        case Family::independence: return 0.0;
        case Family::gaussian: return 2.0 / M_PI * std::asin(theta);
        case Family::clayton: return theta / (theta + 2.0);
        case Family::gumbel: return 1.0 - 1.0 / theta;
        case Family::frank: return frank_tau(theta);
    }
    fail(ErrorKind::invalid_argument, "unknown family");
}

double tau_to_param(Family f, double tau) {
    if (!std::isfinite(tau) || tau < -1.0 || tau > 1.0)
        fail(ErrorKind::invalid_argument, "tau must lie in [-1, 1]");
    double lo = family_tau_lo(f), hi = family_tau_hi(f);
    if (tau < lo || tau > hi)
        fail(ErrorKind::invalid_argument,
             std::string("tau ") + std::to_string(tau) + " not attainable by " +
             family_name(f) + " (range [" + std::to_string(lo) + ", " +
             std::to_string(hi) + "])");
    switch (f) {
        case Family::independence:
            return 0.0;
        case Family::gaussian:
            return std::clamp(std::sin(M_PI * tau / 2.0), -0.999, 0.999);
        case Family::clayton:
            return std::clamp(2.0 * tau / (1.0 - tau), 1e-4, 28.0);
        case Family::gumbel:
            return std::clamp(1.0 / (1.0 - tau), 1.0, 17.0);
        case Family::frank: {
            if (tau == 0.0) return 1e-8;
            double at = std::fabs(tau);
            if (at < frank_tau(kFrankIndepEps)) return 9.0 * tau;
            double root = brent_root(
                [at](double s) { return frank_tau(s) - at; },
                0.5 * kFrankIndepEps, 35.0, 1e-12);
            return tau > 0 ? root : -root;
        }
    }
    fail(ErrorKind::invalid_argument, "unknown family");
}

PairCopula::PairCopula(Family f, double theta) : family_(f), theta_(theta) {
    check_theta(f, theta);
    if (f == Family::independence) theta_ = 0.0;
}

double PairCopula::log_density(double u, double v) const {
    u = clamp_unit(u);
    v = clamp_unit(v);
    switch (family_) {
        case Family::independence: return 0.0;
        case Family::gaussian: return gauss_logc(theta_, u, v);
        case Family::clayton: return clayton_logc(theta_, u, v);
        case Family::gumbel: return gumbel_logc(theta_, u, v);
        case Family::frank:
            return std::fabs(theta_) < kFrankIndepEps ? 0.0
                                                      : frank_logc(theta_, u, v);
    }
    fail(ErrorKind::invalid_argument, "unknown family");
}

double PairCopula::density(double u, double v) const {
    return std::exp(log_density(u, v));
}

double PairCopula::cdf(double u, double v) const {
    u = clamp_unit(u);
    v = clamp_unit(v);
    switch (family_) {
        case Family::independence: return u * v;
        case Family::gaussian:
            return bvn_cdf(norm_quantile(u), norm_quantile(v), theta_);
        case Family::clayton: return clayton_cdf(theta_, u, v);
        case Family::gumbel: return gumbel_cdf(theta_, u, v);
        case Family::frank:
            return std::fabs(theta_) < kFrankIndepEps ? u * v
                                                      : frank_cdf(theta_, u, v);
    }
    fail(ErrorKind::invalid_argument, "unknown family");
}

double PairCopula::hfunc(double u, double v) const {
    u = clamp_unit(u);
    v = clamp_unit(v);
    double h;
    switch (family_) {
        case Family::independence: h = u; break;
        case Family::gaussian: h = gauss_h(theta_, u, v); break;
        case Family::clayton: h = clayton_h(theta_, u, v); break;
        case Family::gumbel: h = gumbel_h(theta_, u, v); break;
        case Family::frank:
            h = std::fabs(theta_) < kFrankIndepEps ? u : frank_h(theta_, u, v);
            break;
        default: fail(ErrorKind::invalid_argument, "unknown family");
    }
    return std::clamp(h, 0.0, 1.0);
}

double PairCopula::hinv(double p, double v) const {
    p = clamp_unit(p);
    v = clamp_unit(v);
    double u;
    switch (family_) {
        case Family::independence: u = p; break;
        case Family::gaussian: u = gauss_hinv(theta_, p, v); break;
        case Family::clayton: u = clayton_hinv(theta_, p, v); break;
        case Family::gumbel: u = gumbel_hinv(theta_, p, v); break;
        case Family::frank:
            u = std::fabs(theta_) < kFrankIndepEps ? p : frank_hinv(theta_, p, v);
            break;
        default: fail(ErrorKind::invalid_argument, "unknown family");
    }
    return std::clamp(u, 0.0, 1.0);
}

double PairCopula::tau() const { return param_to_tau(family_, theta_); }

PairCopula PairCopula::from_tau(Family f, double tau) {
    if (f == Family::independence) {
        if (tau != 0.0)
            fail(ErrorKind::invalid_argument,
                 "independence only matches tau = 0");
        return PairCopula();
    }
    return PairCopula(f, tau_to_param(f, tau));
}

PairCopula::FitResult PairCopula::fit_mle(Family f, std::span<const double> u,
                                          std::span<const double> v) {
    if (u.size() != v.size())
        fail(ErrorKind::invalid_argument, "pair fit: length mismatch");
    std::size_t n = u.size();
    if (n < 10)
        fail(ErrorKind::insufficient_data,
             "pair fit needs at least 10 observations, got " + std::to_string(n));
    require_finite(u, "pair fit u");
    require_finite(v, "pair fit v");
    bool const_u = std::all_of(u.begin(), u.end(), [&](double x) { return x == u[0]; });
    bool const_v = std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
    if (const_u || const_v)
        fail(ErrorKind::degenerate_data, "pair fit: constant margin");

    if (f == Family::independence) return {PairCopula(), 0.0};

    std::vector<double> uc(n), vc(n);
    for (std::size_t i = 0; i < n; ++i) {
        uc[i] = clamp_unit(u[i]);
        vc[i] = clamp_unit(v[i]);
    }
    double tau_hat = kendall_tau(uc, vc);

    PairCopula init = from_tau(
        f, std::clamp(tau_hat, family_tau_lo(f), family_tau_hi(f)));
    auto loglik_of = [&](const PairCopula& c) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += c.log_density(uc[i], vc[i]);
        return s;
    };

    double opt_theta;
    if (f == Family::gaussian) {
        double sxx = 0, syy = 0, sxy = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double x = norm_quantile(uc[i]), y = norm_quantile(vc[i]);
            sxx += x * x;
            syy += y * y;
            sxy += x * y;
        }
        auto negll = [&](double s) {
            double r = std::tanh(s);
            double q = (1.0 - r) * (1.0 + r);
            return 0.5 * n * std::log(q)
                 + (r * r * (sxx + syy) - 2.0 * r * sxy) / (2.0 * q);
        };
        double sb = std::atanh(0.999);
        opt_theta = std::tanh(brent_minimize(negll, -sb, sb).x);
    } else {
        auto negll = [&](double th) {
            if (f == Family::frank && th == 0.0) th = 1e-8;
            PairCopula c(f, th);
            return -loglik_of(c);
        };
        double lo = family_param_lo(f), hi = family_param_hi(f);
        opt_theta = brent_minimize(negll, lo, hi).x;
        if (f == Family::frank && opt_theta == 0.0) opt_theta = 1e-8;
    }

    PairCopula opt(f, opt_theta);
    double ll_opt = loglik_of(opt), ll_init = loglik_of(init);
    return ll_opt >= ll_init ? FitResult{opt, ll_opt} : FitResult{init, ll_init};
}

Matrix PairCopula::sample(std::size_t n, std::uint64_t seed) const {
    UniformRng rng(seed);
    Matrix out(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        double v = rng.next();
        double p = rng.next();
        out(i, 0) = hinv(p, v);
        out(i, 1) = v;
    }
    return out;
}

} // namespace rvc
