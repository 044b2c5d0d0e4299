#include "doctest.h"

#include <cmath>
#include <vector>

#include "errors.hpp"
#include "kendall.hpp"
#include "pair_copula.hpp"

using namespace rvc;

namespace {

struct Case {
    Family family;
    double theta;
};

// parameter sweeps kept inside the region where argument clamping cannot
// perturb round trips at the tolerances below
const std::vector<Case> kSmoothCases = {
    {Family::gaussian, -0.8}, {Family::gaussian, -0.3}, {Family::gaussian, 0.5},
    {Family::gaussian, 0.8},  {Family::clayton, 0.5},   {Family::clayton, 2.0},
    {Family::clayton, 4.0},   {Family::gumbel, 1.2},    {Family::gumbel, 2.5},
    {Family::gumbel, 4.0},    {Family::frank, -20.0},   {Family::frank, -4.0},
    {Family::frank, 3.0},     {Family::frank, 20.0},
};

// wider parameters used where only finite-difference agreement is needed
const std::vector<Case> kWideCases = {
    {Family::gaussian, 0.9},  {Family::gaussian, -0.9}, {Family::clayton, 8.0},
    {Family::gumbel, 6.0},    {Family::frank, 28.0},    {Family::frank, -28.0},
};

} // namespace

TEST_CASE("independence copula closed forms") {
    PairCopula c;
    CHECK(c.family() == Family::independence);
    CHECK(c.density(0.3, 0.7) == 1.0);
    CHECK(c.log_density(0.3, 0.7) == 0.0);
    CHECK(c.cdf(0.3, 0.7) == doctest::Approx(0.21).epsilon(1e-12));
    CHECK(c.hfunc(0.3, 0.7) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(c.hinv(0.3, 0.7) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(c.tau() == 0.0);
}

TEST_CASE("reference density and parameter conversions") {
    PairCopula g(Family::gaussian, 0.5);
    CHECK(g.density(0.5, 0.5) == doctest::Approx(1.1547005383792515).epsilon(1e-12));

    CHECK(PairCopula::from_tau(Family::clayton, 0.5).theta() ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(param_to_tau(Family::gumbel, 2.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(tau_to_param(Family::gaussian, 0.5) ==
          doctest::Approx(0.7071067811865476).epsilon(1e-12));
    CHECK(param_to_tau(Family::gaussian, 0.7071067811865476) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(param_to_tau(Family::clayton, 2.0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("debye based frank tau") {
    CHECK(debye1(1.0) == doctest::Approx(0.77750463411224828).epsilon(1e-12));
    CHECK(debye1(5.0) == doctest::Approx(0.32087619770014612).epsilon(1e-12));
    CHECK(debye1(10.0) == doctest::Approx(0.16444346567994603).epsilon(1e-12));
    CHECK(debye1(35.0) == doctest::Approx(0.046998116195662964).epsilon(1e-12));

    CHECK(param_to_tau(Family::frank, 5.0) ==
          doctest::Approx(0.4567009581601169).epsilon(1e-12));
    CHECK(param_to_tau(Family::frank, -5.0) ==
          doctest::Approx(-0.4567009581601169).epsilon(1e-12));
    CHECK(param_to_tau(Family::frank, 35.0) ==
          doctest::Approx(0.89108549899379005).epsilon(1e-12));
    CHECK(tau_to_param(Family::frank, 0.5) ==
          doctest::Approx(5.7362827070199709).epsilon(1e-8));
}

TEST_CASE("tau round trips through parameter inversion") {
    for (Family f : {Family::gaussian, Family::clayton, Family::gumbel, Family::frank}) {
        for (double tau : {-0.88, -0.5, -0.1, 0.1, 0.5, 0.88}) {
            if (tau < family_tau_lo(f) || tau > family_tau_hi(f)) continue;
            PairCopula c = PairCopula::from_tau(f, tau);
            double tol = f == Family::frank ? 1e-6 : 1e-9;
            CHECK(c.tau() == doctest::Approx(tau).epsilon(tol));
        }
    }
    // the positive-only families reject negative tau
    CHECK_THROWS_AS(PairCopula::from_tau(Family::clayton, -0.3), Error);
    CHECK_THROWS_AS(PairCopula::from_tau(Family::gumbel, -0.3), Error);
}

TEST_CASE("density matches finite difference of hfunc in first argument") {
    const double d = 1e-6;
    auto all = kSmoothCases;
    all.insert(all.end(), kWideCases.begin(), kWideCases.end());
    for (const Case& cs : all) {
        PairCopula c(cs.family, cs.theta);
        for (double u = 0.1; u < 0.95; u += 0.2) {
            for (double v = 0.1; v < 0.95; v += 0.2) {
                double fd = (c.hfunc(u + d, v) - c.hfunc(u - d, v)) / (2.0 * d);
                double dens = c.density(u, v);
                CHECK(dens == doctest::Approx(fd).epsilon(2e-5));
            }
        }
    }
}

TEST_CASE("hfunc matches finite difference of cdf in second argument") {
    const double d = 1e-6;
    auto all = kSmoothCases;
    all.insert(all.end(), kWideCases.begin(), kWideCases.end());
    for (const Case& cs : all) {
        PairCopula c(cs.family, cs.theta);
        for (double u = 0.1; u < 0.95; u += 0.2) {
            for (double v = 0.1; v < 0.95; v += 0.2) {
                double fd = (c.cdf(u, v + d) - c.cdf(u, v - d)) / (2.0 * d);
                CHECK(c.hfunc(u, v) == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
            }
        }
    }
}

TEST_CASE("density integrates to one") {
    // trapezoid on a 200x200 open grid; moderate parameters keep the corner
    // mass resolvable
    const int m = 200;
    for (const Case& cs : {Case{Family::gaussian, 0.5}, Case{Family::clayton, 1.5},
                           Case{Family::gumbel, 1.6}, Case{Family::frank, 5.0},
                           Case{Family::frank, -5.0}}) {
        PairCopula c(cs.family, cs.theta);
        double acc = 0.0, step = 1.0 / m;
        for (int i = 0; i < m; ++i) {
            double u = (i + 0.5) * step;
            for (int j = 0; j < m; ++j) acc += c.density(u, (j + 0.5) * step);
        }
        acc *= step * step;
        CHECK(acc > 0.99);
        CHECK(acc < 1.01);
    }
}

TEST_CASE("cdf boundary behaviour and frechet bounds") {
    for (const Case& cs : kSmoothCases) {
        PairCopula c(cs.family, cs.theta);
        for (double t = 0.1; t < 1.0; t += 0.2) {
            CHECK(c.cdf(t, 1.0) == doctest::Approx(t).epsilon(1e-6));
            CHECK(c.cdf(1.0, t) == doctest::Approx(t).epsilon(1e-6));
            CHECK(c.cdf(t, 0.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
        }
        for (double u = 0.05; u < 1.0; u += 0.18) {
            for (double v = 0.05; v < 1.0; v += 0.18) {
                double C = c.cdf(u, v);
                CHECK(C >= std::max(u + v - 1.0, 0.0) - 1e-9);
                CHECK(C <= std::min(u, v) + 1e-9);
            }
        }
    }
}

TEST_CASE("h function round trips") {
    for (const Case& cs : kSmoothCases) {
        PairCopula c(cs.family, cs.theta);
        for (double u = 0.02; u < 0.99; u += 0.08) {
            for (double v = 0.02; v < 0.99; v += 0.08) {
                double p = c.hfunc(u, v);
                CHECK(c.hinv(p, v) == doctest::Approx(u).epsilon(1e-8));
                double q = c.hinv(u, v);
                CHECK(c.hfunc(q, v) == doctest::Approx(u).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("hfunc is a cdf in its first argument") {
    for (const Case& cs : kSmoothCases) {
        PairCopula c(cs.family, cs.theta);
        for (double v = 0.1; v < 1.0; v += 0.2) {
            double prev = -1.0;
            for (double u = 0.01; u < 1.0; u += 0.03) {
                double h = c.hfunc(u, v);
                CHECK(h >= prev);
                CHECK(h >= 0.0);
                CHECK(h <= 1.0);
                prev = h;
            }
        }
    }
}

TEST_CASE("density is exchangeable") {
    for (const Case& cs : kSmoothCases) {
        PairCopula c(cs.family, cs.theta);
        for (double u = 0.07; u < 1.0; u += 0.21) {
            for (double v = 0.07; v < 1.0; v += 0.21) {
                CHECK(c.density(u, v) ==
                      doctest::Approx(c.density(v, u)).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("near zero frank behaves as independence") {
    PairCopula c(Family::frank, 1e-8);
    CHECK(c.density(0.3, 0.8) == 1.0);
    CHECK(c.hfunc(0.3, 0.8) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(std::fabs(c.tau()) < 1e-7);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(PairCopula(Family::gaussian, 1.5), Error);
    CHECK_THROWS_AS(PairCopula(Family::gaussian, -1.0), Error);
    CHECK_THROWS_AS(PairCopula(Family::clayton, 0.0), Error);
    CHECK_THROWS_AS(PairCopula(Family::clayton, 30.0), Error);
    CHECK_THROWS_AS(PairCopula(Family::gumbel, 0.9), Error);
    CHECK_THROWS_AS(PairCopula(Family::gumbel, 18.0), Error);
    CHECK_THROWS_AS(PairCopula(Family::frank, 0.0), Error);
    CHECK_THROWS_AS(PairCopula(Family::frank, 36.0), Error);
    CHECK_THROWS_AS(PairCopula(Family::frank, std::nan("")), Error);
    CHECK_THROWS_AS(PairCopula::from_tau(Family::frank, 0.9), Error);

    try {
        PairCopula(Family::gumbel, 0.5);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::invalid_argument);
    }
}

TEST_CASE("fit rejects unusable data") {
    std::vector<double> u{0.1, 0.2, 0.3, 0.4, 0.5};
    std::vector<double> v{0.5, 0.4, 0.3, 0.2, 0.1};
    try {
        PairCopula::fit_mle(Family::gaussian, u, v);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::insufficient_data);
    }

    std::vector<double> a(20, 0.5), b(20);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = (i + 1.0) / 21.0;
    try {
        PairCopula::fit_mle(Family::clayton, a, b);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::degenerate_data);
    }

    std::vector<double> short_v{0.1, 0.2};
    CHECK_THROWS_AS(PairCopula::fit_mle(Family::frank, u, short_v), Error);
}

TEST_CASE("sampling is deterministic and matches the target dependence") {
    PairCopula g(Family::gaussian, 0.9);
    Matrix s1 = g.sample(2000, 7);
    Matrix s2 = g.sample(2000, 7);
    Matrix s3 = g.sample(2000, 8);
    bool identical = true, differs = false;
    for (std::size_t i = 0; i < s1.rows(); ++i) {
        identical = identical && s1(i, 0) == s2(i, 0) && s1(i, 1) == s2(i, 1);
        differs = differs || s1(i, 0) != s3(i, 0);
    }
    CHECK(identical);
    CHECK(differs);

    // tau of a rho = 0.9 normal pair is 2 asin(0.9) / pi
    double t = kendall_tau(s1.col(0), s1.col(1));
    CHECK(t == doctest::Approx(0.71290559732902771).epsilon(0.07));

    PairCopula ind;
    Matrix si = ind.sample(2000, 99);
    CHECK(std::fabs(kendall_tau(si.col(0), si.col(1))) < 0.07);

    for (Family f : {Family::clayton, Family::gumbel, Family::frank}) {
        PairCopula c = PairCopula::from_tau(f, 0.5);
        Matrix s = c.sample(2000, 31);
        CHECK(kendall_tau(s.col(0), s.col(1)) == doctest::Approx(0.5).epsilon(0.12));
        for (std::size_t i = 0; i < s.rows(); ++i) {
            CHECK(s(i, 0) > 0.0);
            CHECK(s(i, 0) < 1.0);
        }
    }
}

TEST_CASE("mle recovers generating parameters") {
    struct Target {
        Family family;
        double theta;
        double tol;
    };
    for (const Target& t : {Target{Family::gaussian, 0.6, 0.05},
                            Target{Family::clayton, 2.0, 0.35},
                            Target{Family::gumbel, 2.0, 0.2},
                            Target{Family::frank, 5.0, 0.8}}) {
        PairCopula truth(t.family, t.theta);
        Matrix s = truth.sample(1500, 424242);
        auto fit = PairCopula::fit_mle(t.family, s.col(0), s.col(1));
        CHECK(fit.copula.theta() == doctest::Approx(t.theta).epsilon(0.0).scale(1.0).epsilon(t.tol / t.theta));

        // the optimum never scores below the tau inversion start point
        double tau_hat = kendall_tau(s.col(0), s.col(1));
        PairCopula init = PairCopula::from_tau(
            t.family, std::clamp(tau_hat, family_tau_lo(t.family), family_tau_hi(t.family)));
        double ll_init = 0.0;
        for (std::size_t i = 0; i < s.rows(); ++i)
            ll_init += init.log_density(s(i, 0), s(i, 1));
        CHECK(fit.loglik >= ll_init - 1e-9);
    }
}

TEST_CASE("log density at clamped corners stays finite") {
    for (const Case& cs : kWideCases) {
        PairCopula c(cs.family, cs.theta);
        for (double u : {0.0, 1.0, 1e-16}) {
            for (double v : {0.0, 1.0, 1e-16}) {
                double ld = c.log_density(u, v);
                CHECK(std::isfinite(ld));
                double h = c.hfunc(u, v);
                CHECK(h >= 0.0);
                CHECK(h <= 1.0);
                CHECK(std::isfinite(c.hinv(0.5, v)));
            }
        }
    }
}
