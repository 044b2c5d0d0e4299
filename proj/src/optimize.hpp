#pragma once

#include <functional>

namespace rvc {

struct MinimizeResult {
    double x;
    double fx;
    int iterations;
};

// Brent's bounded scalar minimizer (golden section with parabolic steps).
// tol is the absolute tolerance on x.
MinimizeResult brent_minimize(const std::function<double(double)>& f, double lo, double hi,
                              double tol = 1e-8, int max_iter = 200);

// Brent-style root bracketing solver; f(lo) and f(hi) must differ in sign.
double brent_root(const std::function<double(double)>& f, double lo, double hi,
                  double tol = 1e-14, int max_iter = 200);

} // namespace rvc
