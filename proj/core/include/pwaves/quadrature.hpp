#pragma once

#include <functional>
#include <span>
#include <vector>

namespace pwaves {

struct QuadOptions {
    double tol = 1e-12;       // relative to the L1 mass of the integrand
    unsigned max_depth = 40;  // bisection levels for the adaptive rule
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    double l1 = 0.0;
};

using RealFn = std::function<double(double)>;

// Adaptive Gauss-Kronrod (7/15 interior, 15/31 rule) on [a,b]. Throws QuadratureError when the
// achieved error estimate exceeds the request.
QuadResult integrate(const RealFn& f, double a, double b, const QuadOptions& opt = {},
                     const char* what = "integrate");

// Same, split at every breakpoint strictly inside (a,b).
QuadResult integrate_split(const RealFn& f, double a, double b, std::span<const double> breaks,
                           const QuadOptions& opt = {}, const char* what = "integrate");

// Double-exponential rule for integrands with endpoint singularities (log or near-pole behaviour).
// The abscissae are not offset from the ends, so write the integrand in terms of the distance to a
// singular endpoint other than 0 when full precision is needed there.
QuadResult integrate_endpoint(const RealFn& f, double a, double b, double tol = 1e-13,
                              const char* what = "integrate_endpoint");

struct GaussRule {
    std::vector<double> nodes;    // on [-1,1]
    std::vector<double> weights;
};

// Gauss-Legendre rule, order in {4, 8, 10, 16, 20}.
const GaussRule& gauss_legendre(int order);

}  // namespace pwaves
