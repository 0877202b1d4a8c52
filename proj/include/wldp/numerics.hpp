#pragma once
#include <functional>
#include <vector>

#include "wldp/errors.hpp"

namespace wldp::num {

struct Tolerances {
    double quad_rel = 1e-10; // relative quadrature error target
    double root_abs = 1e-12; // bracket width at convergence
    double opt_abs = 1e-9;   // golden-section interval width
    double fd_step = 1e-5;   // finite-difference base step; fd_step^2 = 1e-10
                             // keeps the difference quotient well above the
                             // 2^-52 rounding floor for order-1 values
};

using ScalarFn = std::function<double(double)>;

// Envelope certificate for whole-line integrands:
//   log|f(x)| <= offset + linear*|x| - quadratic*x^2   for all x.
// quadratic must be > 0 for the integral to be accepted.
struct DecayCertificate {
    double quadratic = 0.0;
    double linear = 0.0;
    double offset = 0.0;
    bool even = false; // integrand known symmetric; integrate [0,R] and double
};

// Truncation radius at which the certificate envelope has dropped 1e-18
// below its own peak.
double truncation_radius(const DecayCertificate& cert);

// Adaptive Simpson on [a, b] with Richardson correction, depth cap 60.
// Throws NonConvergent if any panel bottoms out above tolerance.
double integrate(const ScalarFn& f, double a, double b, const Tolerances& tol = {});

// Whole-line integral via certificate-derived truncation. Throws
// DivergentIntegrand when the certificate has no Gaussian decay.
double integrate_line(const ScalarFn& f, const DecayCertificate& cert, const Tolerances& tol = {});

// Bracketed bisection/secant hybrid; requires f(a)*f(b) <= 0.
double find_root(const ScalarFn& f, double a, double b, const Tolerances& tol = {});

struct MaxResult {
    double argmax = 0.0;
    double max = 0.0;
};

// Coarse grid scan (grid_points samples, endpoints included) followed by
// golden-section refinement around the best cell. Heuristic global
// maximizer: never returns below the grid maximum, ties broken leftward.
MaxResult maximize_1d(const ScalarFn& f, double a, double b, const Tolerances& tol = {},
                      int grid_points = 256);

// Central differences with one Richardson extrapolation level; order 1 or 2.
double derivative(const ScalarFn& f, double x, int order, const Tolerances& tol = {});

} // namespace wldp::num
