#pragma once

#include <functional>
#include <vector>

#include <json.hpp>

namespace doob::bm {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;
};

// Globally adaptive Gauss-Kronrod (G7,K15) with interval bisection. Optional
// split hints seed the initial subdivision (sharp ridges of known location).
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, double rel_tol = 1e-10,
                     const std::vector<double>& split_hints = {});

// Numerics of the computability counterexample: the integrable computable
// functional whose time-1 conditional expectation is infinite on {W_1 = 0}.
//
//   total_integral  ~ iterated adaptive quadrature of exp(-(x e^{y^2/2})^2/2)
//                     over [-R,R]^2; the analytic value is 2*pi
//   inner_at_zero   = integral of g(0,y) n(y) dy over [-R,R]; the integrand
//                     is identically 1/sqrt(2*pi), so the value grows as
//                     2R/sqrt(2*pi) without bound: the divergence witness
struct CounterexampleReport {
    double radius = 0.0;
    double total_integral = 0.0;
    double inner_at_zero = 0.0;
    double residual = 0.0;  // combined quadrature error estimate
    bool converged = true;

    nlohmann::json to_json() const;
};

CounterexampleReport remark_counterexample(double radius, double abs_tol = 1e-6);

}  // namespace doob::bm
