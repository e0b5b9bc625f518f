#pragma once

#include "fracpen/discretization.hpp"
#include "fracpen/problem.hpp"

namespace fracpen {

/// Elliptical-domain benchmark: Omega = {(x-a)^2/a^2 + (y-b)^2/b^2 <= 1} hosted in
/// the rectangle (0,2a) x (0,2b), exact solution
///   u = e^{-t} ((x-a)^2/a^2 + (y-b)^2/b^2 - 1)^2.
struct Example1Params {
    double a = 2.0;
    double b = 1.0;
    double alpha1 = 1.4;
    double alpha2 = 1.7;
    double kx = 1.0;
    double ky = 1.0;
};

/// Left Riemann-Liouville derivative of order alpha of w(s) = s^2 (s - 2d)^2:
///   24 s^{4-alpha}/Gamma(5-alpha) - 24 d s^{3-alpha}/Gamma(4-alpha) + 8 d^2 s^{2-alpha}/Gamma(3-alpha).
[[nodiscard]] double example1_h(double alpha, double s, double d);

/// Throws ParameterError for non-positive semi-axes or diffusivities, or orders outside (1,2).
[[nodiscard]] ProblemDef example1_problem(const Example1Params& p);

/// Rectangle (0,2a) x (0,2b) with n1 x n2 interior nodes, m steps to time T.
[[nodiscard]] GridSpec example1_grid(const Example1Params& p, std::size_t n1, std::size_t n2,
                                     std::size_t m, double T);

}  // namespace fracpen
