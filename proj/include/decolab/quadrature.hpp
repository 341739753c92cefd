// quadrature.hpp — adaptive Simpson integration and Cauchy principal values.
//
// Principal values are computed by singularity subtraction over a symmetric
// window around the pole (the odd part integrates to zero analytically) plus
// adaptive quadrature on the regular remainder.

#pragma once

#include <functional>

#include "decolab/common.hpp"

namespace decolab::quad {

struct QuadratureSpec {
    double tolerance = 1e-10;  // absolute tolerance of each sub-integral
    int max_refinements = 40;  // maximum recursive bisection depth
    // Window half-width for the singular part, as a fraction of the
    // integration interval (clipped so the window stays interior).
    double window_fraction = 0.01;
};

// Adaptive Simpson integral of f over [a, b]. Throws numeric_error when the
// refinement budget is exhausted before reaching the tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec = {});

// PV \int_a^b f(x) / (pole - x) dx for pole strictly inside (a, b).
// f must be smooth near the pole.
double cauchy_principal_value(const std::function<double(double)>& f, double a,
                              double b, double pole,
                              const QuadratureSpec& spec = {});

}  // namespace decolab::quad
