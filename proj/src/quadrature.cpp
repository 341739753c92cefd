#include "decolab/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace decolab::quad {

namespace {

double simpson(double fa, double fm, double fb, double h) {
    return (fa + 4.0 * fm + fb) * h / 6.0;
}

struct StepLimits {
    double tol_floor;     // roundoff-limited tolerance, never tightened below
    double width_floor;   // narrowest interval worth splitting
};

double
adaptive_step(const std::function<double(double)>& f, double a, double b,
              double fa, double fm, double fb, double whole, double tol,
              int depth, const StepLimits& limits) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double err = left + right - whole;
    if (std::abs(err) <= 15.0 * std::max(tol, limits.tol_floor) ||
        (b - a) <= limits.width_floor) {
        return left + right + err / 15.0;
    }
    if (depth <= 0) {
        throw numeric_error("quadrature: refinement budget exhausted");
    }
    const double child_tol = std::max(0.5 * tol, limits.tol_floor);
    return adaptive_step(f, a, m, fa, flm, fm, left, child_tol, depth - 1,
                         limits) +
           adaptive_step(f, m, b, fm, frm, fb, right, child_tol, depth - 1,
                         limits);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = simpson(fa, fm, fb, b - a);
    StepLimits limits;
    limits.tol_floor = 0x1p-52 * (std::abs(whole) + (std::abs(fa) + std::abs(fm) +
                                                     std::abs(fb)) *
                                                        std::abs(b - a));
    limits.width_floor = std::abs(b - a) * 0x1p-50;
    return adaptive_step(f, a, b, fa, fm, fb, whole, spec.tolerance,
                         spec.max_refinements, limits);
}

double cauchy_principal_value(const std::function<double(double)>& f, double a,
                              double b, double pole,
                              const QuadratureSpec& spec) {
    if (!(a < pole && pole < b)) {
        throw numeric_error(
            "cauchy_principal_value: pole must lie strictly inside (a, b)");
    }
    double h = spec.window_fraction * (b - a);
    h = std::min({h, 0.5 * (pole - a), 0.5 * (b - pole)});
    if (!(h > 0.0)) {
        throw numeric_error("cauchy_principal_value: degenerate window");
    }

    auto kernel = [&](double x) { return f(x) / (pole - x); };
    const double outer = integrate(kernel, a, pole - h, spec) +
                         integrate(kernel, pole + h, b, spec);

    // Symmetric window folded onto [0, h]:
    //   PV \int_{-h}^{h} f(pole+u)/(-u) du = -\int_0^h (f(pole+u)-f(pole-u))/u du.
    // The integrand extends continuously to u=0; evaluate near 0 at a small
    // offset instead of the point itself.
    const double u_floor = h * 0x1p-40;
    auto folded = [&](double u) {
        if (u < u_floor) u = u_floor;
        return -(f(pole + u) - f(pole - u)) / u;
    };
    const double window = integrate(folded, 0.0, h, spec);
    return outer + window;
}

}  // namespace decolab::quad
