// friedrichs.hpp — second-order resonance pole of a level coupled to a
// continuum, the multi-excitation ladder spectrum, and a brute-force
// discretized evolution oracle.
//
// The pole of the level at omega0 coupled through a form factor lambda(w)
// with mode density n(w) is
//
//     z0 = (omega0 + delta_omega) - i gamma0,
//     gamma0      = pi n(omega0) lambda(omega0)^2,
//     delta_omega = PV \int n(w) lambda(w)^2 / (omega0 - w) dw.
//
// The oracle discretizes the band into n_modes uniform cells, couples the
// level to each cell with lambda(w_j) sqrt(n(w_j) dw), and evolves the
// single-excitation sector exactly. The Hamiltonian is an arrowhead matrix,
// so eigenpairs come from bisection on the secular equation in O(n^2) and
// the survival amplitude is A(t) = sum_k p_k exp(-i mu_k t / hbar).
// Recurrence time of the discretization is ~ 2 pi hbar / dw; keep probe
// windows below it.

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "decolab/common.hpp"
#include "decolab/quadrature.hpp"

namespace decolab::friedrichs {

enum class FormFactorKind { flat_band, gaussian, lorentzian };

struct FormFactor {
    FormFactorKind kind = FormFactorKind::flat_band;
    double strength = 0.0;   // lambda scale, >= 0
    double omega_lo = 0.0;   // support [omega_lo, omega_hi], 0 <= lo < hi
    double omega_hi = 1.0;
    double center = 0.0;     // gaussian / lorentzian shape parameters
    double width = 1.0;

    // lambda(w): zero outside the support, nonnegative inside.
    double operator()(double omega) const;

    void validate() const;
};

// Mode density n(w) >= 0; defaults to the constant density 1.
struct DensityOfStates {
    std::function<double(double)> n = [](double) { return 1.0; };

    static DensityOfStates constant(double value);
    double operator()(double omega) const { return n(omega); }
};

struct PoleResult {
    double omega0 = 0.0;       // bare level
    double delta_omega = 0.0;  // level shift
    double gamma0 = 0.0;       // half-width, >= 0

    Complex z0() const { return {omega0 + delta_omega, -gamma0}; }
    double omega0_prime() const { return omega0 + delta_omega; }
};

// gamma0 = pi n(omega0) lambda(omega0)^2; zero outside the support.
double decay_rate(const FormFactor& ff, const DensityOfStates& dos,
                  double omega0);

// delta_omega as a principal value; omega0 must not sit on a support
// endpoint. Throws numeric_error on quadrature failure.
double level_shift(const FormFactor& ff, const DensityOfStates& dos,
                   double omega0, const quad::QuadratureSpec& spec = {});

PoleResult second_order_pole(const FormFactor& ff, const DensityOfStates& dos,
                             double omega0,
                             const quad::QuadratureSpec& spec = {});

// Ladder spectrum [n z0 for n = 0..n_max].
std::vector<Complex> sector_spectrum(const PoleResult& pole,
                                     std::size_t n_max);

// diag(0, z0, 2 z0, ..., (dim-1) z0) in hbar units; the constant hbar*w/2 of
// the oscillator is dropped (it only shifts the real part).
std::vector<Complex> effective_hamiltonian_diag(const PoleResult& pole,
                                                std::size_t dim);

// Exact diagonalization of the discretized single-excitation sector.
class DiscretizedFriedrichs {
public:
    DiscretizedFriedrichs(const FormFactor& ff, const DensityOfStates& dos,
                          double omega0, std::size_t n_modes,
                          double hbar = 1.0);

    // Survival amplitude <level| exp(-i H t / hbar) |level>.
    Complex survival_amplitude(double t) const;
    std::vector<Complex> survival_series(const std::vector<double>& t_grid) const;

    // Amplitudes on every basis state (level first, then band cells) at t.
    std::vector<Complex> amplitude_vector(double t) const;

    const std::vector<double>& eigenvalues() const { return eigenvalues_; }
    const std::vector<double>& survival_weights() const { return weights_; }
    const std::vector<double>& grid() const { return grid_; }
    double delta_omega_cell() const { return d_omega_; }
    double recurrence_time() const;

private:
    double hbar_ = 1.0;
    double level_ = 0.0;
    double d_omega_ = 0.0;
    std::vector<double> grid_;       // band cell centers
    std::vector<double> couplings_;  // lambda(w_j) sqrt(n(w_j) dw)
    std::vector<double> eigenvalues_;
    std::vector<double> weights_;    // |<level|v_k>|^2, sums to 1

    void solve();
};

// Survival amplitudes A(t) on t_grid (nonnegative, ascending, >= 10 modes).
std::vector<Complex> discretized_oracle(const FormFactor& ff,
                                        const DensityOfStates& dos,
                                        double omega0, std::size_t n_modes,
                                        const std::vector<double>& t_grid,
                                        double hbar = 1.0);

struct DecayFit {
    double gamma = 0.0;         // amplitude rate: |A|^2 ~ exp(-2 gamma t)
    double residual_rms = 0.0;  // RMS of log-domain residuals
    std::size_t n_used = 0;
};

// Least-squares slope of log(magnitude^2) vs t over [window_lo, window_hi],
// negated and halved. Requires >= 8 samples in the window, all positive.
DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& samples,
                        double window_lo, double window_hi);

}  // namespace decolab::friedrichs
