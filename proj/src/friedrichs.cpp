#include "decolab/friedrichs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace decolab::friedrichs {

namespace {
constexpr double kPi = std::numbers::pi;
}

double FormFactor::operator()(double omega) const {
    if (omega < omega_lo || omega > omega_hi) return 0.0;
    switch (kind) {
        case FormFactorKind::flat_band:
            return strength;
        case FormFactorKind::gaussian: {
            const double u = (omega - center) / width;
            return strength * std::exp(-0.5 * u * u);
        }
        case FormFactorKind::lorentzian: {
            const double u = (omega - center) / width;
            return strength / (1.0 + u * u);
        }
    }
    return 0.0;
}

void FormFactor::validate() const {
    if (strength < 0.0) throw config_error("FormFactor: strength must be >= 0");
    if (!(0.0 <= omega_lo && omega_lo < omega_hi)) {
        throw config_error("FormFactor: support requires 0 <= omega_lo < omega_hi");
    }
    if (kind != FormFactorKind::flat_band && !(width > 0.0)) {
        throw config_error("FormFactor: width must be positive");
    }
}

DensityOfStates DensityOfStates::constant(double value) {
    if (value < 0.0) throw config_error("DensityOfStates: density must be >= 0");
    return DensityOfStates{[value](double) { return value; }};
}

double decay_rate(const FormFactor& ff, const DensityOfStates& dos,
                  double omega0) {
    ff.validate();
    if (omega0 < ff.omega_lo || omega0 > ff.omega_hi) return 0.0;
    const double lam = ff(omega0);
    return kPi * dos(omega0) * lam * lam;
}

double level_shift(const FormFactor& ff, const DensityOfStates& dos,
                   double omega0, const quad::QuadratureSpec& spec) {
    ff.validate();
    if (ff.strength == 0.0) return 0.0;
    auto g = [&](double w) {
        const double lam = ff(w);
        return dos(w) * lam * lam;
    };
    if (omega0 == ff.omega_lo || omega0 == ff.omega_hi) {
        throw numeric_error("level_shift: omega0 sits on a support endpoint");
    }
    if (omega0 < ff.omega_lo || omega0 > ff.omega_hi) {
        // Regular integral, no pole inside the support.
        auto kernel = [&](double w) { return g(w) / (omega0 - w); };
        return quad::integrate(kernel, ff.omega_lo, ff.omega_hi, spec);
    }
    return quad::cauchy_principal_value(g, ff.omega_lo, ff.omega_hi, omega0,
                                        spec);
}

PoleResult second_order_pole(const FormFactor& ff, const DensityOfStates& dos,
                             double omega0, const quad::QuadratureSpec& spec) {
    PoleResult pole;
    pole.omega0 = omega0;
    pole.gamma0 = decay_rate(ff, dos, omega0);
    pole.delta_omega = level_shift(ff, dos, omega0, spec);
    return pole;
}

std::vector<Complex> sector_spectrum(const PoleResult& pole,
                                     std::size_t n_max) {
    std::vector<Complex> spectrum;
    spectrum.reserve(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        spectrum.push_back(static_cast<double>(n) * pole.z0());
    }
    return spectrum;
}

std::vector<Complex> effective_hamiltonian_diag(const PoleResult& pole,
                                                std::size_t dim) {
    if (dim < 1) throw config_error("effective_hamiltonian_diag: dim must be >= 1");
    return sector_spectrum(pole, dim - 1);
}

DiscretizedFriedrichs::DiscretizedFriedrichs(const FormFactor& ff,
                                             const DensityOfStates& dos,
                                             double omega0,
                                             std::size_t n_modes, double hbar)
    : hbar_(hbar), level_(omega0) {
    ff.validate();
    if (n_modes < 10) {
        throw config_error("DiscretizedFriedrichs: need at least 10 band modes");
    }
    if (!(hbar_ > 0.0)) throw config_error("DiscretizedFriedrichs: hbar must be > 0");
    d_omega_ = (ff.omega_hi - ff.omega_lo) / static_cast<double>(n_modes);
    grid_.resize(n_modes);
    couplings_.resize(n_modes);
    for (std::size_t j = 0; j < n_modes; ++j) {
        const double w = ff.omega_lo + (static_cast<double>(j) + 0.5) * d_omega_;
        grid_[j] = w;
        couplings_[j] = ff(w) * std::sqrt(dos(w) * d_omega_);
    }
    solve();
}

void DiscretizedFriedrichs::solve() {
    // Split off band cells with zero coupling: they stay exact eigenstates
    // and carry no survival weight.
    std::vector<double> w;   // coupled cell frequencies, ascending
    std::vector<double> v2;  // squared couplings
    for (std::size_t j = 0; j < grid_.size(); ++j) {
        if (couplings_[j] != 0.0) {
            w.push_back(grid_[j]);
            v2.push_back(couplings_[j] * couplings_[j]);
        } else {
            eigenvalues_.push_back(grid_[j]);
            weights_.push_back(0.0);
        }
    }
    if (w.empty()) {
        // Decoupled level: stationary state.
        eigenvalues_.push_back(level_);
        weights_.push_back(1.0);
        return;
    }

    // Secular equation f(mu) = mu - level - sum_j v2_j / (mu - w_j).
    // f is strictly increasing between consecutive poles, so each bracket
    // holds exactly one root and plain bisection is safe.
    auto f = [&](double mu) {
        double s = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) s += v2[j] / (mu - w[j]);
        return mu - level_ - s;
    };
    double coupling_norm = 0.0;
    for (double s : v2) coupling_norm += s;
    coupling_norm = std::sqrt(coupling_norm);
    const double lo_bound =
        std::min(level_, w.front()) - coupling_norm - 1.0;
    const double hi_bound = std::max(level_, w.back()) + coupling_norm + 1.0;

    const std::size_t m = w.size();
    std::vector<double> roots(m + 1);
    for (std::size_t k = 0; k <= m; ++k) {
        double lo = (k == 0) ? lo_bound : w[k - 1];
        double hi = (k == m) ? hi_bound : w[k];
        // f -> -inf at the left pole and +inf at the right pole; at the
        // outer bounds the sign is fixed by construction.
        for (int iter = 0; iter < 200; ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;  // bracket at machine width
            if (f(mid) < 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        roots[k] = 0.5 * (lo + hi);
    }

    for (double mu : roots) {
        double s = 1.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double d = mu - w[j];
            s += v2[j] / (d * d);
        }
        eigenvalues_.push_back(mu);
        weights_.push_back(std::isfinite(s) ? 1.0 / s : 0.0);
    }
}

Complex DiscretizedFriedrichs::survival_amplitude(double t) const {
    Complex a{0.0, 0.0};
    for (std::size_t k = 0; k < eigenvalues_.size(); ++k) {
        if (weights_[k] == 0.0) continue;
        const double phase = -eigenvalues_[k] * t / hbar_;
        a += weights_[k] * Complex{std::cos(phase), std::sin(phase)};
    }
    return a;
}

std::vector<Complex> DiscretizedFriedrichs::survival_series(
    const std::vector<double>& t_grid) const {
    std::vector<Complex> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) out.push_back(survival_amplitude(t));
    return out;
}

std::vector<Complex> DiscretizedFriedrichs::amplitude_vector(double t) const {
    // Reconstruct eigenvectors of the arrowhead matrix on the fly:
    // v(mu) ~ (1, c_j / (mu - w_j)). Basis order: level, then band cells.
    const std::size_t n = grid_.size() + 1;
    std::vector<Complex> amps(n, Complex{0.0, 0.0});
    for (std::size_t k = 0; k < eigenvalues_.size(); ++k) {
        if (weights_[k] == 0.0) {
            // Decoupled cell: phase evolution only matters on its own entry.
            continue;
        }
        const double mu = eigenvalues_[k];
        const double phase = -mu * t / hbar_;
        const Complex rot{std::cos(phase), std::sin(phase)};
        // <level|v_k> = sqrt(weight); component on cell j follows the
        // closed form.
        const double v0 = std::sqrt(weights_[k]);
        amps[0] += weights_[k] * rot;
        for (std::size_t j = 0; j < grid_.size(); ++j) {
            if (couplings_[j] == 0.0) continue;
            const double vj = couplings_[j] / (mu - grid_[j]) * v0;
            amps[j + 1] += vj * v0 * rot;
        }
    }
    return amps;
}

double DiscretizedFriedrichs::recurrence_time() const {
    return 2.0 * kPi * hbar_ / d_omega_;
}

std::vector<Complex> discretized_oracle(const FormFactor& ff,
                                        const DensityOfStates& dos,
                                        double omega0, std::size_t n_modes,
                                        const std::vector<double>& t_grid,
                                        double hbar) {
    if (!t_grid.empty()) {
        if (t_grid.front() < 0.0) {
            throw config_error("discretized_oracle: t_grid must be nonnegative");
        }
        for (std::size_t i = 1; i < t_grid.size(); ++i) {
            if (!(t_grid[i] > t_grid[i - 1])) {
                throw config_error("discretized_oracle: t_grid must ascend");
            }
        }
    }
    DiscretizedFriedrichs model(ff, dos, omega0, n_modes, hbar);
    return model.survival_series(t_grid);
}

DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& samples,
                        double window_lo, double window_hi) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [t, mag] : samples) {
        if (t < window_lo || t > window_hi) continue;
        if (!(mag > 0.0)) {
            throw numeric_error("fit_decay_rate: nonpositive magnitude in window");
        }
        pts.emplace_back(t, 2.0 * std::log(mag));  // log |A|^2
    }
    if (pts.size() < 8) {
        throw numeric_error("fit_decay_rate: need at least 8 samples in window");
    }
    double st = 0.0, sy = 0.0;
    for (const auto& [t, y] : pts) {
        st += t;
        sy += y;
    }
    const double n = static_cast<double>(pts.size());
    const double tbar = st / n;
    const double ybar = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [t, y] : pts) {
        sxx += (t - tbar) * (t - tbar);
        sxy += (t - tbar) * (y - ybar);
    }
    if (sxx == 0.0) {
        throw numeric_error("fit_decay_rate: degenerate time window");
    }
    const double slope = sxy / sxx;
    const double intercept = ybar - slope * tbar;
    double ss = 0.0;
    for (const auto& [t, y] : pts) {
        const double r = y - (intercept + slope * t);
        ss += r * r;
    }
    DecayFit fit;
    fit.gamma = -0.5 * slope;
    fit.residual_rms = std::sqrt(ss / n);
    fit.n_used = pts.size();
    return fit;
}

}  // namespace decolab::friedrichs
