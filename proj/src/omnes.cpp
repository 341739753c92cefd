#include "decolab/omnes.hpp"

#include <cmath>

namespace decolab::omnes {

double alpha_from_length(double mass, double omega, double hbar, double L0) {
    if (!(mass > 0.0) || !(omega > 0.0) || !(hbar > 0.0) || L0 < 0.0) {
        throw config_error("alpha_from_length: m, w, hbar must be > 0 and L0 >= 0");
    }
    return std::sqrt(mass * omega / (2.0 * hbar)) * L0;
}

void OmnesConfig::finalize() {
    if (!(mass > 0.0) || !(omega > 0.0) || !(hbar > 0.0) || !(L0 > 0.0)) {
        throw config_error("OmnesConfig: m, omega, hbar, L0 must be positive");
    }
    const double norm2 = std::norm(amp_a) + std::norm(amp_b);
    if (!(norm2 > 0.0)) {
        throw config_error("OmnesConfig: superposition weights vanish");
    }
    const double inv = 1.0 / std::sqrt(norm2);
    amp_a *= inv;
    amp_b *= inv;
    const auto report =
        coherent::macroscopicity_check(0.0, alpha2(), cutoff_n, k_lower);
    if (!report.macroscopic) {
        throw config_error(
            "OmnesConfig: derived alpha2 fails the macroscopicity window "
            "(need k_lower <= alpha2 <= sqrt(2 (N+1)))");
    }
}

double OmnesConfig::alpha2() const {
    return alpha_from_length(mass, omega, hbar, L0);
}

double OmnesConfig::exponent_scale() const {
    const double a2 = alpha2();
    return a2 * a2;
}

double OmnesConfig::branch_overlap() const {
    const auto s1 = coherent::build_quasi_coherent(0.0, cutoff_n);
    const auto s2 = coherent::build_quasi_coherent(alpha2(), cutoff_n);
    return coherent::overlap_direct(s1, s2);
}

std::array<std::array<Complex, 2>, 2> nd_components(const OmnesConfig& cfg,
                                                    double t,
                                                    bool macroscopic) {
    const auto report = coherent::macroscopicity_check(0.0, cfg.alpha2(),
                                                       cfg.cutoff_n, cfg.k_lower);
    if (!report.macroscopic) {
        throw numeric_error("nd_components: configuration is outside the "
                            "macroscopic regime");
    }
    const double a1 = 0.0;
    const double a2 = cfg.alpha2();
    const Complex z0 = cfg.pole.z0();
    // G_ij(t) = <alpha_i(0)|alpha_j(t)>; reversed brackets are conjugates.
    const Complex g11 = coherent::evolved_overlap(a1, a1, z0, t, cfg.cutoff_n,
                                                  cfg.hbar);
    const Complex g22 = coherent::evolved_overlap(a2, a2, z0, t, cfg.cutoff_n,
                                                  cfg.hbar);
    Complex g12{0.0, 0.0};
    Complex g21{0.0, 0.0};
    if (!macroscopic) {
        g12 = coherent::evolved_overlap(a1, a2, z0, t, cfg.cutoff_n, cfg.hbar);
        g21 = coherent::evolved_overlap(a2, a1, z0, t, cfg.cutoff_n, cfg.hbar);
    }
    const Complex ab = cfg.amp_a * std::conj(cfg.amp_b);
    const Complex ba = std::conj(cfg.amp_a) * cfg.amp_b;

    std::array<std::array<Complex, 2>, 2> rho;
    rho[0][0] = ab * g11 * std::conj(g12) + ba * g12 * std::conj(g11);
    rho[0][1] = ab * g11 * std::conj(g22) + ba * g12 * std::conj(g21);
    rho[1][0] = ab * g21 * std::conj(g12) + ba * g22 * std::conj(g11);
    rho[1][1] = ab * g21 * std::conj(g22) + ba * g22 * std::conj(g21);
    return rho;
}

double closed_form_nd_modulus(const OmnesConfig& cfg, double t,
                              bool envelope) {
    if (t < 0.0) throw config_error("closed_form_nd_modulus: t must be >= 0");
    const double scale = cfg.exponent_scale();
    const double g0 = cfg.pole.gamma0;
    const double damping = std::exp(-g0 * t / cfg.hbar);
    const double osc =
        envelope ? 1.0 : std::cos(cfg.pole.omega0_prime() * t / cfg.hbar);
    return std::exp(-scale * (1.0 - damping * osc));
}

double gamma_eff_omnes(const OmnesConfig& cfg) {
    return cfg.exponent_scale() * cfg.pole.gamma0;
}

double decoherence_time_omnes(const OmnesConfig& cfg) {
    const double ge = gamma_eff_omnes(cfg);
    if (!(ge > 0.0)) {
        throw numeric_error("decoherence_time_omnes: gamma_eff vanishes");
    }
    return cfg.hbar / ge;
}

double relaxation_time_omnes(const OmnesConfig& cfg) {
    if (!(cfg.pole.gamma0 > 0.0)) {
        throw numeric_error("relaxation_time_omnes: gamma0 vanishes");
    }
    return cfg.hbar / cfg.pole.gamma0;
}

double short_time_rate_fit(const OmnesConfig& cfg, double t_max_fraction,
                           std::size_t n_samples) {
    if (!(t_max_fraction > 0.0) || t_max_fraction > 0.1) {
        throw config_error("short_time_rate_fit: fraction must be in (0, 0.1]");
    }
    if (n_samples < 8) {
        throw config_error("short_time_rate_fit: need at least 8 samples");
    }
    if (cfg.pole.gamma0 == 0.0) return 0.0;
    const double t_max = t_max_fraction * relaxation_time_omnes(cfg);
    // The envelope equals 1 at t=0, so the log-intercept is pinned at zero
    // and the fit reduces to a slope through the origin.
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 1; i <= n_samples; ++i) {
        const double t = t_max * static_cast<double>(i) /
                         static_cast<double>(n_samples);
        const double y = -std::log(closed_form_nd_modulus(cfg, t, true));
        num += t * y;
        den += t * t;
    }
    if (den == 0.0) throw numeric_error("short_time_rate_fit: degenerate window");
    return cfg.hbar * num / den;
}

}  // namespace decolab::omnes
