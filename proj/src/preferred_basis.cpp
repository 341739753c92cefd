#include "decolab/preferred_basis.hpp"

#include <cmath>
#include <limits>

namespace decolab::basis {

void LadderScenario::validate() const {
    if (levels.empty()) {
        throw config_error("LadderScenario: needs at least one level");
    }
    if (static_cast<std::size_t>(initial_coeffs.size()) != levels.size()) {
        throw config_error("LadderScenario: coefficient/level length mismatch");
    }
    if (!(hbar > 0.0)) throw config_error("LadderScenario: hbar must be > 0");
    for (const auto& z : levels) {
        if (z.imag() > 0.0) {
            throw config_error("LadderScenario: levels must not grow (Im z <= 0)");
        }
    }
    if (initial_coeffs.norm() == 0.0) {
        throw config_error("LadderScenario: initial state vanishes");
    }
}

LadderScenario make_omnes_ladder(const omnes::OmnesConfig& cfg) {
    const auto s1 = coherent::build_quasi_coherent(0.0, cfg.cutoff_n);
    const auto s2 = coherent::build_quasi_coherent(cfg.alpha2(), cfg.cutoff_n);
    LadderScenario sc;
    sc.hbar = cfg.hbar;
    sc.levels.resize(cfg.cutoff_n + 1);
    sc.initial_coeffs.resize(static_cast<Eigen::Index>(cfg.cutoff_n) + 1);
    const Complex z0 = cfg.pole.z0();
    for (std::size_t n = 0; n <= cfg.cutoff_n; ++n) {
        sc.levels[n] = static_cast<double>(n) * z0;
        sc.initial_coeffs(static_cast<Eigen::Index>(n)) =
            cfg.amp_a * s1.coeffs[n] + cfg.amp_b * s2.coeffs[n];
    }
    return sc;
}

namespace {

linalg::DensityMatrix build_projector(const LadderScenario& sc, double t,
                                      double filter_rate) {
    sc.validate();
    if (t < 0.0) throw config_error("build_rho: t must be >= 0");
    const Eigen::Index n = sc.initial_coeffs.size();
    Eigen::VectorXcd c(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const std::size_t ks = static_cast<std::size_t>(k);
        if (sc.level_rate(ks) >= filter_rate) {
            c(k) = Complex{0.0, 0.0};
            continue;
        }
        const Complex z = sc.levels[ks];
        c(k) = sc.initial_coeffs(k) *
               std::exp(Complex{0.0, -1.0} * z * (t / sc.hbar));
    }
    const double n2 = c.squaredNorm();
    if (!(n2 > 1e-300)) {
        throw numeric_error("build_rho: state depleted at requested time");
    }
    return linalg::DensityMatrix::from_pure(c);
}

}  // namespace

linalg::DensityMatrix build_rho_R(const LadderScenario& sc, double t) {
    return build_projector(sc, t, std::numeric_limits<double>::infinity());
}

linalg::DensityMatrix build_rho_P(const LadderScenario& sc, double t,
                                  double gamma_eff) {
    if (!(gamma_eff > 0.0)) {
        throw config_error("build_rho_P: gamma_eff must be positive");
    }
    return build_projector(sc, t, gamma_eff);
}

std::vector<ConvergenceRow> convergence_profile(const LadderScenario& sc,
                                                const std::vector<double>& t_grid,
                                                double gamma_eff,
                                                double degeneracy_tol) {
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1])) {
            throw config_error("convergence_profile: t_grid must ascend");
        }
    }
    std::vector<ConvergenceRow> rows;
    rows.reserve(t_grid.size());
    for (double t : t_grid) {
        const auto rho_r = build_rho_R(sc, t);
        const auto rho_p = build_rho_P(sc, t, gamma_eff);
        const auto eig_r = linalg::hermitian_eigendecomposition(rho_r);
        const auto eig_p = linalg::hermitian_eigendecomposition(rho_p);
        ConvergenceRow row;
        row.t = t;
        row.basis_distance =
            linalg::basis_distance(eig_r, eig_p, degeneracy_tol);
        row.offdiag_norm =
            linalg::off_diagonal_norm(rho_r.entries, eig_p.eigenvectors);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace decolab::basis
