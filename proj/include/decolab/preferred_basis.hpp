// preferred_basis.hpp — construction of the fully evolved state rho_R(t) and
// its slow-mode counterpart rho_P(t) on a ladder of decaying levels, plus the
// convergence diagnostics between their eigenbases.
//
// A ladder scenario is a list of complex level values z_n = w_n - i g_n and
// initial coefficients c_n(0). Evolution multiplies each coefficient by
// exp(-i z_n t / hbar); rho is the trace-renormalized projector onto the
// evolved vector. rho_P replaces the decay factor of every level whose rate
// g_n reaches gamma_eff by its t -> infinity limit (zero), i.e. fast levels
// are removed outright.

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "decolab/common.hpp"
#include "decolab/linalg.hpp"
#include "decolab/omnes.hpp"

namespace decolab::basis {

struct LadderScenario {
    std::vector<Complex> levels;        // z_n, Im(z_n) <= 0
    Eigen::VectorXcd initial_coeffs;    // c_n(0), same length
    double hbar = 1.0;

    void validate() const;
    double level_rate(std::size_t n) const { return -levels[n].imag(); }
};

// Two-branch superposition of quasi-coherent states on the ladder z_n = n z0.
LadderScenario make_omnes_ladder(const omnes::OmnesConfig& cfg);

// Trace-one projector onto the evolved state. Throws numeric_error when the
// surviving norm underflows (state depleted).
linalg::DensityMatrix build_rho_R(const LadderScenario& sc, double t);

// Same construction with every level of rate >= gamma_eff removed.
linalg::DensityMatrix build_rho_P(const LadderScenario& sc, double t,
                                  double gamma_eff);

struct ConvergenceRow {
    double t = 0.0;
    double basis_distance = 0.0;  // eig(rho_R) vs eig(rho_P)
    double offdiag_norm = 0.0;    // rho_R expressed in the rho_P eigenframe
};

// One row per grid time (ascending grid required).
std::vector<ConvergenceRow> convergence_profile(const LadderScenario& sc,
                                                const std::vector<double>& t_grid,
                                                double gamma_eff,
                                                double degeneracy_tol = 1e-8);

}  // namespace decolab::basis
