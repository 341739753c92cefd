// omnes.hpp — oscillator-in-a-bath superposition scenario: two quasi-coherent
// branches at displacement 0 and alpha2 = sqrt(m w / 2 hbar) L0, the decay of
// the off-diagonal density-matrix entries, and the effective decoherence
// rate/time they define.
//
// The off-diagonal entry built from the evolved overlaps decays as
//
//     |rho12(t)| = |a b*| exp(-alpha2^2 (1 - e^{-gamma0 t/hbar} cos(w0' t/hbar)))
//
// whose envelope (cosine dropped) defines gamma_eff = (m w / 2 hbar) L0^2 g0
// and t_D = hbar / gamma_eff = (2 hbar / m w) L0^{-2} t_R.

#pragma once

#include <array>
#include <cstddef>

#include "decolab/coherent.hpp"
#include "decolab/common.hpp"
#include "decolab/friedrichs.hpp"

namespace decolab::omnes {

struct OmnesConfig {
    double mass = 1.0;
    double omega = 1.0;
    double hbar = 1.0;
    double L0 = 1.0;             // initial branch separation, > 0
    Complex amp_a{1.0, 0.0};     // superposition weights, renormalized so
    Complex amp_b{1.0, 0.0};     // |a|^2 + |b|^2 = 1 at construction
    std::size_t cutoff_n = 100;  // Fock truncation N
    friedrichs::PoleResult pole; // supplies gamma0 and omega0'
    double k_lower = 5.0;        // macroscopicity threshold on |delta alpha|

    // Validates positivity, renormalizes (a, b), and checks that the derived
    // alpha2 passes the macroscopicity window. Throws config_error otherwise.
    void finalize();

    double alpha2() const;                 // sqrt(m w / 2 hbar) L0
    double exponent_scale() const;         // alpha2^2 = (m w / 2 hbar) L0^2
    // Residual norm deviation of the two-branch state caused by the small
    // truncated overlap <alpha1|alpha2>; the density-matrix builders
    // renormalize by trace, so weights keep |a|^2+|b|^2 = 1 exactly.
    double branch_overlap() const;
};

// sqrt(m w / 2 hbar) L0. Throws on nonpositive inputs.
double alpha_from_length(double mass, double omega, double hbar, double L0);

// rho^{ND}(t) entries in the {|alpha1(0)>, |alpha2(0)>} frame, assembled from
// the four evolved overlaps. With macroscopic=true the two static cross
// overlaps (suppressed as e^{-alpha2^2/2}) are dropped, which isolates the
// pole-driven factor the closed forms below describe.
std::array<std::array<Complex, 2>, 2> nd_components(const OmnesConfig& cfg,
                                                    double t,
                                                    bool macroscopic = true);

// Modulus of the off-diagonal decay factor.
//   envelope=true :  exp(-alpha2^2 (1 - e^{-g0 t/hbar}))
//   envelope=false:  exp(-alpha2^2 (1 - e^{-g0 t/hbar} cos(w0' t/hbar)))
double closed_form_nd_modulus(const OmnesConfig& cfg, double t, bool envelope);

// gamma_eff = (m w / 2 hbar) L0^2 gamma0.
double gamma_eff_omnes(const OmnesConfig& cfg);

// t_D = hbar / gamma_eff; throws when gamma_eff vanishes.
double decoherence_time_omnes(const OmnesConfig& cfg);

// t_R = hbar / gamma0.
double relaxation_time_omnes(const OmnesConfig& cfg);

// Fits exp(-g t / hbar) through the t=0 value of the envelope closed form on
// [0, fraction * t_R] and returns g (energy units, comparable to gamma_eff).
// Requires 0 < fraction <= 0.1.
double short_time_rate_fit(const OmnesConfig& cfg, double t_max_fraction,
                           std::size_t n_samples = 256);

}  // namespace decolab::omnes
