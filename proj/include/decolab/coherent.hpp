// coherent.hpp — truncated quasi-coherent states, their overlaps (static and
// evolved under the ladder spectrum n*z0), truncation remainder bounds, and
// the two macroscopicity conditions.
//
// A state with displacement alpha >= 0 truncated at Fock level N has
// coefficients
//
//     c_n = Z^{-1/2} alpha^n / sqrt(n!),   Z = sum_{k<=N} alpha^{2k} / k!.
//
// Two overlap routes are kept side by side: the exact truncated inner
// product (per-state normalizations) and the Cauchy-product series
// sum_{n<=N} (-(a1-a2)^2/2)^n / n!. They coincide only as N -> infinity;
// the series carries the analytic remainder bound implemented here.
// Factorials are accumulated through lgamma; cutoffs up to N = 500 are
// supported.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "decolab/common.hpp"

namespace decolab::coherent {

inline constexpr std::size_t kMaxCutoff = 500;

struct QuasiCoherentState {
    double alpha = 0.0;
    std::size_t cutoff_n = 0;
    std::vector<Complex> coeffs;  // length cutoff_n + 1, unit norm
};

// Normalized truncated coherent state; throws on alpha < 0 or N > 500.
QuasiCoherentState build_quasi_coherent(double alpha, std::size_t cutoff_n);

// Exact truncated overlap <a1|a2>: coefficient-vector inner product with the
// per-state truncated normalizations. Requires equal cutoffs.
double overlap_direct(const QuasiCoherentState& s1,
                      const QuasiCoherentState& s2);

// Series form sum_{n<=N} (1/n!) (-(a1-a2)^2/2)^n. Evaluated from the
// exponential and an accurate tail when the truncation lies past the term
// peak, so the returned value is correctly rounded even where direct
// summation would cancel catastrophically.
double overlap_series(double alpha1, double alpha2, std::size_t cutoff_n);

// (1/(N+1)!) ((a1-a2)^2/2)^{N+1}: bound on |series - exp(-(a1-a2)^2/2)|.
double remainder_bound(double alpha1, double alpha2, std::size_t cutoff_n);

struct MacroscopicityReport {
    double delta_alpha = 0.0;
    double upper_limit = 0.0;  // sqrt(2 (N+1))
    bool lower_ok = false;     // |da| >= k_lower
    bool upper_ok = false;     // |da| <= sqrt(2 (N+1))
    bool macroscopic = false;
};

// Default k_lower = 5 operationalizes the "much greater than 1" condition
// (overlap <= e^{-12.5}).
MacroscopicityReport macroscopicity_check(double alpha1, double alpha2,
                                          std::size_t cutoff_n,
                                          double k_lower = 5.0);

enum class OverlapNormalization {
    exponential,  // e^{-(a_bra^2 + a_ket^2)/2} prefactor
    truncated,    // per-state truncated Z factors
};

// <a_bra(0)| a_ket(t)> under the ladder evolution with pole z0:
//   prefactor * sum_{n<=N} (a_bra a_ket)^n / n! * exp(-i n z0 t / hbar).
Complex evolved_overlap(double alpha_bra, double alpha_ket, Complex z0,
                        double t, std::size_t cutoff_n, double hbar = 1.0,
                        OverlapNormalization norm =
                            OverlapNormalization::exponential);

// A(t) = sum_n ket_n conj(bra_n) exp(-i n z0 t / hbar) for arbitrary ladder
// coefficient vectors of equal length.
Complex survival_amplitude(const std::vector<Complex>& bra_coeffs,
                           const std::vector<Complex>& ket_coeffs, Complex z0,
                           double t, double hbar = 1.0);

// JSON object {"alpha":, "N":, "coeffs": [[re, im], ...]}.
std::string to_json_string(const QuasiCoherentState& state);
QuasiCoherentState state_from_json_string(const std::string& text);

}  // namespace decolab::coherent
