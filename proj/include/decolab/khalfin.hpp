// khalfin.hpp — evolution profiles made of pole terms plus an optional
// inverse-polynomial long-time tail, their characteristic-time tables, and
// crossover detection between fast and slow contributions.
//
// Model 1: one pole z0 and the tail. The three exponential contributions
// carry rates {g0, g0/2, g0/2} (times hbar/g0, 2 hbar/g0, 2 hbar/g0), the
// tail is the "infinite" entry.
//
// Model 2: two poles z0, z1 (g0 < g1, no tail). The five terms carry rates
// {0, g0, (g1+g0)/2, (g1+g0)/2, g1}; the reported coincidence-time table
// uses the combined-width convention {hbar/g0, hbar/(g1+g0), hbar/(g1+g0),
// hbar/g1}.
//
// Crossovers compare magnitude envelopes |a_i| exp(-g_i t / hbar) (never the
// oscillating instantaneous values, which would produce spurious zero
// crossings).

#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "decolab/common.hpp"
#include "decolab/mode_catalogue.hpp"

namespace decolab::khalfin {

struct KhalfinTail {
    double amplitude = 0.0;  // C
    double onset = 1.0;      // tau > 0
    double exponent = 2.0;   // p > 0

    // C (1 + t/tau)^{-p}: finite at t = 0 and strictly decreasing.
    double operator()(double t) const;
    void validate() const;
};

struct EvolutionProfile {
    modes::ModeCatalogue pole_terms;
    std::optional<KhalfinTail> tail;
    std::vector<double> characteristic_times;  // as reported by the builders

    double equilibrium() const { return pole_terms.equilibrium_value(); }
    double hbar() const { return pole_terms.hbar(); }

    // F(t) = equilibrium + pole terms + tail.
    double evaluate(double t) const;
};

// weights: the three exponential contributions, then the tail scale.
EvolutionProfile model1_profile(Complex z0, const KhalfinTail& tail,
                                const std::array<double, 4>& weights,
                                double hbar = 1.0);

// weights: equilibrium, then the four exponential contributions in the rate
// order {g0, (g1+g0)/2, (g1+g0)/2, g1}. Requires 0 < g0 <= g1.
EvolutionProfile model2_profile(Complex z0, Complex z1,
                                const std::array<double, 5>& weights,
                                double hbar = 1.0);

struct CrossoverSearch {
    double eta = 0.01;       // envelope ratio threshold, 0 < eta < 1
    double horizon = 0.0;    // search horizon; 0 picks 50 / slowest rate
    std::size_t grid = 4096; // coarse scan resolution
};

// Earliest time at which the summed magnitude envelope of the modes outside
// slow_indices drops to eta times the slow + tail envelope, refined by
// bisection. Throws numeric_error when no crossover occurs on the horizon.
double crossover_time(const EvolutionProfile& profile,
                      const std::vector<std::size_t>& slow_indices,
                      const CrossoverSearch& search = {});

}  // namespace decolab::khalfin
