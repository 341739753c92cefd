// mode_catalogue.hpp — catalogue of decaying modes and the characteristic
// times derived from it (relaxation time, effective rate, decoherence time,
// slow/fast split).
//
// A catalogue represents a relaxation curve
//
//     F(t) = equilibrium + sum_i a_i(t) * exp(-gamma_i t / hbar),
//     a_i(t) = a0_i * cos(omega_i t / hbar + phase_i),
//
// with modes kept sorted by ascending rate (ties: frequency, then input
// order). All values are immutable after construction and safe to share
// across threads.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "decolab/common.hpp"

namespace decolab::modes {

struct DecayMode {
    double amplitude_0 = 0.0;  // a_i(0) when phase == 0
    double rate = 0.0;         // gamma_i >= 0, energy units
    double frequency = 0.0;    // omega_i, energy units
    double phase = 0.0;        // radians

    // Oscillating amplitude a_i(t); equals amplitude_0 at t=0 for phase 0.
    double amplitude_at(double t, double hbar) const;

    // The t=0 value actually entering effective-rate sums.
    double initial_amplitude() const;
};

class ModeCatalogue {
public:
    ModeCatalogue() = default;
    ModeCatalogue(std::vector<DecayMode> modes, double equilibrium_value,
                  double hbar = 1.0);

    const std::vector<DecayMode>& modes() const { return modes_; }
    double equilibrium_value() const { return equilibrium_; }
    double hbar() const { return hbar_; }
    std::size_t size() const { return modes_.size(); }
    bool empty() const { return modes_.empty(); }

private:
    std::vector<DecayMode> modes_;
    double equilibrium_ = 0.0;
    double hbar_ = 1.0;
};

// F(t) = equilibrium + sum_i a_i(t) exp(-gamma_i t / hbar). Requires t >= 0.
double evaluate_mode_sum(const ModeCatalogue& cat, double t);

// t_R = hbar / min_i gamma_i. Throws numeric_error if the catalogue is empty
// or any rate is zero (non-relaxing catalogue).
double relaxation_time(const ModeCatalogue& cat);

// gamma_eff = sum_i a_i(0) gamma_i / sum_i a_i(0). Throws numeric_error when
// the amplitude sum vanishes (undefined effective rate).
double effective_rate(const ModeCatalogue& cat);

// t_D = hbar / gamma_eff. Propagates effective_rate errors; throws when
// gamma_eff <= 0.
double decoherence_time(const ModeCatalogue& cat);

struct ModeSplit {
    ModeCatalogue slow;  // modes with gamma_i <  gamma_eff; keeps equilibrium
    ModeCatalogue fast;  // modes with gamma_i >= gamma_eff; equilibrium 0
};

// Strict threshold: a mode with gamma_i == gamma_eff is classified fast.
ModeSplit split_modes(const ModeCatalogue& cat, double gamma_eff);

// First-order envelope f(0) * exp(-gamma_eff t / hbar), f(0) = sum a_i(0).
double linearized_envelope(const ModeCatalogue& cat, double t);

// JSON object {"hbar":, "equilibrium":, "modes": [{"a0":, "gamma":,
// "omega":, "phase":}, ...]} — the same shape the scenario files use.
std::string to_json_string(const ModeCatalogue& cat);
ModeCatalogue catalogue_from_json_string(const std::string& text);

}  // namespace decolab::modes
