// bifriedrichs.hpp — two commuting level-plus-band parts with disjoint bands
// on one frequency grid. Part-local observables evolve under their own part
// Hamiltonian only, so each sees exactly one resonance; the gap between the
// two relaxation times is the window in which part 1 has relaxed while
// part 2 has not.
//
// Discretization: the shared grid is the concatenation of the two band
// grids; each part's Hamiltonian carries its own level, its own band
// diagonal, and its own couplings. Disjoint supports make the two embedded
// matrices commute exactly, which build_bipart verifies with a sparse
// commutator.

#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "decolab/common.hpp"
#include "decolab/friedrichs.hpp"

namespace decolab::bipart {

struct PartSpec {
    double level = 1.0;                  // Omega_i
    friedrichs::FormFactor form_factor;  // band support and coupling shape
    std::size_t n_modes = 400;
    friedrichs::DensityOfStates dos;     // defaults to constant 1
};

struct BiPartSpec {
    PartSpec part1;  // band [lo1, a]
    PartSpec part2;  // band [b, omega_max], a < b
    double hbar = 1.0;
};

class BiPartModel {
public:
    // Validates disjoint bands, builds both discretized parts, and checks
    // the embedded commutator. Throws config_error on overlapping bands,
    // numeric_error if the commutator bound fails.
    explicit BiPartModel(const BiPartSpec& spec);

    // ||H1 H2 - H2 H1||_F / (||H1||_F ||H2||_F) on the common grid.
    double commutator_norm_rel() const { return commutator_rel_; }

    // <projector on the part level> under the part's own evolution.
    std::vector<double> part_expectation(int part,
                                         const std::vector<double>& t_grid) const;

    // Rebuilds with part-2 coupling scaled by `perturb` and returns
    // max_t |delta <O_1>(t)| over t_grid.
    double cross_independence_check(double perturb,
                                    const std::vector<double>& t_grid) const;

    // Second-order poles of the two parts.
    friedrichs::PoleResult pole(int part) const;

    const BiPartSpec& spec() const { return spec_; }

private:
    BiPartSpec spec_;
    friedrichs::DiscretizedFriedrichs model1_;
    friedrichs::DiscretizedFriedrichs model2_;
    double commutator_rel_ = 0.0;
};

BiPartModel build_bipart(const BiPartSpec& spec);

// (t_R1, t_R2): the interval where part 1 has relaxed and part 2 has not.
// Empty (nullopt) when t_R1 >= t_R2.
std::optional<std::pair<double, double>> classicality_window(double t_r1,
                                                             double t_r2);

}  // namespace decolab::bipart
