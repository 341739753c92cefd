#include "decolab/bifriedrichs.hpp"

#include <cmath>
#include <map>

namespace decolab::bipart {

namespace {

using Triplet = std::map<std::pair<std::size_t, std::size_t>, double>;

double frobenius(const Triplet& m) {
    double s = 0.0;
    for (const auto& [ij, v] : m) s += v * v;
    return std::sqrt(s);
}

Triplet multiply(const Triplet& a, const Triplet& b) {
    // Index b rows for the sparse product.
    std::map<std::size_t, std::vector<std::pair<std::size_t, double>>> b_rows;
    for (const auto& [ij, v] : b) b_rows[ij.first].emplace_back(ij.second, v);
    Triplet out;
    for (const auto& [ij, va] : a) {
        auto it = b_rows.find(ij.second);
        if (it == b_rows.end()) continue;
        for (const auto& [col, vb] : it->second) {
            out[{ij.first, col}] += va * vb;
        }
    }
    return out;
}

Triplet subtract(const Triplet& a, const Triplet& b) {
    Triplet out = a;
    for (const auto& [ij, v] : b) out[ij] -= v;
    return out;
}

}  // namespace

BiPartModel::BiPartModel(const BiPartSpec& spec)
    : spec_(spec),
      model1_(spec.part1.form_factor, spec.part1.dos, spec.part1.level,
              spec.part1.n_modes, spec.hbar),
      model2_(spec.part2.form_factor, spec.part2.dos, spec.part2.level,
              spec.part2.n_modes, spec.hbar) {
    const double a = spec.part1.form_factor.omega_hi;
    const double b = spec.part2.form_factor.omega_lo;
    if (!(a < b)) {
        throw config_error("BiPartModel: band supports must be disjoint (a < b)");
    }

    // Embedded sparse Hamiltonians on the common basis
    // {level1, level2, band1 cells..., band2 cells...}; couplings rebuilt
    // exactly as the discretized models construct them.
    auto assemble = [&](const friedrichs::DiscretizedFriedrichs& model,
                        const PartSpec& part, std::size_t level_index,
                        std::size_t band_offset) {
        Triplet h;
        h[{level_index, level_index}] = part.level;
        const auto& grid = model.grid();
        const double dw = model.delta_omega_cell();
        for (std::size_t j = 0; j < grid.size(); ++j) {
            h[{band_offset + j, band_offset + j}] = grid[j];
            const double c =
                part.form_factor(grid[j]) * std::sqrt(part.dos(grid[j]) * dw);
            if (c == 0.0) continue;
            h[{level_index, band_offset + j}] = c;
            h[{band_offset + j, level_index}] = c;
        }
        return h;
    };

    const std::size_t off1 = 2;
    const std::size_t off2 = 2 + spec.part1.n_modes;
    const Triplet h1 = assemble(model1_, spec.part1, 0, off1);
    const Triplet h2 = assemble(model2_, spec.part2, 1, off2);

    const Triplet comm = subtract(multiply(h1, h2), multiply(h2, h1));
    const double denom = frobenius(h1) * frobenius(h2);
    commutator_rel_ = denom > 0.0 ? frobenius(comm) / denom : 0.0;
    if (commutator_rel_ > 1e-10) {
        throw numeric_error("BiPartModel: embedded parts fail to commute");
    }
}

std::vector<double> BiPartModel::part_expectation(
    int part, const std::vector<double>& t_grid) const {
    if (part != 1 && part != 2) {
        throw config_error("part_expectation: part must be 1 or 2");
    }
    const auto& model = (part == 1) ? model1_ : model2_;
    std::vector<double> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) {
        out.push_back(std::norm(model.survival_amplitude(t)));
    }
    return out;
}

double BiPartModel::cross_independence_check(
    double perturb, const std::vector<double>& t_grid) const {
    if (perturb < 0.0) {
        throw config_error("cross_independence_check: scale must be >= 0");
    }
    BiPartSpec scaled = spec_;
    scaled.part2.form_factor.strength *= perturb;
    const BiPartModel other(scaled);
    const auto base = part_expectation(1, t_grid);
    const auto alt = other.part_expectation(1, t_grid);
    double dev = 0.0;
    for (std::size_t i = 0; i < base.size(); ++i) {
        dev = std::max(dev, std::abs(base[i] - alt[i]));
    }
    return dev;
}

friedrichs::PoleResult BiPartModel::pole(int part) const {
    if (part != 1 && part != 2) {
        throw config_error("pole: part must be 1 or 2");
    }
    const PartSpec& p = (part == 1) ? spec_.part1 : spec_.part2;
    return friedrichs::second_order_pole(p.form_factor, p.dos, p.level);
}

BiPartModel build_bipart(const BiPartSpec& spec) { return BiPartModel(spec); }

std::optional<std::pair<double, double>> classicality_window(double t_r1,
                                                             double t_r2) {
    if (!(t_r1 < t_r2)) return std::nullopt;
    return std::make_pair(t_r1, t_r2);
}

}  // namespace decolab::bipart
