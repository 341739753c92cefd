#include "decolab/khalfin.hpp"

#include <algorithm>
#include <cmath>

namespace decolab::khalfin {

double KhalfinTail::operator()(double t) const {
    return amplitude * std::pow(1.0 + t / onset, -exponent);
}

void KhalfinTail::validate() const {
    if (!(onset > 0.0)) throw config_error("KhalfinTail: onset must be > 0");
    if (!(exponent > 0.0)) throw config_error("KhalfinTail: exponent must be > 0");
}

double EvolutionProfile::evaluate(double t) const {
    double f = modes::evaluate_mode_sum(pole_terms, t);
    if (tail) f += (*tail)(t);
    return f;
}

EvolutionProfile model1_profile(Complex z0, const KhalfinTail& tail,
                                const std::array<double, 4>& weights,
                                double hbar) {
    const double g0 = -z0.imag();
    if (!(g0 > 0.0)) {
        throw config_error("model1_profile: pole width gamma0 must be positive");
    }
    tail.validate();
    const double w0p = z0.real();
    std::vector<modes::DecayMode> ms = {
        {weights[0], g0, 0.0, 0.0},
        {weights[1], 0.5 * g0, w0p, 0.0},
        {weights[2], 0.5 * g0, w0p, 0.0},
    };
    EvolutionProfile p;
    p.pole_terms = modes::ModeCatalogue(std::move(ms), 0.0, hbar);
    p.tail = KhalfinTail{tail.amplitude * weights[3], tail.onset, tail.exponent};
    p.characteristic_times = {hbar / g0, 2.0 * hbar / g0, 2.0 * hbar / g0,
                              std::numeric_limits<double>::infinity()};
    return p;
}

EvolutionProfile model2_profile(Complex z0, Complex z1,
                                const std::array<double, 5>& weights,
                                double hbar) {
    const double g0 = -z0.imag();
    const double g1 = -z1.imag();
    if (!(g0 > 0.0) || !(g1 > 0.0) || g1 < g0) {
        throw config_error("model2_profile: need 0 < gamma0 <= gamma1");
    }
    const double cross_rate = 0.5 * (g0 + g1);
    const double beat = std::abs(z1.real() - z0.real());
    std::vector<modes::DecayMode> ms = {
        {weights[1], g0, 0.0, 0.0},
        {weights[2], cross_rate, beat, 0.0},
        {weights[3], cross_rate, beat, 0.0},
        {weights[4], g1, 0.0, 0.0},
    };
    EvolutionProfile p;
    p.pole_terms = modes::ModeCatalogue(std::move(ms), weights[0], hbar);
    p.characteristic_times = {hbar / g0, hbar / (g1 + g0), hbar / (g1 + g0),
                              hbar / g1};
    return p;
}

namespace {

struct Envelopes {
    const EvolutionProfile& profile;
    std::vector<bool> is_slow;

    double fast(double t) const {
        double s = 0.0;
        const auto& ms = profile.pole_terms.modes();
        for (std::size_t i = 0; i < ms.size(); ++i) {
            if (is_slow[i]) continue;
            s += std::abs(ms[i].amplitude_0) *
                 std::exp(-ms[i].rate * t / profile.hbar());
        }
        return s;
    }
    double slow(double t) const {
        double s = 0.0;
        const auto& ms = profile.pole_terms.modes();
        for (std::size_t i = 0; i < ms.size(); ++i) {
            if (!is_slow[i]) continue;
            s += std::abs(ms[i].amplitude_0) *
                 std::exp(-ms[i].rate * t / profile.hbar());
        }
        if (profile.tail) s += std::abs((*profile.tail)(t));
        return s;
    }
};

}  // namespace

double crossover_time(const EvolutionProfile& profile,
                      const std::vector<std::size_t>& slow_indices,
                      const CrossoverSearch& search) {
    if (!(search.eta > 0.0 && search.eta < 1.0)) {
        throw config_error("crossover_time: eta must lie in (0, 1)");
    }
    const auto& ms = profile.pole_terms.modes();
    Envelopes env{profile, std::vector<bool>(ms.size(), false)};
    for (std::size_t i : slow_indices) {
        if (i >= ms.size()) {
            throw config_error("crossover_time: slow index out of range");
        }
        env.is_slow[i] = true;
    }

    auto excess = [&](double t) {
        return env.fast(t) - search.eta * env.slow(t);
    };

    if (excess(0.0) <= 0.0) return 0.0;

    double horizon = search.horizon;
    if (!(horizon > 0.0)) {
        double slowest = std::numeric_limits<double>::infinity();
        for (const auto& m : ms) {
            if (m.rate > 0.0 && std::abs(m.amplitude_0) > 0.0) {
                slowest = std::min(slowest, m.rate);
            }
        }
        if (!std::isfinite(slowest)) {
            throw numeric_error("crossover_time: no decaying contribution");
        }
        horizon = 50.0 * profile.hbar() / slowest;
    }

    const std::size_t n = std::max<std::size_t>(search.grid, 8);
    double lo = 0.0;
    double hi = -1.0;
    for (std::size_t i = 1; i <= n; ++i) {
        const double t = horizon * static_cast<double>(i) / static_cast<double>(n);
        if (excess(t) <= 0.0) {
            hi = t;
            break;
        }
        lo = t;
    }
    if (hi < 0.0) {
        throw numeric_error("crossover_time: envelopes never cross on the horizon");
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (excess(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace decolab::khalfin
