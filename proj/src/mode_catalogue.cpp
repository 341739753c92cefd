#include "decolab/mode_catalogue.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

namespace decolab::modes {

double DecayMode::amplitude_at(double t, double hbar) const {
    return amplitude_0 * std::cos(frequency * t / hbar + phase);
}

double DecayMode::initial_amplitude() const {
    return amplitude_0 * std::cos(phase);
}

ModeCatalogue::ModeCatalogue(std::vector<DecayMode> modes,
                             double equilibrium_value, double hbar)
    : modes_(std::move(modes)), equilibrium_(equilibrium_value), hbar_(hbar) {
    if (!(hbar_ > 0.0)) {
        throw config_error("ModeCatalogue: hbar must be positive");
    }
    for (const auto& m : modes_) {
        if (m.rate < 0.0) {
            throw config_error("ModeCatalogue: mode rate must be >= 0");
        }
    }
    // Ascending rate; ties by frequency, then input order.
    std::stable_sort(modes_.begin(), modes_.end(),
                     [](const DecayMode& a, const DecayMode& b) {
                         if (a.rate != b.rate) return a.rate < b.rate;
                         return a.frequency < b.frequency;
                     });
}

double evaluate_mode_sum(const ModeCatalogue& cat, double t) {
    if (t < 0.0) {
        throw numeric_error("evaluate_mode_sum: t must be >= 0");
    }
    double sum = cat.equilibrium_value();
    for (const auto& m : cat.modes()) {
        sum += m.amplitude_at(t, cat.hbar()) * std::exp(-m.rate * t / cat.hbar());
    }
    return sum;
}

double relaxation_time(const ModeCatalogue& cat) {
    if (cat.empty()) {
        throw numeric_error("relaxation_time: catalogue has no modes");
    }
    const double gamma_min = cat.modes().front().rate;  // sorted ascending
    if (gamma_min <= 0.0) {
        throw numeric_error("relaxation_time: catalogue is non-relaxing (rate 0)");
    }
    return cat.hbar() / gamma_min;
}

double effective_rate(const ModeCatalogue& cat) {
    if (cat.empty()) {
        throw numeric_error("effective_rate: catalogue has no modes");
    }
    double num = 0.0;
    double den = 0.0;
    for (const auto& m : cat.modes()) {
        const double a0 = m.initial_amplitude();
        num += a0 * m.rate;
        den += a0;
    }
    if (den == 0.0) {
        throw numeric_error("effective_rate: amplitude sum vanishes");
    }
    return num / den;
}

double decoherence_time(const ModeCatalogue& cat) {
    const double gamma_eff = effective_rate(cat);
    if (!(gamma_eff > 0.0)) {
        throw numeric_error("decoherence_time: effective rate is not positive");
    }
    return cat.hbar() / gamma_eff;
}

ModeSplit split_modes(const ModeCatalogue& cat, double gamma_eff) {
    if (!(gamma_eff > 0.0)) {
        throw numeric_error("split_modes: gamma_eff must be positive");
    }
    std::vector<DecayMode> slow;
    std::vector<DecayMode> fast;
    for (const auto& m : cat.modes()) {
        if (m.rate < gamma_eff) {
            slow.push_back(m);
        } else {
            fast.push_back(m);
        }
    }
    return ModeSplit{
        ModeCatalogue(std::move(slow), cat.equilibrium_value(), cat.hbar()),
        ModeCatalogue(std::move(fast), 0.0, cat.hbar())};
}

double linearized_envelope(const ModeCatalogue& cat, double t) {
    const double gamma_eff = effective_rate(cat);
    double f0 = 0.0;
    for (const auto& m : cat.modes()) f0 += m.initial_amplitude();
    return f0 * std::exp(-gamma_eff * t / cat.hbar());
}

std::string to_json_string(const ModeCatalogue& cat) {
    nlohmann::ordered_json j;
    j["hbar"] = cat.hbar();
    j["equilibrium"] = cat.equilibrium_value();
    j["modes"] = nlohmann::ordered_json::array();
    for (const auto& m : cat.modes()) {
        j["modes"].push_back({{"a0", m.amplitude_0},
                              {"gamma", m.rate},
                              {"omega", m.frequency},
                              {"phase", m.phase}});
    }
    return j.dump();
}

ModeCatalogue catalogue_from_json_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw config_error(std::string("catalogue JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("modes") || !j["modes"].is_array()) {
        throw config_error("catalogue JSON: expected {hbar, equilibrium, modes[]}");
    }
    std::vector<DecayMode> ms;
    for (const auto& m : j["modes"]) {
        ms.push_back({m.value("a0", 0.0), m.value("gamma", 0.0),
                      m.value("omega", 0.0), m.value("phase", 0.0)});
    }
    return ModeCatalogue(std::move(ms), j.value("equilibrium", 0.0),
                         j.value("hbar", 1.0));
}

}  // namespace decolab::modes
