#include "decolab/coherent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

namespace decolab::coherent {

namespace {

// log of Z = sum_{k<=N} alpha^{2k}/k!, via logsumexp.
double log_normalization(double alpha, std::size_t cutoff_n) {
    if (alpha == 0.0) return 0.0;
    const double la2 = 2.0 * std::log(alpha);
    double max_term = -std::numeric_limits<double>::infinity();
    std::vector<double> logs(cutoff_n + 1);
    for (std::size_t k = 0; k <= cutoff_n; ++k) {
        logs[k] = static_cast<double>(k) * la2 - std::lgamma(static_cast<double>(k) + 1.0);
        max_term = std::max(max_term, logs[k]);
    }
    double s = 0.0;
    for (double lk : logs) s += std::exp(lk - max_term);
    return max_term + std::log(s);
}

void check_cutoff(std::size_t cutoff_n, const char* who) {
    if (cutoff_n > kMaxCutoff) {
        throw config_error(std::string(who) + ": cutoff exceeds supported maximum 500");
    }
}

// Compensated sum of the alternating tail sum_{n > N} (-x)^n / n!,
// valid (terms decreasing) when N + 1 > x.
double alternating_tail(double x, std::size_t cutoff_n) {
    const double n1 = static_cast<double>(cutoff_n) + 1.0;
    double term = std::exp(n1 * std::log(x) - std::lgamma(n1 + 1.0));
    if ((cutoff_n + 1) % 2 == 1) term = -term;
    double sum = 0.0, comp = 0.0;
    double n = n1;
    while (std::abs(term) > std::abs(sum) * 1e-18 + 1e-320) {
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        n += 1.0;
        term *= -x / n;
        if (n > n1 + 400) break;
    }
    return sum;
}

}  // namespace

QuasiCoherentState build_quasi_coherent(double alpha, std::size_t cutoff_n) {
    if (alpha < 0.0) {
        throw config_error("build_quasi_coherent: alpha must be >= 0");
    }
    check_cutoff(cutoff_n, "build_quasi_coherent");
    QuasiCoherentState s;
    s.alpha = alpha;
    s.cutoff_n = cutoff_n;
    s.coeffs.assign(cutoff_n + 1, Complex{0.0, 0.0});
    if (alpha == 0.0) {
        s.coeffs[0] = 1.0;
        return s;
    }
    const double log_z = log_normalization(alpha, cutoff_n);
    const double la = std::log(alpha);
    for (std::size_t n = 0; n <= cutoff_n; ++n) {
        const double ln = static_cast<double>(n) * la -
                          0.5 * std::lgamma(static_cast<double>(n) + 1.0) -
                          0.5 * log_z;
        s.coeffs[n] = std::exp(ln);
    }
    return s;
}

double overlap_direct(const QuasiCoherentState& s1,
                      const QuasiCoherentState& s2) {
    if (s1.cutoff_n != s2.cutoff_n) {
        throw config_error("overlap_direct: mismatched cutoffs");
    }
    double sum = 0.0, comp = 0.0;
    for (std::size_t n = 0; n < s1.coeffs.size(); ++n) {
        const double term = (std::conj(s1.coeffs[n]) * s2.coeffs[n]).real();
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double overlap_series(double alpha1, double alpha2, std::size_t cutoff_n) {
    if (alpha1 < 0.0 || alpha2 < 0.0) {
        throw config_error("overlap_series: alphas must be >= 0");
    }
    check_cutoff(cutoff_n, "overlap_series");
    const double da = alpha1 - alpha2;
    const double x = 0.5 * da * da;
    if (x == 0.0) return 1.0;
    if (static_cast<double>(cutoff_n) + 1.0 > x) {
        // Past the term peak: the truncated sum equals exp(-x) minus an
        // alternating tail whose terms decrease from the start.
        return std::exp(-x) - alternating_tail(x, cutoff_n);
    }
    // Truncation inside the growing-term region: plain compensated head sum.
    double sum = 0.0, comp = 0.0;
    double term = 1.0;
    for (std::size_t n = 0;; ++n) {
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (n == cutoff_n) break;
        term *= -x / (static_cast<double>(n) + 1.0);
    }
    return sum;
}

double remainder_bound(double alpha1, double alpha2, std::size_t cutoff_n) {
    const double da = std::abs(alpha1 - alpha2);
    if (da == 0.0) return 0.0;
    const double x = 0.5 * da * da;
    const double n1 = static_cast<double>(cutoff_n) + 1.0;
    return std::exp(n1 * std::log(x) - std::lgamma(n1 + 1.0));
}

MacroscopicityReport macroscopicity_check(double alpha1, double alpha2,
                                          std::size_t cutoff_n,
                                          double k_lower) {
    if (!(k_lower > 0.0)) {
        throw config_error("macroscopicity_check: k_lower must be positive");
    }
    MacroscopicityReport r;
    r.delta_alpha = std::abs(alpha1 - alpha2);
    r.upper_limit = std::sqrt(2.0 * (static_cast<double>(cutoff_n) + 1.0));
    r.lower_ok = r.delta_alpha >= k_lower;
    r.upper_ok = r.delta_alpha <= r.upper_limit;
    r.macroscopic = r.lower_ok && r.upper_ok;
    return r;
}

Complex evolved_overlap(double alpha_bra, double alpha_ket, Complex z0,
                        double t, std::size_t cutoff_n, double hbar,
                        OverlapNormalization norm) {
    if (alpha_bra < 0.0 || alpha_ket < 0.0) {
        throw config_error("evolved_overlap: alphas must be >= 0");
    }
    if (t < 0.0) throw config_error("evolved_overlap: t must be >= 0");
    check_cutoff(cutoff_n, "evolved_overlap");

    double log_prefactor;
    if (norm == OverlapNormalization::exponential) {
        log_prefactor = -0.5 * (alpha_bra * alpha_bra + alpha_ket * alpha_ket);
    } else {
        log_prefactor = -0.5 * (log_normalization(alpha_bra, cutoff_n) +
                                log_normalization(alpha_ket, cutoff_n));
    }
    if (log_prefactor < -650.0) {
        throw numeric_error(
            "evolved_overlap: displacements exceed the supported double range");
    }

    // u = exp(-i z0 t / hbar); |u| <= 1 for decaying poles. Folding the
    // prefactor into the first term keeps every partial product within
    // double range.
    const Complex u = std::exp(Complex{0.0, -1.0} * z0 * (t / hbar));
    const Complex w = alpha_bra * alpha_ket * u;

    Complex sum{0.0, 0.0}, comp{0.0, 0.0};
    Complex term{std::exp(log_prefactor), 0.0};
    for (std::size_t n = 0;; ++n) {
        const Complex y = term - comp;
        const Complex s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        if (n == cutoff_n) break;
        term *= w / (static_cast<double>(n) + 1.0);
    }
    return sum;
}

Complex survival_amplitude(const std::vector<Complex>& bra_coeffs,
                           const std::vector<Complex>& ket_coeffs, Complex z0,
                           double t, double hbar) {
    if (bra_coeffs.size() != ket_coeffs.size()) {
        throw config_error("survival_amplitude: coefficient length mismatch");
    }
    const Complex u = std::exp(Complex{0.0, -1.0} * z0 * (t / hbar));
    Complex a{0.0, 0.0};
    Complex un{1.0, 0.0};
    for (std::size_t n = 0; n < bra_coeffs.size(); ++n) {
        a += ket_coeffs[n] * std::conj(bra_coeffs[n]) * un;
        un *= u;
    }
    return a;
}

std::string to_json_string(const QuasiCoherentState& state) {
    nlohmann::ordered_json j;
    j["alpha"] = state.alpha;
    j["N"] = state.cutoff_n;
    j["coeffs"] = nlohmann::ordered_json::array();
    for (const auto& c : state.coeffs) {
        j["coeffs"].push_back({c.real(), c.imag()});
    }
    return j.dump();
}

QuasiCoherentState state_from_json_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw config_error(std::string("state JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("alpha") || !j.contains("N") ||
        !j.contains("coeffs") || !j["coeffs"].is_array()) {
        throw config_error("state JSON: expected {alpha, N, coeffs[[re,im]]}");
    }
    QuasiCoherentState s;
    s.alpha = j["alpha"].get<double>();
    s.cutoff_n = j["N"].get<std::size_t>();
    for (const auto& c : j["coeffs"]) {
        if (!c.is_array() || c.size() != 2) {
            throw config_error("state JSON: coefficients must be [re, im]");
        }
        s.coeffs.emplace_back(c[0].get<double>(), c[1].get<double>());
    }
    if (s.coeffs.size() != s.cutoff_n + 1) {
        throw config_error("state JSON: coefficient count must be N + 1");
    }
    return s;
}

}  // namespace decolab::coherent
