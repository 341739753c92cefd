// Acceptance suite: each criterion prints one PASS/FAIL line with the
// measured numbers and its pinned tolerance. Run a single criterion with
// `decolab_acceptance cN` or everything with `decolab_acceptance all`.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "decolab/bifriedrichs.hpp"
#include "decolab/coherent.hpp"
#include "decolab/friedrichs.hpp"
#include "decolab/khalfin.hpp"
#include "decolab/linalg.hpp"
#include "decolab/mode_catalogue.hpp"
#include "decolab/omnes.hpp"
#include "decolab/preferred_basis.hpp"
#include "decolab/scenario.hpp"

using namespace decolab;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
const std::string kScenarioDir = DECOLAB_SCENARIO_DIR;

struct Timer {
    std::chrono::steady_clock::time_point start =
        std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             start)
            .count();
    }
};

bool report(int n, bool pass, const std::string& what,
            const std::string& detail) {
    std::printf("criterion %d [%s] %s: %s\n", n, pass ? "PASS" : "FAIL",
                what.c_str(), detail.c_str());
    return pass;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

omnes::OmnesConfig make_omnes(double mass, double omega, double hbar,
                              double l0, std::size_t n, double gamma0,
                              double omega0p, double k_lower = 5.0) {
    omnes::OmnesConfig cfg;
    cfg.mass = mass;
    cfg.omega = omega;
    cfg.hbar = hbar;
    cfg.L0 = l0;
    cfg.amp_a = Complex{1.0, 0.0};
    cfg.amp_b = Complex{1.0, 0.0};
    cfg.cutoff_n = n;
    cfg.pole.omega0 = omega0p;
    cfg.pole.gamma0 = gamma0;
    cfg.k_lower = k_lower;
    cfg.finalize();
    return cfg;
}

// C1: truncated two-branch evolution reproduces the closed-form off-diagonal
// modulus exp(-a2^2 (1 - e^{-g0 t} cos(w0' t))) to relative 1e-6 on
// t in [0, 5/g0], for a2 in {5, 6} with N = 300, in under a second.
bool criterion1() {
    Timer timer;
    double worst = 0.0;
    for (double alpha2 : {5.0, 6.0}) {
        // m w / 2 hbar = (alpha2 / L0)^2 with L0 = 10.
        const double mass = 2.0 * alpha2 * alpha2 / 100.0;
        const auto cfg = make_omnes(mass, 1.0, 1.0, 10.0, 300, 0.01, 0.003);
        const double ab = std::abs(cfg.amp_a) * std::abs(cfg.amp_b);
        for (int i = 0; i <= 500; ++i) {
            const double t = 500.0 * i / 500.0;
            const auto rho = omnes::nd_components(cfg, t, true);
            const double sim = std::abs(rho[0][1]) / ab;
            const double closed = omnes::closed_form_nd_modulus(cfg, t, false);
            worst = std::max(worst, std::abs(sim - closed) / closed);
        }
    }
    const double secs = timer.seconds();
    const bool pass = worst <= 1e-6 && secs < 1.0;
    return report(1, pass, "off-diagonal closed-form reproduction",
                  fmt("max rel err %.3e (tol 1e-6), runtime %.2fs (limit 1s)",
                      worst, secs));
}

// C2: the short-time fit of the envelope returns gamma_eff to 2%, and
// t_D = (2 hbar / m w) L0^{-2} t_R holds to machine precision.
bool criterion2() {
    const auto cfg = make_omnes(2.0, 1.0, 1.0, 10.0, 150, 0.01, 0.0);
    const double gamma_eff = omnes::gamma_eff_omnes(cfg);  // 1.0
    const double fit = omnes::short_time_rate_fit(cfg, 0.05);
    const double rel = std::abs(fit - gamma_eff) / gamma_eff;

    const double t_d = omnes::decoherence_time_omnes(cfg);
    const double t_r = omnes::relaxation_time_omnes(cfg);
    const double identity =
        (2.0 * cfg.hbar / (cfg.mass * cfg.omega)) / (cfg.L0 * cfg.L0) * t_r;
    const double id_err = std::abs(t_d - identity) / identity;

    const bool pass = rel <= 0.02 && id_err <= 1e-14;
    return report(2, pass, "decoherence-time recovery",
                  fmt("gamma_fit %.6f vs gamma_eff %.6f (rel %.4f, tol 0.02); "
                      "identity deviation %.2e (tol 1e-14)",
                      fit, gamma_eff, rel, id_err));
}

// C3: brute-force survival decay vs the pole width, and the level shift vs
// the flat-band logarithm, inside 10 s.
bool criterion3() {
    Timer timer;
    friedrichs::FormFactor ff;
    ff.kind = friedrichs::FormFactorKind::flat_band;
    ff.strength = 0.1;
    ff.omega_lo = 0.0;
    ff.omega_hi = 10.0;
    const auto dos = friedrichs::DensityOfStates{};
    const double gamma0 = kPi * 0.01;

    friedrichs::DiscretizedFriedrichs model(ff, dos, 5.0, 2000);
    const double lo = 0.5 / gamma0;
    const double hi = 2.0 / gamma0;
    std::vector<std::pair<double, double>> mags;
    for (int i = 0; i <= 240; ++i) {
        const double t = lo + (hi - lo) * i / 240.0;
        mags.emplace_back(t, std::abs(model.survival_amplitude(t)));
    }
    const auto fit = friedrichs::fit_decay_rate(mags, lo, hi);
    const double rate_rel = std::abs(2.0 * fit.gamma - 2.0 * gamma0) /
                            (2.0 * gamma0);

    const double shift = friedrichs::level_shift(ff, dos, 2.0);
    const double analytic = 0.01 * std::log(2.0 / 8.0);
    const double shift_rel = std::abs(shift - analytic) / std::abs(analytic);

    const double secs = timer.seconds();
    const bool pass = rate_rel <= 0.10 && shift_rel <= 0.01 && secs < 10.0;
    return report(3, pass, "pole vs brute-force evolution",
                  fmt("|A|^2 rate rel err %.4f (tol 0.10); level shift rel err "
                      "%.2e (tol 0.01); runtime %.2fs (limit 10s)",
                      rate_rel, shift_rel, secs));
}

// C4: overlap truncation bounds on the alpha in {1..6} x N in {10,20,40,80}
// grid with the vacuum as the second state: the series obeys its Lagrange
// remainder bound, and the direct/series gap is asserted against the
// 3x remainder envelope.
bool criterion4() {
    int fail_series = 0;
    int fail_gap = 0;
    std::string cells;
    for (int alpha = 1; alpha <= 6; ++alpha) {
        for (std::size_t n : {10u, 20u, 40u, 80u}) {
            const double a2 = static_cast<double>(alpha);
            const double rb = coherent::remainder_bound(0.0, a2, n);
            const double series = coherent::overlap_series(0.0, a2, n);
            const double target = std::exp(-0.5 * a2 * a2);
            if (std::abs(series - target) > rb) {
                ++fail_series;
                cells += fmt(" series(a=%d,N=%zu)", alpha, n);
            }
            const auto s1 = coherent::build_quasi_coherent(0.0, n);
            const auto s2 = coherent::build_quasi_coherent(a2, n);
            const double direct = coherent::overlap_direct(s1, s2);
            if (std::abs(direct - series) > 3.0 * rb) {
                ++fail_gap;
                cells += fmt(" gap(a=%d,N=%zu)", alpha, n);
            }
        }
    }
    const bool pass = fail_series == 0 && fail_gap == 0;
    return report(4, pass, "overlap remainder bounds",
                  fmt("series-bound failures %d/24, gap-bound failures %d/24%s%s",
                      fail_series, fail_gap,
                      pass ? "" : "; failing cells:", cells.c_str()));
}

// C5: 1000 randomized all-positive catalogues keep gamma_eff inside
// [gamma_min, gamma_max], t_D <= t_R, and match the t=0 log-derivative.
bool criterion5() {
    std::mt19937 rng(20250810);
    std::uniform_real_distribution<double> amp(0.05, 4.0);
    std::uniform_real_distribution<double> rate(0.01, 8.0);
    std::uniform_int_distribution<int> count(1, 8);
    int violations = 0;
    double worst_fd = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<modes::DecayMode> ms;
        const int n = count(rng);
        double gmax = 0.0;
        for (int i = 0; i < n; ++i) {
            const double g = rate(rng);
            gmax = std::max(gmax, g);
            ms.push_back({amp(rng), g, 0.0, 0.0});
        }
        const modes::ModeCatalogue cat(std::move(ms), 0.3, 1.0);
        const double ge = modes::effective_rate(cat);
        if (ge < cat.modes().front().rate * (1.0 - 1e-12) ||
            ge > cat.modes().back().rate * (1.0 + 1e-12)) {
            ++violations;
        }
        if (modes::decoherence_time(cat) >
            modes::relaxation_time(cat) * (1.0 + 1e-12)) {
            ++violations;
        }
        const double h = 1e-4 / gmax;
        auto f = [&](double t) {
            return modes::evaluate_mode_sum(cat, t) - cat.equilibrium_value();
        };
        const double l0 = std::log(f(0.0));
        const double l1 = std::log(f(h));
        const double l2 = std::log(f(2.0 * h));
        const double deriv = (-3.0 * l0 + 4.0 * l1 - l2) / (2.0 * h);
        worst_fd = std::max(worst_fd, std::abs(deriv + ge) / ge);
    }
    const bool pass = violations == 0 && worst_fd <= 1e-6;
    return report(5, pass, "effective-rate properties",
                  fmt("ordering violations %d/1000; worst log-derivative rel "
                      "err %.2e (tol 1e-6)",
                      violations, worst_fd));
}

// C6: two-pole ladder with gamma1 = 50 gamma0: eigenbasis convergence by
// 3 t_D, residual decay at >= 0.8 gamma_eff, Jacobi reconstruction residual
// <= 1e-10 throughout.
bool criterion6() {
    const double g0 = 0.05;
    const double g1 = 50.0 * g0;
    basis::LadderScenario sc;
    sc.levels = {Complex{0.0, 0.0}, Complex{0.3, -g0}, Complex{1.1, -g1}};
    sc.initial_coeffs = Eigen::VectorXcd(3);
    sc.initial_coeffs << Complex{1.0, 0.0}, Complex{1.0, 0.0},
        Complex{1.0, 0.0};
    const double gamma_eff = 0.5 * (g0 + g1);
    const double t_d = 1.0 / gamma_eff;

    double worst_resid = 0.0;
    std::vector<std::pair<double, double>> resid;
    for (int i = 1; i <= 48; ++i) {
        const double t = 3.0 * t_d * i / 48.0;
        const auto rr = basis::build_rho_R(sc, t);
        const auto rp = basis::build_rho_P(sc, t, gamma_eff);
        for (const auto& rho : {rr, rp}) {
            const auto eb = linalg::hermitian_eigendecomposition(rho);
            const Eigen::MatrixXcd rec = eb.eigenvectors *
                                         eb.eigenvalues.asDiagonal() *
                                         eb.eigenvectors.adjoint();
            worst_resid = std::max(worst_resid, (rec - rho.entries).norm());
        }
        if (t >= 0.5 * t_d) {
            resid.emplace_back(t, (rr.entries - rp.entries).norm());
        }
    }
    const auto eb_r = linalg::hermitian_eigendecomposition(
        basis::build_rho_R(sc, 3.0 * t_d));
    const auto eb_p = linalg::hermitian_eigendecomposition(
        basis::build_rho_P(sc, 3.0 * t_d, gamma_eff));
    const double dist = linalg::basis_distance(eb_r, eb_p, 1e-8);
    const auto fit = friedrichs::fit_decay_rate(resid, resid.front().first,
                                                resid.back().first);

    const bool pass =
        dist <= 0.05 && fit.gamma >= 0.8 * gamma_eff && worst_resid <= 1e-10;
    return report(
        6, pass, "moving-basis convergence",
        fmt("distance at 3 t_D = %.4f (tol 0.05); residual rate %.3f vs 0.8 "
            "gamma_eff = %.3f; max reconstruction residual %.2e (tol 1e-10)",
            dist, fit.gamma, 0.8 * gamma_eff, worst_resid));
}

// C7: model tables and the crossover bisection against the analytic solve.
bool criterion7() {
    const double hbar = 1.0;
    const Complex z0{1.0, -0.5};
    const Complex z1{1.5, -5.0};
    const khalfin::KhalfinTail tail{0.05, 2.0, 2.0};

    const auto p1 = khalfin::model1_profile(z0, tail, {1.0, 0.4, 0.4, 1.0}, hbar);
    const std::vector<double> want1 = {hbar / 0.5, 2.0 * hbar / 0.5,
                                       2.0 * hbar / 0.5,
                                       std::numeric_limits<double>::infinity()};
    bool tables_ok = p1.characteristic_times == want1;

    const auto p2 =
        khalfin::model2_profile(Complex{0.5, -0.1}, z1, {0.0, 1.0, 1.0, 1.0, 1.0},
                                hbar);
    const std::vector<double> want2 = {hbar / 0.1, hbar / (5.0 + 0.1),
                                       hbar / (5.0 + 0.1), hbar / 5.0};
    tables_ok = tables_ok && p2.characteristic_times == want2;

    // Analytic two-exponential crossover.
    const double a = 2.0, g = 0.7, b = 0.4, eta = 0.05;
    std::vector<modes::DecayMode> ms = {{a, g, 0.0, 0.0}, {b, 0.0, 0.0, 0.0}};
    khalfin::EvolutionProfile two;
    two.pole_terms = modes::ModeCatalogue(std::move(ms), 0.0, hbar);
    khalfin::CrossoverSearch search;
    search.eta = eta;
    search.horizon = 50.0;
    const double expected = hbar / g * std::log(a / (eta * b));
    const double got = khalfin::crossover_time(two, {0}, search);
    const double rel = std::abs(got - expected) / expected;

    const bool pass = tables_ok && rel <= 1e-6;
    return report(7, pass, "characteristic-time tables",
                  fmt("tables %s; crossover rel err %.2e (tol 1e-6)",
                      tables_ok ? "exact" : "MISMATCH", rel));
}

// C8: bi-part commutation, part-1 invariance under part-2 rescaling, and
// per-part fitted rates vs their own poles.
bool criterion8() {
    bipart::BiPartSpec spec;
    spec.part1.level = 0.6;
    spec.part1.form_factor = {friedrichs::FormFactorKind::flat_band, 0.06, 0.0,
                              1.0};
    spec.part1.n_modes = 1500;
    spec.part2.level = 3.0;
    spec.part2.form_factor = {friedrichs::FormFactorKind::flat_band, 0.04, 2.0,
                              8.0};
    spec.part2.n_modes = 2000;
    const auto model = bipart::build_bipart(spec);

    std::vector<double> grid;
    for (int i = 0; i <= 100; ++i) grid.push_back(4.0 * i);
    const double indep = model.cross_independence_check(2.0, grid);

    double worst_fit = 0.0;
    for (int part : {1, 2}) {
        const auto pole = model.pole(part);
        const double lo = 0.5 / pole.gamma0;
        const double hi = 2.0 / pole.gamma0;
        std::vector<double> window;
        for (int i = 0; i <= 160; ++i) window.push_back(lo + (hi - lo) * i / 160.0);
        const auto probs = model.part_expectation(part, window);
        std::vector<std::pair<double, double>> mags;
        for (std::size_t i = 0; i < window.size(); ++i) {
            mags.emplace_back(window[i], std::sqrt(probs[i]));
        }
        const auto fit = friedrichs::fit_decay_rate(mags, lo, hi);
        worst_fit = std::max(worst_fit,
                             std::abs(fit.gamma - pole.gamma0) / pole.gamma0);
    }

    const bool pass = model.commutator_norm_rel() <= 1e-10 && indep <= 1e-12 &&
                      worst_fit <= 0.10;
    return report(8, pass, "bi-part independence",
                  fmt("commutator %.2e (tol 1e-10); part-1 deviation %.2e "
                      "(tol 1e-12); worst fitted-rate rel err %.4f (tol 0.10)",
                      model.commutator_norm_rel(), indep, worst_fit));
}

// C9: byte-identical outputs when every shipped scenario is run twice.
bool criterion9() {
    const std::vector<std::string> names = {
        "modes.json",    "friedrichs.json", "omnes.json", "basis.json",
        "khalfin1.json", "khalfin2.json",   "bipart.json"};
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    int mismatches = 0;
    for (const auto& name : names) {
        const auto cfg = cli::load_config(kScenarioDir + "/" + name);
        const fs::path d1 =
            fs::temp_directory_path() / ("decolab_acc9_a_" + name);
        const fs::path d2 =
            fs::temp_directory_path() / ("decolab_acc9_b_" + name);
        fs::remove_all(d1);
        fs::remove_all(d2);
        const auto r1 = cli::run_scenario(cfg, d1.string());
        const auto r2 = cli::run_scenario(cfg, d2.string());
        if (r1.files != r2.files) ++mismatches;
        for (const auto& f : r1.files) {
            if (slurp(d1 / f) != slurp(d2 / f)) ++mismatches;
        }
        fs::remove_all(d1);
        fs::remove_all(d2);
    }
    const bool pass = mismatches == 0;
    return report(9, pass, "determinism",
                  fmt("%d byte-level mismatches across %zu scenarios",
                      mismatches, names.size()));
}

}  // namespace

int main(int argc, char** argv) {
    const std::string which = argc > 1 ? argv[1] : "all";
    const std::vector<std::pair<std::string, std::function<bool()>>> all = {
        {"c1", criterion1}, {"c2", criterion2}, {"c3", criterion3},
        {"c4", criterion4}, {"c5", criterion5}, {"c6", criterion6},
        {"c7", criterion7}, {"c8", criterion8}, {"c9", criterion9},
    };
    bool ok = true;
    bool ran = false;
    for (const auto& [name, fn] : all) {
        if (which == "all" || which == name) {
            ran = true;
            try {
                ok = fn() && ok;
            } catch (const std::exception& e) {
                std::printf("criterion %c [FAIL] exception: %s\n", name[1],
                            e.what());
                ok = false;
            }
        }
    }
    if (!ran) {
        std::fprintf(stderr, "unknown criterion '%s' (use c1..c9 or all)\n",
                     which.c_str());
        return 2;
    }
    return ok ? 0 : 1;
}
