#include "decolab/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "decolab/bifriedrichs.hpp"
#include "decolab/coherent.hpp"
#include "decolab/friedrichs.hpp"
#include "decolab/khalfin.hpp"
#include "decolab/mode_catalogue.hpp"
#include "decolab/omnes.hpp"
#include "decolab/preferred_basis.hpp"

namespace decolab::cli {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::vector<double> TimeGrid::points() const {
    std::vector<double> t(n_points);
    const double n1 = static_cast<double>(n_points - 1);
    if (log_spacing) {
        const double ratio = t_max / t_min;
        for (std::size_t i = 0; i < n_points; ++i) {
            t[i] = t_min * std::pow(ratio, static_cast<double>(i) / n1);
        }
    } else {
        for (std::size_t i = 0; i < n_points; ++i) {
            t[i] = t_min + (t_max - t_min) * static_cast<double>(i) / n1;
        }
    }
    t.front() = t_min;
    t.back() = t_max;
    return t;
}

namespace {

// ------------------------------- validation --------------------------------

struct Diags {
    std::vector<std::string> list;

    void add(const std::string& path, const std::string& what) {
        list.push_back(path + ": " + what);
    }
    bool ok() const { return list.empty(); }
};

bool expect_number(const json& j, const std::string& path, Diags& d) {
    if (!j.is_number()) {
        d.add(path, "expected a number");
        return false;
    }
    return true;
}

double num_or(const json& parent, const char* key, double fallback,
              const std::string& path, Diags& d) {
    if (!parent.contains(key)) return fallback;
    if (!expect_number(parent[key], path + "." + key, d)) return fallback;
    return parent[key].get<double>();
}

bool expect_complex_pair(const json& j, const std::string& path, Diags& d) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
        !j[1].is_number()) {
        d.add(path, "expected [re, im]");
        return false;
    }
    return true;
}

Complex parse_complex(const json& j) {
    return Complex{j[0].get<double>(), j[1].get<double>()};
}

void check_form_factor(const json& j, const std::string& path, Diags& d) {
    if (!j.is_object()) {
        d.add(path, "expected an object");
        return;
    }
    const std::string kind = j.value("kind", "");
    if (kind != "flat_band" && kind != "gaussian" && kind != "lorentzian") {
        d.add(path + ".kind",
              "must be one of flat_band, gaussian, lorentzian");
    }
    const double strength = num_or(j, "strength", -1.0, path, d);
    if (strength < 0.0) d.add(path + ".strength", "must be >= 0");
    const double lo = num_or(j, "omega_lo", -1.0, path, d);
    const double hi = num_or(j, "omega_hi", -1.0, path, d);
    if (!(0.0 <= lo && lo < hi)) {
        d.add(path, "support requires 0 <= omega_lo < omega_hi");
    }
    if (kind == "gaussian" || kind == "lorentzian") {
        if (!(num_or(j, "width", 0.0, path, d) > 0.0)) {
            d.add(path + ".width", "must be > 0 for shaped form factors");
        }
    }
}

friedrichs::FormFactor parse_form_factor(const json& j) {
    friedrichs::FormFactor ff;
    const std::string kind = j.value("kind", "flat_band");
    if (kind == "gaussian") {
        ff.kind = friedrichs::FormFactorKind::gaussian;
    } else if (kind == "lorentzian") {
        ff.kind = friedrichs::FormFactorKind::lorentzian;
    } else {
        ff.kind = friedrichs::FormFactorKind::flat_band;
    }
    ff.strength = j.value("strength", 0.0);
    ff.omega_lo = j.value("omega_lo", 0.0);
    ff.omega_hi = j.value("omega_hi", 1.0);
    ff.center = j.value("center", 0.0);
    ff.width = j.value("width", 1.0);
    return ff;
}

void check_catalogue(const json& j, const std::string& path, Diags& d) {
    if (!j.is_object()) {
        d.add(path, "expected an object");
        return;
    }
    if (num_or(j, "hbar", 1.0, path, d) <= 0.0) {
        d.add(path + ".hbar", "must be > 0");
    }
    if (!j.contains("modes") || !j["modes"].is_array() || j["modes"].empty()) {
        d.add(path + ".modes", "expected a nonempty array");
        return;
    }
    std::size_t i = 0;
    for (const auto& m : j["modes"]) {
        const std::string mp = path + ".modes[" + std::to_string(i++) + "]";
        if (!m.is_object() || !m.contains("a0") || !m.contains("gamma")) {
            d.add(mp, "expected {a0, gamma[, omega, phase]}");
            continue;
        }
        if (num_or(m, "gamma", -1.0, mp, d) < 0.0) {
            d.add(mp + ".gamma", "decay rate must be nonnegative");
        }
    }
}

modes::ModeCatalogue parse_catalogue(const json& j) {
    std::vector<modes::DecayMode> ms;
    for (const auto& m : j["modes"]) {
        ms.push_back({m.value("a0", 0.0), m.value("gamma", 0.0),
                      m.value("omega", 0.0), m.value("phase", 0.0)});
    }
    return modes::ModeCatalogue(std::move(ms), j.value("equilibrium", 0.0),
                                j.value("hbar", 1.0));
}

void check_omnes_block(const json& j, const std::string& path, Diags& d) {
    if (!j.is_object()) {
        d.add(path, "expected an object");
        return;
    }
    for (const char* key : {"m", "omega", "hbar", "L0"}) {
        if (num_or(j, key, 0.0, path, d) <= 0.0) {
            d.add(path + "." + key, "must be > 0");
        }
    }
    for (const char* key : {"a", "b"}) {
        if (!j.contains(key)) {
            d.add(path + "." + key, "missing superposition weight [re, im]");
        } else if (expect_complex_pair(j[key], path + "." + key, d)) {
            if (std::abs(parse_complex(j[key])) == 0.0) {
                d.add(path + "." + key, "weight must be nonzero");
            }
        }
    }
    if (!j.contains("N") || !j["N"].is_number_unsigned() ||
        j["N"].get<std::size_t>() > coherent::kMaxCutoff) {
        d.add(path + ".N", "expected an integer cutoff in [0, 500]");
    }
    if (num_or(j, "gamma0", -1.0, path, d) < 0.0) {
        d.add(path + ".gamma0", "decay rate must be nonnegative");
    }
    if (!j.contains("omega0p")) d.add(path + ".omega0p", "missing");
    const double frac = num_or(j, "fit_fraction", 0.05, path, d);
    if (!(frac > 0.0 && frac <= 0.1)) {
        d.add(path + ".fit_fraction", "must lie in (0, 0.1]");
    }
    if (d.ok()) {
        // Macroscopicity window check via the real constructor.
        try {
            omnes::OmnesConfig cfg;
            cfg.mass = j["m"].get<double>();
            cfg.omega = j["omega"].get<double>();
            cfg.hbar = j["hbar"].get<double>();
            cfg.L0 = j["L0"].get<double>();
            cfg.amp_a = parse_complex(j["a"]);
            cfg.amp_b = parse_complex(j["b"]);
            cfg.cutoff_n = j["N"].get<std::size_t>();
            cfg.k_lower = j.value("k_lower", 5.0);
            cfg.finalize();
        } catch (const std::exception& e) {
            d.add(path, e.what());
        }
    }
}

omnes::OmnesConfig parse_omnes_block(const json& j) {
    omnes::OmnesConfig cfg;
    cfg.mass = j["m"].get<double>();
    cfg.omega = j["omega"].get<double>();
    cfg.hbar = j["hbar"].get<double>();
    cfg.L0 = j["L0"].get<double>();
    cfg.amp_a = parse_complex(j["a"]);
    cfg.amp_b = parse_complex(j["b"]);
    cfg.cutoff_n = j["N"].get<std::size_t>();
    cfg.k_lower = j.value("k_lower", 5.0);
    cfg.pole.omega0 = j.value("omega0p", 0.0);
    cfg.pole.delta_omega = 0.0;
    cfg.pole.gamma0 = j.value("gamma0", 0.0);
    cfg.finalize();
    return cfg;
}

void check_grid(const json& root, Diags& d) {
    if (!root.contains("grid") || !root["grid"].is_object()) {
        d.add("grid", "missing time grid object");
        return;
    }
    const json& g = root["grid"];
    const double t_max = num_or(g, "t_max", 0.0, "grid", d);
    if (!(t_max > 0.0)) d.add("grid.t_max", "must be > 0");
    if (!g.contains("n_points") || !g["n_points"].is_number_unsigned() ||
        g["n_points"].get<std::size_t>() < 2) {
        d.add("grid.n_points", "expected an integer >= 2");
    }
    const std::string spacing = g.value("spacing", "linear");
    if (spacing != "linear" && spacing != "log") {
        d.add("grid.spacing", "must be linear or log");
    }
    const double t_min = num_or(g, "t_min", spacing == "log" ? t_max * 1e-4 : 0.0,
                                "grid", d);
    if (spacing == "log" && !(t_min > 0.0)) {
        d.add("grid.t_min", "log spacing requires t_min > 0");
    }
    if (!(t_min < t_max)) d.add("grid", "t_min must be below t_max");
}

TimeGrid parse_grid(const json& root) {
    const json& g = root["grid"];
    TimeGrid grid;
    grid.t_max = g["t_max"].get<double>();
    grid.n_points = g["n_points"].get<std::size_t>();
    grid.log_spacing = g.value("spacing", "linear") == "log";
    grid.t_min = g.value("t_min", grid.log_spacing ? grid.t_max * 1e-4 : 0.0);
    return grid;
}

void check_kind_block(const json& root, ScenarioKind kind, Diags& d) {
    switch (kind) {
        case ScenarioKind::modes:
            if (!root.contains("modes")) {
                d.add("modes", "missing block");
            } else {
                check_catalogue(root["modes"].contains("catalogue")
                                    ? root["modes"]["catalogue"]
                                    : json{},
                                "modes.catalogue", d);
            }
            break;
        case ScenarioKind::friedrichs: {
            if (!root.contains("friedrichs") || !root["friedrichs"].is_object()) {
                d.add("friedrichs", "missing block");
                break;
            }
            const json& f = root["friedrichs"];
            check_form_factor(f.contains("form_factor") ? f["form_factor"]
                                                        : json{},
                              "friedrichs.form_factor", d);
            if (!f.contains("omega0") || !f["omega0"].is_number()) {
                d.add("friedrichs.omega0", "missing number");
            }
            if (num_or(f, "dos", 1.0, "friedrichs", d) < 0.0) {
                d.add("friedrichs.dos", "must be >= 0");
            }
            if (f.contains("oracle")) {
                const json& o = f["oracle"];
                if (!o.is_object() || !o.contains("n_modes") ||
                    !o["n_modes"].is_number_unsigned() ||
                    o["n_modes"].get<std::size_t>() < 10) {
                    d.add("friedrichs.oracle.n_modes", "expected integer >= 10");
                }
                if (o.contains("fit_window")) {
                    const json& w = o["fit_window"];
                    if (!w.is_array() || w.size() != 2 || !w[0].is_number() ||
                        !w[1].is_number() ||
                        !(w[0].get<double>() < w[1].get<double>())) {
                        d.add("friedrichs.oracle.fit_window",
                              "expected [lo, hi] with lo < hi");
                    }
                }
            }
            break;
        }
        case ScenarioKind::omnes:
            if (!root.contains("omnes")) {
                d.add("omnes", "missing block");
            } else {
                check_omnes_block(root["omnes"], "omnes", d);
            }
            break;
        case ScenarioKind::basis: {
            if (!root.contains("basis") || !root["basis"].is_object()) {
                d.add("basis", "missing block");
                break;
            }
            const json& b = root["basis"];
            if (b.contains("omnes")) {
                check_omnes_block(b["omnes"], "basis.omnes", d);
                break;
            }
            if (!b.contains("levels") || !b["levels"].is_array() ||
                b["levels"].empty()) {
                d.add("basis.levels", "expected a nonempty array of [re, im]");
            } else {
                std::size_t i = 0;
                for (const auto& z : b["levels"]) {
                    const std::string p =
                        "basis.levels[" + std::to_string(i++) + "]";
                    if (expect_complex_pair(z, p, d) &&
                        parse_complex(z).imag() > 0.0) {
                        d.add(p, "level must not grow (Im z <= 0)");
                    }
                }
            }
            if (!b.contains("coeffs") || !b["coeffs"].is_array() ||
                (b.contains("levels") && b["levels"].is_array() &&
                 b["coeffs"].size() != b["levels"].size())) {
                d.add("basis.coeffs", "expected [re, im] array matching levels");
            }
            if (num_or(b, "gamma_eff", 0.0, "basis", d) <= 0.0) {
                d.add("basis.gamma_eff", "must be > 0");
            }
            if (num_or(b, "hbar", 1.0, "basis", d) <= 0.0) {
                d.add("basis.hbar", "must be > 0");
            }
            break;
        }
        case ScenarioKind::khalfin: {
            if (!root.contains("khalfin") || !root["khalfin"].is_object()) {
                d.add("khalfin", "missing block");
                break;
            }
            const json& k = root["khalfin"];
            const int model = k.value("model", 0);
            if (model != 1 && model != 2) d.add("khalfin.model", "must be 1 or 2");
            if (!k.contains("z0") ||
                !expect_complex_pair(k["z0"], "khalfin.z0", d)) {
                break;
            }
            if (parse_complex(k["z0"]).imag() >= 0.0) {
                d.add("khalfin.z0", "pole must lie in the lower half plane");
            }
            if (model == 1) {
                if (!k.contains("weights") || !k["weights"].is_array() ||
                    k["weights"].size() != 4) {
                    d.add("khalfin.weights", "model 1 takes 4 weights");
                }
                if (!k.contains("tail") || !k["tail"].is_object()) {
                    d.add("khalfin.tail", "model 1 requires a tail object");
                } else {
                    if (num_or(k["tail"], "onset", 0.0, "khalfin.tail", d) <= 0.0) {
                        d.add("khalfin.tail.onset", "must be > 0");
                    }
                    if (num_or(k["tail"], "exponent", 0.0, "khalfin.tail", d) <=
                        0.0) {
                        d.add("khalfin.tail.exponent", "must be > 0");
                    }
                }
            }
            if (model == 2) {
                if (!k.contains("weights") || !k["weights"].is_array() ||
                    k["weights"].size() != 5) {
                    d.add("khalfin.weights", "model 2 takes 5 weights");
                }
                if (!k.contains("z1") ||
                    !expect_complex_pair(k["z1"], "khalfin.z1", d)) {
                    d.add("khalfin.z1", "model 2 requires the second pole");
                } else {
                    const double g0 = -parse_complex(k["z0"]).imag();
                    const double g1 = -parse_complex(k["z1"]).imag();
                    if (!(g0 > 0.0 && g1 >= g0)) {
                        d.add("khalfin", "poles must satisfy 0 < gamma0 <= gamma1");
                    }
                }
            }
            const double eta = num_or(k, "eta", 0.01, "khalfin", d);
            if (!(eta > 0.0 && eta < 1.0)) {
                d.add("khalfin.eta", "must lie in (0, 1)");
            }
            if (num_or(k, "hbar", 1.0, "khalfin", d) <= 0.0) {
                d.add("khalfin.hbar", "must be > 0");
            }
            break;
        }
        case ScenarioKind::bipart: {
            if (!root.contains("bipart") || !root["bipart"].is_object()) {
                d.add("bipart", "missing block");
                break;
            }
            const json& b = root["bipart"];
            for (const char* part : {"part1", "part2"}) {
                const std::string p = std::string("bipart.") + part;
                if (!b.contains(part) || !b[part].is_object()) {
                    d.add(p, "missing part object");
                    continue;
                }
                const json& ps = b[part];
                if (!ps.contains("level") || !ps["level"].is_number()) {
                    d.add(p + ".level", "missing number");
                }
                check_form_factor(ps.contains("form_factor") ? ps["form_factor"]
                                                             : json{},
                                  p + ".form_factor", d);
                if (!ps.contains("n_modes") ||
                    !ps["n_modes"].is_number_unsigned() ||
                    ps["n_modes"].get<std::size_t>() < 10) {
                    d.add(p + ".n_modes", "expected integer >= 10");
                }
            }
            if (d.ok()) {
                const double a = b["part1"]["form_factor"]["omega_hi"].get<double>();
                const double bb = b["part2"]["form_factor"]["omega_lo"].get<double>();
                if (!(a < bb)) {
                    d.add("bipart",
                          "band supports must be disjoint: part1 omega_hi (a) "
                          "< part2 omega_lo (b)");
                }
            }
            if (num_or(b, "perturb", 2.0, "bipart", d) < 0.0) {
                d.add("bipart.perturb", "must be >= 0");
            }
            if (num_or(b, "hbar", 1.0, "bipart", d) <= 0.0) {
                d.add("bipart.hbar", "must be > 0");
            }
            break;
        }
    }
}

bool kind_from_string(const std::string& s, ScenarioKind& kind) {
    if (s == "modes") kind = ScenarioKind::modes;
    else if (s == "friedrichs") kind = ScenarioKind::friedrichs;
    else if (s == "omnes") kind = ScenarioKind::omnes;
    else if (s == "basis") kind = ScenarioKind::basis;
    else if (s == "khalfin") kind = ScenarioKind::khalfin;
    else if (s == "bipart") kind = ScenarioKind::bipart;
    else return false;
    return true;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> validate_text(const std::string& text) {
    Diags d;
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        d.add("(file)", e.what());
        return d.list;
    }
    if (!root.is_object()) {
        d.add("(file)", "top level must be a JSON object");
        return d.list;
    }
    ScenarioKind kind{};
    if (!root.contains("kind") || !root["kind"].is_string() ||
        !kind_from_string(root["kind"].get<std::string>(), kind)) {
        d.add("kind",
              "must be one of modes, friedrichs, omnes, basis, khalfin, bipart");
        return d.list;
    }
    if (root.contains("out_dir") && !root["out_dir"].is_string()) {
        d.add("out_dir", "expected a string");
    }
    check_grid(root, d);
    check_kind_block(root, kind, d);
    return d.list;
}

// --------------------------------- output ----------------------------------

class OutputStage {
public:
    explicit OutputStage(const std::filesystem::path& dir) : dir_(dir) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) throw io_error("cannot create output directory: " + dir_.string());
    }

    void add(const std::string& name, const std::string& content) {
        const auto tmp = dir_ / (name + ".stage");
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw io_error("cannot stage output file: " + tmp.string());
        out << content;
        out.close();
        if (!out) throw io_error("write failed: " + tmp.string());
        staged_.emplace_back(tmp, dir_ / name);
    }

    std::vector<std::string> commit() {
        std::vector<std::string> names;
        for (const auto& [tmp, final_path] : staged_) {
            std::error_code ec;
            std::filesystem::rename(tmp, final_path, ec);
            if (ec) throw io_error("cannot move staged file into place: " +
                                   final_path.string());
            names.push_back(final_path.filename().string());
        }
        staged_.clear();
        return names;
    }

    ~OutputStage() {
        for (const auto& [tmp, final_path] : staged_) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
        }
    }

private:
    std::filesystem::path dir_;
    std::vector<std::pair<std::filesystem::path, std::filesystem::path>> staged_;
};

std::string csv_row(std::initializer_list<double> cells) {
    std::string row;
    bool first = true;
    for (double c : cells) {
        if (!first) row += ',';
        row += format_double(c);
        first = false;
    }
    row += '\n';
    return row;
}

void put_number(ordered_json& j, const char* key, double v) {
    if (std::isfinite(v)) {
        j[key] = v;
    } else {
        j[key] = nullptr;  // infinite characteristic times serialize as null
    }
}

// ------------------------------ kind runners --------------------------------

struct Curves {
    std::vector<std::pair<std::string, std::string>> files;  // name, content
    ordered_json summary;
};

Curves run_modes(const json& root, const std::vector<double>& grid) {
    const auto cat = parse_catalogue(root["modes"]["catalogue"]);
    std::string csv = "t,F\n";
    for (double t : grid) csv += csv_row({t, modes::evaluate_mode_sum(cat, t)});

    Curves out;
    out.summary["kind"] = "modes";
    const double gamma_eff = modes::effective_rate(cat);
    put_number(out.summary, "gamma_eff", gamma_eff);
    put_number(out.summary, "t_R", modes::relaxation_time(cat));
    put_number(out.summary, "t_D", modes::decoherence_time(cat));
    put_number(out.summary, "gamma_min", cat.modes().front().rate);
    put_number(out.summary, "gamma_max", cat.modes().back().rate);
    const auto split = modes::split_modes(cat, gamma_eff);
    out.summary["n_slow"] = split.slow.size();
    out.summary["n_fast"] = split.fast.size();
    put_number(out.summary, "equilibrium", cat.equilibrium_value());
    out.files.emplace_back("curve.csv", std::move(csv));
    return out;
}

Curves run_friedrichs(const json& root, const std::vector<double>& grid) {
    const json& f = root["friedrichs"];
    const auto ff = parse_form_factor(f["form_factor"]);
    const auto dos = friedrichs::DensityOfStates::constant(f.value("dos", 1.0));
    const double omega0 = f["omega0"].get<double>();
    quad::QuadratureSpec spec;
    if (f.contains("quadrature")) {
        spec.tolerance = f["quadrature"].value("tolerance", spec.tolerance);
        spec.max_refinements =
            f["quadrature"].value("max_refinements", spec.max_refinements);
        spec.window_fraction =
            f["quadrature"].value("window_fraction", spec.window_fraction);
    }
    const auto pole = friedrichs::second_order_pole(ff, dos, omega0, spec);

    Curves out;
    out.summary["kind"] = "friedrichs";
    put_number(out.summary, "gamma0", pole.gamma0);
    put_number(out.summary, "delta_omega", pole.delta_omega);
    put_number(out.summary, "z0_re", pole.z0().real());
    put_number(out.summary, "z0_im", pole.z0().imag());
    if (pole.gamma0 > 0.0) {
        put_number(out.summary, "t_R", 1.0 / pole.gamma0);
    } else {
        out.summary["t_R"] = nullptr;
    }

    if (f.contains("oracle")) {
        const std::size_t n_modes = f["oracle"]["n_modes"].get<std::size_t>();
        friedrichs::DiscretizedFriedrichs model(ff, dos, omega0, n_modes);
        std::string csv = "t,re,im,abs2\n";
        std::vector<std::pair<double, double>> mags;
        for (double t : grid) {
            const Complex a = model.survival_amplitude(t);
            csv += csv_row({t, a.real(), a.imag(), std::norm(a)});
            mags.emplace_back(t, std::abs(a));
        }
        out.files.emplace_back("survival.csv", std::move(csv));
        put_number(out.summary, "recurrence_time", model.recurrence_time());
        double lo = 0.5 / pole.gamma0;
        double hi = 2.0 / pole.gamma0;
        if (f["oracle"].contains("fit_window")) {
            lo = f["oracle"]["fit_window"][0].get<double>();
            hi = f["oracle"]["fit_window"][1].get<double>();
        }
        const auto fit = friedrichs::fit_decay_rate(mags, lo, hi);
        put_number(out.summary, "fitted_rate", fit.gamma);
        put_number(out.summary, "fit_residual_rms", fit.residual_rms);
    } else {
        out.summary["recurrence_time"] = nullptr;
        out.summary["fitted_rate"] = nullptr;
        out.summary["fit_residual_rms"] = nullptr;
    }
    return out;
}

Curves run_omnes(const json& root, const std::vector<double>& grid) {
    const auto cfg = parse_omnes_block(root["omnes"]);
    const double ab = std::abs(cfg.amp_a) * std::abs(cfg.amp_b);
    std::string csv = "t,sim_abs,closed_envelope,closed_exact\n";
    for (double t : grid) {
        const auto rho = omnes::nd_components(cfg, t, true);
        csv += csv_row({t, std::abs(rho[0][1]) / ab,
                        omnes::closed_form_nd_modulus(cfg, t, true),
                        omnes::closed_form_nd_modulus(cfg, t, false)});
    }
    Curves out;
    out.summary["kind"] = "omnes";
    put_number(out.summary, "alpha2", cfg.alpha2());
    put_number(out.summary, "gamma_eff", omnes::gamma_eff_omnes(cfg));
    put_number(out.summary, "t_D", omnes::decoherence_time_omnes(cfg));
    put_number(out.summary, "t_R", omnes::relaxation_time_omnes(cfg));
    const double frac = root["omnes"].value("fit_fraction", 0.05);
    put_number(out.summary, "gamma_fit", omnes::short_time_rate_fit(cfg, frac));
    out.files.emplace_back("decay.csv", std::move(csv));
    return out;
}

Curves run_basis(const json& root, const std::vector<double>& grid) {
    const json& b = root["basis"];
    basis::LadderScenario sc;
    double gamma_eff = 0.0;
    double hbar = 1.0;
    if (b.contains("omnes")) {
        const auto cfg = parse_omnes_block(b["omnes"]);
        sc = basis::make_omnes_ladder(cfg);
        gamma_eff = omnes::gamma_eff_omnes(cfg);
        hbar = cfg.hbar;
    } else {
        hbar = b.value("hbar", 1.0);
        sc.hbar = hbar;
        for (const auto& z : b["levels"]) sc.levels.push_back(parse_complex(z));
        sc.initial_coeffs.resize(static_cast<Eigen::Index>(b["coeffs"].size()));
        Eigen::Index i = 0;
        for (const auto& c : b["coeffs"]) {
            sc.initial_coeffs(i++) = parse_complex(c);
        }
        gamma_eff = b["gamma_eff"].get<double>();
    }
    const double tol = b.value("degeneracy_tol", 1e-8);
    const auto rows = basis::convergence_profile(sc, grid, gamma_eff, tol);
    std::string csv = "t,basis_distance,offdiag_norm\n";
    for (const auto& r : rows) {
        csv += csv_row({r.t, r.basis_distance, r.offdiag_norm});
    }

    Curves out;
    out.summary["kind"] = "basis";
    put_number(out.summary, "gamma_eff", gamma_eff);
    const double t_d = hbar / gamma_eff;
    put_number(out.summary, "t_D", t_d);
    double slowest = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < sc.levels.size(); ++n) {
        const double r = sc.level_rate(n);
        if (r > 0.0) slowest = std::min(slowest, r);
    }
    put_number(out.summary, "t_R",
               std::isfinite(slowest) ? hbar / slowest
                                      : std::numeric_limits<double>::infinity());
    put_number(out.summary, "distance_final", rows.back().basis_distance);

    // Residual decay rate of ||rho_R - rho_P||_F over [0.5 t_D, 3 t_D].
    std::vector<std::pair<double, double>> resid;
    for (double t : grid) {
        if (t < 0.5 * t_d || t > 3.0 * t_d) continue;
        const auto rr = basis::build_rho_R(sc, t);
        const auto rp = basis::build_rho_P(sc, t, gamma_eff);
        const double nrm = (rr.entries - rp.entries).norm();
        if (nrm > 1e-14) resid.emplace_back(t, nrm);
    }
    if (resid.size() >= 8) {
        const auto fit = friedrichs::fit_decay_rate(resid, resid.front().first,
                                                    resid.back().first);
        put_number(out.summary, "residual_rate", fit.gamma * hbar);
    } else {
        out.summary["residual_rate"] = nullptr;
    }
    out.files.emplace_back("convergence.csv", std::move(csv));
    return out;
}

Curves run_khalfin(const json& root, const std::vector<double>& grid,
                   bool quiet) {
    const json& k = root["khalfin"];
    const int model = k.value("model", 0);
    const double hbar = k.value("hbar", 1.0);
    const Complex z0 = parse_complex(k["z0"]);

    khalfin::EvolutionProfile profile;
    std::vector<std::size_t> default_slow;
    if (model == 1) {
        khalfin::KhalfinTail tail;
        tail.amplitude = k["tail"].value("amplitude", 0.0);
        tail.onset = k["tail"].value("onset", 1.0);
        tail.exponent = k["tail"].value("exponent", 2.0);
        std::array<double, 4> w{};
        for (std::size_t i = 0; i < 4; ++i) w[i] = k["weights"][i].get<double>();
        profile = khalfin::model1_profile(z0, tail, w, hbar);
        // Tail-only slow side: every pole term counts as fast.
    } else {
        const Complex z1 = parse_complex(k["z1"]);
        std::array<double, 5> w{};
        for (std::size_t i = 0; i < 5; ++i) w[i] = k["weights"][i].get<double>();
        profile = khalfin::model2_profile(z0, z1, w, hbar);
        default_slow = {0};  // sorted catalogue: slowest pole first
        if (-z1.imag() == -z0.imag() && !quiet) {
            std::fputs("warning: degenerate poles gamma0 == gamma1\n", stderr);
        }
    }

    std::string csv = "t,F\n";
    for (double t : grid) csv += csv_row({t, profile.evaluate(t)});

    Curves out;
    out.summary["kind"] = "khalfin";
    out.summary["model"] = model;
    const auto& tc = profile.characteristic_times;
    for (std::size_t i = 0; i < tc.size(); ++i) {
        put_number(out.summary, ("tc_" + std::to_string(i + 1)).c_str(), tc[i]);
    }
    const double g0 = -z0.imag();
    if (model == 1) {
        out.summary["t_R"] = nullptr;  // relaxation carried by the tail
        put_number(out.summary, "t_D", hbar / g0);
    } else {
        const double g1 = -parse_complex(k["z1"]).imag();
        put_number(out.summary, "t_R", hbar / g0);
        put_number(out.summary, "t_D", hbar / g1);
    }

    khalfin::CrossoverSearch search;
    search.eta = k.value("eta", 0.01);
    search.horizon = k.value("horizon", 0.0);
    std::vector<std::size_t> slow = default_slow;
    if (k.contains("slow_indices")) {
        slow.clear();
        for (const auto& idx : k["slow_indices"]) {
            slow.push_back(idx.get<std::size_t>());
        }
    }
    put_number(out.summary, "crossover_time",
               khalfin::crossover_time(profile, slow, search));
    out.files.emplace_back("profile.csv", std::move(csv));
    return out;
}

Curves run_bipart(const json& root, const std::vector<double>& grid) {
    const json& b = root["bipart"];
    bipart::BiPartSpec spec;
    spec.hbar = b.value("hbar", 1.0);
    auto parse_part = [](const json& p) {
        bipart::PartSpec part;
        part.level = p["level"].get<double>();
        part.form_factor = parse_form_factor(p["form_factor"]);
        part.n_modes = p["n_modes"].get<std::size_t>();
        return part;
    };
    spec.part1 = parse_part(b["part1"]);
    spec.part2 = parse_part(b["part2"]);
    const auto model = bipart::build_bipart(spec);

    const auto p1 = model.part_expectation(1, grid);
    const auto p2 = model.part_expectation(2, grid);
    std::string csv = "t,p1,p2\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        csv += csv_row({grid[i], p1[i], p2[i]});
    }

    Curves out;
    out.summary["kind"] = "bipart";
    put_number(out.summary, "commutator_rel", model.commutator_norm_rel());
    const auto pole1 = model.pole(1);
    const auto pole2 = model.pole(2);
    put_number(out.summary, "gamma0_1", pole1.gamma0);
    put_number(out.summary, "gamma0_2", pole2.gamma0);
    const double tr1 = spec.hbar / pole1.gamma0;
    const double tr2 = spec.hbar / pole2.gamma0;
    put_number(out.summary, "t_R1", tr1);
    put_number(out.summary, "t_R2", tr2);
    const auto window = bipart::classicality_window(tr1, tr2);
    if (window) {
        put_number(out.summary, "window_lo", window->first);
        put_number(out.summary, "window_hi", window->second);
    } else {
        out.summary["window_lo"] = nullptr;
        out.summary["window_hi"] = nullptr;
    }

    auto fit_part = [&](int part, const friedrichs::PoleResult& pole,
                        const std::vector<double>& probs, const char* key) {
        std::vector<std::pair<double, double>> mags;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            mags.emplace_back(grid[i], std::sqrt(probs[i]));
        }
        const std::string wk = std::string("fit_window") + (part == 1 ? "1" : "2");
        double lo = 0.5 * spec.hbar / pole.gamma0;
        double hi = 2.0 * spec.hbar / pole.gamma0;
        if (b.contains(wk)) {
            lo = b[wk][0].get<double>();
            hi = b[wk][1].get<double>();
        }
        const auto fit = friedrichs::fit_decay_rate(mags, lo, hi);
        put_number(out.summary, key, fit.gamma);
    };
    fit_part(1, pole1, p1, "fitted_1");
    fit_part(2, pole2, p2, "fitted_2");

    put_number(out.summary, "cross_independence",
               model.cross_independence_check(b.value("perturb", 2.0), grid));
    out.files.emplace_back("expectations.csv", std::move(csv));
    return out;
}

}  // namespace

ScenarioConfig load_config(const std::string& path) {
    const std::string text = read_file(path);
    const auto diags = validate_text(text);
    if (!diags.empty()) {
        std::string msg = "invalid scenario config " + path + ":";
        for (const auto& d : diags) msg += "\n  " + d;
        throw config_error(msg);
    }
    const json root = json::parse(text);
    ScenarioConfig cfg;
    kind_from_string(root["kind"].get<std::string>(), cfg.kind);
    cfg.grid = parse_grid(root);
    cfg.out_dir = root.value("out_dir", "");
    cfg.source_path = path;
    cfg.body = text;
    return cfg;
}

std::vector<std::string> validate_config(const std::string& path) {
    return validate_text(read_file(path));
}

RunResult run_scenario(const ScenarioConfig& cfg,
                       const std::string& out_override, bool quiet) {
    const json root = json::parse(cfg.body);
    const auto grid = cfg.grid.points();

    Curves curves;
    switch (cfg.kind) {
        case ScenarioKind::modes: curves = run_modes(root, grid); break;
        case ScenarioKind::friedrichs: curves = run_friedrichs(root, grid); break;
        case ScenarioKind::omnes: curves = run_omnes(root, grid); break;
        case ScenarioKind::basis: curves = run_basis(root, grid); break;
        case ScenarioKind::khalfin: curves = run_khalfin(root, grid, quiet); break;
        case ScenarioKind::bipart: curves = run_bipart(root, grid); break;
    }

    std::string dir = out_override;
    if (dir.empty()) dir = cfg.out_dir;
    if (dir.empty()) {
        if (const char* env = std::getenv("DECOLAB_OUT")) dir = env;
    }
    if (dir.empty()) dir = ".";

    RunResult result;
    result.out_dir = std::filesystem::path(dir);
    OutputStage stage(result.out_dir);
    for (const auto& [name, content] : curves.files) {
        stage.add(name, content);
    }
    result.summary_json = curves.summary.dump(2) + "\n";
    stage.add("summary.json", result.summary_json);
    result.files = stage.commit();
    if (!quiet) {
        std::fprintf(stdout, "wrote %zu files to %s\n", result.files.size(),
                     result.out_dir.string().c_str());
    }
    return result;
}

}  // namespace decolab::cli
