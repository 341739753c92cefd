// decolab — config-driven runner for the decoherence scenario library.
//
//   decolab run <config.json> [--out DIR] [--quiet]
//   decolab validate <config.json>
//   decolab version
//
// Exit codes: 0 success, 2 invalid config, 3 numerical failure, 4 I/O failure.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "decolab/common.hpp"
#include "decolab/scenario.hpp"

namespace {
constexpr const char* kVersion = "decolab 0.1.0";
}

int main(int argc, char** argv) {
    CLI::App app{"pole-catalogue decoherence scenarios"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    bool quiet = false;

    auto* run = app.add_subcommand("run", "execute a scenario config");
    run->add_option("config", config_path, "scenario JSON file")->required();
    run->add_option("--out", out_dir, "output directory (overrides config and "
                                      "DECOLAB_OUT)");
    run->add_flag("--quiet", quiet, "suppress status output");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "check a scenario config");
    validate->add_option("config", validate_path, "scenario JSON file")
        ->required();

    auto* version = app.add_subcommand("version", "print the tool version");

    CLI11_PARSE(app, argc, argv);

    try {
        if (version->parsed()) {
            std::puts(kVersion);
            return 0;
        }
        if (validate->parsed()) {
            const auto diags = decolab::cli::validate_config(validate_path);
            for (const auto& d : diags) {
                std::fprintf(stderr, "%s\n", d.c_str());
            }
            if (!diags.empty()) return 2;
            if (!quiet) std::puts("ok");
            return 0;
        }
        const auto cfg = decolab::cli::load_config(config_path);
        decolab::cli::run_scenario(cfg, out_dir, quiet);
        return 0;
    } catch (const decolab::config_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const decolab::numeric_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const decolab::io_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
