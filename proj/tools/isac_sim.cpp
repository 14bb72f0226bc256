// SPDX-License-Identifier: Apache-2.0

#include "isac/kernels.hpp"
#include "isac/observation_io.hpp"
#include "isac/sim/config.hpp"
#include "isac/sim/results.hpp"
#include "isac/sim/scenario.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct CommonFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::string out;
    std::string format;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", f.seed, "Master seed");
    cmd->add_option("--trials", f.trials, "Monte-Carlo trials per parameter point");
    cmd->add_option("--out", f.out, "Output path (stdout if omitted)");
    cmd->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--threads", f.threads, "Worker threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
}

isac::sim::ScenarioConfig resolve(const CommonFlags& f, isac::sim::ScenarioKind kind) {
    isac::sim::ScenarioConfig cfg;
    cfg.kind = kind;
    if (!f.config.empty()) cfg = isac::sim::load_config(f.config, cfg);
    cfg.kind = kind;
    if (f.seed) cfg.seed = *f.seed;
    if (f.trials) cfg.trials = *f.trials;
    if (!f.out.empty()) cfg.output = f.out;
    if (!f.format.empty()) cfg.format = isac::sim::parse_output_format(f.format);
    return cfg;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

int run_scenario_command(const CommonFlags& f, isac::sim::ScenarioKind kind) {
    const auto cfg = resolve(f, kind);
    isac::kernels::set_threads(f.threads);
    const auto start = std::chrono::steady_clock::now();
    const auto results = isac::sim::run_scenario(cfg);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cfg.output.empty()) {
        isac::sim::write_results(std::cout, results, cfg.format);
    } else {
        isac::sim::emit_results(results, cfg.format, cfg.output);
    }
    std::cerr << isac::sim::to_string(kind) << ": " << results.size() << " rows in " << seconds << " s\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ISAC simulation runner"};
    app.require_subcommand(1);

    using isac::sim::ScenarioKind;
    struct Entry {
        ScenarioKind kind;
        const char* help;
        CommonFlags flags;
        CLI::App* cmd = nullptr;
    };
    Entry entries[] = {
        {ScenarioKind::CapacitySweep, "Communication capacity versus transmit power", {}},
        {ScenarioKind::SensingSweep, "Sensing capacity versus transmit power", {}},
        {ScenarioKind::IsacTradeoff, "Communication/sensing trade-off versus rho", {}},
        {ScenarioKind::MmWaveEstimation, "Channel parameter estimation accuracy versus SNR", {}},
        {ScenarioKind::BeamScan, "Scanning beam schedule checks", {}},
    };
    for (auto& e : entries) {
        e.cmd = app.add_subcommand(isac::sim::to_string(e.kind), e.help);
        add_common(e.cmd, e.flags);
    }

    CommonFlags observe_flags;
    auto* observe = app.add_subcommand("observe", "Write a simulated observation file");
    add_common(observe, observe_flags);

    CommonFlags estimate_flags;
    std::string input;
    auto* estimate = app.add_subcommand("estimate", "Estimate path parameters from an observation file");
    add_common(estimate, estimate_flags);
    estimate->add_option("--input", input, "Observation file")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        for (auto& e : entries) {
            if (e.cmd->parsed()) return run_scenario_command(e.flags, e.kind);
        }
        if (observe->parsed()) {
            const auto cfg = resolve(observe_flags, ScenarioKind::MmWaveEstimation);
            if (cfg.output.empty()) throw std::invalid_argument("observe needs --out (binary output)");
            const auto run = isac::sim::simulate_from_config(cfg);
            isac::save_observations(cfg.output, run.observations);
            std::cerr << "observe: wrote " << run.observations.frames.size() << " frames with " << run.truth.size()
                      << " paths to " << cfg.output << '\n';
            return 0;
        }
        if (estimate->parsed()) {
            const auto cfg = resolve(estimate_flags, ScenarioKind::MmWaveEstimation);
            isac::kernels::set_threads(estimate_flags.threads);
            const auto obs = isac::load_observations(input);
            const auto report = isac::sim::estimate_from_config(obs, cfg);
            write_text(cfg.output, isac::sim::report_to_json(report) + "\n");
            return 0;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
    return 1;
}
