// Command-line front end: Monte-Carlo ROC sweeps, the arrival-mismatch
// histogram, and parameter ablations, all writing CSV plus a JSON sidecar.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jass/harness.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::string detectors;
    std::string jammer;
    std::string channel_file;
    std::optional<std::size_t> trials, b, i, i_hat, k, t_max, fixed_l;
    std::optional<std::uint64_t> seed;
    std::optional<double> snr_db, rho_db, arrival_p;
    bool raw_channels = false;
    bool adjoint_projection = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON experiment config to start from");
    cmd->add_option("--out", flags.out_dir, "Output directory");
    cmd->add_option("--trials", flags.trials, "Monte-Carlo trial count");
    cmd->add_option("--seed", flags.seed, "Master seed");
    cmd->add_option("--detectors", flags.detectors,
                    "Comma-separated detectors (jass,jass_evd,bajass,unmitigated,unnormalized)");
    cmd->add_option("--jammer", flags.jammer,
                    "Jammer kind (none,barrage,reactive,spoofing,delayed_spoofing,erratic,"
                    "antenna_switching)");
    cmd->add_option("--snr-db", flags.snr_db, "Average receive SNR in dB");
    cmd->add_option("--rho-db", flags.rho_db, "Jammer power in dB");
    cmd->add_option("--b", flags.b, "Receive antennas");
    cmd->add_option("--i", flags.i, "Jammer antennas");
    cmd->add_option("--i-hat", flags.i_hat, "Assumed jammer antennas");
    cmd->add_option("--k", flags.k, "Sequence length");
    cmd->add_option("--t-max", flags.t_max, "Power iterations");
    cmd->add_option("--fixed-l", flags.fixed_l, "Pin the arrival index");
    cmd->add_option("--arrival-p", flags.arrival_p, "Geometric arrival parameter");
    cmd->add_option("--channel-file", flags.channel_file,
                    "Import channels from a JSON-lines file instead of drawing them");
    cmd->add_flag("--raw-channels", flags.raw_channels,
                  "Skip normalization of file-imported channels");
    cmd->add_flag("--adjoint-projection", flags.adjoint_projection,
                  "Project with A^H instead of pinv(A) (ablation)");
}

std::vector<jass::DetectorKind> parse_detectors(const std::string& list) {
    std::vector<jass::DetectorKind> out;
    std::stringstream ss(list);
    std::string name;
    while (std::getline(ss, name, ',')) {
        if (name.empty()) continue;
        const auto kind = jass::detector_kind_from_string(name);
        if (!kind) throw CLI::ValidationError("--detectors", "unknown detector: " + name);
        out.push_back(*kind);
    }
    if (out.empty()) throw CLI::ValidationError("--detectors", "no detectors given");
    return out;
}

jass::ExperimentConfig build_config(const CommonFlags& flags) {
    jass::ExperimentConfig config;
    if (!flags.config_path.empty()) {
        std::ifstream in(flags.config_path);
        if (!in) throw CLI::ValidationError("--config", "cannot open " + flags.config_path);
        std::ostringstream buf;
        buf << in.rdbuf();
        config = jass::experiment_config_from_json(buf.str());
    }

    bool k_changed = false;
    if (flags.k) {
        config.scenario.k = *flags.k;
        k_changed = true;
    }
    if (flags.b) config.scenario.b = *flags.b;
    if (flags.i) config.scenario.i = *flags.i;
    if (flags.i_hat) config.scenario.i_hat = *flags.i_hat;
    if (flags.t_max) config.scenario.t_max = *flags.t_max;
    if (flags.snr_db) config.scenario.snr_db = *flags.snr_db;
    if (flags.rho_db) config.scenario.rho_db = *flags.rho_db;
    if (flags.seed) config.scenario.master_seed = *flags.seed;
    if (!flags.jammer.empty()) {
        const auto kind = jass::jammer_kind_from_string(flags.jammer);
        if (!kind) throw CLI::ValidationError("--jammer", "unknown jammer kind: " + flags.jammer);
        config.scenario.jammer_kind = *kind;
    }
    if (k_changed && !flags.arrival_p) {
        const double k = static_cast<double>(config.scenario.k);
        config.scenario.arrival_p = 1.0 / (k * k);
    }
    if (flags.arrival_p) config.scenario.arrival_p = *flags.arrival_p;
    if (!flags.channel_file.empty()) config.scenario.channel_source = flags.channel_file;
    if (flags.raw_channels) config.scenario.normalize_channels = false;
    if (flags.adjoint_projection) config.scenario.adjoint_projection = true;

    if (flags.trials) config.num_trials = *flags.trials;
    if (!flags.out_dir.empty()) config.output_dir = flags.out_dir;
    if (flags.fixed_l) config.fixed_arrival = *flags.fixed_l;
    if (!flags.detectors.empty()) config.detectors = parse_detectors(flags.detectors);
    return config;
}

void print_roc_summary(const jass::RocResult& result) {
    for (std::size_t d = 0; d < result.detectors.size(); ++d) {
        const jass::RocPoint* best = nullptr;
        for (const auto& pt : result.points[d])
            if (!best || pt.ter < best->ter) best = &pt;
        std::printf("  %-13s best TER %.4f at alpha %.3f\n",
                    jass::to_string(result.detectors[d]), best->ter, best->alpha);
    }
    std::printf("  wrote %s\n", result.csv_path.c_str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Jammer-resilient uplink time synchronization simulator"};
    app.require_subcommand(1);

    CommonFlags roc_flags, mismatch_flags, ablation_flags;
    double alpha = 0.25;
    std::string vary;
    std::vector<double> values;

    CLI::App* roc = app.add_subcommand("roc", "Threshold-sweep ROC experiment");
    add_common_flags(roc, roc_flags);

    CLI::App* mismatch =
        app.add_subcommand("mismatch", "Arrival-mismatch histogram at a fixed arrival index");
    add_common_flags(mismatch, mismatch_flags);
    mismatch->add_option("--alpha", alpha, "Detection threshold as a fraction of ||s||^2")
        ->check(CLI::Range(0.0, 1.0));

    CLI::App* ablation = app.add_subcommand("ablation", "Sweep one scenario parameter");
    add_common_flags(ablation, ablation_flags);
    ablation->add_option("--vary", vary, "Parameter: k, b, snr_db, rho_db, t_max, i_hat, i_joint")
        ->required();
    ablation->add_option("--values", values, "Values for the swept parameter")
        ->required()
        ->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (roc->parsed()) {
            const auto result = jass::run_roc_experiment(build_config(roc_flags));
            print_roc_summary(result);
        } else if (mismatch->parsed()) {
            jass::ExperimentConfig config = build_config(mismatch_flags);
            if (!config.fixed_arrival) config.fixed_arrival = 4 * config.scenario.k;
            if (config.detectors.size() != 1) config.detectors = {jass::DetectorKind::jass};
            const auto result = jass::run_mismatch_experiment(config, alpha);
            std::printf("  %zu of %zu trials produced a detection (alpha %.3f)\n",
                        result.num_included, result.num_trials, result.alpha);
            std::printf("  wrote %s\n", result.csv_path.c_str());
        } else if (ablation->parsed()) {
            const auto results = jass::run_ablation(build_config(ablation_flags), vary, values);
            for (std::size_t v = 0; v < results.size(); ++v) {
                std::printf("%s = %g\n", vary.c_str(), values[v]);
                print_roc_summary(results[v]);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
