#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jass/detectors.hpp"
#include "jass/signal.hpp"

namespace jass {

struct TrialRecord {
    std::size_t trial_index = 0;
    std::size_t arrival = 0;
    double seq_energy = 0.0; // threshold is alpha * seq_energy, per trial
    std::vector<DetectorKind> kinds;
    std::vector<std::vector<double>> traces; // parallel to kinds, each of length arrival+1
};

struct RocPoint {
    double alpha = 0.0; // tau / ||s||^2
    double fpr = 0.0;
    double fnr = 0.0;
    double ter = 0.0; // fpr + fnr
};

struct ExperimentConfig {
    ScenarioConfig scenario;
    std::vector<DetectorKind> detectors = {DetectorKind::jass, DetectorKind::bajass,
                                           DetectorKind::unmitigated};
    std::vector<double> alpha_grid; // defaults to default_alpha_grid() when empty
    std::size_t num_trials = 2000;
    std::string output_dir = ".";
    std::optional<std::size_t> fixed_arrival; // pins L for the mismatch experiment

    void validate() const;
};

/// 41 points from 0 to 1 in steps of 0.025.
std::vector<double> default_alpha_grid();

/// Worker count for trial parallelism: hardware concurrency, capped by the
/// JASS_THREADS environment variable.
std::size_t worker_count();

/// Runs one fully deterministic trial: all per-component seeds are derived
/// from (master_seed, trial_index) with disjoint tags, so records do not
/// depend on execution order or worker count. In channel-file mode, trial t
/// consumes record t (throws when the file has too few records).
TrialRecord run_trial(const ScenarioConfig& scenario, const std::vector<DetectorKind>& detectors,
                      std::size_t trial_index, std::optional<std::size_t> fixed_arrival = {},
                      const std::vector<ChannelRealization>* channels = nullptr);

std::vector<TrialRecord> run_trials(const ExperimentConfig& config);

std::vector<RocPoint> sweep_thresholds(const std::vector<TrialRecord>& records, DetectorKind kind,
                                       const std::vector<double>& alpha_grid);

struct RocResult {
    std::vector<DetectorKind> detectors;
    std::vector<std::vector<RocPoint>> points; // parallel to detectors
    std::string csv_path;
    std::string meta_path;
};

/// Runs the trials, sweeps the threshold grid per detector, and writes
/// detector,alpha,fpr,fnr,ter rows plus a JSON sidecar with the full config.
RocResult run_roc_experiment(const ExperimentConfig& config, const std::string& file_stem = "roc");

struct MismatchResult {
    std::vector<std::size_t> counts; // histogram of L - detected_at over [0, L]
    std::size_t num_trials = 0;
    std::size_t num_included = 0; // trials that were not false negatives
    double alpha = 0.0;
    std::string csv_path;
    std::string meta_path;
};

/// Arrival-mismatch histogram at a single threshold with L pinned
/// (config.fixed_arrival must be set and exactly one detector configured).
/// False-negative trials are excluded; when every trial is a false negative
/// the CSV carries only the header and the sidecar marks the result empty.
MismatchResult run_mismatch_experiment(const ExperimentConfig& config, double alpha);

/// Re-runs the ROC experiment with one scenario field swept over the given
/// values; one pair of output files per value. Valid parameters: k, b,
/// snr_db, rho_db, t_max, i_hat, i_joint (sets i and i_hat together).
/// Sweeping k re-derives arrival_p = 1/k^2.
std::vector<RocResult> run_ablation(const ExperimentConfig& config, const std::string& parameter,
                                    const std::vector<double>& values);

ExperimentConfig experiment_config_from_json(const std::string& text);
std::string experiment_config_to_json(const ExperimentConfig& config);

} // namespace jass
