#include "jass/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace jass {

namespace {

namespace seed_tag {
constexpr std::uint64_t secret_hi = 0x7365637265745F68ULL; // "secret_h"
constexpr std::uint64_t secret_lo = 0x7365637265745F6CULL; // "secret_l"
constexpr std::uint64_t arrival = 0x6172726976616C5FULL;   // "arrival_"
constexpr std::uint64_t channel = 0x6368616E6E656C5FULL;   // "channel_"
constexpr std::uint64_t noise = 0x6E6F6973655F5F5FULL;     // "noise___"
constexpr std::uint64_t jammer = 0x6A616D6D65725F5FULL;    // "jammer__"
constexpr std::uint64_t detector = 0x6465746563746F72ULL;  // "detector"
} // namespace seed_tag

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

std::string format_float(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& work) {
    const std::size_t workers = std::min(worker_count(), n == 0 ? std::size_t{1} : n);
    if (workers <= 1) {
        for (std::size_t t = 0; t < n; ++t) work(t);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (;;) {
            const std::size_t t = next.fetch_add(1);
            if (t >= n) return;
            try {
                work(t);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + path.string());
    return out;
}

nlohmann::json scenario_to_json(const ScenarioConfig& s) {
    return {
        {"b", s.b},
        {"i", s.i},
        {"i_hat", s.i_hat},
        {"k", s.k},
        {"t_max", s.t_max},
        {"snr_db", s.snr_db},
        {"rho_db", s.rho_db},
        {"jammer_kind", to_string(s.jammer_kind)},
        {"arrival_p", s.arrival_p},
        {"channel_source", s.channel_source},
        {"normalize_channels", s.normalize_channels},
        {"adjoint_projection", s.adjoint_projection},
        {"master_seed", s.master_seed},
    };
}

ScenarioConfig scenario_from_json(const nlohmann::json& j) {
    ScenarioConfig s;
    for (const auto& [key, value] : j.items()) {
        if (key == "b") s.b = value.get<std::size_t>();
        else if (key == "i") s.i = value.get<std::size_t>();
        else if (key == "i_hat") s.i_hat = value.get<std::size_t>();
        else if (key == "k") s.k = value.get<std::size_t>();
        else if (key == "t_max") s.t_max = value.get<std::size_t>();
        else if (key == "snr_db") s.snr_db = value.get<double>();
        else if (key == "rho_db") s.rho_db = value.get<double>();
        else if (key == "jammer_kind") {
            const auto kind = jammer_kind_from_string(value.get<std::string>());
            if (!kind) throw std::runtime_error("unknown jammer_kind: " + value.get<std::string>());
            s.jammer_kind = *kind;
        } else if (key == "arrival_p") s.arrival_p = value.get<double>();
        else if (key == "channel_source") s.channel_source = value.get<std::string>();
        else if (key == "normalize_channels") s.normalize_channels = value.get<bool>();
        else if (key == "adjoint_projection") s.adjoint_projection = value.get<bool>();
        else if (key == "master_seed") s.master_seed = value.get<std::uint64_t>();
        else throw std::runtime_error("unknown scenario field: " + key);
    }
    return s;
}

void write_meta(const std::filesystem::path& path, const ExperimentConfig& config,
                const nlohmann::json& extra) {
    nlohmann::json meta;
    meta["config"] = nlohmann::json::parse(experiment_config_to_json(config));
    for (const auto& [key, value] : extra.items()) meta[key] = value;
    auto out = open_output(path);
    out << meta.dump(2) << '\n';
}

std::vector<ChannelRealization> maybe_load_channels(const ScenarioConfig& scenario) {
    if (!scenario.uses_channel_file()) return {};
    return load_channel_file(scenario.channel_source, scenario.normalize_channels);
}

} // namespace

void ExperimentConfig::validate() const {
    scenario.validate();
    require(num_trials >= 1, "experiment: num_trials must be >= 1");
    require(!detectors.empty(), "experiment: at least one detector required");
    double prev = -1.0;
    for (double a : alpha_grid) {
        require(a >= 0.0 && a <= 1.0, "experiment: alpha values must lie in [0, 1]");
        require(a > prev, "experiment: alpha_grid must be strictly ascending");
        prev = a;
    }
}

std::vector<double> default_alpha_grid() {
    std::vector<double> grid(41);
    for (std::size_t n = 0; n < grid.size(); ++n) grid[n] = static_cast<double>(n) / 40.0;
    return grid;
}

std::size_t worker_count() {
    if (const char* env = std::getenv("JASS_THREADS")) {
        char* end = nullptr;
        const unsigned long n = std::strtoul(env, &end, 10);
        if (end != env && n >= 1) return static_cast<std::size_t>(n);
    }
    const std::size_t n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

TrialRecord run_trial(const ScenarioConfig& scenario, const std::vector<DetectorKind>& detectors,
                      std::size_t trial_index, std::optional<std::size_t> fixed_arrival,
                      const std::vector<ChannelRealization>* channels) {
    scenario.validate();
    const std::uint64_t master = scenario.master_seed;

    Secret secret{derive_key(master, seed_tag::secret_hi, trial_index),
                  derive_key(master, seed_tag::secret_lo, trial_index)};
    if (secret.is_zero()) secret.lo = 1;
    const SyncSequence seq = derive_sync_sequence(secret, scenario.k);

    std::size_t arrival;
    if (fixed_arrival) {
        arrival = *fixed_arrival;
    } else {
        RandomStream arrival_rng(derive_key(master, seed_tag::arrival, trial_index));
        arrival = sample_arrival(scenario.arrival_p, arrival_rng);
    }

    ChannelRealization chan;
    if (channels) {
        if (trial_index >= channels->size())
            throw std::runtime_error("channel file exhausted: trial " +
                                     std::to_string(trial_index) + " of only " +
                                     std::to_string(channels->size()) + " records");
        chan = (*channels)[trial_index];
        require(chan.h.size() == scenario.b, "channel file dimensions disagree with scenario b");
        require(chan.J.cols() < scenario.b, "channel file jammer antennas must be < b");
    } else {
        RandomStream chan_rng(derive_key(master, seed_tag::channel, trial_index));
        chan = draw_rayleigh_channel(scenario.b, scenario.i, chan_rng);
    }

    JammerSpec jspec;
    jspec.num_antennas = chan.J.cols();
    jspec.kind = jspec.num_antennas == 0 ? JammerKind::none : scenario.jammer_kind;
    jspec.rho = scenario.jammer_power();

    RandomStream noise_rng(derive_key(master, seed_tag::noise, trial_index));
    RandomStream jammer_rng(derive_key(master, seed_tag::jammer, trial_index));
    const ReceiveStream stream = synthesize_receive_stream(chan, seq, arrival, jspec,
                                                           scenario.noise_power(), noise_rng,
                                                           jammer_rng);

    DetectorParams params;
    params.i_hat = scenario.i_hat;
    params.t_max = scenario.t_max;
    params.adjoint_projection = scenario.adjoint_projection;

    TrialRecord record;
    record.trial_index = trial_index;
    record.arrival = arrival;
    record.seq_energy = seq.energy;
    record.kinds = detectors;
    record.traces.reserve(detectors.size());
    const std::uint64_t trial_det_key = derive_key(master, seed_tag::detector, trial_index);
    for (DetectorKind kind : detectors) {
        const std::uint64_t trace_seed =
            derive_key(trial_det_key, 0x6B696E645F5F5F5FULL, static_cast<std::uint64_t>(kind));
        record.traces.push_back(metric_trace(stream, seq, kind, params, trace_seed));
    }
    return record;
}

std::vector<TrialRecord> run_trials(const ExperimentConfig& config) {
    config.validate();
    const std::vector<ChannelRealization> channels = maybe_load_channels(config.scenario);
    const std::vector<ChannelRealization>* chan_ptr = channels.empty() ? nullptr : &channels;

    std::vector<TrialRecord> records(config.num_trials);
    parallel_for(config.num_trials, [&](std::size_t t) {
        records[t] = run_trial(config.scenario, config.detectors, t, config.fixed_arrival,
                               chan_ptr);
    });
    return records;
}

std::vector<RocPoint> sweep_thresholds(const std::vector<TrialRecord>& records, DetectorKind kind,
                                       const std::vector<double>& alpha_grid) {
    require(!records.empty(), "sweep_thresholds: no trial records");
    std::vector<RocPoint> points;
    points.reserve(alpha_grid.size());
    const double n = static_cast<double>(records.size());
    for (double alpha : alpha_grid) {
        std::size_t fp = 0, fn = 0;
        for (const TrialRecord& rec : records) {
            const std::vector<double>* trace = nullptr;
            for (std::size_t s = 0; s < rec.kinds.size(); ++s)
                if (rec.kinds[s] == kind) trace = &rec.traces[s];
            require(trace != nullptr, "sweep_thresholds: detector missing from records");
            const DetectionOutcome outcome = detect(*trace, alpha * rec.seq_energy);
            switch (outcome.classification) {
                case DetectionOutcome::Classification::false_positive: ++fp; break;
                case DetectionOutcome::Classification::false_negative: ++fn; break;
                case DetectionOutcome::Classification::success: break;
            }
        }
        RocPoint pt;
        pt.alpha = alpha;
        pt.fpr = static_cast<double>(fp) / n;
        pt.fnr = static_cast<double>(fn) / n;
        pt.ter = pt.fpr + pt.fnr;
        points.push_back(pt);
    }
    return points;
}

RocResult run_roc_experiment(const ExperimentConfig& config_in, const std::string& file_stem) {
    ExperimentConfig config = config_in;
    if (config.alpha_grid.empty()) config.alpha_grid = default_alpha_grid();
    config.validate();

    const std::vector<TrialRecord> records = run_trials(config);

    RocResult result;
    result.detectors = config.detectors;
    for (DetectorKind kind : config.detectors)
        result.points.push_back(sweep_thresholds(records, kind, config.alpha_grid));

    const std::filesystem::path dir(config.output_dir);
    const std::filesystem::path csv_path = dir / (file_stem + ".csv");
    auto csv = open_output(csv_path);
    csv << "detector,alpha,fpr,fnr,ter\n";
    for (std::size_t d = 0; d < result.detectors.size(); ++d) {
        for (const RocPoint& pt : result.points[d]) {
            csv << to_string(result.detectors[d]) << ',' << format_float(pt.alpha) << ','
                << format_float(pt.fpr) << ',' << format_float(pt.fnr) << ','
                << format_float(pt.ter) << '\n';
        }
    }
    csv.close();
    result.csv_path = csv_path.string();

    const std::filesystem::path meta_path = dir / (file_stem + "_meta.json");
    write_meta(meta_path, config, {{"csv", csv_path.string()}});
    result.meta_path = meta_path.string();
    return result;
}

MismatchResult run_mismatch_experiment(const ExperimentConfig& config_in, double alpha) {
    ExperimentConfig config = config_in;
    if (config.alpha_grid.empty()) config.alpha_grid = default_alpha_grid();
    config.validate();
    require(config.fixed_arrival.has_value(),
            "mismatch experiment requires a fixed arrival index");
    require(config.detectors.size() == 1, "mismatch experiment expects exactly one detector");
    require(alpha >= 0.0 && alpha <= 1.0, "mismatch experiment: alpha must lie in [0, 1]");

    const std::size_t arrival = *config.fixed_arrival;
    const std::vector<TrialRecord> records = run_trials(config);

    MismatchResult result;
    result.alpha = alpha;
    result.num_trials = config.num_trials;
    result.counts.assign(arrival + 1, 0);
    for (const TrialRecord& rec : records) {
        const DetectionOutcome outcome = detect(rec.traces[0], alpha * rec.seq_energy);
        if (!outcome.detected_at) continue; // false negatives carry no mismatch
        ++result.num_included;
        ++result.counts[arrival - *outcome.detected_at];
    }

    const std::filesystem::path dir(config.output_dir);
    const std::filesystem::path csv_path = dir / "mismatch.csv";
    auto csv = open_output(csv_path);
    csv << "mismatch,count,frequency\n";
    if (result.num_included > 0) {
        for (std::size_t m = 0; m < result.counts.size(); ++m) {
            const double freq =
                static_cast<double>(result.counts[m]) / static_cast<double>(result.num_included);
            csv << m << ',' << result.counts[m] << ',' << format_float(freq) << '\n';
        }
    }
    csv.close();
    result.csv_path = csv_path.string();

    const std::filesystem::path meta_path = dir / "mismatch_meta.json";
    write_meta(meta_path, config,
               {{"csv", csv_path.string()},
                {"alpha", alpha},
                {"num_included", result.num_included},
                {"empty_result", result.num_included == 0}});
    result.meta_path = meta_path.string();
    return result;
}

std::vector<RocResult> run_ablation(const ExperimentConfig& config, const std::string& parameter,
                                    const std::vector<double>& values) {
    config.validate();
    require(!values.empty(), "ablation: no values given");

    auto as_count = [](double v, const char* what) {
        const auto n = static_cast<std::size_t>(std::llround(v));
        if (std::abs(v - static_cast<double>(n)) > 1e-9)
            throw std::invalid_argument(std::string("ablation: ") + what +
                                        " requires integer values");
        return n;
    };

    std::vector<RocResult> results;
    for (double value : values) {
        ExperimentConfig swept = config;
        if (parameter == "k") {
            swept.scenario.k = as_count(value, "k");
            swept.scenario.arrival_p =
                1.0 / (static_cast<double>(swept.scenario.k) * static_cast<double>(swept.scenario.k));
        } else if (parameter == "b") {
            swept.scenario.b = as_count(value, "b");
        } else if (parameter == "snr_db") {
            swept.scenario.snr_db = value;
        } else if (parameter == "rho_db") {
            swept.scenario.rho_db = value;
        } else if (parameter == "t_max") {
            swept.scenario.t_max = as_count(value, "t_max");
        } else if (parameter == "i_hat") {
            swept.scenario.i_hat = as_count(value, "i_hat");
        } else if (parameter == "i_joint") {
            swept.scenario.i = as_count(value, "i_joint");
            swept.scenario.i_hat = swept.scenario.i;
        } else {
            throw std::invalid_argument(
                "ablation: unknown parameter \"" + parameter +
                "\" (expected one of k, b, snr_db, rho_db, t_max, i_hat, i_joint)");
        }
        results.push_back(
            run_roc_experiment(swept, "roc_" + parameter + "_" + format_float(value)));
    }
    return results;
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("config parse error: ") + e.what());
    }
    ExperimentConfig config;
    for (const auto& [key, value] : j.items()) {
        if (key == "scenario") config.scenario = scenario_from_json(value);
        else if (key == "detectors") {
            config.detectors.clear();
            for (const auto& name : value) {
                const auto kind = detector_kind_from_string(name.get<std::string>());
                if (!kind)
                    throw std::runtime_error("unknown detector: " + name.get<std::string>());
                config.detectors.push_back(*kind);
            }
        } else if (key == "alpha_grid") config.alpha_grid = value.get<std::vector<double>>();
        else if (key == "num_trials") config.num_trials = value.get<std::size_t>();
        else if (key == "output_dir") config.output_dir = value.get<std::string>();
        else if (key == "fixed_l") {
            if (!value.is_null()) config.fixed_arrival = value.get<std::size_t>();
        } else throw std::runtime_error("unknown config field: " + key);
    }
    return config;
}

std::string experiment_config_to_json(const ExperimentConfig& config) {
    nlohmann::json j;
    j["scenario"] = scenario_to_json(config.scenario);
    j["detectors"] = nlohmann::json::array();
    for (DetectorKind kind : config.detectors) j["detectors"].push_back(to_string(kind));
    j["alpha_grid"] = config.alpha_grid.empty() ? default_alpha_grid() : config.alpha_grid;
    j["num_trials"] = config.num_trials;
    j["output_dir"] = config.output_dir;
    if (config.fixed_arrival) j["fixed_l"] = *config.fixed_arrival;
    return j.dump(2);
}

} // namespace jass
