#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "jass/linalg.hpp"
#include "jass/rng.hpp"

namespace jass {

struct SyncSequence;

enum class JammerKind {
    none,
    barrage,
    reactive,
    spoofing,
    delayed_spoofing,
    erratic,
    antenna_switching,
};

const char* to_string(JammerKind kind) noexcept;
std::optional<JammerKind> jammer_kind_from_string(std::string_view name) noexcept;

struct JammerSpec {
    JammerKind kind = JammerKind::none;
    std::size_t num_antennas = 0;
    double rho = 0.0; // linear transmit power per antenna

    void validate() const;
};

/// Per-trial evolving adversary state. Stepping is sequential within a trial;
/// nothing is shared across trials.
struct JammerState {
    enum class Phase { active, silent };

    Phase phase = Phase::active;
    std::size_t remaining = 0;              // samples left in the current phase/period
    std::vector<std::uint8_t> antenna_mask; // antenna-switching: 1 = transmitting
    RandomStream rng;
};

/// burst_bound is the sequence length K: erratic burst/silence lengths and
/// antenna-switching period lengths are uniform on [1, K].
JammerState jammer_init(const JammerSpec& spec, std::size_t burst_bound, RandomStream rng);

/// Emits the jammer transmit vector w[k] and advances the state. The jammer
/// sees the UE signal only up to the current sample (ue_history_len = k+1);
/// spoofing kinds therefore never read sequence entries beyond k-arrival
/// (or k-arrival-1 for the delayed variant).
ComplexVector jammer_step(const JammerSpec& spec, JammerState& state, std::size_t sample,
                          std::size_t arrival, const SyncSequence& seq,
                          std::size_t ue_history_len);

/// Diagnostic replay of jammer_init/jammer_step collecting ||w[k]||^2 for
/// k in [0, horizon).
std::vector<double> jammer_energy_trace(const JammerSpec& spec, const SyncSequence& seq,
                                        std::size_t arrival, std::size_t horizon,
                                        std::uint64_t seed);

} // namespace jass
