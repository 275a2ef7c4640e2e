#include "jass/jammers.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "jass/signal.hpp"

namespace jass {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

std::size_t uniform_phase_length(RandomStream& rng, std::size_t bound) {
    return 1 + rng.next_index(bound); // uniform on [1, bound]
}

// Uniform over the nonempty subsets of the antenna set, by rejection.
std::vector<std::uint8_t> draw_antenna_subset(RandomStream& rng, std::size_t i) {
    std::vector<std::uint8_t> mask(i);
    for (;;) {
        bool any = false;
        for (auto& m : mask) {
            m = rng.next_u64() & 1u;
            any |= (m != 0);
        }
        if (any) return mask;
    }
}

void fill_random_burst(ComplexVector& w, RandomStream& rng, double amp) {
    for (auto& v : w) v = amp * rng.next_cn();
}

} // namespace

const char* to_string(JammerKind kind) noexcept {
    switch (kind) {
        case JammerKind::none: return "none";
        case JammerKind::barrage: return "barrage";
        case JammerKind::reactive: return "reactive";
        case JammerKind::spoofing: return "spoofing";
        case JammerKind::delayed_spoofing: return "delayed_spoofing";
        case JammerKind::erratic: return "erratic";
        case JammerKind::antenna_switching: return "antenna_switching";
    }
    return "unknown";
}

std::optional<JammerKind> jammer_kind_from_string(std::string_view name) noexcept {
    for (JammerKind k :
         {JammerKind::none, JammerKind::barrage, JammerKind::reactive, JammerKind::spoofing,
          JammerKind::delayed_spoofing, JammerKind::erratic, JammerKind::antenna_switching}) {
        if (name == to_string(k)) return k;
    }
    return std::nullopt;
}

void JammerSpec::validate() const {
    require(kind == JammerKind::none || num_antennas >= 1,
            "jammer: need at least one antenna unless kind is none");
    require(rho >= 0.0, "jammer: rho must be nonnegative");
}

JammerState jammer_init(const JammerSpec& spec, std::size_t burst_bound, RandomStream rng) {
    spec.validate();
    require(burst_bound >= 1, "jammer_init: burst bound must be >= 1");

    JammerState state;
    state.rng = rng;
    switch (spec.kind) {
        case JammerKind::erratic:
            state.phase = (state.rng.next_u64() & 1u) ? JammerState::Phase::active
                                                      : JammerState::Phase::silent;
            state.remaining = uniform_phase_length(state.rng, burst_bound);
            break;
        case JammerKind::antenna_switching:
            state.phase = JammerState::Phase::active;
            state.antenna_mask = draw_antenna_subset(state.rng, spec.num_antennas);
            state.remaining = uniform_phase_length(state.rng, burst_bound);
            break;
        default:
            state.phase = JammerState::Phase::active;
            state.remaining = 0; // unbounded semantics for the stateless kinds
            break;
    }
    return state;
}

ComplexVector jammer_step(const JammerSpec& spec, JammerState& state, std::size_t sample,
                          std::size_t arrival, const SyncSequence& seq,
                          std::size_t ue_history_len) {
    const std::size_t k_len = seq.length();
    ComplexVector w(spec.num_antennas, cplx{});
    const double amp = std::sqrt(spec.rho);

    switch (spec.kind) {
        case JammerKind::none:
            break;

        case JammerKind::barrage:
            fill_random_burst(w, state.rng, amp);
            break;

        case JammerKind::reactive:
            if (sample >= arrival && sample < arrival + k_len)
                fill_random_burst(w, state.rng, amp);
            break;

        case JammerKind::spoofing:
            if (sample >= arrival && sample < arrival + k_len) {
                const std::size_t idx = sample - arrival;
                assert(idx + arrival < ue_history_len); // causal bound: entries up to k-arrival
                const cplx v = amp * seq.values[idx];
                for (auto& e : w) e = v;
            }
            break;

        case JammerKind::delayed_spoofing:
            if (sample >= arrival + 1 && sample < arrival + 1 + k_len) {
                const std::size_t idx = sample - arrival - 1;
                assert(idx + arrival + 1 < ue_history_len); // entries up to k-arrival-1
                const cplx v = amp * seq.values[idx];
                for (auto& e : w) e = v;
            }
            break;

        case JammerKind::erratic:
            if (state.remaining == 0) {
                state.phase = (state.phase == JammerState::Phase::active)
                                  ? JammerState::Phase::silent
                                  : JammerState::Phase::active;
                state.remaining = uniform_phase_length(state.rng, k_len);
            }
            if (state.phase == JammerState::Phase::active)
                fill_random_burst(w, state.rng, amp);
            --state.remaining;
            break;

        case JammerKind::antenna_switching:
            if (state.remaining == 0) {
                state.antenna_mask = draw_antenna_subset(state.rng, spec.num_antennas);
                state.remaining = uniform_phase_length(state.rng, k_len);
            }
            for (std::size_t a = 0; a < w.size(); ++a)
                if (state.antenna_mask[a]) w[a] = amp * state.rng.next_cn();
            --state.remaining;
            break;
    }
    (void)ue_history_len;
    return w;
}

std::vector<double> jammer_energy_trace(const JammerSpec& spec, const SyncSequence& seq,
                                        std::size_t arrival, std::size_t horizon,
                                        std::uint64_t seed) {
    JammerState state = jammer_init(spec, seq.length(), RandomStream(seed));
    std::vector<double> trace(horizon);
    for (std::size_t k = 0; k < horizon; ++k)
        trace[k] = norm_sq(jammer_step(spec, state, k, arrival, seq, k + 1));
    return trace;
}

} // namespace jass
