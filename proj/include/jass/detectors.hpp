#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "jass/linalg.hpp"
#include "jass/rng.hpp"
#include "jass/signal.hpp"

namespace jass {

enum class DetectorKind {
    jass,         // projection fitted by power iteration (pseudoinverse projection)
    jass_evd,     // projection fitted by exact eigendecomposition
    bajass,       // nulls the strongest spatial dimensions of the raw window
    unmitigated,  // energy-normalized correlation
    unnormalized, // raw correlation, kept to show its jammer sensitivity
};

const char* to_string(DetectorKind kind) noexcept;
std::optional<DetectorKind> detector_kind_from_string(std::string_view name) noexcept;

namespace detector_tol {
// Projected windows whose energy falls below this fraction of the raw window
// energy are treated as the 0/0 case: the projection annihilated everything,
// and what remains is round-off (up to a factor 1/sqrt(pinv cutoff) of
// amplification through an ill-conditioned pseudoinverse).
inline constexpr double annihilation_floor = 1e-18;
} // namespace detector_tol

struct DetectorParams {
    std::size_t i_hat = 4;
    std::size_t t_max = 4;
    // Uses A^H in place of pinv(A) for the fitted projection. The power
    // iteration columns are only approximately orthonormal, so this is an
    // ablation knob, not the default.
    bool adjoint_projection = false;
};

/// ||Y conj(s)||^2 / ||Y||_F^2 with 0/0 defined as 0.
double statistic_unmitigated(const ComplexMatrix& y, const SyncSequence& seq);

/// ||Y conj(s)||^2, unnormalized.
double statistic_unnormalized(const ComplexMatrix& y, const SyncSequence& seq);

/// Fits an i_hat-dimensional nulling projection to the window by taking the
/// approximate principal subspace of M = ||s||^2 (YT)(YT)^H, where
/// T = I - conj(s) s^T / ||s||^2 removes the sequence's temporal direction,
/// then scores ||(I-AA+)Y conj(s)||^2 / ||(I-AA+)Y||_F^2. The factored form
/// of M keeps it positive semidefinite in floating point, which the power
/// iteration requires.
double statistic_jass(const ComplexMatrix& y, const SyncSequence& seq, std::size_t i_hat,
                      std::size_t t_max, RandomStream& rng, bool adjoint_projection = false);

/// statistic_jass with the exact top-i_hat eigenvectors of M; their columns
/// are exactly orthonormal, so A^H serves as the pseudoinverse.
double statistic_jass_evd(const ComplexMatrix& y, const SyncSequence& seq, std::size_t i_hat);

/// Baseline: nulls the i_hat strongest spatial directions of the raw window
/// (principal subspace of Y Y^H) before correlating.
double statistic_bajass(const ComplexMatrix& y, const SyncSequence& seq, std::size_t i_hat,
                        std::size_t t_max, RandomStream& rng, bool adjoint_projection = false);

/// Stream key used for the randomized statistic at window l of a trace; part
/// of the reproducibility contract (recomputing one window in isolation must
/// reproduce the trace entry).
std::uint64_t window_stream_key(std::uint64_t trace_seed, std::size_t window_index) noexcept;

/// Per-window statistics over the sliding window [l, l+K-1] for
/// l = 0 .. horizon-K. Randomized detectors draw from a stream derived from
/// (trace_seed, l), so entries do not depend on evaluation order.
std::vector<double> metric_trace(const ReceiveStream& stream, const SyncSequence& seq,
                                 DetectorKind kind, const DetectorParams& params,
                                 std::uint64_t trace_seed);

struct DetectionOutcome {
    enum class Classification { success, false_positive, false_negative };

    std::optional<std::size_t> detected_at;
    Classification classification = Classification::false_negative;
};

/// First-crossing decision over a trace whose last entry is the true arrival
/// index: detected_at = min{l : trace[l] >= tau}.
DetectionOutcome detect(const std::vector<double>& trace, double tau);

} // namespace jass
