#include "jass/detectors.hpp"

#include <stdexcept>

namespace jass {

namespace {

double safe_ratio(double num, double den) noexcept {
    return den > 0.0 ? num / den : 0.0; // 0/0 convention
}

// M = ||s||^2 (YT)(YT)^H assembled without forming T: YT = Y - c s^T / ||s||^2.
ComplexMatrix sequence_nulled_outer(const ComplexMatrix& y, const SyncSequence& seq,
                                    const ComplexVector& c) {
    const double inv_energy = seq.energy > 0.0 ? 1.0 / seq.energy : 0.0;
    ComplexMatrix yt = y;
    for (std::size_t r = 0; r < y.rows(); ++r) {
        const cplx cr = c[r] * inv_energy;
        cplx* row = yt.row(r);
        for (std::size_t k = 0; k < y.cols(); ++k) row[k] -= cr * seq.values[k];
    }
    ComplexMatrix m = self_outer(yt);
    for (auto& v : m.data()) v *= seq.energy;
    return m;
}

double projected_ratio(const ComplexMatrix& a, const ComplexMatrix& a_pinv,
                       const ComplexMatrix& y, const SyncSequence& seq) {
    // Correlating the projected window (rather than projecting the
    // correlation) keeps numerator and denominator on one rounding path, so
    // the energy bound holds for the computed values as well.
    const ComplexMatrix residual = residual_project(a, a_pinv, y);
    const double den = frob_norm_sq(residual);
    // The 0/0 convention, extended to numerical annihilation: when the fitted
    // projection cancels the whole window down to round-off (possibly
    // amplified through an ill-conditioned pseudoinverse), the residual is
    // noise and its correlation is meaningless.
    if (den <= detector_tol::annihilation_floor * frob_norm_sq(y)) return 0.0;
    const double num = norm_sq(matvec_conj(residual, seq.values));
    return safe_ratio(num, den);
}

} // namespace

std::uint64_t window_stream_key(std::uint64_t trace_seed, std::size_t window_index) noexcept {
    constexpr std::uint64_t kWindowTag = 0x77696E646F775F6CULL; // "window_l"
    return derive_key(trace_seed, kWindowTag, window_index);
}

const char* to_string(DetectorKind kind) noexcept {
    switch (kind) {
        case DetectorKind::jass: return "jass";
        case DetectorKind::jass_evd: return "jass_evd";
        case DetectorKind::bajass: return "bajass";
        case DetectorKind::unmitigated: return "unmitigated";
        case DetectorKind::unnormalized: return "unnormalized";
    }
    return "unknown";
}

std::optional<DetectorKind> detector_kind_from_string(std::string_view name) noexcept {
    for (DetectorKind k : {DetectorKind::jass, DetectorKind::jass_evd, DetectorKind::bajass,
                           DetectorKind::unmitigated, DetectorKind::unnormalized}) {
        if (name == to_string(k)) return k;
    }
    return std::nullopt;
}

double statistic_unmitigated(const ComplexMatrix& y, const SyncSequence& seq) {
    const ComplexVector c = matvec_conj(y, seq.values);
    return safe_ratio(norm_sq(c), frob_norm_sq(y));
}

double statistic_unnormalized(const ComplexMatrix& y, const SyncSequence& seq) {
    return norm_sq(matvec_conj(y, seq.values));
}

double statistic_jass(const ComplexMatrix& y, const SyncSequence& seq, std::size_t i_hat,
                      std::size_t t_max, RandomStream& rng, bool adjoint_projection) {
    const ComplexVector c = matvec_conj(y, seq.values);
    const ComplexMatrix m = sequence_nulled_outer(y, seq, c);
    const ComplexMatrix a = principal_subspace(m, i_hat, t_max, rng);
    const ComplexMatrix a_pinv = adjoint_projection ? adjoint(a) : pseudoinverse_tall(a);
    return projected_ratio(a, a_pinv, y, seq);
}

double statistic_jass_evd(const ComplexMatrix& y, const SyncSequence& seq, std::size_t i_hat) {
    if (i_hat >= y.rows())
        throw std::invalid_argument("statistic_jass_evd: i_hat must be < receive dimension");
    const ComplexVector c = matvec_conj(y, seq.values);
    const EigenDecomposition ed = exact_hermitian_evd(sequence_nulled_outer(y, seq, c));
    ComplexMatrix a(y.rows(), i_hat);
    for (std::size_t r = 0; r < y.rows(); ++r)
        for (std::size_t col = 0; col < i_hat; ++col) a(r, col) = ed.eigenvectors(r, col);
    return projected_ratio(a, adjoint(a), y, seq);
}

double statistic_bajass(const ComplexMatrix& y, const SyncSequence& seq, std::size_t i_hat,
                        std::size_t t_max, RandomStream& rng, bool adjoint_projection) {
    const ComplexMatrix a = principal_subspace(self_outer(y), i_hat, t_max, rng);
    const ComplexMatrix a_pinv = adjoint_projection ? adjoint(a) : pseudoinverse_tall(a);
    return projected_ratio(a, a_pinv, y, seq);
}

std::vector<double> metric_trace(const ReceiveStream& stream, const SyncSequence& seq,
                                 DetectorKind kind, const DetectorParams& params,
                                 std::uint64_t trace_seed) {
    const std::size_t b = stream.samples.rows();
    const std::size_t horizon = stream.samples.cols();
    const std::size_t k_len = seq.length();
    if (horizon < k_len)
        throw std::invalid_argument("metric_trace: stream shorter than the sequence");

    const std::size_t num_windows = horizon - k_len + 1;
    std::vector<double> trace(num_windows);
    // Each window statistic is recomputed in full (O(B^2 K) per index); an
    // incremental rank-one update of Y Y^H would cut the constant and is left
    // as an optimization.
    ComplexMatrix window(b, k_len);

    for (std::size_t l = 0; l < num_windows; ++l) {
        for (std::size_t r = 0; r < b; ++r) {
            const cplx* src = stream.samples.row(r) + l;
            cplx* dst = window.row(r);
            for (std::size_t k = 0; k < k_len; ++k) dst[k] = src[k];
        }

        switch (kind) {
            case DetectorKind::jass: {
                RandomStream rng(window_stream_key(trace_seed, l));
                trace[l] = statistic_jass(window, seq, params.i_hat, params.t_max, rng,
                                          params.adjoint_projection);
                break;
            }
            case DetectorKind::jass_evd:
                trace[l] = statistic_jass_evd(window, seq, params.i_hat);
                break;
            case DetectorKind::bajass: {
                RandomStream rng(window_stream_key(trace_seed, l));
                trace[l] = statistic_bajass(window, seq, params.i_hat, params.t_max, rng,
                                            params.adjoint_projection);
                break;
            }
            case DetectorKind::unmitigated:
                trace[l] = statistic_unmitigated(window, seq);
                break;
            case DetectorKind::unnormalized:
                trace[l] = statistic_unnormalized(window, seq);
                break;
        }
    }
    return trace;
}

DetectionOutcome detect(const std::vector<double>& trace, double tau) {
    if (trace.empty()) throw std::invalid_argument("detect: empty trace");
    const std::size_t arrival = trace.size() - 1;
    DetectionOutcome out;
    for (std::size_t l = 0; l < trace.size(); ++l) {
        if (trace[l] >= tau) {
            out.detected_at = l;
            out.classification = (l == arrival) ? DetectionOutcome::Classification::success
                                                : DetectionOutcome::Classification::false_positive;
            return out;
        }
    }
    out.classification = DetectionOutcome::Classification::false_negative;
    return out;
}

} // namespace jass
