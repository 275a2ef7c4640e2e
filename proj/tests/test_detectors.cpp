#include <doctest.h>

#include <cmath>

#include "jass/detectors.hpp"
#include "jass/signal.hpp"
#include "test_helpers.hpp"

using namespace jass;
using namespace jass::testing;

namespace {

ComplexMatrix rank_one(const ComplexVector& col, const ComplexVector& row_vals) {
    ComplexMatrix y(col.size(), row_vals.size());
    for (std::size_t r = 0; r < col.size(); ++r)
        for (std::size_t c = 0; c < row_vals.size(); ++c) y(r, c) = col[r] * row_vals[c];
    return y;
}

ComplexMatrix window_at(const ReceiveStream& stream, std::size_t l, std::size_t k_len) {
    ComplexMatrix y(stream.samples.rows(), k_len);
    for (std::size_t r = 0; r < y.rows(); ++r)
        for (std::size_t c = 0; c < k_len; ++c) y(r, c) = stream.samples(r, l + c);
    return y;
}

// Difference form ||s||^2 Y Y^H - c c^H, used as an oracle against the
// factored production assembly.
ComplexMatrix difference_form(const ComplexMatrix& y, const SyncSequence& seq) {
    const ComplexVector c = matvec_conj(y, seq.values);
    ComplexMatrix m = self_outer(y);
    for (auto& v : m.data()) v *= seq.energy;
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t q = 0; q < m.cols(); ++q) m(r, q) -= c[r] * std::conj(c[q]);
    return m;
}

// Replicates the production M assembly (factored PSD form).
ComplexMatrix factored_form(const ComplexMatrix& y, const SyncSequence& seq) {
    const ComplexVector c = matvec_conj(y, seq.values);
    ComplexMatrix yt = y;
    for (std::size_t r = 0; r < y.rows(); ++r)
        for (std::size_t k = 0; k < y.cols(); ++k)
            yt(r, k) -= c[r] * seq.values[k] / seq.energy;
    ComplexMatrix m = self_outer(yt);
    for (auto& v : m.data()) v *= seq.energy;
    return m;
}

double ratio_with_basis(const ComplexMatrix& a, const ComplexMatrix& y,
                        const SyncSequence& seq) {
    const ComplexVector c = matvec_conj(y, seq.values);
    const ComplexMatrix ap = adjoint(a);
    const double num = norm_sq(residual_project(a, ap, c));
    const double den = frob_norm_sq(residual_project(a, ap, y));
    return den > 0.0 ? num / den : 0.0;
}

struct NoiselessBarrage {
    ChannelRealization chan;
    SyncSequence seq;
    ReceiveStream stream;
    std::size_t arrival;
};

NoiselessBarrage make_noiseless_barrage(std::size_t b, std::size_t i, std::size_t k,
                                        std::size_t arrival, double rho, std::uint64_t seed) {
    NoiselessBarrage out;
    out.arrival = arrival;
    RandomStream chan_rng(derive_key(seed, 1));
    out.chan = draw_rayleigh_channel(b, i, chan_rng);
    out.seq = derive_sync_sequence(Secret{seed, seed + 1}, k);
    const JammerSpec spec{JammerKind::barrage, i, rho};
    RandomStream noise_rng(derive_key(seed, 2));
    RandomStream jammer_rng(derive_key(seed, 3));
    out.stream = synthesize_receive_stream(out.chan, out.seq, arrival, spec, 0.0, noise_rng,
                                           jammer_rng);
    return out;
}

} // namespace

TEST_CASE("unmitigated statistic: aligned window, zero window, orthogonal rows") {
    const SyncSequence seq = derive_sync_sequence(Secret{10, 11}, 8);
    RandomStream rng(1);
    ComplexVector h(5);
    for (auto& v : h) v = rng.next_cn();

    const ComplexMatrix aligned = rank_one(h, seq.values);
    CHECK(statistic_unmitigated(aligned, seq) ==
          doctest::Approx(seq.energy).epsilon(1e-12));

    CHECK(statistic_unmitigated(ComplexMatrix(5, 8), seq) == 0.0);

    // Rows orthogonal to conj(s): Y s* = 0 but Y != 0.
    ComplexVector orth(8);
    orth[0] = std::conj(seq.values[1]);
    orth[1] = -std::conj(seq.values[0]);
    const ComplexMatrix y = rank_one(h, orth);
    CHECK(statistic_unmitigated(y, seq) <= 1e-20 * seq.energy);
}

TEST_CASE("unnormalized statistic: algebra and homogeneity") {
    const SyncSequence seq = derive_sync_sequence(Secret{12, 13}, 6);
    RandomStream rng(2);
    ComplexVector h(4);
    for (auto& v : h) v = rng.next_cn();

    const ComplexMatrix y = rank_one(h, seq.values);
    CHECK(statistic_unnormalized(y, seq) ==
          doctest::Approx(norm_sq(h) * seq.energy * seq.energy).epsilon(1e-12));
    CHECK(statistic_unnormalized(ComplexMatrix(4, 6), seq) == 0.0);

    ComplexMatrix y2 = y;
    for (auto& v : y2.data()) v *= 2.0;
    CHECK(statistic_unnormalized(y2, seq) ==
          doctest::Approx(4.0 * statistic_unnormalized(y, seq)));
}

TEST_CASE("jass statistic: noiseless jammer-free window is forced to full energy") {
    const SyncSequence seq = derive_sync_sequence(Secret{14, 15}, 8);
    RandomStream rng(3);
    ComplexVector h(2);
    for (auto& v : h) v = rng.next_cn();
    const ComplexMatrix y = rank_one(h, seq.values);

    RandomStream det_rng(4);
    const double stat = statistic_jass(y, seq, 1, 20, det_rng);
    CHECK(stat == doctest::Approx(seq.energy).epsilon(1e-9));
}

TEST_CASE("Theorem-1 oracle injection: exact jammer basis restores full energy") {
    const auto scene = make_noiseless_barrage(8, 3, 12, 6, 100.0, 55);
    const ComplexMatrix y = window_at(scene.stream, scene.arrival, scene.seq.length());
    const ComplexMatrix basis = gram_schmidt(scene.chan.J);
    const double stat = ratio_with_basis(basis, y, scene.seq);
    CHECK(stat == doctest::Approx(scene.seq.energy).epsilon(1e-9));
}

TEST_CASE("jass_evd agrees with the injected-basis oracle at the arrival window") {
    for (std::uint64_t seed : {61u, 62u, 63u}) {
        const auto scene = make_noiseless_barrage(8, 3, 12, 9, 31.6, seed);
        const ComplexMatrix y = window_at(scene.stream, scene.arrival, scene.seq.length());
        const double stat = statistic_jass_evd(y, scene.seq, 3);
        CHECK(stat == doctest::Approx(scene.seq.energy).epsilon(1e-9));
    }
}

TEST_CASE("statistic bound: normalized statistics never exceed the sequence energy") {
    const SyncSequence seq = derive_sync_sequence(Secret{16, 17}, 8);
    const double cap = seq.energy * (1.0 + 1e-9);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        ComplexMatrix y = random_matrix(6, 8, 700 + seed);
        if (seed % 4 == 1) { // adversarial rank-one window
            RandomStream rng(800 + seed);
            ComplexVector u(6);
            for (auto& v : u) v = 1e6 * rng.next_cn();
            y = rank_one(u, seq.values);
        }
        if (seed % 4 == 2) y = ComplexMatrix(6, 8);

        RandomStream r1(900 + seed), r2(1000 + seed);
        CHECK(statistic_unmitigated(y, seq) <= cap);
        CHECK(statistic_jass(y, seq, 2, 3, r1) <= cap);
        CHECK(statistic_jass_evd(y, seq, 2) <= cap);
        CHECK(statistic_bajass(y, seq, 2, 3, r2) <= cap);
    }
}

TEST_CASE("PSD identity: factored assembly equals the difference form") {
    const SyncSequence seq = derive_sync_sequence(Secret{18, 19}, 10);
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const ComplexMatrix y = random_matrix(7, 10, 1100 + seed);
        const double err = matrix_dist(factored_form(y, seq), difference_form(y, seq));
        CHECK(err <= 1e-9 * seq.energy * frob_norm_sq(y));
    }
}

TEST_CASE("both JASS formulations produce the same statistic") {
    // Power iteration driven by the same stream key on M assembled both ways.
    const SyncSequence seq = derive_sync_sequence(Secret{20, 21}, 12);
    const auto scene = make_noiseless_barrage(8, 3, 12, 5, 10.0, 77);
    for (std::size_t l = 0; l <= scene.arrival; ++l) {
        const ComplexMatrix y = window_at(scene.stream, l, seq.length());

        const ComplexVector c = matvec_conj(y, scene.seq.values);
        auto run = [&](const ComplexMatrix& m) {
            RandomStream rng(4242);
            const ComplexMatrix a = principal_subspace(m, 3, 8, rng);
            const ComplexMatrix ap = pseudoinverse_tall(a);
            const double num = norm_sq(residual_project(a, ap, c));
            const double den = frob_norm_sq(residual_project(a, ap, y));
            return den > 0.0 ? num / den : 0.0;
        };
        const double via_factored = run(factored_form(y, scene.seq));
        const double via_difference = run(difference_form(y, scene.seq));
        CHECK(via_factored ==
              doctest::Approx(via_difference).epsilon(1e-9));
    }
}

TEST_CASE("scale invariance of the normalized statistics") {
    const SyncSequence seq = derive_sync_sequence(Secret{22, 23}, 8);
    const ComplexMatrix y = random_matrix(6, 8, 1300);
    ComplexMatrix y2 = y;
    for (auto& v : y2.data()) v *= 2.0; // dyadic scale: bitwise-stable arithmetic

    CHECK(statistic_unmitigated(y2, seq) ==
          doctest::Approx(statistic_unmitigated(y, seq)).epsilon(1e-9));
    CHECK(statistic_jass_evd(y2, seq, 2) ==
          doctest::Approx(statistic_jass_evd(y, seq, 2)).epsilon(1e-9));

    RandomStream ra(1400), rb(1400);
    CHECK(statistic_jass(y2, seq, 2, 4, ra) ==
          doctest::Approx(statistic_jass(y, seq, 2, 4, rb)).epsilon(1e-9));

    RandomStream rc(1500), rd(1500);
    CHECK(statistic_bajass(y2, seq, 2, 4, rc) ==
          doctest::Approx(statistic_bajass(y, seq, 2, 4, rd)).epsilon(1e-9));
}

TEST_CASE("power iteration converges to the exact-EVD statistic") {
    const SyncSequence seq = derive_sync_sequence(Secret{24, 25}, 8);
    for (std::uint64_t seed : {91u, 92u, 93u, 94u}) {
        // Noisy jammed window so the principal subspace is well separated.
        RandomStream chan_rng(derive_key(seed, 1));
        const ChannelRealization chan = draw_rayleigh_channel(8, 2, chan_rng);
        const JammerSpec spec{JammerKind::barrage, 2, 100.0};
        RandomStream noise_rng(derive_key(seed, 2)), jammer_rng(derive_key(seed, 3));
        const ReceiveStream stream =
            synthesize_receive_stream(chan, seq, 4, spec, 1.0, noise_rng, jammer_rng);
        const ComplexMatrix y = window_at(stream, 2, seq.length());

        RandomStream det_rng(derive_key(seed, 4));
        const double approx = statistic_jass(y, seq, 2, 50, det_rng);
        const double exact = statistic_jass_evd(y, seq, 2);
        CHECK(approx == doctest::Approx(exact).epsilon(1e-6));
    }
}

TEST_CASE("bajass nulls a strongly spoofed rank-one window") {
    const std::size_t b = 16, k = 16;
    const SyncSequence seq = derive_sync_sequence(Secret{26, 27}, k);
    RandomStream rng(1600);
    const ChannelRealization chan = draw_rayleigh_channel(b, 4, rng);

    // Combined UE+spoofer direction h + sqrt(rho) J 1, plus small noise.
    ComplexVector dir = chan.h;
    const double amp = std::sqrt(1000.0);
    for (std::size_t r = 0; r < b; ++r)
        for (std::size_t a = 0; a < 4; ++a) dir[r] += amp * chan.J(r, a);
    ComplexMatrix y = rank_one(dir, seq.values);
    for (auto& v : y.data()) v += 0.01 * rng.next_cn();

    RandomStream det_rng(1601);
    const double stat = statistic_bajass(y, seq, 4, 4, det_rng);
    CHECK(stat < 0.1 * seq.energy);
}

TEST_CASE("bajass nulls the signal direction that unmitigated detection relies on") {
    // On aligned jammer-free windows the UE direction is the strongest
    // spatial dimension, so nulling the top directions strips exactly the
    // component the correlation needs.
    const std::size_t b = 16, k = 16;
    const SyncSequence seq = derive_sync_sequence(Secret{28, 29}, k);
    for (std::size_t n = 0; n < 20; ++n) {
        RandomStream rng(1700 + n);
        ComplexVector h(b);
        for (auto& v : h) v = rng.next_cn();
        ComplexMatrix y = rank_one(h, seq.values);
        for (auto& v : y.data()) v += 0.1 * rng.next_cn();

        RandomStream det_rng(1800 + n);
        const double b_stat = statistic_bajass(y, seq, 4, 4, det_rng);
        const double u_stat = statistic_unmitigated(y, seq);
        CHECK(b_stat < u_stat);
        CHECK(u_stat > 0.5 * seq.energy);
        CHECK(b_stat < 0.2 * seq.energy);
    }
}

TEST_CASE("metric_trace: length, arrival peak, order independence") {
    const auto scene = make_noiseless_barrage(8, 2, 10, 14, 0.0, 111); // rho=0: no jammer power
    DetectorParams params;
    params.i_hat = 2;
    params.t_max = 4;

    const auto trace = metric_trace(scene.stream, scene.seq, DetectorKind::jass_evd, params, 9);
    REQUIRE(trace.size() == scene.arrival + 1);
    CHECK(trace[scene.arrival] == doctest::Approx(scene.seq.energy).epsilon(1e-6));
    for (std::size_t l = 0; l < scene.arrival; ++l)
        CHECK(trace[l] < scene.seq.energy * (1.0 - 1e-6));

    // Per-window rng derivation: recomputing one window in isolation matches
    // the trace entry bit for bit.
    const auto jass_trace = metric_trace(scene.stream, scene.seq, DetectorKind::jass, params, 9);
    for (std::size_t l : {std::size_t{0}, std::size_t{7}, scene.arrival}) {
        const ComplexMatrix y = window_at(scene.stream, l, scene.seq.length());
        RandomStream rng(window_stream_key(9, l));
        const double stat = statistic_jass(y, scene.seq, params.i_hat, params.t_max, rng);
        CHECK(stat == jass_trace[l]);
    }
}

TEST_CASE("detect: first-crossing semantics") {
    const std::vector<double> trace{0.1, 0.9, 0.2};

    const DetectionOutcome hit = detect(trace, 0.375);
    REQUIRE(hit.detected_at.has_value());
    CHECK(*hit.detected_at == 1);
    CHECK(hit.classification == DetectionOutcome::Classification::false_positive);

    const DetectionOutcome early = detect(trace, 0.05);
    CHECK(*early.detected_at == 0);
    CHECK(early.classification == DetectionOutcome::Classification::false_positive);

    const DetectionOutcome miss = detect(trace, 0.95);
    CHECK(!miss.detected_at.has_value());
    CHECK(miss.classification == DetectionOutcome::Classification::false_negative);

    const DetectionOutcome success = detect({0.1, 0.9}, 0.5);
    CHECK(success.classification == DetectionOutcome::Classification::success);
}

TEST_CASE("detect over a trace equals sequential first-crossing evaluation") {
    // Stored traces are reused across the whole threshold grid; that is only
    // sound if a sequential evaluate-and-stop run reaches the same decision.
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
        const std::size_t arrival = 4 + trial % 17;
        const auto scene = make_noiseless_barrage(8, 2, 10, arrival, 50.0, 113 + trial);
        DetectorParams params;
        params.i_hat = 2;
        params.t_max = 4;
        const std::uint64_t seed = 31 + trial;
        const auto trace = metric_trace(scene.stream, scene.seq, DetectorKind::jass, params, seed);

        for (double alpha : {0.2, 0.375, 0.8}) {
            const double tau = alpha * scene.seq.energy;
            std::optional<std::size_t> sequential;
            for (std::size_t l = 0; l <= scene.arrival; ++l) {
                const ComplexMatrix y = window_at(scene.stream, l, scene.seq.length());
                RandomStream rng(window_stream_key(seed, l));
                if (statistic_jass(y, scene.seq, params.i_hat, params.t_max, rng) >= tau) {
                    sequential = l;
                    break;
                }
            }
            const DetectionOutcome outcome = detect(trace, tau);
            CHECK(outcome.detected_at == sequential);
        }
    }
}
