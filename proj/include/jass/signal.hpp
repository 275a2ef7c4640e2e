#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "jass/jammers.hpp"
#include "jass/linalg.hpp"
#include "jass/rng.hpp"

namespace jass {

/// Pre-shared 128-bit secret from which synchronization sequences are derived.
struct Secret {
    std::uint64_t hi = 0;
    std::uint64_t lo = 0;

    bool is_zero() const noexcept { return hi == 0 && lo == 0; }
};

/// One xorshift128+ state transition. The state must be nonzero and the
/// successor is guaranteed nonzero (the transition is a bijection on the
/// nonzero states).
Secret next_secret(const Secret& s);

struct SyncSequence {
    ComplexVector values;
    double energy = 0.0; // ||values||^2, kept alongside since every detector needs it

    std::size_t length() const noexcept { return values.size(); }
};

SyncSequence make_sync_sequence(ComplexVector values);

/// Expands a secret into K i.i.d. CN(0,1) entries via the keyed counter
/// stream. Deterministic per (secret, k); the expansion is one-way in the
/// sense of the underlying mixer (no cryptographic strength is claimed).
SyncSequence derive_sync_sequence(const Secret& s, std::size_t k);

/// Geometric arrival index: P(L = l) = p (1-p)^l for l >= 0, by inverse CDF
/// on a single uniform draw.
std::size_t sample_arrival(double p, RandomStream& rng);

struct ChannelRealization {
    ComplexVector h;  // UE channel, length B
    ComplexMatrix J;  // jammer channel, B x I (I = 0 means no jammer)
};

ChannelRealization draw_rayleigh_channel(std::size_t b, std::size_t i, RandomStream& rng);

/// One JSON object per line, fields "h" (array of [re, im] pairs) and "J"
/// (array of columns). With normalize set, each record is rescaled to
/// ||h||^2 = B and ||J||_F^2 = B*I.
std::vector<ChannelRealization> load_channel_file(const std::string& path, bool normalize);
void write_channel_file(const std::string& path, const std::vector<ChannelRealization>& records);

struct ScenarioConfig {
    std::size_t b = 16;      // BS receive antennas
    std::size_t i = 4;       // jammer antennas
    std::size_t i_hat = 4;   // receiver's guess of jammer antennas
    std::size_t k = 16;      // synchronization sequence length
    std::size_t t_max = 4;   // power iterations
    double snr_db = 0.0;     // N0 = 10^(-snr_db/10)
    double rho_db = 30.0;    // jammer power, rho = 10^(rho_db/10)
    JammerKind jammer_kind = JammerKind::barrage;
    double arrival_p = 1.0 / 256.0; // geometric parameter, default 1/K^2
    std::string channel_source = "rayleigh_iid"; // or a channel-file path
    bool normalize_channels = true;              // applies to file-sourced channels
    // Ablation knob: use A^H instead of pinv(A) in the fitted projections.
    bool adjoint_projection = false;
    std::uint64_t master_seed = 1;

    double noise_power() const noexcept;
    double jammer_power() const noexcept;
    bool uses_channel_file() const noexcept { return channel_source != "rayleigh_iid"; }

    void validate() const;
};

struct ReceiveStream {
    ComplexMatrix samples; // B x (L+K); column k is the receive vector y[k]
};

/// Assembles y[k] = h s[k-L] + J w[k] + n[k] for k in [0, L+K), sample by
/// sample so the jammer can never see future UE signal.
ReceiveStream synthesize_receive_stream(const ChannelRealization& chan, const SyncSequence& seq,
                                        std::size_t arrival, const JammerSpec& jammer, double n0,
                                        RandomStream& noise_rng, RandomStream& jammer_rng);

} // namespace jass
