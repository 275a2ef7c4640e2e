#include "jass/signal.hpp"

#include <cassert>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace jass {

namespace {

constexpr std::uint64_t kSequenceTag = 0x73796E635F736571ULL; // "sync_seq"

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

ComplexVector parse_entry_list(const nlohmann::json& arr, const std::string& where) {
    ComplexVector out;
    out.reserve(arr.size());
    for (const auto& e : arr) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw std::runtime_error(where + ": expected [re, im] pairs");
        out.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return out;
}

} // namespace

Secret next_secret(const Secret& s) {
    require(!s.is_zero(), "next_secret: secret state must be nonzero");
    // xorshift128+ state transition (shifts 23, 18, 5).
    std::uint64_t x = s.hi;
    const std::uint64_t y = s.lo;
    Secret out;
    out.hi = y;
    x ^= x << 23;
    out.lo = x ^ y ^ (x >> 18) ^ (y >> 5);
    return out;
}

SyncSequence make_sync_sequence(ComplexVector values) {
    SyncSequence seq;
    seq.values = std::move(values);
    seq.energy = norm_sq(seq.values);
    return seq;
}

SyncSequence derive_sync_sequence(const Secret& s, std::size_t k) {
    require(k >= 2, "derive_sync_sequence: sequence length must be >= 2");
    RandomStream stream(derive_key(s.hi, kSequenceTag, s.lo));
    ComplexVector values(k);
    for (auto& v : values) v = stream.next_cn();
    return make_sync_sequence(std::move(values));
}

std::size_t sample_arrival(double p, RandomStream& rng) {
    require(p > 0.0 && p <= 1.0, "sample_arrival: p must be in (0, 1]");
    const double u = rng.next_double();
    if (p == 1.0) return 0;
    // Inverse CDF of the geometric distribution with support {0, 1, ...}.
    const double l = std::floor(std::log1p(-u) / std::log1p(-p));
    return l < 0.0 ? 0 : static_cast<std::size_t>(l);
}

ChannelRealization draw_rayleigh_channel(std::size_t b, std::size_t i, RandomStream& rng) {
    require(b >= 1, "draw_rayleigh_channel: need at least one receive antenna");
    require(i < b, "draw_rayleigh_channel: jammer antennas must be fewer than receive antennas");
    ChannelRealization chan;
    chan.h.resize(b);
    for (auto& v : chan.h) v = rng.next_cn();
    chan.J = ComplexMatrix(b, i);
    for (std::size_t col = 0; col < i; ++col)
        for (std::size_t row = 0; row < b; ++row) chan.J(row, col) = rng.next_cn();
    return chan;
}

std::vector<ChannelRealization> load_channel_file(const std::string& path, bool normalize) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_channel_file: cannot open " + path);

    std::vector<ChannelRealization> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where = path + ":" + std::to_string(line_no);

        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw std::runtime_error(where + ": " + e.what());
        }
        if (!obj.is_object() || !obj.contains("h") || !obj.contains("J"))
            throw std::runtime_error(where + ": record must have fields \"h\" and \"J\"");

        ChannelRealization rec;
        rec.h = parse_entry_list(obj["h"], where);
        const std::size_t b = rec.h.size();
        if (b == 0) throw std::runtime_error(where + ": empty channel vector");

        const auto& jcols = obj["J"];
        if (!jcols.is_array()) throw std::runtime_error(where + ": \"J\" must be a column array");
        rec.J = ComplexMatrix(b, jcols.size());
        for (std::size_t c = 0; c < jcols.size(); ++c) {
            const ComplexVector col = parse_entry_list(jcols[c], where);
            if (col.size() != b)
                throw std::runtime_error(where + ": jammer column length differs from h");
            for (std::size_t r = 0; r < b; ++r) rec.J(r, c) = col[r];
        }

        if (!records.empty() &&
            (records.front().h.size() != b || records.front().J.cols() != rec.J.cols()))
            throw std::runtime_error(where + ": dimensions differ from earlier records");

        if (normalize) {
            const double hn = norm_sq(rec.h);
            if (hn <= 0.0) throw std::runtime_error(where + ": cannot normalize zero h");
            const double hs = std::sqrt(static_cast<double>(b) / hn);
            for (auto& v : rec.h) v *= hs;
            const std::size_t i = rec.J.cols();
            if (i > 0) {
                const double jn = frob_norm_sq(rec.J);
                if (jn <= 0.0) throw std::runtime_error(where + ": cannot normalize zero J");
                const double js = std::sqrt(static_cast<double>(b * i) / jn);
                for (auto& v : rec.J.data()) v *= js;
            }
        }
        records.push_back(std::move(rec));
    }
    if (records.empty())
        throw std::runtime_error("load_channel_file: no channel records in " + path);
    return records;
}

void write_channel_file(const std::string& path, const std::vector<ChannelRealization>& records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_channel_file: cannot open " + path);
    for (const auto& rec : records) {
        nlohmann::json obj;
        auto& h = obj["h"] = nlohmann::json::array();
        for (const cplx& v : rec.h) h.push_back({v.real(), v.imag()});
        auto& j = obj["J"] = nlohmann::json::array();
        for (std::size_t c = 0; c < rec.J.cols(); ++c) {
            nlohmann::json col = nlohmann::json::array();
            for (std::size_t r = 0; r < rec.J.rows(); ++r)
                col.push_back({rec.J(r, c).real(), rec.J(r, c).imag()});
            j.push_back(std::move(col));
        }
        out << obj.dump() << '\n';
    }
}

double ScenarioConfig::noise_power() const noexcept { return std::pow(10.0, -snr_db / 10.0); }
double ScenarioConfig::jammer_power() const noexcept { return std::pow(10.0, rho_db / 10.0); }

void ScenarioConfig::validate() const {
    require(b >= 1, "scenario: b must be >= 1");
    require(i < b, "scenario: i must be < b");
    require(i_hat >= 1 && i_hat < b, "scenario: i_hat must satisfy 1 <= i_hat < b");
    require(k >= 2, "scenario: k must be >= 2");
    require(t_max >= 1, "scenario: t_max must be >= 1");
    require(arrival_p > 0.0 && arrival_p <= 1.0, "scenario: arrival_p must be in (0, 1]");
}

ReceiveStream synthesize_receive_stream(const ChannelRealization& chan, const SyncSequence& seq,
                                        std::size_t arrival, const JammerSpec& jammer, double n0,
                                        RandomStream& noise_rng, RandomStream& jammer_rng) {
    const std::size_t b = chan.h.size();
    const std::size_t k_len = seq.length();
    require(chan.J.rows() == b || chan.J.cols() == 0,
            "synthesize_receive_stream: channel dimensions disagree");
    require(jammer.num_antennas == chan.J.cols(),
            "synthesize_receive_stream: jammer antenna count disagrees with channel");
    require(n0 >= 0.0, "synthesize_receive_stream: noise power must be nonnegative");

    const std::size_t horizon = arrival + k_len;
    const double noise_scale = std::sqrt(n0);

    ReceiveStream stream;
    stream.samples = ComplexMatrix(b, horizon);
    JammerState jstate = jammer_init(jammer, k_len, jammer_rng);

    for (std::size_t k = 0; k < horizon; ++k) {
        // The jammer sees s[0..k] only; generating sample-by-sample keeps
        // reactive jammers from peeking ahead.
        const ComplexVector w = jammer_step(jammer, jstate, k, arrival, seq, k + 1);

        const cplx s = (k >= arrival && k < arrival + k_len) ? seq.values[k - arrival] : cplx{};
        for (std::size_t r = 0; r < b; ++r) {
            cplx y = chan.h[r] * s;
            const cplx* jrow = chan.J.row(r);
            for (std::size_t a = 0; a < w.size(); ++a) y += jrow[a] * w[a];
            y += noise_scale * noise_rng.next_cn();
            stream.samples(r, k) = y;
        }
    }
    return stream;
}

} // namespace jass
