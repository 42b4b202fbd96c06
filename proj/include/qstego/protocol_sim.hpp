#pragma once

// Monte Carlo of Alice -> noiseless channel -> Bob, with Eve running the exact
// likelihood-ratio test on every transmitted block.

#include "qstego/channels.hpp"
#include "qstego/keystream.hpp"
#include "qstego/stego_codec.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace qstego {

/// i.i.d. per-position symbol draw from the channel's probability vector.
template <class Rng>
ErrorString sample_channel(const ChannelModel& channel, std::uint32_t n, Rng& rng) {
    const auto probs = channel.probs();
    ErrorString e;
    e.symbols.resize(n, 0);
    for (auto& s : e.symbols) {
        // 53-bit uniform in [0,1).
        const double u = static_cast<double>(static_cast<std::uint64_t>(rng()) >> 11) * 0x1p-53;
        double acc = 0.0;
        std::size_t k = 0;
        for (; k + 1 < probs.size(); ++k) {
            acc += probs[k];
            if (u < acc) break;
        }
        // Never land on a zero-probability tail symbol through rounding.
        while (k > 0 && probs[k] == 0.0) --k;
        s = static_cast<std::uint8_t>(k);
    }
    return e;
}

/// Alice's side of one block. Key layout: [subset draw][pad bits if otp].
ErrorString send_block(const StegoCodebook& book, const Message& m, KeyStream& key, bool otp);
/// Bob's side, consuming the same key bits in the same order.
Message receive_block(const StegoCodebook& book, const ErrorString& e, KeyStream& key, bool otp);

/// Substream ids. Keys use the block index; message and calibration draws
/// live in disjoint nonce ranges of the same seed.
std::uint64_t key_stream_id(std::uint64_t block);
std::uint64_t message_stream_id(std::uint64_t block);
std::uint64_t calibration_stream_id(std::uint64_t block);

struct SimConfig {
    ChannelModel channel = ChannelModel::bit_flip(0.1);
    std::uint32_t n = 20;
    /// Coverage D; ignored when full_window.
    double coverage = 2.0;
    bool full_window = false;
    bool allow_wide = false;
    std::uint64_t blocks = 1000;
    Seed seed;
    bool otp = false;
    bool eve_test = true;
    /// 0 picks the hardware concurrency.
    unsigned threads = 0;
    bool trace = false;
};

struct BlockTrace {
    std::uint64_t block = 0;
    std::uint32_t weight = 0;
    double llr = 0.0;
    std::uint64_t key_bits = 0;
};

struct SimResult {
    std::uint64_t blocks = 0;
    std::uint64_t blocks_ok = 0;
    std::uint64_t key_bits_used = 0;
    std::uint64_t key_bits_per_block = 0;
    double message_bits = 0.0;
    /// Mean and variance of log2(P_induced(e) / P_channel(e)) over transmitted blocks.
    double eve_llr_mean = 0.0;
    double eve_llr_variance = 0.0;
    /// Best-threshold advantage between transmitted and calibration blocks.
    std::optional<double> eve_advantage;
    /// Fraction of calibration blocks the codebook can never emit.
    std::optional<double> calibration_uncovered;
    /// Closed-form TV for reference.
    double tv_exact = 0.0;
    std::vector<BlockTrace> trace;
};

/// Largest |F_a(t) - F_b(t)| over thresholds t between two samples' empirical CDFs.
double best_threshold_advantage(std::vector<double> a, std::vector<double> b);

/// Throws IntegrityError if any block fails to decode to its message.
SimResult run(const SimConfig& config);
SimResult run(const SimConfig& config, const StegoCodebook& book);

}  // namespace qstego
