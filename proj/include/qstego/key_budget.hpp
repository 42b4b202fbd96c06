#pragma once

// Per-block key consumption of the codec, closed form against measured.

#include "qstego/channels.hpp"
#include "qstego/stego_codec.hpp"

#include <cstdint>
#include <optional>

namespace qstego {

struct KeyBudgetReport {
    /// 2 N p delta log2((1-p)/p); bit-flip channels only.
    std::optional<double> k_formula;
    /// Key bits one encode consumes: ceil(log2 n_subsets_max) + 32.
    std::uint64_t k_measured = 0;
    BigCount n_subsets_max;
    /// Extra bits per block when the message is one-time padded first.
    std::uint64_t otp_bits = 0;
    double delta = 0.0;
};

/// 2 N p delta log2((1-p)/p).
double key_formula(double p, std::uint32_t n, double delta);

/// floor(log2 C): the pad width, and the message width in OTP mode.
std::uint64_t otp_width(const StegoCodebook& book);

KeyBudgetReport key_cost(const StegoCodebook& book);
KeyBudgetReport key_cost(const ChannelModel& channel, std::uint32_t n, double coverage,
                         WindowOptions options = {});

}  // namespace qstego
