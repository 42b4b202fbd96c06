#pragma once

// Shared-secret key modeling: a deterministic bit source with consumption
// accounting, keyed subset selection, and one-time-pad pre-encryption.

#include "qstego/prob_core.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace qstego {

/// 256-bit shared secret.
struct Seed {
    std::array<std::uint8_t, 32> bytes{};

    /// Exactly 64 hex characters. Throws DomainError otherwise.
    static Seed from_hex(std::string_view hex);
    std::string to_hex() const;

    friend bool operator==(const Seed&, const Seed&) = default;
};

/// One 64-byte ChaCha20 (IETF variant) keystream block.
std::array<std::uint8_t, 64> chacha20_block(const Seed& key, const std::array<std::uint8_t, 12>& nonce,
                                            std::uint32_t counter);

/// Deterministic bit sequence: bit i of stream s is bit i (MSB-first within
/// bytes) of ChaCha20(seed, nonce = s). Equal (seed, stream) pairs give equal
/// sequences, so Alice and Bob stay in lockstep.
///
/// Not safe for concurrent mutation; use one instance per worker.
class KeyStream {
  public:
    explicit KeyStream(const Seed& seed, std::uint64_t stream = 0,
                       std::optional<std::uint64_t> budget_bits = std::nullopt);

    bool next_bit();
    /// Next `nbits` bits as an integer, first bit most significant.
    BigCount draw_bits(std::size_t nbits);
    std::uint64_t next_u64();
    void skip(std::uint64_t nbits);

    // UniformRandomBitGenerator, so the stream can drive sampling as well as keying.
    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()() { return next_u64(); }

    /// Bits drawn so far.
    std::uint64_t consumed() const { return position_; }
    std::optional<std::uint64_t> remaining() const;

    const Seed& seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

  private:
    void require(std::uint64_t nbits) const;
    void load_block(std::uint64_t block);

    Seed seed_;
    std::uint64_t stream_;
    std::optional<std::uint64_t> budget_;
    std::uint64_t position_ = 0;
    std::uint64_t loaded_block_ = ~std::uint64_t{0};
    std::array<std::uint8_t, 64> block_{};
};

/// The per-block cached draw shared by every weight class: B = ceil(log2 n_max) + 32
/// bits, reduced modulo each class's subset count (bias <= 2^-32).
class SubsetDraw {
  public:
    static std::size_t bits_for(const BigCount& n_max);

    SubsetDraw(KeyStream& key, const BigCount& n_max);

    /// Requires 1 <= n_subsets <= n_max. No further key bits are consumed.
    BigCount index(const BigCount& n_subsets) const;
    std::size_t bits() const { return bits_; }

  private:
    BigCount value_;
    BigCount n_max_;
    std::size_t bits_;
};

/// One-shot form of SubsetDraw for a single class.
BigCount draw_subset_index(KeyStream& key, const BigCount& n_subsets, const BigCount& n_max);

/// Exactly uniform value in [0, bound) by rejection on bit_length(bound - 1) bits.
BigCount uniform_below(KeyStream& rng, const BigCount& bound);

/// XOR of the message's `bits`-bit representation with `bits` fresh key bits.
/// Throws DomainError if message >= 2^bits, KeyUnderflowError if the key runs out.
BigCount otp_encrypt(const BigCount& message, std::size_t bits, KeyStream& key);
BigCount otp_decrypt(const BigCount& ciphertext, std::size_t bits, KeyStream& key);

}  // namespace qstego
