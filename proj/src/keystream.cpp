#include "qstego/keystream.hpp"

#include "qstego/errors.hpp"

#include <sodium.h>

#include <cstring>

namespace qstego {

namespace {

constexpr std::uint64_t kBitsPerBlock = 512;
constexpr std::uint64_t kMaxBlocks = std::uint64_t{1} << 32;

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

void ensure_sodium() {
    static const bool ok = sodium_init() >= 0;
    if (!ok) throw IntegrityError("libsodium initialization failed");
}

}  // namespace

Seed Seed::from_hex(std::string_view hex) {
    if (hex.size() != 64) {
        throw DomainError("seed must be 64 hex characters, got " + std::to_string(hex.size()));
    }
    Seed s;
    for (std::size_t i = 0; i < 32; ++i) {
        const int hi = hex_value(hex[2 * i]);
        const int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw DomainError("seed contains non-hex character");
        s.bytes[i] = static_cast<std::uint8_t>(hi * 16 + lo);
    }
    return s;
}

std::string Seed::to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(64);
    for (auto b : bytes) {
        out += kDigits[b >> 4];
        out += kDigits[b & 15];
    }
    return out;
}

std::array<std::uint8_t, 64> chacha20_block(const Seed& key, const std::array<std::uint8_t, 12>& nonce,
                                            std::uint32_t counter) {
    ensure_sodium();
    std::array<std::uint8_t, 64> zeros{};
    std::array<std::uint8_t, 64> out{};
    crypto_stream_chacha20_ietf_xor_ic(out.data(), zeros.data(), zeros.size(), nonce.data(), counter,
                                       key.bytes.data());
    return out;
}

KeyStream::KeyStream(const Seed& seed, std::uint64_t stream, std::optional<std::uint64_t> budget_bits)
    : seed_(seed), stream_(stream), budget_(budget_bits) {}

std::optional<std::uint64_t> KeyStream::remaining() const {
    if (!budget_) return std::nullopt;
    return *budget_ - position_;
}

void KeyStream::require(std::uint64_t nbits) const {
    if (budget_ && nbits > *budget_ - position_) {
        throw KeyUnderflowError("key exhausted: need " + std::to_string(nbits) + " bits, " +
                                std::to_string(*budget_ - position_) + " available");
    }
    if ((position_ + nbits + kBitsPerBlock - 1) / kBitsPerBlock > kMaxBlocks) {
        throw KeyUnderflowError("key stream position exceeds generator period");
    }
}

void KeyStream::load_block(std::uint64_t block) {
    if (block == loaded_block_) return;
    std::array<std::uint8_t, 12> nonce{};
    for (int i = 0; i < 8; ++i) nonce[4 + i] = static_cast<std::uint8_t>(stream_ >> (8 * i));
    block_ = chacha20_block(seed_, nonce, static_cast<std::uint32_t>(block));
    loaded_block_ = block;
}

bool KeyStream::next_bit() {
    require(1);
    load_block(position_ / kBitsPerBlock);
    const std::uint64_t bit = position_ % kBitsPerBlock;
    ++position_;
    return (block_[bit / 8] >> (7 - bit % 8)) & 1;
}

BigCount KeyStream::draw_bits(std::size_t nbits) {
    require(nbits);
    BigCount r = 0;
    for (std::size_t i = 0; i < nbits; ++i) {
        r <<= 1;
        if (next_bit()) r |= 1;
    }
    return r;
}

std::uint64_t KeyStream::next_u64() {
    require(64);
    std::uint64_t r = 0;
    const std::uint64_t offset = position_ % kBitsPerBlock;
    if (offset % 8 == 0 && offset + 64 <= kBitsPerBlock) {
        load_block(position_ / kBitsPerBlock);
        for (std::uint64_t i = 0; i < 8; ++i) r = (r << 8) | block_[offset / 8 + i];
        position_ += 64;
        return r;
    }
    for (int i = 0; i < 64; ++i) r = (r << 1) | static_cast<std::uint64_t>(next_bit());
    return r;
}

void KeyStream::skip(std::uint64_t nbits) {
    require(nbits);
    position_ += nbits;
}

std::size_t SubsetDraw::bits_for(const BigCount& n_max) { return ceil_log2(n_max) + 32; }

SubsetDraw::SubsetDraw(KeyStream& key, const BigCount& n_max) : n_max_(n_max) {
    if (n_max < 1) throw DomainError("subset draw needs n_max >= 1");
    bits_ = bits_for(n_max);
    value_ = key.draw_bits(bits_);
}

BigCount SubsetDraw::index(const BigCount& n_subsets) const {
    if (n_subsets < 1 || n_subsets > n_max_) {
        throw DomainError("subset count outside [1, n_max]");
    }
    if (n_subsets == 1) return 0;
    return value_ % n_subsets;
}

BigCount draw_subset_index(KeyStream& key, const BigCount& n_subsets, const BigCount& n_max) {
    return SubsetDraw(key, n_max).index(n_subsets);
}

BigCount uniform_below(KeyStream& rng, const BigCount& bound) {
    if (bound < 1) throw DomainError("uniform_below needs a positive bound");
    const std::size_t bits = bit_length(BigCount(bound - 1));
    for (;;) {
        BigCount v = rng.draw_bits(bits);
        if (v < bound) return v;
    }
}

BigCount otp_encrypt(const BigCount& message, std::size_t bits, KeyStream& key) {
    if (message < 0 || bit_length(message) > bits) {
        throw DomainError("message does not fit in " + std::to_string(bits) + " bits");
    }
    return message ^ key.draw_bits(bits);
}

BigCount otp_decrypt(const BigCount& ciphertext, std::size_t bits, KeyStream& key) {
    return otp_encrypt(ciphertext, bits, key);
}

}  // namespace qstego
