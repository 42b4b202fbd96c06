#pragma once

// Message <-> error-string codec over a weight-class table, with keyed
// selection among nonoverlapping rank-interval subsets of each class.

#include "qstego/channels.hpp"
#include "qstego/keystream.hpp"
#include "qstego/prob_core.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qstego {

/// Length-N word over a channel alphabet; symbol 0 is the identity.
struct ErrorString {
    std::vector<std::uint8_t> symbols;

    std::uint32_t length() const { return static_cast<std::uint32_t>(symbols.size()); }
    /// Parses letters of `alphabet` (e.g. "IXIIZ"). Throws DomainError on foreign letters.
    static ErrorString parse(std::string_view text, std::string_view alphabet);
    std::string to_string(std::string_view alphabet) const;
    /// Per-symbol counts over an alphabet of size k.
    WeightVector symbol_counts(std::size_t k) const;
    std::uint32_t weight() const;

    friend auto operator<=>(const ErrorString&, const ErrorString&) = default;
};

struct Message {
    BigCount index;
    friend bool operator==(const Message&, const Message&) = default;
};

/// Class weight vector of a string: (N-w, w) for weight-grouped channels,
/// full symbol counts otherwise.
WeightVector class_weights(const ChannelModel& channel, const ErrorString& e);

/// Colex rank of a sorted position set {c_1 < ... < c_m}: sum_j C(c_j, j).
BigCount colex_rank(std::span<const std::uint32_t> sorted_positions);
/// Inverse of colex_rank for m-subsets of {0..universe-1}; returns sorted positions.
std::vector<std::uint32_t> colex_unrank(BigCount rank, std::uint32_t universe, std::uint32_t m);

/// Bijection between [0, multinomial(cls)) and strings with symbol counts `cls`.
/// Positions are chosen symbol by symbol (1, 2, ..., k-1) among the still-free
/// positions; the identity fills the rest. Mixed radix, symbol 1 least significant.
BigCount rank_in_class(const ErrorString& e, const WeightVector& cls);
ErrorString unrank_in_class(const BigCount& rank, const WeightVector& cls);

/// Bijection for strings of total weight w whose non-identity positions carry
/// one of `error_letters` labels: rank = position_rank + C(N,w) * label_rank,
/// labels read as a base-`error_letters` number, first position least significant.
BigCount rank_in_weight_class(const ErrorString& e, std::uint32_t w, std::size_t error_letters);
ErrorString unrank_in_weight_class(const BigCount& rank, std::uint32_t n, std::uint32_t w,
                                   std::size_t error_letters);

/// Channel-aware dispatch between the two bijections above.
BigCount class_rank(const ChannelModel& channel, const ErrorString& e, const WeightVector& cls);
ErrorString class_unrank(const ChannelModel& channel, const BigCount& rank, const WeightVector& cls);

struct CodebookClass {
    WeightVector weights;
    BigCount class_size;
    LogProb string_logprob;
    /// Codewords per subset, floor(class_size * p_class / q).
    BigCount c_class;
    /// floor(class_size / c_class); subset j covers ranks [j c_class, (j+1) c_class).
    BigCount n_subsets;
    /// First message index mapped to this class.
    BigCount offset;
};

struct DroppedClass {
    WeightVector weights;
    BigCount class_size;
    LogProb string_logprob;
};

struct CompileOptions {
    TableOptions table;
};

/// The compiled codec. Immutable; encode/decode are pure given the key state.
class StegoCodebook {
  public:
    /// Throws DomainError("rate zero") if every class floors to zero codewords.
    static StegoCodebook compile(const WeightClassTable& table);
    static StegoCodebook compile(const ChannelModel& channel, std::uint32_t n, const TypicalWindow& window,
                                 CompileOptions options = {});
    static StegoCodebook compile(const ChannelModel& channel, std::uint32_t n, double coverage,
                                 CompileOptions options = {});

    std::uint32_t length() const { return length_; }
    const ChannelModel& channel() const { return channel_; }
    const TypicalWindow& window() const { return window_; }
    std::span<const CodebookClass> classes() const { return classes_; }
    std::span<const DroppedClass> dropped() const { return dropped_; }
    double truncation_mass() const { return truncation_mass_; }
    bool contains_atypical_members() const { return contains_atypical_members_; }

    /// C, the number of distinct messages.
    const BigCount& total() const { return total_; }
    /// log2 of the per-message base probability q (most probable admitted string).
    LogProb q_log() const { return q_log_; }
    /// M = log2 C.
    double message_bits() const { return message_bits_; }
    /// Largest subset count over all classes.
    const BigCount& max_subsets() const { return max_subsets_; }
    /// True when C_class was computed with exact rational arithmetic.
    bool exact() const { return exact_; }

    const CodebookClass* find(const WeightVector& weights) const;
    const DroppedClass* find_dropped(const WeightVector& weights) const;
    /// Class whose message interval contains m.
    const CodebookClass& class_for_message(const BigCount& m) const;

  private:
    StegoCodebook() = default;

    std::uint32_t length_ = 0;
    ChannelModel channel_ = ChannelModel::bit_flip(0.5);
    TypicalWindow window_;
    std::vector<CodebookClass> classes_;
    std::vector<DroppedClass> dropped_;
    double truncation_mass_ = 0.0;
    bool contains_atypical_members_ = false;
    BigCount total_;
    LogProb q_log_;
    double message_bits_ = 0.0;
    BigCount max_subsets_;
    bool exact_ = false;
};

/// Block length up to which C_class uses exact rationals.
inline constexpr std::uint32_t kExactCodebookLength = 64;

/// floor(count * 2^log2_factor) for log2_factor <= 0, biased one ulp down so
/// the result never exceeds the true value by rounding.
BigCount floor_scaled(const BigCount& count, double log2_factor);

/// Encode with an explicit subset index (no key). Used by encode() and by oracles.
ErrorString encode_with_subset(const StegoCodebook& book, const Message& m, const BigCount& subset);

/// One block: draws the cached subset value (B key bits), then maps m to a string.
ErrorString encode(const StegoCodebook& book, const Message& m, KeyStream& key);

/// Inverse of encode for the same key state. Throws AtypicalStringError when the
/// string's class is not admitted and NotACodewordError when it lies outside the
/// keyed subset (or in a class with no codewords).
Message decode(const StegoCodebook& book, const ErrorString& e, KeyStream& key);

struct RateReport {
    double message_bits = 0.0;
    /// N h(p), N s(p) or N H(p_1..p_k).
    double asymptote_bits = 0.0;
    double ratio = 0.0;
    double delta = 0.0;
    bool full_support = false;
};

RateReport achievable_rate(const StegoCodebook& book);
RateReport achievable_rate(const ChannelModel& channel, std::uint32_t n, double coverage);

}  // namespace qstego
