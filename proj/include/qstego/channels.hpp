#pragma once

// Channel models, typical windows, and per-weight-class probability tables.

#include "qstego/errors.hpp"
#include "qstego/prob_core.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qstego {

enum class ChannelKind { BitFlip, Depolarizing, RandomUnitary };

/// Malformed channel specification string. `token()` is the offending piece.
class ChannelSpecError : public DomainError {
  public:
    ChannelSpecError(const std::string& what, std::string token)
        : DomainError(what), token_(std::move(token)) {}
    const std::string& token() const { return token_; }

  private:
    std::string token_;
};

/// A single-qubit random-unitary channel. Symbol 0 is the identity outcome.
///
/// BitFlip stores (1-p, p) over {I,X}; Depolarizing stores (1-p, p/3, p/3, p/3)
/// over {I,X,Y,Z}; RandomUnitary stores p_1..p_k over abstract labels.
class ChannelModel {
  public:
    static ChannelModel bit_flip(double p);
    static ChannelModel depolarizing(double p);
    static ChannelModel random_unitary(std::vector<double> probs);

    /// Grammar: `bitflip:p=0.1`, `depol:p=0.1`, `ru:p=0.7,0.2,0.1`.
    static ChannelModel parse(std::string_view spec);

    ChannelKind kind() const { return kind_; }
    std::span<const double> probs() const { return probs_; }
    std::size_t alphabet_size() const { return probs_.size(); }
    /// Total probability of a non-identity outcome.
    double error_probability() const { return error_probability_; }

    /// Letters used to serialize error strings: I, X, Y, Z, then A, B, ...
    std::string_view alphabet() const { return alphabet_; }

    /// True for BitFlip and Depolarizing: classes are indexed by total weight w,
    /// and their weight vectors are (N - w, w).
    bool groups_by_weight() const { return kind_ != ChannelKind::RandomUnitary; }

    /// Probabilities over the class alphabet: (1-p, p) when grouping by weight.
    std::vector<double> class_probs() const;

    /// Canonical specification string (round-trips through parse()).
    std::string to_spec() const;

    friend bool operator==(const ChannelModel&, const ChannelModel&) = default;

  private:
    ChannelModel(ChannelKind kind, std::vector<double> probs, double error_probability);

    ChannelKind kind_;
    std::vector<double> probs_;
    double error_probability_;
    std::string alphabet_;
};

struct SymbolRange {
    std::uint32_t lo = 0;
    std::uint32_t hi = 0;
    bool contains(std::uint32_t n) const { return lo <= n && n <= hi; }
    friend bool operator==(const SymbolRange&, const SymbolRange&) = default;
};

/// Per-symbol admissible count ranges around the expected counts N p_i.
struct TypicalWindow {
    std::uint32_t length = 0;
    /// Relative half-width. Meaningless (reported as null) when full_support.
    double delta = 0.0;
    /// Coverage constant D the width was derived from.
    double coverage = 0.0;
    bool full_support = false;
    /// One range per class-alphabet symbol (see ChannelModel::class_probs()).
    std::vector<SymbolRange> ranges;

    bool admits(const WeightVector& weights) const;
};

struct WindowOptions {
    /// Accept delta >= 1 by clipping lower bounds at zero instead of failing.
    bool allow_wide = false;
};

/// Window with delta = D sqrt((1-p)/(p N)) (binary-style, p = total error
/// probability) or D max_i sqrt((1-p_i)/(p_i N)) (random unitary). Bounds
/// round inward.
TypicalWindow make_window(const ChannelModel& channel, std::uint32_t n, double coverage,
                          WindowOptions options = {});

/// Window admitting every weight vector.
TypicalWindow full_window(const ChannelModel& channel, std::uint32_t n);

struct WeightClass {
    WeightVector weights;
    /// Number of error strings in the class.
    BigCount size;
    /// Probability of each individual string of the class.
    LogProb string_logprob;
};

struct TableOptions {
    std::size_t enumeration_cap = 10'000'000;
};

struct WeightClassTable {
    ChannelModel channel;
    std::uint32_t length = 0;
    TypicalWindow window;
    /// Lexicographic on weight vectors.
    std::vector<WeightClass> entries;
    /// Channel probability of all strings outside the window.
    double truncation_mass = 0.0;
    /// Depolarizing windows group by total weight, so some admitted strings are
    /// not per-Pauli typical. Reported, not corrected.
    bool contains_atypical_members = false;

    const WeightClass* find(const WeightVector& weights) const;
};

WeightClassTable build_table(const ChannelModel& channel, std::uint32_t n,
                             const TypicalWindow& window, TableOptions options = {});

struct ClassProbability {
    LogProb string_logprob;
    BigCount multiplicity;
};

/// -(1/N) sum multiplicity * p log2 p, in bits per qubit.
double effective_entropy(std::span<const ClassProbability> classes, std::uint32_t n);
double effective_entropy(const WeightClassTable& table);

/// Closed-form per-qubit entropy of the channel: h(p), s(p), or H(p_1..p_k).
double channel_entropy(const ChannelModel& channel);

}  // namespace qstego
