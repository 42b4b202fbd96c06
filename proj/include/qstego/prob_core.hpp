#pragma once

// Exact combinatorics and base-2 log-domain probability arithmetic.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace qstego {

/// Arbitrary-precision nonnegative count (number of strings in a class).
using BigCount = boost::multiprecision::cpp_int;

/// Largest block length for which exact big-integer combinatorics are offered.
inline constexpr std::uint64_t kExactLimit = 1'000'000;

/// Base-2 logarithm of a probability. Negative infinity encodes probability 0.
struct LogProb {
    double value = -std::numeric_limits<double>::infinity();

    static constexpr LogProb zero() { return {}; }
    static constexpr LogProb one() { return {0.0}; }

    bool is_zero() const { return value == -std::numeric_limits<double>::infinity(); }
    double prob() const;

    friend LogProb operator*(LogProb a, LogProb b) { return {a.value + b.value}; }
    friend LogProb operator/(LogProb a, LogProb b);
    friend auto operator<=>(LogProb, LogProb) = default;
};

/// Counts n_1..n_k of each alphabet symbol in a length-N string.
class WeightVector {
  public:
    WeightVector() = default;
    explicit WeightVector(std::vector<std::uint32_t> counts);
    /// Throws DomainError unless the counts sum to `n`.
    WeightVector(std::vector<std::uint32_t> counts, std::uint32_t n);

    std::uint32_t length() const { return n_; }
    std::size_t alphabet_size() const { return counts_.size(); }
    std::span<const std::uint32_t> counts() const { return counts_; }
    std::uint32_t operator[](std::size_t i) const { return counts_[i]; }

    friend auto operator<=>(const WeightVector& a, const WeightVector& b) {
        return a.counts_ <=> b.counts_;
    }
    friend bool operator==(const WeightVector&, const WeightVector&) = default;

  private:
    std::vector<std::uint32_t> counts_;
    std::uint32_t n_ = 0;
};

/// Exact N choose w. Throws DomainError for w > N or N beyond kExactLimit.
BigCount binomial(std::uint64_t n, std::uint64_t w);

/// Exact N!/(n_1!...n_k!).
BigCount multinomial(const WeightVector& weights);

/// Approximate log2 of N choose w via lgamma; for block lengths beyond kExactLimit.
double log2_binomial_approx(std::uint64_t n, std::uint64_t w);

/// Sum_i n_i log2 p_i. A zero probability with a nonzero count yields LogProb::zero().
LogProb string_logprob(const WeightVector& weights, std::span<const double> probs);

/// log2 of C(N,w) p^w (1-p)^(N-w).
LogProb weight_class_logprob(std::uint64_t n, std::uint64_t w, double p);

/// log2 of a big count; -inf for zero.
double log2_big(const BigCount& x);

/// Number of significant bits (0 for zero).
std::size_t bit_length(const BigCount& x);

/// Smallest b with 2^b >= x, for x >= 1.
std::size_t ceil_log2(const BigCount& x);

/// count * 2^lp as a LogProb.
LogProb scale(const BigCount& count, LogProb lp);

/// count * 2^lp in the linear domain, without forming 2^lp (which may underflow).
double scaled_value(const BigCount& count, LogProb lp);

/// a / b as a double, from a quotient truncated to 64 significant bits; b > 0.
double ratio(const BigCount& a, const BigCount& b);

/// Order-insensitive log-domain sum: sort descending, then compensated accumulation.
LogProb log_sum(std::span<const LogProb> terms);

/// Neumaier-compensated linear sum.
class CompensatedSum {
  public:
    void add(double x);
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Binary entropy in bits; h2(0) = h2(1) = 0.
double h2(double p);

/// Shannon entropy in bits of a probability vector (zero entries contribute 0).
double shannon_entropy(std::span<const double> probs);

}  // namespace qstego
