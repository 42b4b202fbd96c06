#include "qstego/prob_core.hpp"

#include "qstego/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qstego {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

double LogProb::prob() const { return std::exp2(value); }

LogProb operator/(LogProb a, LogProb b) { return {a.value - b.value}; }

WeightVector::WeightVector(std::vector<std::uint32_t> counts) : counts_(std::move(counts)) {
    std::uint64_t total = 0;
    for (auto c : counts_) total += c;
    if (total > std::numeric_limits<std::uint32_t>::max()) {
        throw DomainError("weight vector total overflows");
    }
    n_ = static_cast<std::uint32_t>(total);
}

WeightVector::WeightVector(std::vector<std::uint32_t> counts, std::uint32_t n)
    : WeightVector(std::move(counts)) {
    if (n_ != n) {
        throw DomainError("weight vector counts sum to " + std::to_string(n_) + ", expected " +
                          std::to_string(n));
    }
}

BigCount binomial(std::uint64_t n, std::uint64_t w) {
    if (w > n) {
        throw DomainError("binomial: w=" + std::to_string(w) + " outside [0, " + std::to_string(n) + "]");
    }
    if (n > kExactLimit) {
        throw DomainError("binomial: N=" + std::to_string(n) +
                          " beyond exact limit; use log2_binomial_approx");
    }
    w = std::min(w, n - w);
    BigCount r = 1;
    for (std::uint64_t i = 1; i <= w; ++i) {
        r *= n - w + i;
        r /= i;
    }
    return r;
}

BigCount multinomial(const WeightVector& weights) {
    BigCount r = 1;
    std::uint64_t remaining = weights.length();
    for (auto c : weights.counts()) {
        r *= binomial(remaining, c);
        remaining -= c;
    }
    return r;
}

double log2_binomial_approx(std::uint64_t n, std::uint64_t w) {
    if (w > n) throw DomainError("log2_binomial_approx: w > N");
    const double nn = static_cast<double>(n);
    const double ww = static_cast<double>(w);
    return (std::lgamma(nn + 1) - std::lgamma(ww + 1) - std::lgamma(nn - ww + 1)) / std::log(2.0);
}

LogProb string_logprob(const WeightVector& weights, std::span<const double> probs) {
    if (probs.size() != weights.alphabet_size()) {
        throw DomainError("string_logprob: alphabet size mismatch");
    }
    CompensatedSum total_p;
    for (double p : probs) {
        if (!(p >= 0.0)) throw DomainError("string_logprob: negative probability");
        total_p.add(p);
    }
    if (std::abs(total_p.value() - 1.0) > 1e-12) {
        throw DomainError("string_logprob: probabilities do not sum to 1");
    }
    CompensatedSum acc;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (weights[i] == 0) continue;
        if (probs[i] == 0.0) return LogProb::zero();
        acc.add(static_cast<double>(weights[i]) * std::log2(probs[i]));
    }
    return {acc.value()};
}

LogProb weight_class_logprob(std::uint64_t n, std::uint64_t w, double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("weight_class_logprob: p must lie in (0,1)");
    if (w > n) throw DomainError("weight_class_logprob: w > N");
    const double log_count = n <= kExactLimit ? log2_big(binomial(n, w)) : log2_binomial_approx(n, w);
    CompensatedSum acc;
    acc.add(log_count);
    acc.add(static_cast<double>(w) * std::log2(p));
    acc.add(static_cast<double>(n - w) * std::log2(1.0 - p));
    return {acc.value()};
}

std::size_t bit_length(const BigCount& x) {
    if (x.is_zero()) return 0;
    return boost::multiprecision::msb(x) + 1;
}

std::size_t ceil_log2(const BigCount& x) {
    if (x <= 0) throw DomainError("ceil_log2 of nonpositive value");
    if (x == 1) return 0;
    return bit_length(BigCount(x - 1));
}

double log2_big(const BigCount& x) {
    if (x.is_zero()) return kNegInf;
    const std::size_t bits = bit_length(x);
    if (bits <= 64) return std::log2(x.convert_to<double>());
    const std::size_t shift = bits - 64;
    const BigCount top = x >> shift;
    return std::log2(top.convert_to<double>()) + static_cast<double>(shift);
}

LogProb scale(const BigCount& count, LogProb lp) {
    if (count.is_zero() || lp.is_zero()) return LogProb::zero();
    return {log2_big(count) + lp.value};
}

double scaled_value(const BigCount& count, LogProb lp) {
    if (count.is_zero() || lp.is_zero()) return 0.0;
    const std::size_t bits = bit_length(count);
    const std::size_t shift = bits > 64 ? bits - 64 : 0;
    const double top = BigCount(count >> shift).convert_to<double>();
    const double whole = std::floor(lp.value);
    return std::ldexp(top * std::exp2(lp.value - whole), static_cast<int>(whole) + static_cast<int>(shift));
}

double ratio(const BigCount& a, const BigCount& b) {
    if (b <= 0) throw DomainError("ratio: nonpositive denominator");
    if (a.is_zero()) return 0.0;
    // Scale so the integer quotient carries at least 64 significant bits.
    const long long extra = 66 - (static_cast<long long>(bit_length(a)) - static_cast<long long>(bit_length(b)));
    BigCount q;
    if (extra > 0) {
        q = (a << extra) / b;
    } else {
        q = a / (b << -extra);
    }
    const std::size_t bits = bit_length(q);
    const std::size_t drop = bits > 64 ? bits - 64 : 0;
    const double top = BigCount(q >> drop).convert_to<double>();
    return std::ldexp(top, static_cast<int>(drop) - static_cast<int>(extra));
}

LogProb log_sum(std::span<const LogProb> terms) {
    std::vector<double> v;
    v.reserve(terms.size());
    for (const auto& t : terms) {
        if (!t.is_zero()) v.push_back(t.value);
    }
    if (v.empty()) return LogProb::zero();
    std::sort(v.begin(), v.end(), std::greater<>());
    const double top = v.front();
    CompensatedSum acc;
    for (double x : v) acc.add(std::exp2(x - top));
    return {top + std::log2(acc.value())};
}

void CompensatedSum::add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
        comp_ += (sum_ - t) + x;
    } else {
        comp_ += (x - t) + sum_;
    }
    sum_ = t;
}

double h2(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double shannon_entropy(std::span<const double> probs) {
    CompensatedSum acc;
    for (double p : probs) {
        if (p > 0.0) acc.add(-p * std::log2(p));
    }
    return acc.value();
}

}  // namespace qstego
