#include "qstego/stego_codec.hpp"

#include "qstego/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qstego {

namespace {

// A dyadic rational num / den holding a double exactly.
struct ExactProb {
    BigCount num;
    BigCount den;
};

ExactProb exact_from_double(double x) {
    if (x == 0.0) return {0, 1};
    int exp = 0;
    const double mant = std::frexp(x, &exp);
    const auto mi = static_cast<std::uint64_t>(std::ldexp(mant, 53));
    const int shift = exp - 53;
    if (shift >= 0) return {BigCount(mi) << shift, 1};
    return {BigCount(mi), BigCount(1) << -shift};
}

// prod_i p_i^{n_i} with p_i the symbol probabilities seen by a class vector.
ExactProb exact_string_prob(const ChannelModel& channel, const WeightVector& cls) {
    const auto probs = channel.probs();
    ExactProb r{1, 1};
    auto mul_pow = [&](double p, std::uint32_t count) {
        if (count == 0) return;
        const ExactProb e = exact_from_double(p);
        r.num *= boost::multiprecision::pow(e.num, count);
        r.den *= boost::multiprecision::pow(e.den, count);
    };
    if (channel.groups_by_weight()) {
        mul_pow(probs[0], cls[0]);
        mul_pow(probs[1], cls[1]);
    } else {
        for (std::size_t i = 0; i < probs.size(); ++i) mul_pow(probs[i], cls[i]);
    }
    return r;
}

std::vector<std::uint32_t> positions_of(const ErrorString& e, std::uint8_t symbol,
                                        std::span<const std::uint32_t> free) {
    std::vector<std::uint32_t> rel;
    for (std::uint32_t i = 0; i < free.size(); ++i) {
        if (e.symbols[free[i]] == symbol) rel.push_back(i);
    }
    return rel;
}

}  // namespace

ErrorString ErrorString::parse(std::string_view text, std::string_view alphabet) {
    ErrorString e;
    e.symbols.reserve(text.size());
    for (char c : text) {
        const auto pos = alphabet.find(c);
        if (pos == std::string_view::npos) {
            throw DomainError("error string letter '" + std::string(1, c) + "' not in alphabet " +
                              std::string(alphabet));
        }
        e.symbols.push_back(static_cast<std::uint8_t>(pos));
    }
    return e;
}

std::string ErrorString::to_string(std::string_view alphabet) const {
    std::string s;
    s.reserve(symbols.size());
    for (auto sym : symbols) s += alphabet.at(sym);
    return s;
}

WeightVector ErrorString::symbol_counts(std::size_t k) const {
    std::vector<std::uint32_t> counts(k, 0);
    for (auto sym : symbols) {
        if (sym >= k) throw DomainError("error string symbol outside alphabet");
        ++counts[sym];
    }
    return WeightVector(std::move(counts));
}

std::uint32_t ErrorString::weight() const {
    return static_cast<std::uint32_t>(std::count_if(symbols.begin(), symbols.end(), [](auto s) { return s != 0; }));
}

WeightVector class_weights(const ChannelModel& channel, const ErrorString& e) {
    const auto counts = e.symbol_counts(channel.alphabet_size());
    if (!channel.groups_by_weight()) return counts;
    const std::uint32_t w = e.length() - counts[0];
    return WeightVector({e.length() - w, w});
}

BigCount colex_rank(std::span<const std::uint32_t> c) {
    // Sum_j C(c_j, j) with 1-based j. B tracks C(cur, j) while cur >= j.
    BigCount total = 0;
    BigCount b = 0;
    std::uint64_t cur = 0;
    bool valid = false;
    for (std::size_t idx = 0; idx < c.size(); ++idx) {
        const std::uint64_t j = idx + 1;
        const std::uint64_t target = c[idx];
        if (idx > 0 && target <= c[idx - 1]) throw DomainError("colex_rank: positions not increasing");
        if (target < j) {  // C(target, j) = 0
            valid = false;
            continue;
        }
        if (valid) {
            // C(cur+1, j) = C(cur, j-1) (cur+1) / j
            b *= cur + 1;
            b /= j;
            ++cur;
        } else {
            b = 1;
            cur = j;
        }
        while (cur < target) {
            // C(cur+1, j) = C(cur, j) (cur+1) / (cur+1-j)
            b *= cur + 1;
            b /= cur + 1 - j;
            ++cur;
        }
        valid = true;
        total += b;
    }
    return total;
}

std::vector<std::uint32_t> colex_unrank(BigCount rank, std::uint32_t universe, std::uint32_t m) {
    if (m > universe) throw DomainError("colex_unrank: subset larger than universe");
    std::vector<std::uint32_t> out(m);
    if (m == 0) {
        if (rank != 0) throw DomainError("colex_unrank: rank out of range");
        return out;
    }
    if (rank < 0 || rank >= binomial(universe, m)) throw DomainError("colex_unrank: rank out of range");
    if (m == universe) {
        std::iota(out.begin(), out.end(), 0u);
        return out;
    }
    std::uint64_t c = universe - 1;
    BigCount b = binomial(c, m);  // C(c, j)
    for (std::uint64_t j = m; j >= 1; --j) {
        while (b > rank) {
            // C(c-1, j) = C(c, j) (c-j) / c
            b *= c - j;
            b /= c;
            --c;
        }
        out[j - 1] = static_cast<std::uint32_t>(c);
        rank -= b;
        if (j == 1) break;
        if (c == j - 1) {
            // Remaining positions are forced: j-2, ..., 0.
            for (std::uint64_t t = j - 1; t >= 1; --t) out[t - 1] = static_cast<std::uint32_t>(t - 1);
            break;
        }
        // C(c-1, j-1) = C(c, j) j / c
        b *= j;
        b /= c;
        --c;
    }
    return out;
}

BigCount rank_in_class(const ErrorString& e, const WeightVector& cls) {
    if (e.length() != cls.length()) throw DomainError("rank_in_class: length mismatch");
    if (e.symbol_counts(cls.alphabet_size()) != cls) throw DomainError("rank_in_class: weight vector mismatch");
    std::vector<std::uint32_t> free(e.length());
    for (std::uint32_t i = 0; i < free.size(); ++i) free[i] = i;

    BigCount rank = 0;
    BigCount radix = 1;
    for (std::size_t s = 1; s < cls.alphabet_size(); ++s) {
        const auto rel = positions_of(e, static_cast<std::uint8_t>(s), free);
        rank += radix * colex_rank(rel);
        radix *= binomial(free.size(), rel.size());
        std::vector<std::uint32_t> next;
        next.reserve(free.size() - rel.size());
        std::size_t k = 0;
        for (std::uint32_t i = 0; i < free.size(); ++i) {
            if (k < rel.size() && rel[k] == i) {
                ++k;
                continue;
            }
            next.push_back(free[i]);
        }
        free = std::move(next);
    }
    return rank;
}

ErrorString unrank_in_class(const BigCount& rank, const WeightVector& cls) {
    if (rank < 0 || rank >= multinomial(cls)) throw DomainError("unrank_in_class: rank out of range");
    ErrorString e;
    e.symbols.assign(cls.length(), 0);
    std::vector<std::uint32_t> free(cls.length());
    for (std::uint32_t i = 0; i < free.size(); ++i) free[i] = i;

    BigCount rest = rank;
    for (std::size_t s = 1; s < cls.alphabet_size(); ++s) {
        const BigCount radix = binomial(free.size(), cls[s]);
        const BigCount digit = rest % radix;
        rest /= radix;
        const auto rel = colex_unrank(digit, static_cast<std::uint32_t>(free.size()), cls[s]);
        std::vector<std::uint32_t> next;
        next.reserve(free.size() - rel.size());
        std::size_t k = 0;
        for (std::uint32_t i = 0; i < free.size(); ++i) {
            if (k < rel.size() && rel[k] == i) {
                e.symbols[free[i]] = static_cast<std::uint8_t>(s);
                ++k;
                continue;
            }
            next.push_back(free[i]);
        }
        free = std::move(next);
    }
    return e;
}

BigCount rank_in_weight_class(const ErrorString& e, std::uint32_t w, std::size_t error_letters) {
    if (e.weight() != w) throw DomainError("rank_in_weight_class: weight mismatch");
    std::vector<std::uint32_t> positions;
    positions.reserve(w);
    BigCount labels = 0;
    BigCount place = 1;
    for (std::uint32_t i = 0; i < e.length(); ++i) {
        const auto sym = e.symbols[i];
        if (sym == 0) continue;
        if (sym > error_letters) throw DomainError("rank_in_weight_class: symbol outside alphabet");
        positions.push_back(i);
        labels += place * (sym - 1);
        place *= error_letters;
    }
    return colex_rank(positions) + binomial(e.length(), w) * labels;
}

ErrorString unrank_in_weight_class(const BigCount& rank, std::uint32_t n, std::uint32_t w,
                                   std::size_t error_letters) {
    const BigCount positions_count = binomial(n, w);
    const BigCount size = positions_count * boost::multiprecision::pow(BigCount(error_letters), w);
    if (rank < 0 || rank >= size) throw DomainError("unrank_in_weight_class: rank out of range");
    const auto positions = colex_unrank(BigCount(rank % positions_count), n, w);
    BigCount labels = rank / positions_count;
    ErrorString e;
    e.symbols.assign(n, 0);
    for (auto pos : positions) {
        const BigCount digit = labels % error_letters;
        labels /= error_letters;
        e.symbols[pos] = static_cast<std::uint8_t>(digit.convert_to<unsigned>() + 1);
    }
    return e;
}

BigCount class_rank(const ChannelModel& channel, const ErrorString& e, const WeightVector& cls) {
    if (channel.groups_by_weight()) {
        if (e.length() != cls.length()) throw DomainError("class_rank: length mismatch");
        return rank_in_weight_class(e, cls[1], channel.alphabet_size() - 1);
    }
    return rank_in_class(e, cls);
}

ErrorString class_unrank(const ChannelModel& channel, const BigCount& rank, const WeightVector& cls) {
    if (channel.groups_by_weight()) {
        return unrank_in_weight_class(rank, cls.length(), cls[1], channel.alphabet_size() - 1);
    }
    return unrank_in_class(rank, cls);
}

BigCount floor_scaled(const BigCount& count, double log2_factor) {
    if (count <= 0) return 0;
    if (std::isnan(log2_factor)) throw DomainError("floor_scaled: NaN factor");
    if (log2_factor >= 0.0) return count;
    if (log2_factor == -std::numeric_limits<double>::infinity()) return 0;
    const double whole = std::floor(log2_factor);
    double mant = std::exp2(log2_factor - whole);  // [1, 2)
    mant = std::nextafter(mant, 0.0);
    const auto scaled = static_cast<std::uint64_t>(std::ldexp(mant, 53));
    const double shift = 53.0 - whole;
    if (shift > static_cast<double>(bit_length(count)) + 64.0) return 0;
    return (count * scaled) >> static_cast<std::size_t>(shift);
}

StegoCodebook StegoCodebook::compile(const WeightClassTable& table) {
    StegoCodebook book;
    book.length_ = table.length;
    book.channel_ = table.channel;
    book.window_ = table.window;
    book.truncation_mass_ = table.truncation_mass;
    book.contains_atypical_members_ = table.contains_atypical_members;
    book.exact_ = table.length <= kExactCodebookLength;

    const auto& entries = table.entries;
    if (entries.empty()) throw DomainError("rate zero: typical window admits no classes");

    std::vector<BigCount> c_values(entries.size());
    if (book.exact_) {
        std::vector<ExactProb> exact;
        exact.reserve(entries.size());
        for (const auto& c : entries) exact.push_back(exact_string_prob(table.channel, c.weights));
        std::size_t best = 0;
        for (std::size_t i = 1; i < exact.size(); ++i) {
            if (exact[i].num * exact[best].den > exact[best].num * exact[i].den) best = i;
        }
        const ExactProb& q = exact[best];
        if (q.num == 0) throw DomainError("rate zero: every admitted class has probability zero");
        book.q_log_ = entries[best].string_logprob;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            BigCount c = (entries[i].size * exact[i].num * q.den) / (exact[i].den * q.num);
            c_values[i] = std::min(c, entries[i].size);
        }
    } else {
        LogProb q = LogProb::zero();
        for (const auto& c : entries) q = std::max(q, c.string_logprob);
        if (q.is_zero()) throw DomainError("rate zero: every admitted class has probability zero");
        book.q_log_ = q;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const auto& c = entries[i];
            c_values[i] = c.string_logprob.is_zero() ? BigCount(0)
                                                     : floor_scaled(c.size, c.string_logprob.value - q.value);
        }
    }

    BigCount offset = 0;
    book.max_subsets_ = 1;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& c = entries[i];
        if (c_values[i] == 0) {
            book.dropped_.push_back({c.weights, c.size, c.string_logprob});
            continue;
        }
        BigCount n_subsets = c.size / c_values[i];
        book.max_subsets_ = std::max(book.max_subsets_, n_subsets);
        book.classes_.push_back({c.weights, c.size, c.string_logprob, c_values[i], std::move(n_subsets), offset});
        offset += c_values[i];
    }
    if (book.classes_.empty()) throw DomainError("rate zero: every class floors to zero codewords");
    book.total_ = offset;
    book.message_bits_ = log2_big(book.total_);
    return book;
}

StegoCodebook StegoCodebook::compile(const ChannelModel& channel, std::uint32_t n, const TypicalWindow& window,
                                     CompileOptions options) {
    return compile(build_table(channel, n, window, options.table));
}

StegoCodebook StegoCodebook::compile(const ChannelModel& channel, std::uint32_t n, double coverage,
                                     CompileOptions options) {
    return compile(channel, n, make_window(channel, n, coverage), options);
}

const CodebookClass* StegoCodebook::find(const WeightVector& weights) const {
    auto it = std::lower_bound(classes_.begin(), classes_.end(), weights,
                               [](const CodebookClass& c, const WeightVector& v) { return c.weights < v; });
    if (it == classes_.end() || it->weights != weights) return nullptr;
    return &*it;
}

const DroppedClass* StegoCodebook::find_dropped(const WeightVector& weights) const {
    for (const auto& d : dropped_) {
        if (d.weights == weights) return &d;
    }
    return nullptr;
}

const CodebookClass& StegoCodebook::class_for_message(const BigCount& m) const {
    if (m < 0 || m >= total_) throw DomainError("message index outside [0, C)");
    auto it = std::upper_bound(classes_.begin(), classes_.end(), m,
                               [](const BigCount& v, const CodebookClass& c) { return v < c.offset; });
    return *std::prev(it);
}

ErrorString encode_with_subset(const StegoCodebook& book, const Message& m, const BigCount& subset) {
    const auto& cls = book.class_for_message(m.index);
    if (subset < 0 || subset >= cls.n_subsets) throw DomainError("subset index outside [0, n_subsets)");
    const BigCount rank = subset * cls.c_class + (m.index - cls.offset);
    return class_unrank(book.channel(), rank, cls.weights);
}

ErrorString encode(const StegoCodebook& book, const Message& m, KeyStream& key) {
    if (m.index < 0 || m.index >= book.total()) throw DomainError("message index outside [0, C)");
    const SubsetDraw draw(key, book.max_subsets());
    const auto& cls = book.class_for_message(m.index);
    return encode_with_subset(book, m, draw.index(cls.n_subsets));
}

Message decode(const StegoCodebook& book, const ErrorString& e, KeyStream& key) {
    const SubsetDraw draw(key, book.max_subsets());
    if (e.length() != book.length()) throw DomainError("error string length differs from block length");
    const WeightVector weights = class_weights(book.channel(), e);
    const CodebookClass* cls = book.find(weights);
    if (cls == nullptr) {
        if (book.window().admits(weights)) {
            throw NotACodewordError("string's class carries no codewords");
        }
        throw AtypicalStringError("string's weight class lies outside the typical window");
    }
    const BigCount rank = class_rank(book.channel(), e, cls->weights);
    const BigCount lo = draw.index(cls->n_subsets) * cls->c_class;
    if (rank < lo || rank >= lo + cls->c_class) {
        throw NotACodewordError("string lies outside the keyed subset");
    }
    return {cls->offset + (rank - lo)};
}

RateReport achievable_rate(const StegoCodebook& book) {
    RateReport r;
    r.message_bits = book.message_bits();
    r.asymptote_bits = book.length() * channel_entropy(book.channel());
    r.ratio = r.asymptote_bits > 0.0 ? r.message_bits / r.asymptote_bits : 0.0;
    r.delta = book.window().delta;
    r.full_support = book.window().full_support;
    return r;
}

RateReport achievable_rate(const ChannelModel& channel, std::uint32_t n, double coverage) {
    return achievable_rate(StegoCodebook::compile(channel, n, coverage));
}

}  // namespace qstego
