#include "qstego/channels.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>

namespace qstego {

namespace {

constexpr std::string_view kLetters = "IXYZABCDEFGHJKLMNOPQRSTUVW";
constexpr double kRoundingSlack = 1e-9;

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

double parse_probability(std::string_view token) {
    double value = 0.0;
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    auto res = std::from_chars(first, last, value);
    if (token.empty() || res.ec != std::errc() || res.ptr != last) {
        throw ChannelSpecError("invalid probability '" + std::string(token) + "'", std::string(token));
    }
    return value;
}

void validate_probs(const std::vector<double>& probs) {
    if (probs.size() < 2) throw DomainError("channel needs at least two outcomes");
    if (probs.size() > kLetters.size()) throw DomainError("channel alphabet too large");
    CompensatedSum total;
    for (double p : probs) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw DomainError("channel probability " + format_double(p) + " outside [0,1]");
        }
        total.add(p);
    }
    if (std::abs(total.value() - 1.0) > 1e-12) {
        throw DomainError("channel probabilities sum to " + format_double(total.value()));
    }
}

}  // namespace

ChannelModel::ChannelModel(ChannelKind kind, std::vector<double> probs, double error_probability)
    : kind_(kind),
      probs_(std::move(probs)),
      error_probability_(error_probability),
      alphabet_(kLetters.substr(0, probs_.size())) {
    validate_probs(probs_);
}

ChannelModel ChannelModel::bit_flip(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("bit flip p outside [0,1]");
    return ChannelModel(ChannelKind::BitFlip, {1.0 - p, p}, p);
}

ChannelModel ChannelModel::depolarizing(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("depolarizing p outside [0,1]");
    return ChannelModel(ChannelKind::Depolarizing, {1.0 - p, p / 3, p / 3, p / 3}, p);
}

ChannelModel ChannelModel::random_unitary(std::vector<double> probs) {
    validate_probs(probs);
    const double err = 1.0 - probs.front();
    return ChannelModel(ChannelKind::RandomUnitary, std::move(probs), err);
}

ChannelModel ChannelModel::parse(std::string_view spec) {
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos) {
        throw ChannelSpecError("channel spec '" + std::string(spec) + "' lacks ':'", std::string(spec));
    }
    const auto name = spec.substr(0, colon);
    auto params = spec.substr(colon + 1);
    if (!params.starts_with("p=")) {
        throw ChannelSpecError("expected 'p=' in channel spec, got '" + std::string(params) + "'",
                               std::string(params));
    }
    params.remove_prefix(2);

    std::vector<double> values;
    while (true) {
        const auto comma = params.find(',');
        values.push_back(parse_probability(params.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        params.remove_prefix(comma + 1);
    }

    try {
        if (name == "bitflip" || name == "depol") {
            if (values.size() != 1) {
                throw ChannelSpecError(std::string(name) + " takes exactly one probability",
                                       std::string(spec.substr(colon + 1)));
            }
            return name == "bitflip" ? bit_flip(values[0]) : depolarizing(values[0]);
        }
        if (name == "ru") return random_unitary(std::move(values));
    } catch (const ChannelSpecError&) {
        throw;
    } catch (const DomainError& e) {
        throw ChannelSpecError(e.what(), std::string(spec.substr(colon + 1)));
    }
    throw ChannelSpecError("unknown channel '" + std::string(name) + "'", std::string(name));
}

std::vector<double> ChannelModel::class_probs() const {
    if (groups_by_weight()) return {1.0 - error_probability_, error_probability_};
    return probs_;
}

std::string ChannelModel::to_spec() const {
    switch (kind_) {
        case ChannelKind::BitFlip:
            return "bitflip:p=" + format_double(error_probability_);
        case ChannelKind::Depolarizing:
            return "depol:p=" + format_double(error_probability_);
        case ChannelKind::RandomUnitary: {
            std::string s = "ru:p=";
            for (std::size_t i = 0; i < probs_.size(); ++i) {
                if (i) s += ',';
                s += format_double(probs_[i]);
            }
            return s;
        }
    }
    return {};
}

bool TypicalWindow::admits(const WeightVector& weights) const {
    if (weights.length() != length || weights.alphabet_size() != ranges.size()) return false;
    for (std::size_t i = 0; i < ranges.size(); ++i) {
        if (!ranges[i].contains(weights[i])) return false;
    }
    return true;
}

TypicalWindow make_window(const ChannelModel& channel, std::uint32_t n, double coverage,
                          WindowOptions options) {
    if (n == 0) throw DomainError("block length must be positive");
    if (!(coverage > 0.0) || !std::isfinite(coverage)) throw DomainError("coverage D must be positive");
    const auto probs = channel.class_probs();
    const double nn = static_cast<double>(n);

    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] > 0.0 && nn * probs[i] < 1.0) {
            throw DomainError("empty typical window: symbol " + std::to_string(i) + " ('" +
                              std::string(1, channel.alphabet()[std::min(i, channel.alphabet().size() - 1)]) +
                              "') has N*p = " + format_double(nn * probs[i]) + " < 1");
        }
    }

    double delta = 0.0;
    if (channel.groups_by_weight()) {
        const double p = channel.error_probability();
        if (!(p > 0.0 && p < 1.0)) throw DomainError("typical window needs 0 < p < 1");
        delta = coverage * std::sqrt((1.0 - p) / (p * nn));
    } else {
        for (double p : probs) {
            if (p > 0.0 && p < 1.0) delta = std::max(delta, coverage * std::sqrt((1.0 - p) / (p * nn)));
        }
    }
    if (!(delta > 0.0)) throw DomainError("typical window has zero width");
    if (delta >= 1.0 && !options.allow_wide) {
        throw DomainError("typical window delta = " + format_double(delta) +
                          " >= 1; increase N or decrease D");
    }

    TypicalWindow w;
    w.length = n;
    w.delta = delta;
    w.coverage = coverage;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double mean = nn * probs[i];
        const double slack = kRoundingSlack * std::max(1.0, mean);
        const double lo = std::max(0.0, std::ceil(mean * (1.0 - delta) - slack));
        const double hi = std::min(nn, std::floor(mean * (1.0 + delta) + slack));
        if (lo > hi) {
            throw DomainError("empty typical window for symbol " + std::to_string(i));
        }
        w.ranges.push_back({static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(hi)});
    }
    std::uint64_t sum_lo = 0, sum_hi = 0;
    for (const auto& r : w.ranges) {
        sum_lo += r.lo;
        sum_hi += r.hi;
    }
    if (sum_lo > n || sum_hi < n) {
        throw DomainError("typical window admits no weight vector summing to N");
    }
    return w;
}

TypicalWindow full_window(const ChannelModel& channel, std::uint32_t n) {
    if (n == 0) throw DomainError("block length must be positive");
    TypicalWindow w;
    w.length = n;
    w.delta = 1.0;
    w.coverage = std::numeric_limits<double>::infinity();
    w.full_support = true;
    w.ranges.assign(channel.class_probs().size(), SymbolRange{0, n});
    return w;
}

const WeightClass* WeightClassTable::find(const WeightVector& weights) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), weights,
                               [](const WeightClass& c, const WeightVector& v) { return c.weights < v; });
    if (it == entries.end() || it->weights != weights) return nullptr;
    return &*it;
}

namespace {

void build_weight_grouped(const ChannelModel& channel, std::uint32_t n, const TypicalWindow& window,
                          WeightClassTable& table) {
    // Per-string probabilities use the stored symbol probabilities.
    const double p_symbol = channel.probs()[1];
    const double p_identity = channel.probs()[0];
    const bool depol = channel.kind() == ChannelKind::Depolarizing;
    const double log_mult = depol ? std::log2(3.0) : 0.0;

    auto string_lp = [&](std::uint32_t w) -> LogProb {
        CompensatedSum acc;
        if (w > 0) {
            if (p_symbol == 0.0) return LogProb::zero();
            acc.add(w * std::log2(p_symbol));
        }
        if (n - w > 0) {
            if (p_identity == 0.0) return LogProb::zero();
            acc.add((n - w) * std::log2(p_identity));
        }
        return {acc.value()};
    };

    // Walk w = 0..N once: log2 C(N,w) incrementally for the truncation mass.
    CompensatedSum truncation;
    CompensatedSum log_binom;
    std::vector<std::uint32_t> admitted;
    for (std::uint32_t w = 0; w <= n; ++w) {
        if (w > 0) {
            log_binom.add(std::log2(static_cast<double>(n - w + 1)));
            log_binom.add(-std::log2(static_cast<double>(w)));
        }
        const WeightVector wv({n - w, w});
        if (window.admits(wv)) {
            admitted.push_back(w);
            continue;
        }
        const LogProb lp = string_lp(w);
        if (lp.is_zero()) continue;
        truncation.add(std::exp2(log_binom.value() + w * log_mult + lp.value));
    }

    // Exact class sizes, incrementally across the admitted range.
    if (!admitted.empty()) {
        const std::uint32_t lo = admitted.front();
        BigCount binom = binomial(n, lo);
        BigCount pow3 = depol ? BigCount(boost::multiprecision::pow(BigCount(3), lo)) : BigCount(1);
        std::uint32_t w = lo;
        std::vector<WeightClass> classes;
        for (std::uint32_t target : admitted) {
            while (w < target) {
                binom *= n - w;
                binom /= w + 1;
                if (depol) pow3 *= 3;
                ++w;
            }
            classes.push_back({WeightVector({n - w, w}), binom * pow3, string_lp(w)});
        }
        // Lexicographic on (N - w, w) is descending w.
        std::reverse(classes.begin(), classes.end());
        table.entries = std::move(classes);
    }
    table.truncation_mass = std::max(0.0, truncation.value());
}

void enumerate_compositions(const std::vector<SymbolRange>& ranges, std::uint32_t n,
                            const std::function<void(const std::vector<std::uint32_t>&)>& visit) {
    const std::size_t k = ranges.size();
    std::vector<std::uint64_t> suffix_lo(k + 1, 0), suffix_hi(k + 1, 0);
    for (std::size_t i = k; i-- > 0;) {
        suffix_lo[i] = suffix_lo[i + 1] + ranges[i].lo;
        suffix_hi[i] = suffix_hi[i + 1] + ranges[i].hi;
    }
    std::vector<std::uint32_t> counts(k, 0);
    std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t i, std::uint32_t remaining) {
        if (i + 1 == k) {
            if (ranges[i].contains(remaining)) {
                counts[i] = remaining;
                visit(counts);
            }
            return;
        }
        for (std::uint64_t c = ranges[i].lo; c <= ranges[i].hi && c <= remaining; ++c) {
            const std::uint64_t rest = remaining - c;
            if (rest < suffix_lo[i + 1] || rest > suffix_hi[i + 1]) continue;
            counts[i] = static_cast<std::uint32_t>(c);
            rec(i + 1, static_cast<std::uint32_t>(rest));
        }
    };
    rec(0, n);
}

void build_random_unitary(const ChannelModel& channel, std::uint32_t n, const TypicalWindow& window,
                          std::size_t cap, WeightClassTable& table) {
    const auto probs = channel.probs();
    std::size_t visited = 0;
    enumerate_compositions(window.ranges, n, [&](const std::vector<std::uint32_t>& counts) {
        if (++visited > cap) {
            throw CapacityError("random-unitary table exceeds enumeration cap of " + std::to_string(cap) +
                                " weight vectors; use sampling mode");
        }
        WeightVector wv(counts, n);
        LogProb lp = string_logprob(wv, probs);
        table.entries.push_back({wv, multinomial(wv), lp});
    });

    // Truncated mass: enumerate the complement when the full composition count is small.
    const BigCount all_vectors = binomial(n + channel.alphabet_size() - 1, channel.alphabet_size() - 1);
    if (all_vectors <= cap) {
        CompensatedSum truncation;
        const std::vector<SymbolRange> full(channel.alphabet_size(), SymbolRange{0, n});
        enumerate_compositions(full, n, [&](const std::vector<std::uint32_t>& counts) {
            WeightVector wv(counts, n);
            if (window.admits(wv)) return;
            const LogProb lp = scale(multinomial(wv), string_logprob(wv, probs));
            if (!lp.is_zero()) truncation.add(lp.prob());
        });
        table.truncation_mass = truncation.value();
    } else {
        CompensatedSum inside;
        for (const auto& c : table.entries) inside.add(scale(c.size, c.string_logprob).prob());
        table.truncation_mass = std::max(0.0, 1.0 - inside.value());
    }
}

}  // namespace

WeightClassTable build_table(const ChannelModel& channel, std::uint32_t n, const TypicalWindow& window,
                             TableOptions options) {
    if (window.length != n || window.ranges.size() != channel.class_probs().size()) {
        throw DomainError("window was not built for this channel and block length");
    }
    WeightClassTable table{channel, n, window, {}, 0.0, channel.kind() == ChannelKind::Depolarizing};
    if (channel.groups_by_weight()) {
        build_weight_grouped(channel, n, window, table);
    } else {
        build_random_unitary(channel, n, window, options.enumeration_cap, table);
    }
    return table;
}

double effective_entropy(std::span<const ClassProbability> classes, std::uint32_t n) {
    if (n == 0) throw DomainError("effective_entropy: N must be positive");
    CompensatedSum mass, acc;
    for (const auto& c : classes) {
        const LogProb total = scale(c.multiplicity, c.string_logprob);
        if (total.is_zero()) continue;
        mass.add(total.prob());
        acc.add(-total.prob() * c.string_logprob.value);
    }
    if (mass.value() > 1.0 + 1e-9) throw DomainError("effective_entropy: class masses exceed 1");
    return acc.value() / n;
}

double effective_entropy(const WeightClassTable& table) {
    std::vector<ClassProbability> classes;
    classes.reserve(table.entries.size());
    for (const auto& c : table.entries) classes.push_back({c.string_logprob, c.size});
    return effective_entropy(classes, table.length);
}

double channel_entropy(const ChannelModel& channel) { return shannon_entropy(channel.probs()); }

}  // namespace qstego
