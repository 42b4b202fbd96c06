#include "qstego/key_budget.hpp"

#include <cmath>

namespace qstego {

double key_formula(double p, std::uint32_t n, double delta) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("key_formula: p must lie in (0,1)");
    return 2.0 * n * p * delta * std::log2((1.0 - p) / p);
}

std::uint64_t otp_width(const StegoCodebook& book) { return bit_length(book.total()) - 1; }

KeyBudgetReport key_cost(const StegoCodebook& book) {
    KeyBudgetReport r;
    r.n_subsets_max = book.max_subsets();
    r.k_measured = SubsetDraw::bits_for(r.n_subsets_max);
    r.otp_bits = otp_width(book);
    r.delta = book.window().delta;
    const ChannelModel& ch = book.channel();
    if (ch.kind() == ChannelKind::BitFlip && !book.window().full_support) {
        const double p = ch.error_probability();
        r.k_formula = p > 0.0 && p < 1.0 ? key_formula(p, book.length(), r.delta) : 0.0;
    }
    return r;
}

KeyBudgetReport key_cost(const ChannelModel& channel, std::uint32_t n, double coverage, WindowOptions options) {
    return key_cost(StegoCodebook::compile(channel, n, make_window(channel, n, coverage, options)));
}

}  // namespace qstego
