#include "oracles.hpp"

#include "qstego/errors.hpp"
#include "qstego/qecc_demo.hpp"
#include "qstego/secrecy_analysis.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace qstego;

namespace {

struct BookCase {
    ChannelModel ch;
    std::uint32_t n;
    double d;
};

std::vector<BookCase> small_books() {
    return {{ChannelModel::bit_flip(0.1), 10, 1.0},     {ChannelModel::bit_flip(0.2), 12, 1.5},
            {ChannelModel::bit_flip(0.3), 12, 0.5},     {ChannelModel::bit_flip(0.1), 12, 3.0},
            {ChannelModel::depolarizing(0.15), 8, 1.0}, {ChannelModel::depolarizing(0.3), 7, 2.0},
            {ChannelModel::random_unitary({0.6, 0.3, 0.1}), 10, 1.0}};
}

StegoCodebook book_of(const BookCase& c) {
    return StegoCodebook::compile(c.ch, c.n, make_window(c.ch, c.n, c.d, {true}));
}

}  // namespace

TEST(Induced, ClosedFormMatchesExhaustiveTv) {
    for (const auto& c : small_books()) {
        const auto book = book_of(c);
        const auto r = tv_to_channel(book);
        EXPECT_NEAR(r.tv_distance, oracle::brute_tv(book), 1e-10) << c.ch.to_spec() << " N=" << c.n;
        EXPECT_NEAR(r.truncation_mass, oracle::brute_truncation(c.ch, book.window()), 1e-12);
        EXPECT_GE(r.tv_distance + 1e-15, r.truncation_mass);
        EXPECT_NEAR(r.rounding_residual, r.tv_distance - r.truncation_mass, 1e-15);
    }
}

TEST(Induced, PerStringProbabilityMatchesExhaustive) {
    for (const auto& c : small_books()) {
        const auto book = book_of(c);
        const auto dist = oracle::brute_induced(book);
        const std::size_t k = c.ch.alphabet_size();
        for (std::uint64_t i = 0; i < dist.size(); ++i) {
            const auto e = oracle::string_at(i, c.n, k);
            ASSERT_NEAR(induced_string_logprob(book, e).prob(), dist[i], 1e-15);
            ASSERT_NEAR(channel_string_logprob(c.ch, e).prob(), oracle::direct_prob(c.ch, e), 1e-15);
        }
    }
}

TEST(Induced, ClassMassesMatchExhaustive) {
    const BookCase c{ChannelModel::bit_flip(0.1), 10, 1.0};
    const auto book = book_of(c);
    const auto dist = oracle::brute_induced(book);
    const auto induced = induced_distribution(book);
    EXPECT_NEAR(induced.total_mass, 1.0, 1e-14);
    for (const auto& ic : induced.classes) {
        double brute_induced = 0.0, brute_channel = 0.0;
        for (std::uint64_t i = 0; i < dist.size(); ++i) {
            const auto e = oracle::string_at(i, 10, 2);
            if (class_weights(c.ch, e) != ic.weights) continue;
            brute_induced += dist[i];
            brute_channel += oracle::direct_prob(c.ch, e);
        }
        EXPECT_NEAR(ic.induced_mass, brute_induced, 1e-14);
        EXPECT_NEAR(ic.channel_mass, brute_channel, 1e-14);
        if (ic.covered > 0) {
            EXPECT_NEAR(ic.covered_string_logprob.prob() * ic.covered.convert_to<double>(), ic.induced_mass, 1e-14);
        }
    }
}

TEST(Induced, NormalizedAcrossRegimes) {
    for (const auto& ch : {ChannelModel::bit_flip(0.05), ChannelModel::depolarizing(0.2)}) {
        for (std::uint32_t n : {50u, 500u, 3000u}) {
            const auto book = StegoCodebook::compile(ch, n, make_window(ch, n, 2.0, {true}));
            EXPECT_NEAR(induced_distribution(book).total_mass, 1.0, 1e-12);
        }
    }
}

TEST(Tv, FairCoinFullWindowIsExact) {
    const auto ch = ChannelModel::bit_flip(0.5);
    for (std::uint32_t n : {4u, 12u, 64u, 200u}) {
        const auto r = tv_to_channel(StegoCodebook::compile(ch, n, full_window(ch, n)));
        EXPECT_NEAR(r.tv_distance, 0.0, 1e-14);
        EXPECT_TRUE(r.full_support);
        EXPECT_EQ(r.classes_dropped, 0u);
    }
}

TEST(Tv, ShrinksAsWindowWidens) {
    const auto ch = ChannelModel::bit_flip(0.1);
    double last = 1.0;
    for (double d : {1.0, 1.5, 2.0, 2.5, 3.0}) {
        const auto r = tv_to_channel(StegoCodebook::compile(ch, 200, d));
        EXPECT_LT(r.tv_distance, last) << d;
        last = r.tv_distance;
    }
}

TEST(Tv, ReportsWindowParameters) {
    const auto ch = ChannelModel::depolarizing(0.1);
    const auto book = StegoCodebook::compile(ch, 300, 2.0);
    const auto r = tv_to_channel(book);
    EXPECT_DOUBLE_EQ(r.delta_param, book.window().delta);
    EXPECT_TRUE(r.contains_atypical_members);
    EXPECT_FALSE(r.full_support);
}

TEST(Entropy, Examples) {
    EXPECT_NEAR(entropy_sigma_e(ChannelModel::bit_flip(0.1), 100).bits, 46.900, 5e-4);
    EXPECT_NEAR(entropy_sigma_e(ChannelModel::depolarizing(0.1), 100).bits, 62.749, 5e-4);
    EXPECT_TRUE(entropy_sigma_e(ChannelModel::bit_flip(0.1), 100).proven_maximum);
    EXPECT_FALSE(entropy_sigma_e(ChannelModel::depolarizing(0.1), 100).proven_maximum);
}

TEST(Entropy, BitFlipMatchesFullTableEntropy) {
    const auto ch = ChannelModel::bit_flip(0.2);
    for (std::uint32_t n : {10u, 100u}) {
        const auto table = build_table(ch, n, full_window(ch, n));
        EXPECT_NEAR(entropy_sigma_e(ch, n).bits, n * effective_entropy(table), 1e-9);
    }
}

TEST(BoundTerms, LimitsAndMonotonicity) {
    EXPECT_EQ(g_term(1000, 0.0), 0.0);
    EXPECT_EQ(f_term(1000, 0.0), 0.0);
    double g_last = 0.0, f_last = 0.0;
    for (double x : {0.001, 0.01, 0.1, 0.3}) {
        EXPECT_GT(g_term(100, x), g_last);
        EXPECT_GT(f_term(100, x), f_last);
        g_last = g_term(100, x);
        f_last = f_term(100, x);
        EXPECT_LT(g_term(100, x), g_term(200, x));
        EXPECT_LT(f_term(100, x), f_term(200, x));
    }
}

TEST(UpperBound, Examples) {
    const auto ch = ChannelModel::bit_flip(0.1);
    const auto zero = upper_bound(ch, 1000, 0.0, 0.0, 0.0);
    EXPECT_DOUBLE_EQ(zero.m_upper, zero.h_sigma_e);

    const auto r = upper_bound(ch, 1000, 0.01, 0.01, 0.0);
    const double expected = 1000 * h2(0.1) + 10 + h2(0.01) + 10 + 1.01 * h2(0.01 / 1.01);
    EXPECT_NEAR(r.m_upper, expected, 1e-10);
    // Frozen from a 50-digit evaluation.
    EXPECT_NEAR(r.m_upper, 489.15732413298174, 1e-9);

    const double m = StegoCodebook::compile(ch, 1000, 2.0).message_bits();
    EXPECT_NO_THROW(upper_bound(ch, 1000, 0.01, 0.01, m));
}

TEST(UpperBound, Errors) {
    const auto ch = ChannelModel::bit_flip(0.1);
    EXPECT_THROW(upper_bound(ch, 100, 1.0, 0.1, 0.0), DomainError);
    EXPECT_THROW(upper_bound(ch, 100, 0.1, -0.1, 0.0), DomainError);
    EXPECT_THROW(upper_bound(ch, 100, std::nan(""), 0.1, 0.0), DomainError);
    EXPECT_THROW(upper_bound(ch, 100, 0.0, 0.0, 47.0), IntegrityError);
}

TEST(UpperBound, DominatesCompiledRate) {
    for (double p : {0.05, 0.1, 0.2}) {
        for (const auto& ch : {ChannelModel::bit_flip(p), ChannelModel::depolarizing(p)}) {
            for (std::uint32_t n : {100u, 1000u}) {
                const auto book = StegoCodebook::compile(ch, n, make_window(ch, n, 2.0, {true}));
                const double eps = tv_to_channel(book).tv_distance;
                EXPECT_LE(book.message_bits(), upper_bound(ch, n, 0.0, 0.0, 0.0).m_upper);
                EXPECT_NO_THROW(upper_bound(ch, n, std::min(eps, 0.99), 0.0, book.message_bits()));
            }
        }
    }
}

namespace {

// Three-qubit repetition code on span{|000>, |111>}.
ComplexMatrix repetition_projector() {
    ComplexMatrix p = ComplexMatrix::Zero(8, 8);
    p(0, 0) = 1.0;
    p(7, 7) = 1.0;
    return p;
}

}  // namespace

TEST(AlphaBound, IdentityOnlyIsZero) {
    const auto p = repetition_projector();
    const auto r = kl_alpha_bound({ComplexMatrix::Identity(8, 8)}, p);
    EXPECT_NEAR(r.bound_bits, 0.0, 1e-12);
    EXPECT_NEAR(r.alpha_diag[0], 1.0, 1e-12);
}

TEST(AlphaBound, BitFlipsOnRepetitionCode) {
    const double p = 0.1;
    const std::vector<double> w = {std::pow(1 - p, 3), p * (1 - p) * (1 - p), p * (1 - p) * (1 - p),
                                   p * (1 - p) * (1 - p)};
    std::vector<ComplexMatrix> kraus;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto pauli = i == 0 ? PauliString::parse("III") : PauliString{1u << (3 - i), 0, 3};
        kraus.push_back(std::sqrt(w[i]) * pauli.matrix());
    }
    const auto r = kl_alpha_bound(kraus, repetition_projector());
    double total = 0.0;
    for (double x : w) total += x;
    std::vector<double> normalized;
    for (double x : w) normalized.push_back(x / total);
    EXPECT_NEAR(r.renormalization, 1.0 / total, 1e-12);
    EXPECT_NEAR(r.bound_bits, shannon_entropy(normalized), 1e-10);
    EXPECT_LT(r.worst_residual, 1e-12);
}

TEST(AlphaBound, PhaseFlipIsNotCorrectable) {
    const std::vector<ComplexMatrix> kraus = {std::sqrt(0.9) * ComplexMatrix::Identity(8, 8),
                                              std::sqrt(0.1) * PauliString::parse("ZII").matrix()};
    try {
        kl_alpha_bound(kraus, repetition_projector());
        FAIL() << "expected DomainError";
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("not correctable"), std::string::npos);
    }
}

TEST(AlphaBound, InvariantUnderUnitaryRemixing) {
    const FiveQubitCode code;
    const auto weights = truncated_depolarizing_weights(code, 0.1);
    const auto kraus = weighted_error_kraus(code, weights);
    const double base = kl_alpha_bound(kraus, code.projector()).bound_bits;
    std::mt19937_64 rng(11);
    const auto u = random_unitary_matrix(16, rng);
    const auto mixed = kl_alpha_bound(remix_kraus(kraus, u), code.projector());
    EXPECT_NEAR(mixed.bound_bits, base, 1e-9);
    EXPECT_GT((mixed.alpha - mixed.alpha.diagonal().asDiagonal().toDenseMatrix()).norm(), 1e-3);
}

TEST(AlphaBound, DimensionErrors) {
    EXPECT_THROW(kl_alpha_bound({}, repetition_projector()), DomainError);
    EXPECT_THROW(kl_alpha_bound({ComplexMatrix::Identity(4, 4)}, repetition_projector()), DomainError);
    EXPECT_THROW(kl_alpha_bound({ComplexMatrix::Identity(8, 8)}, ComplexMatrix::Zero(8, 8)), DomainError);
}
