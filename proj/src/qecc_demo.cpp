#include "qstego/qecc_demo.hpp"

#include "qstego/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <bit>
#include <cmath>
#include <complex>

namespace qstego {

namespace {

using cd = std::complex<double>;

constexpr double kNormTolerance = 1e-10;
constexpr double kSpanTolerance = 1e-8;

const cd kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

ComplexVector embed_product(const ComplexVector& message, const ComplexVector& covertext) {
    ComplexVector out(message.size() * covertext.size());
    for (Eigen::Index m = 0; m < message.size(); ++m) {
        for (Eigen::Index l = 0; l < covertext.size(); ++l) out(m * covertext.size() + l) = message(m) * covertext(l);
    }
    return out;
}

}  // namespace

StateVector::StateVector(ComplexVector amplitudes, unsigned qubits) : amp_(std::move(amplitudes)), qubits_(qubits) {
    if (qubits_ == 0 || qubits_ > kMaxQubits) throw DomainError("state vector qubit count outside [1, 14]");
    if (amp_.size() != (Eigen::Index{1} << qubits_)) throw DomainError("state vector length is not 2^n");
    if (std::abs(amp_.squaredNorm() - 1.0) > kNormTolerance) throw DomainError("state vector not normalized");
}

StateVector StateVector::normalized(ComplexVector amplitudes, unsigned qubits) {
    const double norm = amplitudes.norm();
    if (!(norm > 0.0)) throw DomainError("cannot normalize a zero vector");
    amplitudes /= norm;
    return StateVector(std::move(amplitudes), qubits);
}

PauliString PauliString::parse(std::string_view letters) {
    if (letters.empty() || letters.size() > StateVector::kMaxQubits) throw DomainError("Pauli string length");
    PauliString p;
    p.qubits = static_cast<unsigned>(letters.size());
    for (unsigned q = 0; q < p.qubits; ++q) {
        const std::uint32_t bit = std::uint32_t{1} << (p.qubits - 1 - q);
        switch (letters[q]) {
            case 'I': break;
            case 'X': p.x |= bit; break;
            case 'Z': p.z |= bit; break;
            case 'Y': p.x |= bit; p.z |= bit; break;
            default: throw DomainError(std::string("unknown Pauli letter '") + letters[q] + "'");
        }
    }
    return p;
}

std::string PauliString::to_string() const {
    std::string s;
    for (unsigned q = 0; q < qubits; ++q) {
        const std::uint32_t bit = std::uint32_t{1} << (qubits - 1 - q);
        const bool bx = x & bit, bz = z & bit;
        s += bx ? (bz ? 'Y' : 'X') : (bz ? 'Z' : 'I');
    }
    return s;
}

bool PauliString::commutes_with(const PauliString& o) const {
    return (std::popcount(x & o.z) + std::popcount(z & o.x)) % 2 == 0;
}

unsigned PauliString::weight() const { return static_cast<unsigned>(std::popcount(x | z)); }

ComplexVector PauliString::apply(const ComplexVector& v) const {
    if (v.size() != (Eigen::Index{1} << qubits)) throw DomainError("Pauli/state dimension mismatch");
    const cd phase = kIPowers[std::popcount(x & z) % 4];
    ComplexVector out(v.size());
    for (Eigen::Index b = 0; b < v.size(); ++b) {
        const auto ub = static_cast<std::uint32_t>(b);
        const double sign = std::popcount(ub & z) % 2 ? -1.0 : 1.0;
        out(ub ^ x) = phase * sign * v(b);
    }
    return out;
}

ComplexMatrix PauliString::matrix() const {
    const Eigen::Index dim = Eigen::Index{1} << qubits;
    ComplexMatrix m(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c) m.col(c) = apply(ComplexVector::Unit(dim, c));
    return m;
}

double fidelity(const ComplexVector& a, const ComplexVector& b) { return std::norm(a.dot(b)); }

ComplexVector random_state(std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    ComplexVector v(static_cast<Eigen::Index>(dim));
    for (auto& a : v) a = {g(rng), g(rng)};
    return v / v.norm();
}

ComplexMatrix random_unitary_matrix(std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    const auto d = static_cast<Eigen::Index>(dim);
    ComplexMatrix z(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) z(i, j) = {g(rng), g(rng)};
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix column phases so the distribution is Haar.
    for (Eigen::Index i = 0; i < d; ++i) {
        const cd rii = r(i, i);
        q.col(i) *= std::abs(rii) > 0 ? rii / std::abs(rii) : cd{1.0};
    }
    return q;
}

FiveQubitCode::FiveQubitCode()
    : generators_{PauliString::parse("XZZXI"), PauliString::parse("IXZZX"), PauliString::parse("XIXZZ"),
                  PauliString::parse("ZXIXZ")},
      logical_x_(PauliString::parse("XXXXX")),
      logical_z_(PauliString::parse("ZZZZZ")) {
    for (const auto& a : generators_) {
        for (const auto& b : generators_) {
            if (!a.commutes_with(b)) throw IntegrityError("stabilizer generators do not commute");
        }
        if (!a.commutes_with(logical_x_) || !a.commutes_with(logical_z_)) {
            throw IntegrityError("logical operator outside the normalizer");
        }
    }
    if (logical_x_.commutes_with(logical_z_)) throw IntegrityError("logical X and Z commute");

    std::array<bool, kSyndromes> seen{};
    auto record = [&](const PauliString& e) {
        const std::uint32_t s = syndrome(e);
        if (seen[s]) throw IntegrityError("degenerate syndrome " + std::to_string(s) + " for " + e.to_string());
        seen[s] = true;
        by_syndrome_[s] = e;
    };
    record(PauliString::parse("IIIII"));
    for (unsigned q = 0; q < kPhysical; ++q) {
        for (char letter : {'X', 'Y', 'Z'}) {
            std::string s(kPhysical, 'I');
            s[q] = letter;
            record(PauliString::parse(s));
        }
    }

    const auto dim = static_cast<Eigen::Index>(kDim);
    projector_ = ComplexMatrix::Identity(dim, dim);
    for (const auto& g : generators_) projector_ = projector_ * (ComplexMatrix::Identity(dim, dim) + g.matrix()) * 0.5;
    if (std::abs(projector_.trace().real() - 2.0) > kNormTolerance) throw IntegrityError("codespace is not 2-dimensional");

    zero_l_ = projector_.col(0);
    zero_l_ /= zero_l_.norm();
    one_l_ = logical_x_.apply(zero_l_);
    if (fidelity(logical_z_.apply(zero_l_), zero_l_) < 1.0 - kNormTolerance ||
        std::abs(zero_l_.dot(logical_z_.apply(zero_l_)).real() - 1.0) > kNormTolerance) {
        throw IntegrityError("|0_L> is not the +1 eigenstate of Z_L");
    }
}

std::uint32_t FiveQubitCode::syndrome(const PauliString& e) const {
    if (e.qubits != kPhysical) throw DomainError("syndrome of a non-5-qubit Pauli");
    std::uint32_t s = 0;
    for (const auto& g : generators_) s = (s << 1) | (g.commutes_with(e) ? 0u : 1u);
    return s;
}

StateVector encode_covertext(const FiveQubitCode& code, const StateVector& covertext) {
    if (covertext.qubits() != 1) throw DomainError("covertext must be a single qubit");
    const auto& a = covertext.amplitudes();
    return StateVector(a(0) * code.zero_logical() + a(1) * code.one_logical(), FiveQubitCode::kPhysical);
}

StateVector stego_superpose(const FiveQubitCode& code, const StateVector& message, const StateVector& codeword) {
    if (message.qubits() != 4) throw DomainError("message register must be 4 qubits");
    if (codeword.qubits() != FiveQubitCode::kPhysical) throw DomainError("codeword must be 5 qubits");
    const ComplexVector& psi = codeword.amplitudes();
    if ((code.projector() * psi - psi).norm() > kSpanTolerance) throw DomainError("input is not a codeword");
    ComplexVector out = ComplexVector::Zero(FiveQubitCode::kDim);
    for (std::uint32_t m = 0; m < FiveQubitCode::kSyndromes; ++m) {
        const cd a = message.amplitudes()(m);
        if (a != cd{0.0}) out += a * code.error_for_syndrome(m).apply(psi);
    }
    return StateVector(std::move(out), FiveQubitCode::kPhysical);
}

ComplexMatrix stego_decode_with_reference(const FiveQubitCode& code, const ComplexMatrix& received) {
    if (received.rows() != static_cast<Eigen::Index>(FiveQubitCode::kDim)) {
        throw DomainError("received block must have 32 rows");
    }
    ComplexMatrix out(received.rows(), received.cols());
    for (Eigen::Index c = 0; c < received.cols(); ++c) {
        const ComplexVector r = received.col(c);
        for (std::uint32_t m = 0; m < FiveQubitCode::kSyndromes; ++m) {
            // E_m is a Hermitian Pauli, so it is its own inverse.
            const ComplexVector corrected = code.error_for_syndrome(m).apply(r);
            out(2 * m, c) = code.zero_logical().dot(corrected);
            out(2 * m + 1, c) = code.one_logical().dot(corrected);
        }
    }
    const double outside = received.squaredNorm() - out.squaredNorm();
    if (std::abs(outside) > kSpanTolerance) {
        throw IntegrityError("received state has weight " + std::to_string(outside) +
                             " outside the correctable span");
    }
    return out;
}

StegoDecodeResult stego_decode(const FiveQubitCode& code, const StateVector& received) {
    if (received.qubits() != FiveQubitCode::kPhysical) throw DomainError("received state must be 5 qubits");
    const ComplexVector joint = stego_decode_with_reference(code, received.amplitudes()).col(0);
    // Rows: message index, columns: logical qubit.
    ComplexMatrix grid(16, 2);
    for (Eigen::Index m = 0; m < 16; ++m) grid.row(m) = joint.segment(2 * m, 2).transpose();
    Eigen::JacobiSVD<ComplexMatrix> svd(grid, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double s0 = svd.singularValues()(0);
    return StegoDecodeResult{StateVector::normalized(joint, 5), StateVector::normalized(svd.matrixU().col(0), 4),
                             StateVector::normalized(svd.matrixV().col(0).conjugate(), 1), s0 * s0};
}

EntangledRoundTrip entangled_round_trip(const FiveQubitCode& code, const StateVector& covertext) {
    const StateVector codeword = encode_covertext(code, covertext);
    // Column r holds the physical component paired with reference state |r>.
    ComplexMatrix sent(FiveQubitCode::kDim, 16);
    for (std::uint32_t r = 0; r < 16; ++r) sent.col(r) = 0.25 * code.error_for_syndrome(r).apply(codeword.amplitudes());
    const ComplexMatrix decoded = stego_decode_with_reference(code, sent);

    ComplexMatrix expected = ComplexMatrix::Zero(FiveQubitCode::kDim, 16);
    for (std::uint32_t r = 0; r < 16; ++r) {
        expected(2 * r, r) = 0.25 * covertext.amplitudes()(0);
        expected(2 * r + 1, r) = 0.25 * covertext.amplitudes()(1);
    }
    const cd overlap = (expected.adjoint() * decoded).trace();
    return {std::norm(overlap)};
}

std::array<double, 16> truncated_depolarizing_weights(const FiveQubitCode& code, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("depolarizing p outside [0,1]");
    std::array<double, 16> w{};
    for (std::uint32_t m = 0; m < 16; ++m) {
        const unsigned wt = code.error_for_syndrome(m).weight();
        w[m] = std::pow(p / 3.0, wt) * std::pow(1.0 - p, 5 - wt);
    }
    return w;
}

EveReport eve_reduced_state(const FiveQubitCode& code, const std::vector<KeyedEncoding>& ensemble,
                            const StateVector& codeword, double p) {
    if (ensemble.empty()) throw DomainError("empty ensemble");
    const auto dim = static_cast<Eigen::Index>(FiveQubitCode::kDim);
    EveReport r;
    r.rho = ComplexMatrix::Zero(dim, dim);
    CompensatedSum total;
    for (const auto& k : ensemble) {
        if (!(k.probability >= 0.0)) throw DomainError("negative ensemble probability");
        const ComplexVector omega = stego_superpose(code, k.message, codeword).amplitudes();
        r.rho += k.probability * omega * omega.adjoint();
        total.add(k.probability);
    }
    if (std::abs(total.value() - 1.0) > 1e-12) throw DomainError("ensemble probabilities do not sum to 1");

    const auto w = truncated_depolarizing_weights(code, p);
    ComplexMatrix sigma = ComplexMatrix::Zero(dim, dim);
    CompensatedSum sigma_trace;
    for (std::uint32_t m = 0; m < 16; ++m) {
        const ComplexVector v = code.error_for_syndrome(m).apply(codeword.amplitudes());
        sigma += w[m] * v * v.adjoint();
        sigma_trace.add(w[m]);
    }
    r.sigma_trace = sigma_trace.value();

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(r.rho - sigma, Eigen::EigenvaluesOnly);
    CompensatedSum norm1;
    for (Eigen::Index i = 0; i < dim; ++i) norm1.add(std::abs(solver.eigenvalues()(i)));
    r.trace_distance = 0.5 * norm1.value() + 0.5 * (1.0 - r.sigma_trace);
    return r;
}

std::vector<ComplexMatrix> weighted_error_kraus(const FiveQubitCode& code, std::span<const double> weights) {
    if (weights.size() != 16) throw DomainError("need 16 error weights");
    std::vector<ComplexMatrix> kraus;
    kraus.reserve(16);
    for (std::uint32_t m = 0; m < 16; ++m) {
        if (!(weights[m] >= 0.0)) throw DomainError("negative error weight");
        kraus.push_back(std::sqrt(weights[m]) * code.error_for_syndrome(m).matrix());
    }
    return kraus;
}

std::vector<ComplexMatrix> remix_kraus(const std::vector<ComplexMatrix>& kraus, const ComplexMatrix& m) {
    const auto n = static_cast<Eigen::Index>(kraus.size());
    if (m.rows() != n || m.cols() != n) throw DomainError("mixing matrix size differs from Kraus count");
    std::vector<ComplexMatrix> out;
    out.reserve(kraus.size());
    for (Eigen::Index k = 0; k < n; ++k) {
        ComplexMatrix e = ComplexMatrix::Zero(kraus[0].rows(), kraus[0].cols());
        for (Eigen::Index j = 0; j < n; ++j) e += m(j, k) * kraus[j];
        out.push_back(std::move(e));
    }
    return out;
}

QeccDemoRecord run_qecc_demo(double p, std::size_t trials, std::uint64_t seed) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("demo p must lie in (0,1)");
    if (trials == 0) throw DomainError("demo needs at least one trial");
    const FiveQubitCode code;
    std::mt19937_64 rng(seed);
    QeccDemoRecord rec;
    rec.p = p;
    rec.trials = trials;
    rec.fidelity = 1.0;
    rec.entangled_fidelity = 1.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const StateVector msg(random_state(16, rng), 4);
        const StateVector cover(random_state(2, rng), 1);
        const StegoDecodeResult out = stego_decode(code, stego_superpose(code, msg, encode_covertext(code, cover)));
        const ComplexVector expected = embed_product(msg.amplitudes(), cover.amplitudes());
        rec.fidelity = std::min(rec.fidelity, fidelity(expected, out.joint.amplitudes()));
        rec.entangled_fidelity = std::min(rec.entangled_fidelity, entangled_round_trip(code, cover).fidelity);
    }

    const auto w = truncated_depolarizing_weights(code, p);
    CompensatedSum total;
    for (double x : w) total.add(x);
    const double mass = total.value();

    const StateVector cover(random_state(2, rng), 1);
    const StateVector codeword = encode_covertext(code, cover);
    ComplexVector amps(16);
    for (std::uint32_t m = 0; m < 16; ++m) amps(m) = std::sqrt(w[m] / mass);
    const StateVector superposed(amps, 4);
    const ComplexVector sent = stego_superpose(code, superposed, codeword).amplitudes();
    for (std::uint32_t m = 0; m < 16; ++m) {
        const ComplexVector back = code.error_for_syndrome(m).apply(sent);
        rec.syndrome_distribution[m] = std::norm(code.zero_logical().dot(back)) + std::norm(code.one_logical().dot(back));
    }

    std::vector<KeyedEncoding> classical;
    for (std::uint32_t m = 0; m < 16; ++m) {
        classical.push_back({w[m] / mass, StateVector(ComplexVector::Unit(16, m), 4)});
    }
    rec.trace_distance = eve_reduced_state(code, classical, codeword, p).trace_distance;
    rec.trace_distance_superposed = eve_reduced_state(code, {{1.0, superposed}}, codeword, p).trace_distance;
    rec.kl_bound_bits = kl_alpha_bound(weighted_error_kraus(code, w), code.projector()).bound_bits;
    return rec;
}

}  // namespace qstego
