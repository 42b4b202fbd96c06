#pragma once

// Dense state-vector realization of syndrome steganography on the five-qubit
// perfect code. Qubit 0 is the most significant bit of a basis index and the
// leftmost letter of a Pauli string.

#include "qstego/secrecy_analysis.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qstego {

using ComplexVector = Eigen::VectorXcd;

/// Pure state of n <= 14 qubits, normalized to 1e-10.
class StateVector {
  public:
    static constexpr unsigned kMaxQubits = 14;

    StateVector(ComplexVector amplitudes, unsigned qubits);
    /// Normalizes first; throws DomainError on a zero or wrongly sized vector.
    static StateVector normalized(ComplexVector amplitudes, unsigned qubits);

    const ComplexVector& amplitudes() const { return amp_; }
    unsigned qubits() const { return qubits_; }

  private:
    ComplexVector amp_;
    unsigned qubits_;
};

/// Pauli string as (x, z) bit masks over n qubits; the operator is
/// prod_q X^x_q Z^z_q times i per Y, so every string is Hermitian.
struct PauliString {
    std::uint32_t x = 0;
    std::uint32_t z = 0;
    unsigned qubits = 0;

    /// Letters I, X, Y, Z.
    static PauliString parse(std::string_view letters);
    std::string to_string() const;
    bool commutes_with(const PauliString& other) const;
    /// Number of non-identity positions.
    unsigned weight() const;

    ComplexVector apply(const ComplexVector& v) const;
    ComplexMatrix matrix() const;
};

/// |<a|b>|^2 for normalized vectors (global phase ignored).
double fidelity(const ComplexVector& a, const ComplexVector& b);

/// Random normalized vector from complex Gaussian amplitudes (Haar on the sphere).
ComplexVector random_state(std::size_t dim, std::mt19937_64& rng);
/// Haar-random unitary from the QR decomposition of a complex Ginibre matrix.
ComplexMatrix random_unitary_matrix(std::size_t dim, std::mt19937_64& rng);

class FiveQubitCode {
  public:
    static constexpr unsigned kPhysical = 5;
    static constexpr std::size_t kDim = 32;
    static constexpr std::size_t kSyndromes = 16;

    /// Builds the code and verifies commuting generators, a 2-dimensional
    /// codespace, logical algebra, and 16 distinct single-qubit syndromes.
    FiveQubitCode();

    const std::array<PauliString, 4>& generators() const { return generators_; }
    const PauliString& logical_x() const { return logical_x_; }
    const PauliString& logical_z() const { return logical_z_; }

    /// 4-bit syndrome, first generator most significant.
    std::uint32_t syndrome(const PauliString& e) const;
    /// Correctable error whose syndrome is m (m = 0 is the identity).
    const PauliString& error_for_syndrome(std::uint32_t m) const { return by_syndrome_[m]; }

    const ComplexMatrix& projector() const { return projector_; }
    const ComplexVector& zero_logical() const { return zero_l_; }
    const ComplexVector& one_logical() const { return one_l_; }

  private:
    std::array<PauliString, 4> generators_;
    PauliString logical_x_;
    PauliString logical_z_;
    std::array<PauliString, kSyndromes> by_syndrome_;
    ComplexMatrix projector_;
    ComplexVector zero_l_;
    ComplexVector one_l_;
};

/// V|psi>: a|0_L> + b|1_L>.
StateVector encode_covertext(const FiveQubitCode& code, const StateVector& covertext);

/// sum_m a_m E_m |codeword>, m in syndrome order.
StateVector stego_superpose(const FiveQubitCode& code, const StateVector& message, const StateVector& codeword);

struct StegoDecodeResult {
    /// Message register (4 qubits) then logical qubit: index 2 m + l.
    StateVector joint;
    /// Leading Schmidt factors of `joint`; exact when the input was a product.
    StateVector message;
    StateVector covertext;
    /// Largest squared Schmidt coefficient (1 for a product state).
    double product_weight = 0.0;
};

/// Coherent syndrome extraction, inverse error, logical decoding.
/// Throws IntegrityError when more than 1e-8 of the norm lies outside the
/// correctable span.
StegoDecodeResult stego_decode(const FiveQubitCode& code, const StateVector& received);

/// The same decoder applied column by column to a 32 x R block whose columns are
/// reference-system components. Returns the 32 x R decoded block.
ComplexMatrix stego_decode_with_reference(const FiveQubitCode& code, const ComplexMatrix& received);

struct EntangledRoundTrip {
    double fidelity = 0.0;
};

/// Message register maximally entangled with a 4-qubit reference; the 9-qubit
/// state is encoded, decoded, and compared with Phi_{B1 R} (x) covertext.
EntangledRoundTrip entangled_round_trip(const FiveQubitCode& code, const StateVector& covertext);

struct KeyedEncoding {
    double probability = 0.0;
    StateVector message;
};

/// Weights of the 16 correctable errors under depolarizing noise p, in syndrome
/// order: (1-p)^5 for the identity, (p/3)(1-p)^4 for each single-qubit Pauli.
std::array<double, 16> truncated_depolarizing_weights(const FiveQubitCode& code, double p);

struct EveReport {
    ComplexMatrix rho;
    /// 1/2 ||rho - sigma||_1 + 1/2 (1 - tr sigma): the missing channel mass is
    /// counted as orthogonal to everything Eve can observe.
    double trace_distance = 0.0;
    double sigma_trace = 0.0;
};

/// Eve's 32 x 32 state averaged over the ensemble, against the depolarizing
/// channel applied to the codeword and truncated to weight <= 1.
EveReport eve_reduced_state(const FiveQubitCode& code, const std::vector<KeyedEncoding>& ensemble,
                            const StateVector& codeword, double p);

/// Kraus set sqrt(w_m) E_m in syndrome order.
std::vector<ComplexMatrix> weighted_error_kraus(const FiveQubitCode& code, std::span<const double> weights);
/// E~_k = sum_j M_jk E_j.
std::vector<ComplexMatrix> remix_kraus(const std::vector<ComplexMatrix>& kraus, const ComplexMatrix& m);

struct QeccDemoRecord {
    double p = 0.0;
    /// Worst joint fidelity over the product-state trials.
    double fidelity = 0.0;
    double entangled_fidelity = 0.0;
    std::array<double, 16> syndrome_distribution{};
    /// Classical messages drawn with probability proportional to the truncated weights.
    double trace_distance = 0.0;
    /// The single coherent superposition with amplitudes sqrt(w_m / W).
    double trace_distance_superposed = 0.0;
    double kl_bound_bits = 0.0;
    std::size_t trials = 0;
};

QeccDemoRecord run_qecc_demo(double p, std::size_t trials, std::uint64_t seed);

}  // namespace qstego
