#pragma once

// Secrecy metrics and rate upper bounds.
//
// Secrecy is measured as the total-variation distance between the key- and
// message-averaged distribution of error strings and the channel's own
// distribution. For a nondegenerate code distinct errors move the codeword into
// orthogonal subspaces, so for classical messages this equals the trace
// distance between Eve's state and the emulated channel output.

#include "qstego/channels.hpp"
#include "qstego/stego_codec.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace qstego {

/// Induced (key- and message-averaged) mass on one weight class, in closed form.
struct InducedClass {
    WeightVector weights;
    BigCount class_size;
    /// Strings that appear in some subset: n_subsets * c_class (0 for dropped classes).
    BigCount covered;
    /// Induced probability of each covered string, 1 / (C n_subsets).
    LogProb covered_string_logprob;
    /// Channel probability of each string of the class.
    LogProb channel_string_logprob;
    /// Total induced mass on the class, C_class / C.
    double induced_mass = 0.0;
    /// Total channel mass on the class.
    double channel_mass = 0.0;
};

struct InducedDistribution {
    std::vector<InducedClass> classes;  // admitted classes, including dropped ones
    double total_mass = 0.0;
};

InducedDistribution induced_distribution(const StegoCodebook& book);

/// Induced probability of a specific string; LogProb::zero() if never emitted.
LogProb induced_string_logprob(const StegoCodebook& book, const ErrorString& e);
/// Channel probability of a specific string.
LogProb channel_string_logprob(const ChannelModel& channel, const ErrorString& e);

struct SecrecyReport {
    /// 1/2 sum_strings |P_induced - P_channel|.
    double tv_distance = 0.0;
    /// Channel mass outside the typical window.
    double truncation_mass = 0.0;
    /// tv_distance - truncation_mass: mismatch inside the window from rounding
    /// C_class down, uncovered remainders, and dropped classes.
    double rounding_residual = 0.0;
    /// Typicality width used to build the window (not a secrecy tolerance).
    double delta_param = 0.0;
    bool full_support = false;
    std::size_t classes_dropped = 0;
    bool contains_atypical_members = false;
};

SecrecyReport tv_to_channel(const StegoCodebook& book);

struct EntropyReport {
    double bits = 0.0;
    /// True only for the bit-flip channel, where N h(p) is the maximum over
    /// pure inputs. Other channels report the nondegenerate-code value.
    bool proven_maximum = false;
};

EntropyReport entropy_sigma_e(const ChannelModel& channel, std::uint32_t n);

/// g(N, delta) = delta N + h2(delta).
double g_term(std::uint32_t n, double delta);
/// f(N, eps) = eps N + (1 + eps) h2(eps / (1 + eps)).
double f_term(std::uint32_t n, double eps);

struct BoundReport {
    double h_sigma_e = 0.0;
    bool proven_maximum = false;
    double g_term = 0.0;
    double f_term = 0.0;
    double m_upper = 0.0;
    double m_achieved = 0.0;
    double tv_tolerance = 0.0;
    double epsilon = 0.0;
};

/// M_upper = H(sigma_E) + g + f. Throws IntegrityError when m_achieved exceeds it.
BoundReport upper_bound(const ChannelModel& channel, std::uint32_t n, double tv_tolerance, double epsilon,
                        double m_achieved);

using ComplexMatrix = Eigen::MatrixXcd;

struct AlphaBoundReport {
    ComplexMatrix alpha;
    /// Eigenvalues of alpha, descending, renormalized to sum to 1.
    std::vector<double> alpha_diag;
    /// Factor applied to the raw eigenvalues (1 when no truncation).
    double renormalization = 1.0;
    /// -sum alpha_kk log2 alpha_kk.
    double bound_bits = 0.0;
    /// Largest ||P E_i^dag E_j P - alpha_ij P||_F over all pairs.
    double worst_residual = 0.0;
};

/// Knill-Laflamme alpha matrix of a Kraus set on a code, diagonalized.
/// Throws DomainError ("not correctable on this code") when some pair violates
/// P E_i^dag E_j P = alpha_ij P beyond 1e-8.
AlphaBoundReport kl_alpha_bound(const std::vector<ComplexMatrix>& kraus, const ComplexMatrix& projector);

}  // namespace qstego
