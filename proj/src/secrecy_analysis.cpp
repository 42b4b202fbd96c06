#include "qstego/secrecy_analysis.hpp"

#include "qstego/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qstego {

InducedDistribution induced_distribution(const StegoCodebook& book) {
    InducedDistribution out;
    const double log_total = log2_big(book.total());
    CompensatedSum total;
    for (const auto& c : book.classes()) {
        InducedClass ic;
        ic.weights = c.weights;
        ic.class_size = c.class_size;
        ic.covered = c.n_subsets * c.c_class;
        ic.covered_string_logprob = {-(log_total + log2_big(c.n_subsets))};
        ic.channel_string_logprob = c.string_logprob;
        ic.induced_mass = ratio(c.c_class, book.total());
        ic.channel_mass = scaled_value(c.class_size, c.string_logprob);
        total.add(ic.induced_mass);
        out.classes.push_back(std::move(ic));
    }
    for (const auto& d : book.dropped()) {
        InducedClass ic;
        ic.weights = d.weights;
        ic.class_size = d.class_size;
        ic.covered = 0;
        ic.covered_string_logprob = LogProb::zero();
        ic.channel_string_logprob = d.string_logprob;
        ic.channel_mass = scaled_value(d.class_size, d.string_logprob);
        out.classes.push_back(std::move(ic));
    }
    std::sort(out.classes.begin(), out.classes.end(),
              [](const InducedClass& a, const InducedClass& b) { return a.weights < b.weights; });
    out.total_mass = total.value();
    return out;
}

LogProb channel_string_logprob(const ChannelModel& channel, const ErrorString& e) {
    return string_logprob(e.symbol_counts(channel.alphabet_size()), channel.probs());
}

LogProb induced_string_logprob(const StegoCodebook& book, const ErrorString& e) {
    if (e.length() != book.length()) throw DomainError("error string length differs from block length");
    const CodebookClass* cls = book.find(class_weights(book.channel(), e));
    if (cls == nullptr) return LogProb::zero();
    if (class_rank(book.channel(), e, cls->weights) >= cls->n_subsets * cls->c_class) return LogProb::zero();
    return {-(log2_big(book.total()) + log2_big(cls->n_subsets))};
}

SecrecyReport tv_to_channel(const StegoCodebook& book) {
    CompensatedSum inside;
    for (const auto& c : book.classes()) {
        const BigCount covered = c.n_subsets * c.c_class;
        const double induced = ratio(c.c_class, book.total());
        const double channel_covered = scaled_value(covered, c.string_logprob);
        inside.add(std::abs(induced - channel_covered));
        inside.add(scaled_value(c.class_size - covered, c.string_logprob));
    }
    for (const auto& d : book.dropped()) inside.add(scaled_value(d.class_size, d.string_logprob));

    SecrecyReport r;
    r.truncation_mass = book.truncation_mass();
    r.tv_distance = 0.5 * (inside.value() + r.truncation_mass);
    r.rounding_residual = std::max(0.0, r.tv_distance - r.truncation_mass);
    r.delta_param = book.window().delta;
    r.full_support = book.window().full_support;
    r.classes_dropped = book.dropped().size();
    r.contains_atypical_members = book.contains_atypical_members();
    return r;
}

EntropyReport entropy_sigma_e(const ChannelModel& channel, std::uint32_t n) {
    return {n * channel_entropy(channel), channel.kind() == ChannelKind::BitFlip};
}

double g_term(std::uint32_t n, double delta) { return delta * n + h2(delta); }

double f_term(std::uint32_t n, double eps) { return eps * n + (1.0 + eps) * h2(eps / (1.0 + eps)); }

BoundReport upper_bound(const ChannelModel& channel, std::uint32_t n, double tv_tolerance, double epsilon,
                        double m_achieved) {
    if (!(tv_tolerance >= 0.0 && tv_tolerance < 1.0)) throw DomainError("secrecy tolerance outside [0,1)");
    if (!(epsilon >= 0.0 && epsilon < 1.0)) throw DomainError("recoverability epsilon outside [0,1)");
    const EntropyReport h = entropy_sigma_e(channel, n);
    BoundReport r;
    r.h_sigma_e = h.bits;
    r.proven_maximum = h.proven_maximum;
    r.g_term = g_term(n, tv_tolerance);
    r.f_term = f_term(n, epsilon);
    r.m_upper = r.h_sigma_e + r.g_term + r.f_term;
    r.m_achieved = m_achieved;
    r.tv_tolerance = tv_tolerance;
    r.epsilon = epsilon;
    if (m_achieved > r.m_upper) {
        std::ostringstream msg;
        msg << "achieved " << m_achieved << " bits exceeds upper bound " << r.m_upper;
        throw IntegrityError(msg.str());
    }
    return r;
}

AlphaBoundReport kl_alpha_bound(const std::vector<ComplexMatrix>& kraus, const ComplexMatrix& projector) {
    constexpr double kTolerance = 1e-8;
    if (kraus.empty()) throw DomainError("kl_alpha_bound: empty Kraus set");
    const Eigen::Index dim = projector.rows();
    if (projector.cols() != dim) throw DomainError("kl_alpha_bound: projector not square");
    for (const auto& e : kraus) {
        if (e.rows() != dim || e.cols() != dim) throw DomainError("kl_alpha_bound: Kraus dimension mismatch");
    }
    const double code_dim = projector.trace().real();
    if (!(code_dim > 0.5)) throw DomainError("kl_alpha_bound: projector has zero rank");

    const auto count = static_cast<Eigen::Index>(kraus.size());
    AlphaBoundReport r;
    r.alpha = ComplexMatrix::Zero(count, count);
    std::size_t worst_i = 0, worst_j = 0;
    for (Eigen::Index i = 0; i < count; ++i) {
        const ComplexMatrix left = projector * kraus[i].adjoint();
        for (Eigen::Index j = 0; j < count; ++j) {
            const ComplexMatrix block = left * kraus[j] * projector;
            const std::complex<double> a = block.trace() / code_dim;
            r.alpha(i, j) = a;
            const double residual = (block - a * projector).norm();
            if (residual > r.worst_residual) {
                r.worst_residual = residual;
                worst_i = i;
                worst_j = j;
            }
        }
    }
    if (r.worst_residual > kTolerance) {
        std::ostringstream msg;
        msg << "not correctable on this code: Knill-Laflamme residual " << r.worst_residual << " at pair ("
            << worst_i << ", " << worst_j << ")";
        throw DomainError(msg.str());
    }
    if ((r.alpha - r.alpha.adjoint()).norm() > kTolerance) throw IntegrityError("alpha matrix not Hermitian");

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(r.alpha);
    std::vector<double> eig(solver.eigenvalues().data(), solver.eigenvalues().data() + count);
    CompensatedSum sum;
    for (double& v : eig) {
        if (v < -kTolerance) throw DomainError("alpha matrix has a negative eigenvalue");
        v = std::max(v, 0.0);
        sum.add(v);
    }
    if (sum.value() > 1.0 + 1e-9) throw DomainError("Kraus set increases trace on the code");
    r.renormalization = 1.0 / sum.value();
    for (double& v : eig) v *= r.renormalization;
    std::sort(eig.begin(), eig.end(), std::greater<>());
    r.alpha_diag = eig;
    r.bound_bits = shannon_entropy(eig);
    return r;
}

}  // namespace qstego
