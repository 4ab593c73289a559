#ifndef MRSNE_RELATION_HPP
#define MRSNE_RELATION_HPP

#include <cmath>

#include <Eigen/Dense>

#include "mrsne/errors.hpp"
#include "mrsne/sn_graph.hpp"
#include "mrsne/types.hpp"

namespace mrsne {

/// Across-domain joint probabilities: nonnegative n1 x n2 matrix with total
/// mass 1.
template <typename Scalar>
struct CrossRelation {
    Matrix<Scalar> r;
};

/// The joint probability over all item pairs of both domains,
/// block-assembled from the within-domain graphs and the cross relation.
template <typename Scalar>
struct AugmentedRelation {
    Matrix<Scalar> p_tilde;  // (n1+n2) x (n1+n2), symmetric, mass 1
    Eigen::Index n1 = 0;
    Eigen::Index n2 = 0;
};

/// Applies the selected preprocessing to the observed graph, then divides by
/// the total mass so the entries form a joint distribution.
///
/// norm divides each weight by the square roots of its row and column sums;
/// pmi divides by the plain products. Entries whose row or column sum is
/// zero are themselves zero and stay zero.
template <typename Scalar>
CrossRelation<Scalar> normalize_cross_graph(const Matrix<Scalar>& weights, NormMode mode) {
    detail::require_finite(weights, "cross graph");
    if ((weights.array() < 0).any()) {
        for (Eigen::Index i = 0; i < weights.rows(); ++i)
            for (Eigen::Index j = 0; j < weights.cols(); ++j)
                if (weights(i, j) < 0) throw NegativeWeight(i, j);
    }

    Matrix<Scalar> transformed;
    switch (mode) {
        case NormMode::unnorm:
            transformed = weights;
            break;
        case NormMode::norm: {
            const Vector<Scalar> row_scale = weights.rowwise().sum().array().sqrt();
            const Vector<Scalar> col_scale = weights.colwise().sum().array().sqrt();
            transformed = weights;
            for (Eigen::Index i = 0; i < weights.rows(); ++i)
                for (Eigen::Index j = 0; j < weights.cols(); ++j) {
                    const Scalar denom = row_scale[i] * col_scale[j];
                    transformed(i, j) = denom > 0 ? weights(i, j) / denom : Scalar(0);
                }
            break;
        }
        case NormMode::pmi: {
            const Vector<Scalar> row_sum = weights.rowwise().sum();
            const Vector<Scalar> col_sum = weights.colwise().sum();
            transformed = weights;
            for (Eigen::Index i = 0; i < weights.rows(); ++i)
                for (Eigen::Index j = 0; j < weights.cols(); ++j) {
                    const Scalar denom = row_sum[i] * col_sum[j];
                    transformed(i, j) = denom > 0 ? weights(i, j) / denom : Scalar(0);
                }
            break;
        }
    }

    const Scalar total = transformed.sum();
    if (!(total > 0)) throw AllZeroCrossGraph();
    return CrossRelation<Scalar>{transformed / total};
}

template <typename Scalar>
CrossRelation<Scalar> normalize_cross_graph(const SparseGraph<Scalar>& weights, NormMode mode) {
    return normalize_cross_graph(Matrix<Scalar>(weights), mode);
}

/// Weights proportional to the block sizes of the augmented matrix:
/// beta_d ~ n_d^2 and beta_12 ~ n1*n2, so each block's KL term is weighted
/// by how many pairs it holds. With drop_domain2 the n2^2 block is removed
/// and the remaining two weights are renormalized.
inline BetaWeights adaptive_betas(Eigen::Index n1, Eigen::Index n2, bool drop_domain2 = false) {
    if (n1 < 1 || n2 < 1) throw InvalidConfig("adaptive betas need both domain sizes");
    const double a = double(n1) * double(n1);
    const double b = drop_domain2 ? 0.0 : double(n2) * double(n2);
    const double c = double(n1) * double(n2);
    return BetaWeights(a, b, c);
}

/// Assembles the augmented joint probability
///   [ beta1 * P1        (beta12/2) * R ]
///   [ (beta12/2) * R^T  beta2 * P2     ]
/// A block may be absent only when its weight is zero; absent blocks are
/// zero-filled.
template <typename Scalar>
AugmentedRelation<Scalar> assemble_augmented(const SnGraph<Scalar>* p1,
                                             const SnGraph<Scalar>* p2,
                                             const CrossRelation<Scalar>* r,
                                             const BetaWeights& betas,
                                             Eigen::Index n1, Eigen::Index n2) {
    if (n1 < 1) throw DimensionMismatch("domain 1 must be nonempty");
    if (n2 < 0) throw DimensionMismatch("negative domain size");
    if (!p1 && betas.beta1() > 0) throw MissingGraphWithPositiveBeta("P1");
    if (!p2 && betas.beta2() > 0) throw MissingGraphWithPositiveBeta("P2");
    if (!r && betas.beta12() > 0) throw MissingGraphWithPositiveBeta("R");
    if (p1 && (p1->probs.rows() != n1 || p1->probs.cols() != n1))
        throw DimensionMismatch("P1 must be n1 x n1");
    if (p2 && (p2->probs.rows() != n2 || p2->probs.cols() != n2))
        throw DimensionMismatch("P2 must be n2 x n2");
    if (r && (r->r.rows() != n1 || r->r.cols() != n2))
        throw DimensionMismatch("R must be n1 x n2");

    const Eigen::Index m = n1 + n2;
    AugmentedRelation<Scalar> out;
    out.n1 = n1;
    out.n2 = n2;
    out.p_tilde = Matrix<Scalar>::Zero(m, m);
    if (p1 && betas.beta1() > 0)
        out.p_tilde.topLeftCorner(n1, n1) = Scalar(betas.beta1()) * p1->probs;
    if (p2 && betas.beta2() > 0)
        out.p_tilde.bottomRightCorner(n2, n2) = Scalar(betas.beta2()) * p2->probs;
    if (r && betas.beta12() > 0) {
        const Matrix<Scalar> cross = Scalar(betas.beta12() / 2) * r->r;
        out.p_tilde.topRightCorner(n1, n2) = cross;
        out.p_tilde.bottomLeftCorner(n2, n1) = cross.transpose();
    }
    return out;
}

} // namespace mrsne

#endif // MRSNE_RELATION_HPP
