#ifndef MRSNE_CDMCA_HPP
#define MRSNE_CDMCA_HPP

#include <algorithm>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "mrsne/errors.hpp"
#include "mrsne/types.hpp"

namespace mrsne {

/// Link-duplicated data: one row pair per positive cross-graph entry, so
/// many-to-many relations become one-to-one.
template <typename Scalar>
struct PairedData {
    Matrix<Scalar> a;  // m x d1
    Matrix<Scalar> b;  // m x d2
    Eigen::Index m = 0;
};

/// Enumerates positive entries of the cross graph in row-major order and
/// copies the corresponding feature vectors; items with several links appear
/// several times.
template <typename Scalar>
PairedData<Scalar> expand_pairs(const MultimodalDataset<Scalar>& dataset) {
    if (!dataset.has_domain2())
        throw DimensionMismatch("pair expansion needs two domains");

    std::vector<std::pair<Eigen::Index, Eigen::Index>> links;
    const auto& w = dataset.cross_graph;
    for (Eigen::Index outer = 0; outer < w.outerSize(); ++outer)
        for (typename SparseGraph<Scalar>::InnerIterator it(w, outer); it; ++it)
            if (it.value() > 0) links.emplace_back(it.row(), it.col());
    if (links.empty()) throw AllZeroCrossGraph();
    std::sort(links.begin(), links.end());

    PairedData<Scalar> out;
    out.m = static_cast<Eigen::Index>(links.size());
    out.a.resize(out.m, dataset.domain1.cols());
    out.b.resize(out.m, dataset.domain2->cols());
    for (Eigen::Index k = 0; k < out.m; ++k) {
        out.a.row(k) = dataset.domain1.row(links[k].first);
        out.b.row(k) = dataset.domain2->row(links[k].second);
    }
    return out;
}

template <typename Scalar>
struct CcaModel {
    Matrix<Scalar> projection_a;  // d1 x K
    Matrix<Scalar> projection_b;  // d2 x K
    Vector<Scalar> correlations;  // K values, nonincreasing
    Vector<Scalar> mean_a;        // training means, used at projection time
    Vector<Scalar> mean_b;
};

namespace detail {

// Symmetric inverse square root of (covariance + lambda I).
template <typename Scalar>
Matrix<Scalar> inverse_sqrt_regularized(const Matrix<Scalar>& covariance, Scalar lambda,
                                        const char* which) {
    Matrix<Scalar> shifted = covariance;
    shifted.diagonal().array() += lambda;
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(shifted);
    const Vector<Scalar> eigenvalues = solver.eigenvalues();
    // lambda > 0 bounds the spectrum away from zero; only the unregularized
    // solve can be singular.
    const Scalar floor =
        lambda > 0 ? Scalar(0) : eigenvalues.cwiseAbs().maxCoeff() * Scalar(1e-12);
    if (!(eigenvalues.minCoeff() > floor)) throw RankDeficient(which);
    const Vector<Scalar> inv_sqrt = eigenvalues.array().rsqrt();
    return solver.eigenvectors() * inv_sqrt.asDiagonal() * solver.eigenvectors().transpose();
}

} // namespace detail

/// Regularized linear CCA via whitening and SVD: both views are mean
/// centered, covariances get lambda added to their diagonals, and the
/// canonical directions come from the singular vectors of the whitened
/// cross-covariance. Correlations are the singular values, nonincreasing.
template <typename Scalar>
CcaModel<Scalar> regularized_cca(const Matrix<Scalar>& a, const Matrix<Scalar>& b,
                                 Eigen::Index dim, Scalar lambda) {
    if (a.rows() != b.rows()) throw DimensionMismatch("paired views must have equal rows");
    const Eigen::Index m = a.rows();
    if (m < 2) throw DimensionMismatch("need at least 2 pairs");
    if (dim < 1 || dim > std::min(a.cols(), b.cols()))
        throw DimensionMismatch("projection dimension must be in [1, min(d1, d2)]");
    if (lambda < 0) throw InvalidConfig("regularization must be nonnegative");

    CcaModel<Scalar> model;
    model.mean_a = a.colwise().mean();
    model.mean_b = b.colwise().mean();
    const Matrix<Scalar> ca = a.rowwise() - model.mean_a.transpose();
    const Matrix<Scalar> cb = b.rowwise() - model.mean_b.transpose();

    const Scalar norm = Scalar(1) / Scalar(m - 1);
    const Matrix<Scalar> cov_aa = norm * (ca.transpose() * ca);
    const Matrix<Scalar> cov_bb = norm * (cb.transpose() * cb);
    const Matrix<Scalar> cov_ab = norm * (ca.transpose() * cb);

    const Matrix<Scalar> whiten_a = detail::inverse_sqrt_regularized(cov_aa, lambda, "view a");
    const Matrix<Scalar> whiten_b = detail::inverse_sqrt_regularized(cov_bb, lambda, "view b");

    Eigen::JacobiSVD<Matrix<Scalar>> svd(whiten_a * cov_ab * whiten_b,
                                         Eigen::ComputeThinU | Eigen::ComputeThinV);
    model.projection_a = whiten_a * svd.matrixU().leftCols(dim);
    model.projection_b = whiten_b * svd.matrixV().leftCols(dim);
    model.correlations = svd.singularValues().head(dim);
    return model;
}

/// Linear CDMCA for two domains: CCA on the link-duplicated pairs, then
/// every original item of both domains is centered with the training means
/// and projected into the shared space.
template <typename Scalar>
Embedding<Scalar> cdmca_embed(const MultimodalDataset<Scalar>& dataset, Eigen::Index dim,
                              Scalar lambda) {
    validate(dataset);
    const PairedData<Scalar> pairs = expand_pairs(dataset);
    const CcaModel<Scalar> model = regularized_cca(pairs.a, pairs.b, dim, lambda);

    Embedding<Scalar> out;
    out.n1 = dataset.n1();
    out.n2 = dataset.n2();
    out.coords.resize(out.n1 + out.n2, dim);
    out.coords.topRows(out.n1) =
        (dataset.domain1.rowwise() - model.mean_a.transpose()) * model.projection_a;
    out.coords.bottomRows(out.n2) =
        (dataset.domain2->rowwise() - model.mean_b.transpose()) * model.projection_b;
    return out;
}

} // namespace mrsne

#endif // MRSNE_CDMCA_HPP
