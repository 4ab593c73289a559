#ifndef MRSNE_SN_GRAPH_HPP
#define MRSNE_SN_GRAPH_HPP

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "mrsne/errors.hpp"
#include "mrsne/parallel.hpp"
#include "mrsne/types.hpp"

namespace mrsne {

/// Symmetric joint-probability graph over one domain, together with the
/// per-point Gaussian bandwidths it was built with.
template <typename Scalar>
struct SnGraph {
    Matrix<Scalar> probs;       // n x n, zero diagonal, sums to 1
    Vector<Scalar> bandwidths;  // n positive reals
};

/// All pairwise squared Euclidean distances between the rows of data.
/// Row i is computed from the broadcast (x_j - x_i), which makes the result
/// exactly symmetric with an exactly zero diagonal.
template <typename Derived>
Matrix<typename Derived::Scalar> squared_distance_matrix(const Eigen::MatrixBase<Derived>& data) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Index n = data.rows();
    if (n < 2) throw DimensionMismatch("need at least 2 points for pairwise distances");
    const Matrix<Scalar> x = data;
    detail::require_finite(x, "distance input");
    Matrix<Scalar> dist(n, n);
    parallel_for(n, [&](Eigen::Index i) {
        dist.row(i) = (x.rowwise() - x.row(i)).rowwise().squaredNorm().transpose();
    });
    return dist;
}

/// Gaussian conditional distribution over neighbors of point i at bandwidth
/// sigma. The smallest off-diagonal distance is subtracted before
/// exponentiation, so the largest exponent is 0; the shift cancels in the
/// normalization.
template <typename Scalar>
Vector<Scalar> conditional_row(const Vector<Scalar>& sq_dists_from_i, Eigen::Index i, Scalar sigma) {
    const Eigen::Index n = sq_dists_from_i.size();
    if (i < 0 || i >= n) throw DimensionMismatch("point index out of range");
    if (!(sigma > 0)) throw InvalidConfig("bandwidth must be positive");

    Scalar min_off = std::numeric_limits<Scalar>::infinity();
    for (Eigen::Index j = 0; j < n; ++j)
        if (j != i && sq_dists_from_i[j] < min_off) min_off = sq_dists_from_i[j];
    if (!std::isfinite(min_off)) throw DegenerateRow(i);

    const Scalar inv_two_sigma_sq = Scalar(1) / (Scalar(2) * sigma * sigma);
    Vector<Scalar> row = Vector<Scalar>::Zero(n);
    Scalar sum = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        row[j] = std::exp(-(sq_dists_from_i[j] - min_off) * inv_two_sigma_sq);
        sum += row[j];
    }
    row /= sum;
    return row;
}

namespace detail {

// Shannon entropy (base 2) of the conditional distribution at sigma.
template <typename Scalar>
Scalar conditional_entropy_bits(const Vector<Scalar>& sq_dists_from_i, Eigen::Index i, Scalar sigma) {
    const Vector<Scalar> p = conditional_row(sq_dists_from_i, i, sigma);
    Scalar h = 0;
    for (Eigen::Index j = 0; j < p.size(); ++j)
        if (p[j] > 0) h -= p[j] * std::log2(p[j]);
    return h;
}

template <typename Scalar>
bool off_diagonal_distances_equal(const Vector<Scalar>& sq_dists_from_i, Eigen::Index i) {
    bool seen = false;
    Scalar first = 0;
    for (Eigen::Index j = 0; j < sq_dists_from_i.size(); ++j) {
        if (j == i) continue;
        if (!seen) {
            first = sq_dists_from_i[j];
            seen = true;
        } else if (sq_dists_from_i[j] != first) {
            return false;
        }
    }
    return seen;
}

} // namespace detail

/// Solves 2^{H_i(sigma)} = perplexity by bisection. 2^H is nondecreasing in
/// sigma, so the bracket [1e-20 * rho, 1e20 * rho] with rho the RMS positive
/// distance always contains the solution when one exists; the midpoint is
/// taken in log space to resolve all 40 decades evenly. The full iteration
/// budget is spent (the bracket collapses well past the 1e-5 relative
/// tolerance the result is required to meet); when the target cannot be hit
/// the final midpoint sits at a bracket end and is returned as-is.
template <typename Scalar>
Scalar calibrate_bandwidth(const Vector<Scalar>& sq_dists_from_i, Eigen::Index i, Scalar perplexity) {
    const Eigen::Index n = sq_dists_from_i.size();
    if (n < 2) throw DimensionMismatch("need at least 2 points to calibrate");
    if (!(perplexity > 0)) throw InvalidConfig("perplexity must be positive");
    const Scalar tol = Scalar(1e-5) * perplexity;

    if (detail::off_diagonal_distances_equal(sq_dists_from_i, i)) {
        // Entropy is log2(n-1) for every sigma; accept only a matching target.
        const Scalar constant_perp = Scalar(n - 1);
        Scalar mean_sq = 0;
        Eigen::Index positives = 0;
        for (Eigen::Index j = 0; j < n; ++j)
            if (j != i && sq_dists_from_i[j] > 0) {
                mean_sq += sq_dists_from_i[j];
                ++positives;
            }
        if (std::abs(constant_perp - perplexity) > tol)
            throw PerplexityUnreachable(i, double(perplexity), double(constant_perp));
        const Scalar rho = positives > 0 ? std::sqrt(mean_sq / Scalar(positives)) : Scalar(1);
        return rho;  // any bandwidth works; return the bracket midpoint scale
    }

    Scalar mean_sq = 0;
    Eigen::Index positives = 0;
    for (Eigen::Index j = 0; j < n; ++j)
        if (j != i && sq_dists_from_i[j] > 0) {
            mean_sq += sq_dists_from_i[j];
            ++positives;
        }
    const Scalar rho = std::sqrt(mean_sq / Scalar(positives));

    Scalar lo = Scalar(1e-20) * rho;
    Scalar hi = Scalar(1e20) * rho;
    Scalar sigma = std::sqrt(lo * hi);
    for (int iter = 0; iter < 100; ++iter) {
        const Scalar mid = std::sqrt(lo * hi);
        if (mid == lo || mid == hi) break;  // bracket exhausted in this precision
        sigma = mid;
        const Scalar perp = std::exp2(detail::conditional_entropy_bits(sq_dists_from_i, i, sigma));
        if (perp > perplexity)
            hi = sigma;
        else
            lo = sigma;
    }
    return sigma;
}

/// Builds the symmetric stochastic neighbor graph of one domain:
/// p_ij = (p_{i|j} + p_{j|i}) / 2n with per-point bandwidths calibrated to
/// the perplexity target.
template <typename Derived>
SnGraph<typename Derived::Scalar> build_sn_graph(const Eigen::MatrixBase<Derived>& data,
                                                 typename Derived::Scalar perplexity) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Index n = data.rows();
    const Matrix<Scalar> dist = squared_distance_matrix(data);

    Matrix<Scalar> conditional(n, n);
    Vector<Scalar> sigmas(n);
    parallel_for(n, [&](Eigen::Index i) {
        const Vector<Scalar> row = dist.row(i);
        const Scalar sigma = calibrate_bandwidth(row, i, perplexity);
        sigmas[i] = sigma;
        conditional.row(i) = conditional_row(row, i, sigma).transpose();
    });

    SnGraph<Scalar> graph;
    graph.probs = (conditional + conditional.transpose()) / (Scalar(2) * Scalar(n));
    graph.bandwidths = std::move(sigmas);
    return graph;
}

} // namespace mrsne

#endif // MRSNE_SN_GRAPH_HPP
