#ifndef MRSNE_EMBEDDER_HPP
#define MRSNE_EMBEDDER_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mrsne/errors.hpp"
#include "mrsne/parallel.hpp"
#include "mrsne/relation.hpp"
#include "mrsne/types.hpp"

namespace mrsne {

/// Student-t joint over all coordinate pairs, with the unnormalized kernels
/// kept for gradient reuse. z sums num over all ordered distinct pairs.
template <typename Scalar>
struct QJoint {
    Matrix<Scalar> q;    // num / z, zero diagonal
    Matrix<Scalar> num;  // (1 + squared distance)^-1, zero diagonal
    Scalar z = 0;
};

/// One normalizer covers every pair, within and across domains alike.
template <typename Scalar>
QJoint<Scalar> compute_q(const Matrix<Scalar>& coords) {
    const Eigen::Index m = coords.rows();
    if (m < 2) throw DimensionMismatch("need at least 2 points");
    detail::require_finite(coords, "coordinates");

    QJoint<Scalar> out;
    out.num.resize(m, m);
    parallel_for(m, [&](Eigen::Index i) {
        out.num.row(i) =
            (Scalar(1) + (coords.rowwise() - coords.row(i)).rowwise().squaredNorm().array())
                .inverse()
                .matrix()
                .transpose();
        out.num(i, i) = 0;
    });
    out.z = out.num.sum();
    out.q = out.num / out.z;
    return out;
}

/// KL(P || Q) over ordered distinct pairs, natural log; 0 log 0 counts as 0.
template <typename Scalar>
Scalar kl_cost(const AugmentedRelation<Scalar>& p_tilde, const QJoint<Scalar>& q) {
    const Matrix<Scalar>& p = p_tilde.p_tilde;
    if (p.rows() != q.q.rows() || p.cols() != q.q.cols())
        throw ShapeMismatch("P and Q must have the same shape");
    Scalar cost = 0;
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        for (Eigen::Index j = 0; j < p.cols(); ++j) {
            if (i == j) continue;
            const Scalar pij = p(i, j);
            if (pij <= 0) continue;
            if (q.q(i, j) <= 0) throw ZeroQWithPositiveP(i, j);
            cost += pij * std::log(pij / q.q(i, j));
        }
    }
    return cost;
}

/// Analytic gradient of kl_cost with respect to the coordinates:
/// row i = 4 * sum_j (sym(p)_ij - q_ij) * num_ij * (y_i - y_j), with
/// sym(p) = (p + p^T) / 2. The augmented relation is symmetric already, so
/// the symmetrization is an identity there; it keeps the gradient exact for
/// any caller-supplied p.
template <typename Scalar>
Matrix<Scalar> kl_gradient(const AugmentedRelation<Scalar>& p_tilde,
                           const Matrix<Scalar>& coords, const QJoint<Scalar>& q) {
    const Eigen::Index m = coords.rows();
    if (p_tilde.p_tilde.rows() != m || q.q.rows() != m)
        throw ShapeMismatch("P, Q and coordinates must agree in size");

    Matrix<Scalar> grad(m, coords.cols());
    parallel_for(m, [&](Eigen::Index i) {
        const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> weights =
            ((Scalar(0.5) * (p_tilde.p_tilde.row(i) + p_tilde.p_tilde.col(i).transpose()) -
              q.q.row(i))
                 .array() *
             q.num.row(i).array())
                .matrix();
        grad.row(i) = Scalar(4) * (weights.sum() * coords.row(i) - weights * coords);
    });
    return grad;
}

template <typename Scalar>
struct OptimizerState {
    Matrix<Scalar> y;
    Matrix<Scalar> y_prev;
    Scalar eta = 0;
    int t = 0;  // 0-based iteration counter
    std::vector<Scalar> kl_history;
};

/// Called once per iteration, before the coordinate update, with the state
/// and the Q just computed from it.
template <typename Scalar>
using IterationObserver = std::function<void(const OptimizerState<Scalar>&, const QJoint<Scalar>&)>;

template <typename Scalar>
struct EmbedResult {
    Embedding<Scalar> embedding;
    std::vector<Scalar> kl_history;
};

namespace detail {

// Box-Muller on a seeded mt19937_64; self-contained so a seed fixes the
// stream on every platform.
template <typename Scalar>
Matrix<Scalar> gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Scalar stddev,
                               std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    auto uniform = [&gen] {
        return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
    };
    Matrix<Scalar> out(rows, cols);
    Scalar spare = 0;
    bool has_spare = false;
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            if (has_spare) {
                out(i, j) = spare * stddev;
                has_spare = false;
                continue;
            }
            const double u1 = uniform();
            const double u2 = uniform();
            const double radius = std::sqrt(-2.0 * std::log(u1));
            out(i, j) = Scalar(radius * std::cos(2.0 * M_PI * u2)) * stddev;
            spare = Scalar(radius * std::sin(2.0 * M_PI * u2));
            has_spare = true;
        }
    }
    return out;
}

} // namespace detail

/// Full-batch momentum gradient descent on KL(P || Q), run for exactly
/// config.iterations steps. Coordinates start from N(0, 1e-4), i.e. standard
/// deviation 1e-2, drawn with the configured seed; the first momentum term
/// is zero because y_prev starts equal to y. The learning rate is multiplied
/// by lr_decay_factor after every lr_decay_every steps.
template <typename Scalar>
EmbedResult<Scalar> embed(const AugmentedRelation<Scalar>& p_tilde, const EmbedConfig& config,
                          const IterationObserver<Scalar>& observer = {}) {
    validate(config);
    const Eigen::Index m = p_tilde.n1 + p_tilde.n2;
    if (p_tilde.p_tilde.rows() != m)
        throw ShapeMismatch("augmented relation size disagrees with n1 + n2");

    OptimizerState<Scalar> state;
    state.y = detail::gaussian_matrix<Scalar>(m, config.dim, Scalar(1e-2), config.seed);
    state.y_prev = state.y;
    state.eta = Scalar(config.learning_rate);
    state.kl_history.reserve(config.iterations);

    for (state.t = 0; state.t < config.iterations; ++state.t) {
        const QJoint<Scalar> q = compute_q(state.y);
        const Scalar kl = kl_cost(p_tilde, q);
        if (!std::isfinite(kl)) throw DivergedObjective(state.t);
        state.kl_history.push_back(kl);
        if (observer) observer(state, q);

        const Matrix<Scalar> grad = kl_gradient(p_tilde, state.y, q);
        Matrix<Scalar> next = state.y - state.eta * grad +
            Scalar(config.momentum) * (state.y - state.y_prev);
        state.y_prev = std::move(state.y);
        state.y = std::move(next);

        if ((state.t + 1) % config.lr_decay_every == 0)
            state.eta *= Scalar(config.lr_decay_factor);
    }

    EmbedResult<Scalar> out;
    out.embedding.coords = std::move(state.y);
    out.embedding.n1 = p_tilde.n1;
    out.embedding.n2 = p_tilde.n2;
    out.kl_history = std::move(state.kl_history);
    detail::require_finite(out.embedding.coords, "final coordinates");
    return out;
}

} // namespace mrsne

#endif // MRSNE_EMBEDDER_HPP
