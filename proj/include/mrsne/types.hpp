#ifndef MRSNE_TYPES_HPP
#define MRSNE_TYPES_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "mrsne/errors.hpp"

namespace mrsne {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using SparseGraph = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

enum class NormMode { unnorm, norm, pmi };

inline const char* to_string(NormMode mode) {
    switch (mode) {
        case NormMode::unnorm: return "unnorm";
        case NormMode::norm: return "norm";
        case NormMode::pmi: return "pmi";
    }
    return "?";
}

/// Two domains of feature vectors plus the observed weighted graph across
/// them. domain2 may be absent, in which case the cross graph must be empty
/// and the pipeline degenerates to a single-domain embedding.
template <typename Scalar>
struct MultimodalDataset {
    Matrix<Scalar> domain1;                 // n1 x d1
    std::optional<Matrix<Scalar>> domain2;  // n2 x d2
    SparseGraph<Scalar> cross_graph;        // n1 x n2, entries >= 0

    Eigen::Index n1() const { return domain1.rows(); }
    Eigen::Index n2() const { return domain2 ? domain2->rows() : 0; }
    bool has_domain2() const { return domain2.has_value(); }

    Matrix<Scalar> cross_dense() const { return Matrix<Scalar>(cross_graph); }
};

/// Relative weights of the two within-domain blocks and the across-domain
/// block. Raw inputs are normalized by their sum at construction, so
/// (1, 0, 1) and (1/2, 0, 1/2) describe the same mixture.
class BetaWeights {
public:
    BetaWeights(double raw1, double raw2, double raw12) {
        if (raw1 < 0 || raw2 < 0 || raw12 < 0)
            throw InvalidConfig("beta weights must be nonnegative");
        const double sum = raw1 + raw2 + raw12;
        if (!(sum > 0) || !std::isfinite(sum))
            throw InvalidConfig("beta weights must have a positive finite sum");
        beta1_ = raw1 / sum;
        beta2_ = raw2 / sum;
        beta12_ = 1.0 - beta1_ - beta2_;
    }

    double beta1() const { return beta1_; }
    double beta2() const { return beta2_; }
    double beta12() const { return beta12_; }

private:
    double beta1_, beta2_, beta12_;
};

/// Everything the embedding run needs besides the data itself.
struct EmbedConfig {
    double perplexity = 30.0;
    int dim = 2;
    BetaWeights betas{1.0, 1.0, 1.0};
    NormMode norm_mode = NormMode::unnorm;
    int iterations = 500;
    double learning_rate = 100.0;
    double momentum = 0.5;
    int lr_decay_every = 400;
    double lr_decay_factor = 0.1;
    std::uint64_t seed = 0;
};

inline void validate(const EmbedConfig& config) {
    if (!(config.perplexity > 1.0))
        throw InvalidConfig("perplexity must exceed 1");
    if (config.dim < 1) throw InvalidConfig("dimension must be at least 1");
    if (config.iterations < 0) throw InvalidConfig("iterations must be nonnegative");
    if (!(config.learning_rate > 0)) throw InvalidConfig("learning rate must be positive");
    if (config.momentum < 0) throw InvalidConfig("momentum must be nonnegative");
    if (config.lr_decay_every < 1) throw InvalidConfig("lr decay period must be positive");
    if (!(config.lr_decay_factor > 0)) throw InvalidConfig("lr decay factor must be positive");
}

struct RowLocation {
    int domain;         // 1 or 2
    Eigen::Index index; // position within the domain
};

/// Joint low-dimensional coordinates. Rows 0..n1-1 hold domain 1 in order,
/// rows n1..n1+n2-1 hold domain 2 in order; the block structure is
/// positional, not tagged.
template <typename Scalar>
struct Embedding {
    Matrix<Scalar> coords;  // (n1 + n2) x K
    Eigen::Index n1 = 0;
    Eigen::Index n2 = 0;

    Eigen::Index rows() const { return n1 + n2; }
    Eigen::Index dim() const { return coords.cols(); }

    RowLocation domain_of_row(Eigen::Index row) const {
        if (row < 0 || row >= rows())
            throw DimensionMismatch("row " + std::to_string(row) + " out of range");
        if (row < n1) return {1, row};
        return {2, row - n1};
    }

    Eigen::Index row_of(int domain, Eigen::Index index) const {
        if (domain == 1 && index >= 0 && index < n1) return index;
        if (domain == 2 && index >= 0 && index < n2) return n1 + index;
        throw DimensionMismatch("no row for domain " + std::to_string(domain) +
                                " index " + std::to_string(index));
    }

    auto domain1_coords() const { return coords.topRows(n1); }
    auto domain2_coords() const { return coords.bottomRows(n2); }
};

namespace detail {

template <typename Scalar>
void require_finite(const Matrix<Scalar>& m, const std::string& where) {
    if (m.allFinite()) return;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (!std::isfinite(m(i, j))) throw NonFiniteValue(where, i, j);
}

} // namespace detail

/// Checks every dataset invariant; throws the first violation found.
template <typename Scalar>
void validate(const MultimodalDataset<Scalar>& dataset) {
    if (dataset.domain1.rows() < 2)
        throw EmptyDomain(1, "needs at least 2 items");
    detail::require_finite(dataset.domain1, "domain 1 features");

    if (!dataset.has_domain2()) {
        if (dataset.cross_graph.nonZeros() != 0)
            throw DimensionMismatch("cross graph given without a second domain");
        return;
    }

    if (dataset.domain2->rows() < 1)
        throw EmptyDomain(2, "present but has no items");
    detail::require_finite(*dataset.domain2, "domain 2 features");

    if (dataset.cross_graph.rows() != dataset.n1() ||
        dataset.cross_graph.cols() != dataset.n2())
        throw DimensionMismatch(
            "cross graph is " + std::to_string(dataset.cross_graph.rows()) + "x" +
            std::to_string(dataset.cross_graph.cols()) + ", expected " +
            std::to_string(dataset.n1()) + "x" + std::to_string(dataset.n2()));

    bool any_positive = false;
    for (Eigen::Index i = 0; i < dataset.cross_graph.outerSize(); ++i) {
        for (typename SparseGraph<Scalar>::InnerIterator it(dataset.cross_graph, i); it; ++it) {
            if (!std::isfinite(it.value()))
                throw NonFiniteValue("cross graph", it.row(), it.col());
            if (it.value() < 0) throw NegativeWeight(it.row(), it.col());
            if (it.value() > 0) any_positive = true;
        }
    }
    if (!any_positive) throw AllZeroCrossGraph();
}

} // namespace mrsne

#endif // MRSNE_TYPES_HPP
