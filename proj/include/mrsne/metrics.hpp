#ifndef MRSNE_METRICS_HPP
#define MRSNE_METRICS_HPP

#include <algorithm>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mrsne/errors.hpp"
#include "mrsne/types.hpp"

namespace mrsne {

/// ROC curve swept over the neighborhood size k. points[k] holds the
/// (FPR, TPR) pair of retrieving each query's k nearest rows; points[0] is
/// the (0, 0) endpoint and the final point is exactly (1, 1).
template <typename Scalar>
struct RocCurve {
    std::vector<std::pair<Scalar, Scalar>> points;
    Scalar auc = 0;
    Eigen::Index skipped_queries = 0;  // queries with no positive, left out
};

enum class MetricKind { I, II };
enum class MetricScope { across, within_image };

/// The k rows of `candidates` closest to `query_row` (which is skipped if it
/// appears among the candidates), ordered by ascending distance with ties
/// broken by ascending row index.
template <typename Scalar>
std::vector<Eigen::Index> knn_indices(const Embedding<Scalar>& embedding, Eigen::Index query_row,
                                      Eigen::Index k, const std::vector<Eigen::Index>& candidates) {
    std::vector<std::pair<Scalar, Eigen::Index>> order;
    order.reserve(candidates.size());
    for (Eigen::Index c : candidates) {
        if (c == query_row) continue;
        const Scalar d = (embedding.coords.row(c) - embedding.coords.row(query_row)).squaredNorm();
        order.emplace_back(d, c);
    }
    if (k < 0 || k > static_cast<Eigen::Index>(order.size()))
        throw KTooLarge(k, static_cast<Eigen::Index>(order.size()));
    std::sort(order.begin(), order.end());
    std::vector<Eigen::Index> out(k);
    for (Eigen::Index i = 0; i < k; ++i) out[i] = order[i].second;
    return out;
}

namespace detail {

// Tag sets and within-domain truth derived from the observed graph: image
// i's positives are its linked tags plus every image sharing a tag with it.
template <typename Scalar>
std::vector<std::vector<Eigen::Index>> tags_per_image(const MultimodalDataset<Scalar>& dataset) {
    std::vector<std::vector<Eigen::Index>> tags(dataset.n1());
    const auto& w = dataset.cross_graph;
    for (Eigen::Index i = 0; i < w.outerSize(); ++i)
        for (typename SparseGraph<Scalar>::InnerIterator it(w, i); it; ++it)
            if (it.value() > 0) tags[it.row()].push_back(it.col());
    return tags;
}

inline bool share_any(const std::vector<Eigen::Index>& a, const std::vector<Eigen::Index>& b) {
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia == *ib) return true;
        if (*ia < *ib)
            ++ia;
        else
            ++ib;
    }
    return false;
}

// Micro-averaged k-sweep ROC from per-query rankings. rankings[q][r] is true
// when the rank-r candidate of query q is a positive; queries are expected
// to have at least one positive and rankings of equal length.
template <typename Scalar>
RocCurve<Scalar> roc_from_rankings(const std::vector<std::vector<char>>& rankings,
                                   Eigen::Index skipped_queries) {
    if (rankings.empty()) throw NoPositives();
    const Eigen::Index kmax = static_cast<Eigen::Index>(rankings.front().size());

    std::vector<long long> total_hits(kmax + 1, 0);
    long long total_pos = 0;
    for (const auto& flags : rankings) {
        long long hits = 0;
        for (Eigen::Index r = 0; r < kmax; ++r) {
            hits += flags[r] != 0;
            total_hits[r + 1] += hits;
        }
        total_pos += hits;
    }
    const long long total_neg =
        static_cast<long long>(rankings.size()) * kmax - total_pos;
    if (total_pos == 0) throw NoPositives();

    RocCurve<Scalar> curve;
    curve.skipped_queries = skipped_queries;
    curve.points.reserve(kmax + 1);
    curve.points.emplace_back(Scalar(0), Scalar(0));
    for (Eigen::Index k = 1; k <= kmax; ++k) {
        const long long hits = total_hits[k];
        const long long retrieved = static_cast<long long>(rankings.size()) * k;
        const Scalar tpr = Scalar(hits) / Scalar(total_pos);
        const Scalar fpr =
            total_neg > 0 ? Scalar(retrieved - hits) / Scalar(total_neg) : Scalar(1);
        curve.points.emplace_back(fpr, tpr);
    }

    Scalar auc = 0;
    for (std::size_t p = 1; p < curve.points.size(); ++p) {
        const auto& [x0, y0] = curve.points[p - 1];
        const auto& [x1, y1] = curve.points[p];
        auc += (x1 - x0) * (y0 + y1) / Scalar(2);
    }
    curve.auc = auc;
    return curve;
}

} // namespace detail

/// Graph-reconstruction ROC: for every query image, its k nearest rows
/// (images and tags jointly) are predicted to be linked; positives are the
/// linked tags and the tag-sharing images. TPR and FPR are micro-averaged
/// over queries at each k and the area is the trapezoidal integral of the
/// k-sweep. Queries without any positive are skipped and counted.
template <typename Scalar>
RocCurve<Scalar> reconstruction_roc(const Embedding<Scalar>& embedding,
                                    const MultimodalDataset<Scalar>& dataset) {
    const Eigen::Index n1 = dataset.n1();
    const Eigen::Index n2 = dataset.n2();
    if (embedding.n1 != n1 || embedding.n2 != n2)
        throw ShapeMismatch("embedding does not align with the dataset");
    const Eigen::Index m = n1 + n2;

    const auto tags = detail::tags_per_image(dataset);

    std::vector<std::vector<char>> rankings;
    rankings.reserve(n1);
    Eigen::Index skipped = 0;
    std::vector<std::pair<Scalar, Eigen::Index>> order;
    for (Eigen::Index i = 0; i < n1; ++i) {
        std::vector<char> positive(m, 0);
        Eigen::Index n_pos = 0;
        for (Eigen::Index j : tags[i]) {
            positive[n1 + j] = 1;
            ++n_pos;
        }
        for (Eigen::Index other = 0; other < n1; ++other) {
            if (other == i) continue;
            if (detail::share_any(tags[i], tags[other])) {
                positive[other] = 1;
                ++n_pos;
            }
        }
        if (n_pos == 0) {
            ++skipped;
            continue;
        }

        order.clear();
        for (Eigen::Index row = 0; row < m; ++row) {
            if (row == i) continue;
            const Scalar d = (embedding.coords.row(row) - embedding.coords.row(i)).squaredNorm();
            order.emplace_back(d, row);
        }
        std::sort(order.begin(), order.end());
        std::vector<char> flags(order.size());
        for (std::size_t r = 0; r < order.size(); ++r) flags[r] = positive[order[r].second];
        rankings.push_back(std::move(flags));
    }

    return detail::roc_from_rankings<Scalar>(rankings, skipped);
}

/// Trace ratio of the two domains' sample covariances (unbiased, 1/(n-1)).
/// Values far from 1 flag a collapsed domain.
template <typename Scalar>
Scalar variance_ratio(const Embedding<Scalar>& embedding) {
    if (embedding.n1 < 2 || embedding.n2 < 2)
        throw DimensionMismatch("variance ratio needs at least 2 items per domain");
    auto covariance_trace = [](const Matrix<Scalar>& block) {
        const Matrix<Scalar> centered = block.rowwise() - block.colwise().mean();
        return centered.squaredNorm() / Scalar(block.rows() - 1);
    };
    const Scalar tr1 = covariance_trace(embedding.domain1_coords());
    const Scalar tr2 = covariance_trace(embedding.domain2_coords());
    if (!(tr2 > 0)) throw DegenerateDomain(2);
    if (!(tr1 > 0)) throw DegenerateDomain(1);
    return tr1 / tr2;
}

/// Neighborhood metrics over query images. Kind I is the fraction of queries
/// with at least one positive among their k nearest candidates; kind II is
/// the mean number of positives there. Across-domain positives are the
/// linked tags searched over all tags; within-image positives are the
/// tag-sharing images searched over the other images. Queries with no
/// positive count toward the average with score 0.
template <typename Scalar>
Scalar knn_metric(const Embedding<Scalar>& embedding, const MultimodalDataset<Scalar>& dataset,
                  Eigen::Index k, MetricKind kind, MetricScope scope) {
    const Eigen::Index n1 = dataset.n1();
    const Eigen::Index n2 = dataset.n2();
    if (embedding.n1 != n1 || embedding.n2 != n2)
        throw ShapeMismatch("embedding does not align with the dataset");

    const auto tags = detail::tags_per_image(dataset);

    std::vector<Eigen::Index> candidates;
    if (scope == MetricScope::across) {
        if (k > n2) throw KTooLarge(k, n2);
        candidates.resize(n2);
        for (Eigen::Index j = 0; j < n2; ++j) candidates[j] = n1 + j;
    } else {
        if (k > n1 - 1) throw KTooLarge(k, n1 - 1);
        candidates.resize(n1);
        for (Eigen::Index i = 0; i < n1; ++i) candidates[i] = i;
    }

    Scalar total = 0;
    for (Eigen::Index i = 0; i < n1; ++i) {
        const auto neighbors = knn_indices(embedding, i, k, candidates);
        Eigen::Index count = 0;
        for (Eigen::Index row : neighbors) {
            if (scope == MetricScope::across) {
                const Eigen::Index tag = row - n1;
                if (std::binary_search(tags[i].begin(), tags[i].end(), tag)) ++count;
            } else {
                if (detail::share_any(tags[i], tags[row])) ++count;
            }
        }
        if (kind == MetricKind::I)
            total += count > 0 ? Scalar(1) : Scalar(0);
        else
            total += Scalar(count);
    }
    return total / Scalar(n1);
}

} // namespace mrsne

#endif // MRSNE_METRICS_HPP
