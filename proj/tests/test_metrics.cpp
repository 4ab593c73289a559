#include <doctest.h>

#include <cmath>
#include <random>

#include "mrsne/metrics.hpp"
#include "oracles.hpp"

using namespace mrsne;

namespace {

Embedding<double> make_embedding(const Matrix<double>& coords, Eigen::Index n1, Eigen::Index n2) {
    Embedding<double> e;
    e.coords = coords;
    e.n1 = n1;
    e.n2 = n2;
    return e;
}

MultimodalDataset<double> dataset_with_graph(Eigen::Index n1, Eigen::Index n2,
                                             const std::vector<std::pair<int, int>>& links) {
    MultimodalDataset<double> ds;
    ds.domain1 = Matrix<double>::Zero(n1, 2);
    ds.domain2 = Matrix<double>::Zero(n2, 2);
    std::vector<Eigen::Triplet<double>> trips;
    for (auto [i, j] : links) trips.emplace_back(i, j, 1.0);
    ds.cross_graph.resize(n1, n2);
    ds.cross_graph.setFromTriplets(trips.begin(), trips.end());
    return ds;
}

// The fixed toy instance used for oracle equivalence: 8 images, 4 tags.
struct Toy {
    MultimodalDataset<double> dataset;
    Embedding<double> embedding;
};

Toy toy_instance() {
    Toy toy;
    toy.dataset = dataset_with_graph(
        8, 4,
        {{0, 0}, {0, 1}, {1, 0}, {2, 1}, {2, 2}, {3, 2}, {4, 3}, {5, 3}, {6, 0}, {6, 3}, {7, 2}});
    Matrix<double> coords(12, 2);
    coords << 0.0, 0.0,   // img 0
        0.4, 0.1,         // img 1
        2.0, 1.0,         // img 2
        2.5, 0.8,         // img 3
        -1.5, 2.0,        // img 4
        -1.2, 2.2,        // img 5
        0.3, -0.9,        // img 6
        2.2, 1.6,         // img 7
        0.1, 0.3,         // tag 0
        1.1, 0.6,         // tag 1
        2.4, 1.2,         // tag 2
        -1.0, 1.8;        // tag 3
    toy.embedding = make_embedding(coords, 8, 4);
    return toy;
}

} // namespace

TEST_SUITE("metrics") {

TEST_CASE("knn: nearest point on the line") {
    Matrix<double> coords(3, 1);
    coords << 0, 1, 5;
    const auto e = make_embedding(coords, 3, 0);
    const auto nn = knn_indices(e, Eigen::Index(0), Eigen::Index(1), {0, 1, 2});
    REQUIRE(nn.size() == 1);
    CHECK(nn[0] == 1);
}

TEST_CASE("knn: equidistant ties go to the lower row index") {
    Matrix<double> coords(4, 1);
    coords << 0, 1, -1, 1;
    const auto e = make_embedding(coords, 4, 0);
    const auto nn = knn_indices(e, Eigen::Index(0), Eigen::Index(2), {0, 1, 2, 3});
    REQUIRE(nn.size() == 2);
    CHECK(nn[0] == 1);
    CHECK(nn[1] == 2);
}

TEST_CASE("knn matches a full-sort oracle") {
    std::mt19937_64 gen(31);
    const auto coords = oracle::random_matrix(20, 3, gen);
    const auto e = make_embedding(coords, 20, 0);
    std::vector<Eigen::Index> all(20);
    for (Eigen::Index i = 0; i < 20; ++i) all[i] = i;

    const auto nn = knn_indices(e, Eigen::Index(4), Eigen::Index(5), all);
    std::vector<std::pair<double, Eigen::Index>> order;
    for (Eigen::Index i = 0; i < 20; ++i) {
        if (i == 4) continue;
        order.emplace_back((coords.row(i) - coords.row(4)).squaredNorm(), i);
    }
    std::sort(order.begin(), order.end());
    for (int r = 0; r < 5; ++r) CHECK(nn[r] == order[r].second);
}

TEST_CASE("knn rejects oversized k") {
    Matrix<double> coords = Matrix<double>::Zero(3, 1);
    const auto e = make_embedding(coords, 3, 0);
    CHECK_THROWS_AS(knn_indices(e, Eigen::Index(0), Eigen::Index(3), {0, 1, 2}), KTooLarge);
}

TEST_CASE("roc: perfect ranking gives auc one, inverted gives zero") {
    // one image linked to one tag; the other image and tag are negatives
    auto ds = dataset_with_graph(2, 2, {{0, 0}, {1, 1}});
    Matrix<double> good(4, 2);
    good << 0, 0, 10, 0, 0.1, 0, 10.1, 0;  // each tag sits next to its image
    const auto roc_good = reconstruction_roc(make_embedding(good, 2, 2), ds);
    CHECK(roc_good.auc == doctest::Approx(1.0).epsilon(1e-12));

    Matrix<double> bad(4, 2);
    bad << 0, 0, 10, 0, 10.1, 0, -0.1, 0;  // each tag now farthest from its image
    const auto roc_bad = reconstruction_roc(make_embedding(bad, 2, 2), ds);
    CHECK(roc_bad.auc == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("roc matches the exhaustive confusion-matrix oracle at every k") {
    const auto toy = toy_instance();
    const auto roc = reconstruction_roc(toy.embedding, toy.dataset);
    const auto [expected_points, expected_auc] = oracle::roc_brute(toy.embedding, toy.dataset);
    REQUIRE(roc.points.size() == expected_points.size());
    for (std::size_t k = 0; k < roc.points.size(); ++k) {
        CHECK(roc.points[k].first == expected_points[k].fpr);
        CHECK(roc.points[k].second == expected_points[k].tpr);
    }
    CHECK(roc.auc == doctest::Approx(expected_auc).epsilon(1e-12));
    CHECK(roc.skipped_queries == 0);
}

TEST_CASE("roc curve ends at exactly (1, 1) and is monotone") {
    const auto toy = toy_instance();
    const auto roc = reconstruction_roc(toy.embedding, toy.dataset);
    CHECK(roc.points.front().first == 0.0);
    CHECK(roc.points.front().second == 0.0);
    CHECK(roc.points.back().first == 1.0);
    CHECK(roc.points.back().second == 1.0);
    for (std::size_t p = 1; p < roc.points.size(); ++p) {
        CHECK(roc.points[p].first >= roc.points[p - 1].first);
        CHECK(roc.points[p].second >= roc.points[p - 1].second);
    }
    CHECK(roc.auc >= 0.0);
    CHECK(roc.auc <= 1.0);
}

TEST_CASE("auc of a ranking and its reversal sum to one") {
    std::mt19937_64 gen(33);
    std::vector<std::vector<char>> rankings;
    for (int q = 0; q < 6; ++q) {
        std::vector<char> flags(11, 0);
        int positives = 1 + int(gen() % 5);
        for (int p = 0; p < positives; ++p) flags[gen() % flags.size()] = 1;
        rankings.push_back(flags);
    }
    const auto forward = detail::roc_from_rankings<double>(rankings, 0);
    for (auto& flags : rankings) std::reverse(flags.begin(), flags.end());
    const auto backward = detail::roc_from_rankings<double>(rankings, 0);
    CHECK(forward.auc + backward.auc == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("queries without positives are skipped and counted") {
    // image 2 has no tags at all
    auto ds = dataset_with_graph(3, 2, {{0, 0}, {1, 0}});
    Matrix<double> coords = Matrix<double>::Random(5, 2);
    const auto roc = reconstruction_roc(make_embedding(coords, 3, 2), ds);
    CHECK(roc.skipped_queries == 1);

    // with every query positive-free the curve is undefined
    std::vector<std::vector<char>> empty_rankings;
    CHECK_THROWS_AS(detail::roc_from_rankings<double>(empty_rankings, 3), NoPositives);
}

TEST_CASE("variance ratio: identical clouds give one, scaling gives its square") {
    std::mt19937_64 gen(34);
    const auto cloud = oracle::random_matrix(10, 2, gen);
    Matrix<double> coords(20, 2);
    coords.topRows(10) = cloud;
    coords.bottomRows(10) = cloud;
    CHECK(variance_ratio(make_embedding(coords, 10, 10)) == doctest::Approx(1.0).epsilon(1e-12));

    coords.topRows(10) = 2.0 * cloud;
    CHECK(variance_ratio(make_embedding(coords, 10, 10)) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("variance ratio matches the explicit covariance oracle") {
    std::mt19937_64 gen(35);
    const auto c1 = oracle::random_matrix(12, 2, gen, 2.0);
    const auto c2 = oracle::random_matrix(7, 2, gen, 0.5);
    Matrix<double> coords(19, 2);
    coords.topRows(12) = c1;
    coords.bottomRows(7) = c2;
    const double expected =
        oracle::covariance_trace_direct(c1) / oracle::covariance_trace_direct(c2);
    CHECK(variance_ratio(make_embedding(coords, 12, 7)) ==
          doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("variance ratio rejects a collapsed domain") {
    Matrix<double> coords = Matrix<double>::Zero(6, 2);
    coords.topRows(3) = Matrix<double>::Random(3, 2);
    CHECK_THROWS_AS(variance_ratio(make_embedding(coords, 3, 3)), DegenerateDomain);
}

TEST_CASE("metric I across: every image next to its only tag") {
    auto ds = dataset_with_graph(3, 3, {{0, 0}, {1, 1}, {2, 2}});
    Matrix<double> coords(6, 2);
    coords << 0, 0, 5, 0, 0, 5, 0.1, 0, 5.1, 0, 0.1, 5;
    const auto e = make_embedding(coords, 3, 3);
    CHECK(knn_metric(e, ds, 1, MetricKind::I, MetricScope::across) == 1.0);
}

TEST_CASE("metric II: no positives in reach scores zero") {
    auto ds = dataset_with_graph(2, 2, {{0, 0}, {1, 1}});
    Matrix<double> coords(4, 2);
    coords << 0, 0, 1, 0, 1.1, 0, -0.5, 0;  // each image's nearest tag is the wrong one
    const auto e = make_embedding(coords, 2, 2);
    CHECK(knn_metric(e, ds, 1, MetricKind::II, MetricScope::across) == 0.0);
}

TEST_CASE("all four metric variants match brute-force enumeration") {
    // 6 images, 3 tags
    auto ds = dataset_with_graph(6, 3, {{0, 0}, {1, 0}, {1, 1}, {2, 1}, {3, 2}, {4, 2}, {5, 0}});
    std::mt19937_64 gen(36);
    const auto coords = oracle::random_matrix(9, 2, gen);
    const auto e = make_embedding(coords, 6, 3);
    for (MetricKind kind : {MetricKind::I, MetricKind::II}) {
        for (MetricScope scope : {MetricScope::across, MetricScope::within_image}) {
            const Eigen::Index kmax = scope == MetricScope::across ? 3 : 5;
            for (Eigen::Index k = 1; k <= kmax; ++k) {
                const double ours = knn_metric(e, ds, k, kind, scope);
                const double expected = oracle::knn_metric_brute(e, ds, k, kind, scope);
                CHECK(ours == expected);
            }
        }
    }
}

TEST_CASE("metrics are nondecreasing in k") {
    const auto toy = toy_instance();
    for (MetricKind kind : {MetricKind::I, MetricKind::II}) {
        for (MetricScope scope : {MetricScope::across, MetricScope::within_image}) {
            const Eigen::Index kmax = scope == MetricScope::across ? 4 : 7;
            double previous = 0.0;
            for (Eigen::Index k = 1; k <= kmax; ++k) {
                const double value = knn_metric(toy.embedding, toy.dataset, k, kind, scope);
                CHECK(value >= previous);
                previous = value;
            }
        }
    }
}

TEST_CASE("metrics are invariant under rigid motions") {
    const auto toy = toy_instance();
    std::mt19937_64 gen(37);
    const auto rotation = oracle::random_orthogonal(2, gen);
    Matrix<double> moved = toy.embedding.coords * rotation;
    moved.rowwise() += Eigen::RowVector2d(4.2, -0.7);
    const auto e2 = make_embedding(moved, toy.embedding.n1, toy.embedding.n2);

    const auto roc1 = reconstruction_roc(toy.embedding, toy.dataset);
    const auto roc2 = reconstruction_roc(e2, toy.dataset);
    CHECK(roc1.auc == doctest::Approx(roc2.auc).epsilon(1e-12));
    CHECK(knn_metric(toy.embedding, toy.dataset, 2, MetricKind::II, MetricScope::across) ==
          knn_metric(e2, toy.dataset, 2, MetricKind::II, MetricScope::across));
    CHECK(variance_ratio(toy.embedding) == doctest::Approx(variance_ratio(e2)).epsilon(1e-9));
}

TEST_CASE("metric guards: oversized k and misaligned shapes") {
    const auto toy = toy_instance();
    CHECK_THROWS_AS(knn_metric(toy.embedding, toy.dataset, 5, MetricKind::I, MetricScope::across),
                    KTooLarge);
    CHECK_THROWS_AS(knn_metric(toy.embedding, toy.dataset, 8, MetricKind::I,
                               MetricScope::within_image),
                    KTooLarge);
    auto wrong = toy.embedding;
    wrong.n1 = 7;
    wrong.n2 = 5;
    CHECK_THROWS_AS(reconstruction_roc(wrong, toy.dataset), ShapeMismatch);
}

} // TEST_SUITE
