#include <doctest.h>

#include <random>

#include "mrsne/pipeline.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace mrsne;

namespace {

MultimodalDataset<double> two_domain_dataset(std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    MultimodalDataset<double> ds;
    ds.domain1 = oracle::random_matrix(8, 3, gen);
    ds.domain2 = oracle::random_matrix(5, 2, gen);
    ds.cross_graph.resize(8, 5);
    for (Eigen::Index i = 0; i < 8; ++i) ds.cross_graph.insert(i, i % 5) = 1.0;
    return ds;
}

} // namespace

TEST_SUITE("pipeline") {

TEST_CASE("single domain with weights (1, 0, 0) runs as plain t-SNE") {
    std::mt19937_64 gen(61);
    MultimodalDataset<double> ds;
    ds.domain1 = oracle::random_matrix(10, 4, gen);

    EmbedConfig config;
    config.perplexity = 3.0;
    config.betas = BetaWeights(1, 0, 0);
    config.iterations = 30;

    const auto p_tilde = build_augmented_relation(ds, config);
    CHECK(p_tilde.n1 == 10);
    CHECK(p_tilde.n2 == 0);
    const auto direct = build_sn_graph(ds.domain1, 3.0);
    CHECK(testutil::exactly_equal(p_tilde.p_tilde, direct.probs));

    const auto result = embed_dataset(ds, config);
    CHECK(result.embedding.rows() == 10);
    CHECK(result.embedding.n2 == 0);
}

TEST_CASE("positive cross weight without a second domain is rejected") {
    MultimodalDataset<double> ds;
    ds.domain1 = Matrix<double>::Random(6, 3);
    EmbedConfig config;
    config.perplexity = 2.0;
    config.betas = BetaWeights(1, 0, 1);
    CHECK_THROWS_AS(build_augmented_relation(ds, config), MissingGraphWithPositiveBeta);
}

TEST_CASE("perplexity must stay below every weighted domain size") {
    auto ds = two_domain_dataset(62);
    EmbedConfig config;
    config.perplexity = 6.0;  // n2 = 5
    CHECK_THROWS_AS(build_augmented_relation(ds, config), InvalidConfig);

    config.perplexity = 4.0;
    CHECK_NOTHROW(build_augmented_relation(ds, config));

    // dropping the small domain's weight lifts its constraint
    config.perplexity = 6.0;
    config.betas = BetaWeights(1, 0, 1);
    CHECK_NOTHROW(build_augmented_relation(ds, config));
}

TEST_CASE("zero-weight domains never touch the bandwidth solver") {
    // a one-hot second domain is degenerate for calibration
    auto ds = two_domain_dataset(63);
    ds.domain2 = Matrix<double>(Matrix<double>::Identity(5, 5));
    EmbedConfig config;
    config.perplexity = 3.0;
    CHECK_THROWS_AS(build_augmented_relation(ds, config), PerplexityUnreachable);

    config.betas = BetaWeights(1, 0, 1);
    CHECK_NOTHROW(build_augmented_relation(ds, config));
}

TEST_CASE("block scales follow the configured weights") {
    auto ds = two_domain_dataset(64);
    EmbedConfig config;
    config.perplexity = 3.0;
    config.betas = BetaWeights(2, 1, 1);
    const auto p_tilde = build_augmented_relation(ds, config);
    CHECK(p_tilde.p_tilde.topLeftCorner(8, 8).sum() == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(p_tilde.p_tilde.bottomRightCorner(5, 5).sum() == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(std::abs(p_tilde.p_tilde.sum() - 1.0) <= 1e-10);
}

} // TEST_SUITE
