#ifndef MRSNE_PIPELINE_HPP
#define MRSNE_PIPELINE_HPP

#include "mrsne/embedder.hpp"
#include "mrsne/relation.hpp"
#include "mrsne/sn_graph.hpp"
#include "mrsne/types.hpp"

namespace mrsne {

/// Builds the augmented relation for a dataset: SN graphs for every domain
/// with a positive weight, the normalized cross relation when the across
/// weight is positive. Domains with zero weight never touch the bandwidth
/// solver, so a degenerate (e.g. one-hot) domain can be carried along with
/// its weight set to zero.
template <typename Scalar>
AugmentedRelation<Scalar> build_augmented_relation(const MultimodalDataset<Scalar>& dataset,
                                                   const EmbedConfig& config) {
    validate(dataset);
    validate(config);
    const BetaWeights& betas = config.betas;
    if (!dataset.has_domain2() && (betas.beta2() > 0 || betas.beta12() > 0))
        throw MissingGraphWithPositiveBeta("domain 2");

    const Eigen::Index n1 = dataset.n1();
    const Eigen::Index n2 = dataset.n2();
    if (betas.beta1() > 0 && !(config.perplexity < double(n1)))
        throw InvalidConfig("perplexity must be below the domain 1 size");
    if (betas.beta2() > 0 && !(config.perplexity < double(n2)))
        throw InvalidConfig("perplexity must be below the domain 2 size");

    SnGraph<Scalar> p1, p2;
    CrossRelation<Scalar> r;
    const SnGraph<Scalar>* p1_ptr = nullptr;
    const SnGraph<Scalar>* p2_ptr = nullptr;
    const CrossRelation<Scalar>* r_ptr = nullptr;
    if (betas.beta1() > 0) {
        p1 = build_sn_graph(dataset.domain1, Scalar(config.perplexity));
        p1_ptr = &p1;
    }
    if (betas.beta2() > 0) {
        p2 = build_sn_graph(*dataset.domain2, Scalar(config.perplexity));
        p2_ptr = &p2;
    }
    if (betas.beta12() > 0) {
        r = normalize_cross_graph(dataset.cross_graph, config.norm_mode);
        r_ptr = &r;
    }
    return assemble_augmented(p1_ptr, p2_ptr, r_ptr, betas, n1, n2);
}

/// The full run: augmented relation, then the optimizer.
template <typename Scalar>
EmbedResult<Scalar> embed_dataset(const MultimodalDataset<Scalar>& dataset,
                                  const EmbedConfig& config,
                                  const IterationObserver<Scalar>& observer = {}) {
    const AugmentedRelation<Scalar> p_tilde = build_augmented_relation(dataset, config);
    return embed(p_tilde, config, observer);
}

} // namespace mrsne

#endif // MRSNE_PIPELINE_HPP
