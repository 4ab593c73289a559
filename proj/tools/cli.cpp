#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mrsne/mrsne.hpp"
#include "mrsne/parallel.hpp"

namespace mrsne {

namespace {

struct EmbedArgs {
    std::string data;
    std::string out;
    double perplexity = 30.0;
    std::vector<double> betas;
    bool adaptive = false;
    bool drop_domain2 = false;
    std::string norm_mode = "unnorm";
    int iters = 500;
    double lr = 100.0;
    double momentum = 0.5;
    int lr_decay_every = 400;
    int dim = 2;
    std::uint64_t seed = 0;
    std::string kl_trace;
};

struct EvaluateArgs {
    std::string data;
    std::string embedding;
    std::string roc_out;
    std::vector<std::string> metrics;
    std::vector<std::string> scopes;
    std::vector<int> ks;
};

struct CdmcaArgs {
    std::string data;
    std::string out;
    int dim = 2;
    double lambda = 0.01;
};

struct PlotArgs {
    std::string embedding;
    std::string out;
    std::string labels;
};

NormMode parse_norm_mode(const std::string& name) {
    if (name == "unnorm") return NormMode::unnorm;
    if (name == "norm") return NormMode::norm;
    if (name == "pmi") return NormMode::pmi;
    throw InvalidConfig("unknown normalization mode '" + name + "'");
}

BetaWeights choose_betas(const EmbedArgs& args, const MultimodalDataset<double>& dataset) {
    if (!args.betas.empty()) {
        if (args.betas.size() != 3)
            throw InvalidConfig("--betas needs exactly three values");
        return BetaWeights(args.betas[0], args.betas[1], args.betas[2]);
    }
    if (args.adaptive) {
        if (!dataset.has_domain2())
            throw InvalidConfig("--adaptive-betas needs a second domain");
        return adaptive_betas(dataset.n1(), dataset.n2(), args.drop_domain2);
    }
    // Neither flag: equal relative weights, reducing to a single-domain run
    // when there is no second domain.
    if (dataset.has_domain2()) return BetaWeights(1, 1, 1);
    return BetaWeights(1, 0, 0);
}

int run_embed(const EmbedArgs& args) {
    const auto loaded = load_dataset(args.data);

    EmbedConfig config;
    config.perplexity = args.perplexity;
    config.dim = args.dim;
    config.betas = choose_betas(args, loaded.dataset);
    config.norm_mode = parse_norm_mode(args.norm_mode);
    config.iterations = args.iters;
    config.learning_rate = args.lr;
    config.momentum = args.momentum;
    config.lr_decay_every = args.lr_decay_every;
    config.seed = args.seed;

    const auto result = embed_dataset(loaded.dataset, config);
    save_embedding(result.embedding, args.out);

    if (!args.kl_trace.empty()) {
        std::ofstream trace(args.kl_trace);
        if (!trace) throw Error("cannot write to " + args.kl_trace);
        for (std::size_t t = 0; t < result.kl_history.size(); ++t)
            trace << t << ' ' << detail::format_value(result.kl_history[t]) << '\n';
    }
    return 0;
}

int run_evaluate(const EvaluateArgs& args) {
    const auto loaded = load_dataset(args.data);
    if (!loaded.dataset.has_domain2())
        throw Error("evaluation needs a dataset with two domains");
    const auto embedding = load_embedding(args.embedding);

    const auto roc = reconstruction_roc(embedding, loaded.dataset);
    if (roc.skipped_queries > 0)
        std::cerr << "warning: " << roc.skipped_queries
                  << " query image(s) had no positives and were excluded from the ROC\n";
    std::cout << "auc=" << detail::format_value(roc.auc) << '\n';
    if (!args.roc_out.empty()) save_roc_curve(roc, args.roc_out);

    std::cout << "variance_ratio=" << detail::format_value(variance_ratio(embedding)) << '\n';

    const std::vector<std::string> scopes =
        args.scopes.empty() ? std::vector<std::string>{"across", "within"} : args.scopes;
    const std::vector<int> ks = args.ks.empty() ? std::vector<int>{1} : args.ks;
    for (const auto& metric : args.metrics) {
        MetricKind kind;
        if (metric == "I")
            kind = MetricKind::I;
        else if (metric == "II")
            kind = MetricKind::II;
        else
            throw InvalidConfig("unknown metric '" + metric + "' (use I or II)");
        for (const auto& scope_name : scopes) {
            MetricScope scope;
            if (scope_name == "across")
                scope = MetricScope::across;
            else if (scope_name == "within")
                scope = MetricScope::within_image;
            else
                throw InvalidConfig("unknown scope '" + scope_name + "' (use across or within)");
            for (int k : ks) {
                const double value = knn_metric(embedding, loaded.dataset, k, kind, scope);
                std::cout << "metric_" << metric << '_' << scope_name << "_k" << k << '='
                          << detail::format_value(value) << '\n';
            }
        }
    }
    return 0;
}

int run_cdmca(const CdmcaArgs& args) {
    const auto loaded = load_dataset(args.data);
    const auto embedding = cdmca_embed(loaded.dataset, args.dim, args.lambda);
    save_embedding(embedding, args.out);
    return 0;
}

int run_plot(const PlotArgs& args) {
    const auto embedding = load_embedding(args.embedding);
    std::vector<std::string> labels1, labels2;
    if (!args.labels.empty()) {
        const auto manifest = load_manifest(args.labels);
        if (manifest.labels1) labels1 = load_labels(*manifest.labels1);
        if (manifest.labels2) labels2 = load_labels(*manifest.labels2);
    }
    emit_scatter_svg(embedding, labels1, labels2, args.out);
    return 0;
}

} // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Joint embedding of two feature domains linked by a weighted graph"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "Worker thread cap (0 = hardware count)")
        ->capture_default_str();

    EmbedArgs embed_args;
    auto* embed_cmd = app.add_subcommand("embed", "Compute an embedding of a dataset");
    embed_cmd->add_option("--data", embed_args.data, "Dataset manifest (JSON)")->required();
    embed_cmd->add_option("--out", embed_args.out, "Output embedding path")->required();
    embed_cmd
        ->add_option("--perplexity", embed_args.perplexity,
                     "Neighborhood size target; the default 30 is the customary "
                     "t-SNE choice, not tied to any dataset")
        ->capture_default_str();
    auto* betas_opt = embed_cmd->add_option("--betas", embed_args.betas,
                                            "Relative block weights b1,b2,b12")
                          ->delimiter(',')
                          ->expected(3);
    auto* adaptive_opt = embed_cmd->add_flag("--adaptive-betas", embed_args.adaptive,
                                             "Weights proportional to block sizes");
    adaptive_opt->excludes(betas_opt);
    embed_cmd
        ->add_flag("--drop-domain2", embed_args.drop_domain2,
                   "With --adaptive-betas: zero the domain-2 block (for degenerate "
                   "feature spaces such as one-hot tags)")
        ->needs(adaptive_opt);
    embed_cmd
        ->add_option("--norm-mode", embed_args.norm_mode, "Cross-graph preprocessing")
        ->check(CLI::IsMember({"unnorm", "norm", "pmi"}))
        ->capture_default_str();
    embed_cmd->add_option("--iters", embed_args.iters, "Gradient descent iterations")
        ->capture_default_str();
    embed_cmd->add_option("--lr", embed_args.lr, "Initial learning rate")->capture_default_str();
    embed_cmd->add_option("--momentum", embed_args.momentum, "Momentum coefficient")
        ->capture_default_str();
    embed_cmd
        ->add_option("--lr-decay-every", embed_args.lr_decay_every,
                     "Divide the learning rate by 10 after this many iterations")
        ->capture_default_str();
    embed_cmd->add_option("--dim", embed_args.dim, "Embedding dimension")->capture_default_str();
    embed_cmd->add_option("--seed", embed_args.seed, "Random seed")->capture_default_str();
    embed_cmd->add_option("--kl-trace", embed_args.kl_trace,
                          "Write the per-iteration objective to this path");

    EvaluateArgs eval_args;
    auto* eval_cmd = app.add_subcommand("evaluate", "Score an embedding against its dataset");
    eval_cmd->add_option("--data", eval_args.data, "Dataset manifest (JSON)")->required();
    eval_cmd->add_option("--embedding", eval_args.embedding, "Embedding path")->required();
    eval_cmd->add_option("--roc-out", eval_args.roc_out, "Write the ROC curve (k fpr tpr lines)");
    eval_cmd->add_option("--metrics", eval_args.metrics, "Neighborhood metrics to report (I,II)")
        ->delimiter(',');
    eval_cmd->add_option("--scope", eval_args.scopes, "Metric scopes (across,within)")
        ->delimiter(',');
    eval_cmd->add_option("--k", eval_args.ks, "Neighborhood sizes for the metrics")
        ->delimiter(',');

    CdmcaArgs cdmca_args;
    auto* cdmca_cmd = app.add_subcommand("cdmca", "Linear CCA baseline on link-duplicated pairs");
    cdmca_cmd->add_option("--data", cdmca_args.data, "Dataset manifest (JSON)")->required();
    cdmca_cmd->add_option("--out", cdmca_args.out, "Output embedding path")->required();
    cdmca_cmd->add_option("--dim", cdmca_args.dim, "Projection dimension")->capture_default_str();
    cdmca_cmd->add_option("--lambda", cdmca_args.lambda, "Covariance regularization")
        ->capture_default_str();

    PlotArgs plot_args;
    auto* plot_cmd = app.add_subcommand("plot", "Render a 2-D embedding as an SVG scatter plot");
    plot_cmd->add_option("--embedding", plot_args.embedding, "Embedding path")->required();
    plot_cmd->add_option("--out", plot_args.out, "Output SVG path")->required();
    plot_cmd->add_option("--labels", plot_args.labels, "Manifest providing label files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return 1;
    }

    worker_cap().store(threads);

    try {
        if (embed_cmd->parsed()) return run_embed(embed_args);
        if (eval_cmd->parsed()) return run_evaluate(eval_args);
        if (cdmca_cmd->parsed()) return run_cdmca(cdmca_args);
        if (plot_cmd->parsed()) return run_plot(plot_args);
        std::cerr << app.help();
        return 1;
    } catch (const PerplexityUnreachable& e) {
        std::cerr << "error: " << e.what() << "\n"
                  << "hint: set β₂=0 / --drop-domain2 for degenerate (e.g. one-hot) "
                     "domains\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace mrsne
