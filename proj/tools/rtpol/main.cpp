#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "rtpol/error.hpp"

namespace {

int fail(int code, const std::string& what) {
    std::cerr << "rtpol: error: " << what << '\n';
    return code;
}

} // namespace

int main(int argc, char** argv) {
    using namespace rtpol;
    CLI::App cli{"Retweet-network polarization toolkit"};
    cli.require_subcommand(1);
    cli.fallthrough();

    std::string config_path;
    std::optional<std::uint64_t> seed;
    unsigned jobs = 1;
    std::string out_dir;
    bool quiet = false;
    cli.add_option("--config", config_path, "Run configuration (JSON)")->check(CLI::ExistingFile);
    cli.add_option("--seed", seed, "Master seed (overrides the config)");
    cli.add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1u, 1024u));
    cli.add_option("--out", out_dir, "Output directory (overrides the config)");
    cli.add_flag("--quiet", quiet, "Suppress progress messages");

    auto* ingest = cli.add_subcommand("ingest", "Parse the dump, mine sub-keywords and slice topics");
    auto* score = cli.add_subcommand("score", "Score every viable topic");
    auto* characterize = cli.add_subcommand("characterize", "Feature and per-genre tables for scored topics");
    auto* run = cli.add_subcommand("run", "ingest, score and characterize in sequence");

    auto* evaluate = cli.add_subcommand("evaluate", "Low-resource evaluation matrices");
    std::string mode = "naive";
    evaluate->add_option("--mode", mode, "naive, ml or oracle")->check(CLI::IsMember({"naive", "ml", "oracle"}));

    auto* train = cli.add_subcommand("train", "Fit a random forest on a features table");
    std::string features_path, model_path, predictions_path;
    train->add_option("--features", features_path, "Features CSV (default: <out>/features.csv)");
    train->add_option("--model", model_path, "Model file to write (default: <out>/model.json)");

    auto* predict = cli.add_subcommand("predict", "Predict phi_hat for a features table");
    predict->add_option("--features", features_path, "Features CSV")->required();
    predict->add_option("--model", model_path, "Model file")->required();
    predict->add_option("--output", predictions_path, "Predictions CSV (default: <out>/predictions.csv)");

    auto* select = cli.add_subcommand("select-seeds", "KMeans selection of representative news articles");

    auto* synth_cmd = cli.add_subcommand("synth", "Write a synthetic corpus with planted labels");
    std::string synth_dir;
    synth::CorpusOptions synth_opts;
    synth_cmd->add_option("--dir", synth_dir, "Target directory")->required();
    synth_cmd->add_option("--seeds", synth_opts.seeds, "Seed keywords (1-6)");
    synth_cmd->add_option("--subs", synth_opts.subs_per_seed, "Sub-keywords per seed (1-10)");
    synth_cmd->add_option("--min-tweets", synth_opts.min_tweets, "Smallest topic");
    synth_cmd->add_option("--max-tweets", synth_opts.max_tweets, "Largest topic");
    synth_cmd->add_option("--corpus-seed", synth_opts.rng_seed, "Generator seed");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = cli.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        app::Context ctx;
        if (!config_path.empty()) ctx.config = app::load_config(config_path);
        if (seed) ctx.config.seed = *seed;
        if (!out_dir.empty()) ctx.config.output_dir = out_dir;
        ctx.jobs = jobs;
        ctx.log = quiet ? nullptr : &std::cerr;

        if (*ingest || *run) {
            const auto s = app::cmd_ingest(ctx);
            if (ctx.log) *ctx.log << "ingest: " << s.tweets << " tweets, " << s.topics.size() << " topics\n";
        }
        if (*score || *run) {
            const auto rows = app::cmd_score(ctx);
            std::size_t pol = 0;
            for (const auto& r : rows) pol += r.result.is_polarized ? 1 : 0;
            if (ctx.log) *ctx.log << "score: " << rows.size() << " topics scored, " << pol << " polarized\n";
        }
        if (*characterize || *run) {
            const auto rows = app::cmd_characterize(ctx);
            if (ctx.log) *ctx.log << "characterize: " << rows.size() << " feature rows\n";
        }
        if (*evaluate) {
            const auto ev = app::cmd_evaluate(ctx, app::parse_eval_mode(mode));
            if (ctx.log) {
                for (const auto& s : ev.per_k) {
                    *ctx.log << "evaluate: k=" << s.k << " precision=" << format_optional(s.precision)
                             << " recall=" << format_optional(s.recall) << " r2=" << format_optional(s.r2) << '\n';
                }
            }
        }
        if (*train) {
            if (features_path.empty()) features_path = app::output_path(ctx.config, "features.csv");
            if (model_path.empty()) model_path = app::output_path(ctx.config, "model.json");
            const auto m = app::cmd_train(ctx, features_path, model_path);
            if (ctx.log) *ctx.log << "train: " << m.trees.size() << " trees written to " << model_path << '\n';
        }
        if (*predict) {
            if (predictions_path.empty()) predictions_path = app::output_path(ctx.config, "predictions.csv");
            const auto p = app::cmd_predict(ctx, features_path, model_path, predictions_path);
            if (ctx.log) *ctx.log << "predict: " << p.size() << " rows written to " << predictions_path << '\n';
        }
        if (*select) {
            const auto sel = app::cmd_select_seeds(ctx);
            if (ctx.log) *ctx.log << "select-seeds: " << sel.representatives.size() << " articles\n";
        }
        if (*synth_cmd) {
            const auto corpus = app::cmd_synth(synth_dir, synth_opts, ctx.config);
            if (ctx.log) {
                *ctx.log << "synth: " << corpus.tweets.size() << " tweets, " << corpus.topics.size() << " topics in "
                         << synth_dir << '\n';
            }
        }
    } catch (const ArgumentError& e) {
        return fail(2, e.what());
    } catch (const SchemaError& e) {
        return fail(2, e.what());
    } catch (const IoError& e) {
        return fail(2, e.what());
    } catch (const std::exception& e) {
        return fail(1, e.what());
    }
    return 0;
}
