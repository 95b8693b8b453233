#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "rtpol/synthetic.hpp"
#include "rtpol/topic_store.hpp"

namespace rtpol::app {

struct Context {
    RunConfig config;
    unsigned jobs = 1;
    std::ostream* log = nullptr; ///< progress and warnings; null for silence
};

struct IngestSummary {
    std::size_t tweets = 0;
    std::size_t malformed = 0;
    std::vector<TopicEntry> topics;
};

/// Dump -> sub-keywords per seed -> topic slices. Writes the topic directory
/// (manifest + per-topic files) and subkeywords.csv.
IngestSummary cmd_ingest(const Context& ctx);

struct ScoreRow {
    TopicEntry topic;
    std::size_t nodes = 0, edges = 0;
    double average_degree = 0.0;
    PolarizationResult result;
};

/// Scores every viable topic. Writes results.csv and histogram.csv.
std::vector<ScoreRow> cmd_score(const Context& ctx);

/// Full-data features joined with scores. Writes features.csv, genre_ratio.csv
/// and characteristics.csv.
std::vector<FeatureRow> cmd_characterize(const Context& ctx);

enum class EvalMode { Naive, Ml, Oracle };
EvalMode parse_eval_mode(const std::string& s);
std::string_view eval_mode_name(EvalMode mode);

/// Low-resource evaluation over the scored topics. Writes
/// eval_<mode>_{precision,recall,f_score,r2,counts}.csv, eval_<mode>_summary.csv
/// and eval_<mode>_points.csv.
Evaluation cmd_evaluate(const Context& ctx, EvalMode mode);

/// Fits a forest on a features table; writes the model and cv.csv.
ForestModel cmd_train(const Context& ctx, const std::string& features_path, const std::string& model_path);

/// Writes predictions.csv (topic_id, phi_hat_pred, is_polarized).
std::vector<double> cmd_predict(const Context& ctx, const std::string& features_path, const std::string& model_path,
                                const std::string& out_path);

/// KMeans seed-article selection over the news corpus; writes seed_selection.csv.
SeedSelection cmd_select_seeds(const Context& ctx);

/// Writes a synthetic corpus: dump.jsonl, planted.csv and a ready-to-run
/// config.json whose output_dir is <dir>/out.
synth::Corpus cmd_synth(const std::string& dir, const synth::CorpusOptions& options, const RunConfig& base);

/// Per-topic results table as read back from results.csv.
struct ScoreTableRow {
    std::string topic_id;
    double phi_hat = 0.0;
    bool is_polarized = false;
};
std::vector<ScoreTableRow> read_results(const std::string& path);

std::string output_path(const RunConfig& config, const std::string& name);

} // namespace rtpol::app
