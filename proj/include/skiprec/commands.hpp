#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "skiprec/config.hpp"
#include "skiprec/evaluation.hpp"
#include "skiprec/ingest.hpp"
#include "skiprec/stats.hpp"
#include "skiprec/synth.hpp"
#include "skiprec/trainer.hpp"

namespace skiprec {

/// Labeled, split data with the id maps that produced its indices.
struct PreparedData {
  IdMaps ids;
  DatasetSplit split;
  double threshold = kDefaultSkipThreshold;
};

/// Split manifest CSV: user_id,video_id,user_index,video_index,class,split.
void write_split_manifest(std::ostream& out, const PreparedData& data);
PreparedData read_split_manifest(std::istream& in);

/// Reads and labels interactions, then splits per user.
PreparedData prepare_data(const std::vector<Interaction>& interactions, double threshold,
                          std::uint64_t seed);

nlohmann::json split_stats(const PreparedData& data);

/// Metrics CSV rows: variant,seed,metric,k,value.
void write_metrics_csv(std::ostream& out, const std::vector<MetricsReport>& reports,
                       bool header = true);
nlohmann::json to_json(const MetricsReport& r);

// ---- subcommands -----------------------------------------------------------

struct PrepareResult {
  PreparedData data;
  nlohmann::json stats;
};
/// Writes <out>/split.csv, <out>/stats.json and <out>/run_config.json.
PrepareResult cmd_prepare(const RunConfig& config);

/// Reads <split_dir>/split.csv (and features in fixed mode), trains and writes
/// <out>/{checkpoint.json, history.jsonl, run_config.json}.
TrainResult cmd_train(const RunConfig& config);

/// Writes <out>/metrics.csv and <out>/metrics.json.
MetricsReport cmd_evaluate(const std::filesystem::path& checkpoint,
                           const std::filesystem::path& split_dir, const std::vector<std::size_t>& ks,
                           const std::filesystem::path& out_dir, bool include_less = false);

struct PairedComparison {
  std::string reference;
  std::string other;
  Metric metric;
  std::size_t k;
  double reference_mean;
  double other_mean;
  TTestResult test;
};

struct ExperimentResult {
  std::vector<std::string> variants;
  std::vector<std::uint64_t> seeds;
  std::vector<std::vector<MetricsReport>> reports;  // [variant][repeat]
  std::vector<PairedComparison> comparisons;        // first variant vs each other
  nlohmann::json summary;

  /// Per-seed values of one variant's metric.
  std::vector<double> series(const std::string& variant, Metric metric, std::size_t k) const;
};

/// Applies a variant name to a config: graph modes (dual, total, highly_only)
/// or BPR modes (hierarchical, unseen_negative).
TrainConfig apply_variant(TrainConfig base, const std::string& variant);

/// Runs every variant on the same split for each seed (seed, seed+1, ...),
/// writing <out>/<variant>/<seed>/{checkpoint.json, history.jsonl, metrics.csv}
/// plus <out>/metrics.csv and <out>/summary.json. Needs >= 2 variants and
/// >= 2 repeats.
ExperimentResult cmd_experiment(const RunConfig& config);

/// Same as cmd_experiment on in-memory data; writes nothing when out_dir is
/// empty. `features` rows follow the video indices of build_id_maps(interactions).
ExperimentResult run_experiment(const RunConfig& config, const std::vector<Interaction>& interactions,
                                const Matrix* features);

/// Writes <out>/interactions.csv, <out>/features.csv and <out>/synth_config.json.
SynthData cmd_synth(const SynthConfig& config, const std::filesystem::path& out_dir);

/// Paired comparisons between two variants of a metrics CSV, one per (metric, k).
std::vector<PairedComparison> ttest_from_metrics(std::istream& metrics_csv, const std::string& a,
                                                 const std::string& b);

}  // namespace skiprec
