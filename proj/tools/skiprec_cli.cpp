// skiprec command-line entry point.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "skiprec/commands.hpp"
#include "skiprec/error.hpp"
#include "skiprec/kernels.hpp"

namespace {

using namespace skiprec;

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> threshold;
  std::optional<std::string> graph_mode;
  std::optional<std::string> bpr_mode;
  std::optional<std::string> feature_mode;
  std::optional<double> lambda;
  std::optional<std::string> k_list;
  std::optional<std::size_t> repeats;
  std::optional<std::size_t> dim;
  std::optional<std::size_t> epochs;
  std::optional<std::size_t> batch_size;
  std::optional<std::string> out;
  std::optional<std::string> interactions;
  std::optional<std::string> features;
  std::optional<std::string> split;
  std::optional<std::string> variants;
  bool include_less = false;
};

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config file " + path + ": " + e.what());
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

RunConfig resolve(const Overrides& o) {
  RunConfig c;
  if (!o.config_path.empty()) apply_json(read_json_file(o.config_path), c);
  if (o.seed) c.train.seed = *o.seed;
  if (o.threshold) c.train.threshold = *o.threshold;
  if (o.graph_mode) c.train.graph_mode = parse_graph_mode(*o.graph_mode);
  if (o.bpr_mode) c.train.bpr_mode = parse_bpr_mode(*o.bpr_mode);
  if (o.feature_mode) c.train.feature_mode = parse_feature_mode(*o.feature_mode);
  if (o.lambda) c.train.lambda = *o.lambda;
  if (o.k_list) c.ks = parse_k_list(*o.k_list);
  if (o.repeats) c.repeats = *o.repeats;
  if (o.dim) c.train.dim = *o.dim;
  if (o.epochs) c.train.max_epochs = *o.epochs;
  if (o.batch_size) c.train.batch_size = *o.batch_size;
  if (o.out) c.out_dir = *o.out;
  if (o.interactions) c.interactions_path = *o.interactions;
  if (o.features) c.features_path = *o.features;
  if (o.split) c.split_dir = *o.split;
  if (o.variants) c.variants = split_list(*o.variants);
  if (o.include_less) c.train.include_less_relevant = true;
  c.validate();
  return c;
}

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON config with flat keys; flags override it");
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--threshold", o.threshold, "Quick-skip threshold in seconds (default 5.0)");
  cmd->add_option("--out", o.out, "Output directory");
}

void add_training(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--graph-mode", o.graph_mode, "dual | total | highly_only");
  cmd->add_option("--bpr-mode", o.bpr_mode, "hierarchical | unseen_negative");
  cmd->add_option("--feature-mode", o.feature_mode, "fixed | learnable");
  cmd->add_option("--lambda", o.lambda, "BPR weight in the combined loss (default 0.5)");
  cmd->add_option("--dim", o.dim, "Embedding dimension (default 128)");
  cmd->add_option("--epochs", o.epochs, "Maximum epochs (default 30)");
  cmd->add_option("--batch-size", o.batch_size, "Triplets per batch (default 1024)");
  cmd->add_option("--features", o.features, "Video features CSV (fixed feature mode)");
  cmd->add_flag("--include-less-relevant", o.include_less,
                "Count less positive items as relevant during ranking");
}

void print_comparisons(const std::vector<PairedComparison>& rows) {
  std::cout << "reference,other,metric,k,reference_mean,other_mean,t,df,p\n";
  for (const auto& c : rows) {
    std::cout << c.reference << ',' << c.other << ',' << metric_name(c.metric) << ',' << c.k << ','
              << c.reference_mean << ',' << c.other_mean << ',' << c.test.t << ',' << c.test.df
              << ',' << c.test.p << (c.test.degenerate ? ",degenerate" : "") << '\n';
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Skip-aware dual-graph micro-video recommender"};
  app.require_subcommand(1);
  Overrides o;

  auto* prepare = app.add_subcommand("prepare", "Label, deduplicate and split interactions");
  add_common(prepare, o);
  prepare->add_option("--interactions", o.interactions, "Interactions CSV")->required();
  prepare->add_option("--features", o.features, "Video features CSV (checked in fixed mode)");
  prepare->add_option("--feature-mode", o.feature_mode, "fixed | learnable");
  prepare->add_option("--dim", o.dim, "Feature dimension (default 128)");

  auto* train_cmd = app.add_subcommand("train", "Train on a prepared split");
  add_common(train_cmd, o);
  add_training(train_cmd, o);
  train_cmd->add_option("--split", o.split, "Directory written by prepare")->required();

  std::string checkpoint;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Top-k metrics on the test split");
  add_common(evaluate_cmd, o);
  evaluate_cmd->add_option("--checkpoint", checkpoint, "checkpoint.json")->required();
  evaluate_cmd->add_option("--split", o.split, "Directory written by prepare")->required();
  evaluate_cmd->add_option("--k", o.k_list, "Cutoffs, e.g. 3,5");
  evaluate_cmd->add_flag("--include-less-relevant", o.include_less,
                         "Count less positive items as relevant");

  auto* experiment = app.add_subcommand("experiment", "Compare variants over repeated seeds");
  add_common(experiment, o);
  add_training(experiment, o);
  experiment->add_option("--interactions", o.interactions, "Interactions CSV");
  experiment->add_option("--variants", o.variants,
                         "Comma list from dual,total,highly_only,hierarchical,unseen_negative");
  experiment->add_option("--repeats", o.repeats, "Seeds per variant (default 10)");
  experiment->add_option("--k", o.k_list, "Cutoffs, e.g. 3,5");

  std::string synth_config;
  std::optional<std::uint64_t> synth_seed;
  std::optional<std::size_t> synth_dim, synth_users, synth_videos;
  std::string synth_out = "synth";
  auto* synth = app.add_subcommand("synth", "Generate a synthetic interaction corpus");
  synth->add_option("--config", synth_config, "JSON synth config");
  synth->add_option("--seed", synth_seed, "Random seed");
  synth->add_option("--dim", synth_dim, "Feature dimension");
  synth->add_option("--users", synth_users, "Number of users");
  synth->add_option("--videos", synth_videos, "Number of videos");
  synth->add_option("--out", synth_out, "Output directory");

  std::string metrics_path, ttest_a, ttest_b, ttest_variants;
  auto* ttest = app.add_subcommand("ttest", "Paired t-test between two score series");
  ttest->add_option("--metrics", metrics_path, "metrics.csv from experiment");
  ttest->add_option("--variants", ttest_variants, "Two variants to compare, e.g. dual,total");
  ttest->add_option("--a", ttest_a, "First series, comma separated");
  ttest->add_option("--b", ttest_b, "Second series, comma separated");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  std::cerr << "[skiprec] kernels: " << kernels::backend_name(kernels::active_backend()) << '\n';

  if (prepare->parsed()) {
    const auto result = cmd_prepare(resolve(o));
    std::cout << result.stats.dump(2) << '\n';
  } else if (train_cmd->parsed()) {
    const auto result = cmd_train(resolve(o));
    std::cout << "best epoch " << result.best_epoch << ", validation recall "
              << result.best_val_recall << '\n';
  } else if (evaluate_cmd->parsed()) {
    const auto c = resolve(o);
    const auto report = cmd_evaluate(checkpoint, c.split_dir, c.ks, c.out_dir,
                                     c.train.include_less_relevant);
    write_metrics_csv(std::cout, {report});
  } else if (experiment->parsed()) {
    auto c = resolve(o);
    if (c.variants.empty()) c.variants = {"dual", "total", "highly_only"};
    const auto result = cmd_experiment(c);
    print_comparisons(result.comparisons);
  } else if (synth->parsed()) {
    SynthConfig sc;
    if (!synth_config.empty()) apply_json(read_json_file(synth_config), sc);
    if (synth_seed) sc.seed = *synth_seed;
    if (synth_dim) sc.feature_dim = *synth_dim;
    if (synth_users) sc.n_users = *synth_users;
    if (synth_videos) sc.n_videos = *synth_videos;
    cmd_synth(sc, synth_out);
  } else if (ttest->parsed()) {
    if (!metrics_path.empty()) {
      const auto names = split_list(ttest_variants);
      if (names.size() != 2) throw UsageError("--variants needs exactly two names");
      std::ifstream in(metrics_path);
      if (!in) throw DataError("cannot open " + metrics_path);
      print_comparisons(ttest_from_metrics(in, names[0], names[1]));
    } else {
      std::vector<double> a, b;
      for (const auto& s : split_list(ttest_a)) a.push_back(std::stod(s));
      for (const auto& s : split_list(ttest_b)) b.push_back(std::stod(s));
      const auto r = paired_t_test(a, b);
      std::cout << "t=" << r.t << " df=" << r.df << " p=" << r.p
                << (r.degenerate ? " (zero variance)" : "") << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const skiprec::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.kind());
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
