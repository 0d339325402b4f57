#include "skiprec/commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "skiprec/checkpoint.hpp"
#include "skiprec/error.hpp"
#include "text_util.hpp"

namespace skiprec {

namespace fs = std::filesystem;

namespace {

std::ifstream open_input(const fs::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw DataError(std::string("cannot open ") + what + " file " + path.string());
  return in;
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
}

std::vector<Interaction> read_interactions(const fs::path& path) {
  auto in = open_input(path, "interactions");
  try {
    return parse_interactions(in);
  } catch (const ParseError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

Matrix read_features(const fs::path& path, const IdMap& videos, std::size_t dim) {
  auto in = open_input(path, "features");
  try {
    return load_features(in, videos, dim);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

const char* split_name(int which) {
  static const char* names[] = {"train", "validation", "test"};
  return names[which];
}

void log_line(const std::string& msg) { std::cerr << "[skiprec] " << msg << '\n'; }

}  // namespace

// ---- manifests ---------------------------------------------------------------

void write_split_manifest(std::ostream& out, const PreparedData& data) {
  out << "user_id,video_id,user_index,video_index,class,split\n";
  const std::vector<LabeledPair>* parts[] = {&data.split.train, &data.split.validation,
                                             &data.split.test};
  for (int s = 0; s < 3; ++s) {
    for (const auto& p : *parts[s]) {
      out << data.ids.users.id(p.user) << ',' << data.ids.videos.id(p.video) << ',' << p.user << ','
          << p.video << ',' << class_code(p.cls) << ',' << split_name(s) << '\n';
    }
  }
}

PreparedData read_split_manifest(std::istream& in) {
  PreparedData data;
  std::vector<std::string> user_ids, video_ids;
  auto bind = [](std::vector<std::string>& ids, std::size_t index, std::string_view id,
                 std::size_t line_no) {
    if (index >= ids.size()) ids.resize(index + 1);
    if (ids[index].empty()) {
      ids[index] = std::string(id);
    } else if (ids[index] != id) {
      throw ParseError(line_no, "index bound to two different ids");
    }
  };
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::strip_cr(line);
    if (text.empty()) continue;
    const auto f = detail::split_fields(text);
    if (!header) {
      if (text != "user_id,video_id,user_index,video_index,class,split") {
        throw ParseError(line_no, "unexpected split manifest header");
      }
      header = true;
      continue;
    }
    if (f.size() != 6) throw ParseError(line_no, "expected 6 fields");
    const auto ui = detail::parse_int(f[2]);
    const auto vi = detail::parse_int(f[3]);
    if (!ui || !vi || *ui < 0 || *vi < 0 || f[0].empty() || f[1].empty()) {
      throw ParseError(line_no, "bad id or index");
    }
    bind(user_ids, static_cast<std::size_t>(*ui), f[0], line_no);
    bind(video_ids, static_cast<std::size_t>(*vi), f[1], line_no);
    LabeledPair p{static_cast<std::uint32_t>(*ui), static_cast<std::uint32_t>(*vi),
                  parse_class_code(f[4])};
    if (f[5] == "train") {
      data.split.train.push_back(p);
    } else if (f[5] == "validation") {
      data.split.validation.push_back(p);
    } else if (f[5] == "test") {
      data.split.test.push_back(p);
    } else {
      throw ParseError(line_no, "unknown split '" + std::string(f[5]) + "'");
    }
  }
  if (!header) throw ParseError(1, "empty split manifest");
  for (const auto& id : user_ids) {
    if (id.empty()) throw DataError("split manifest user indices are not contiguous");
    data.ids.users.add(id);
  }
  for (const auto& id : video_ids) {
    if (id.empty()) throw DataError("split manifest video indices are not contiguous");
    data.ids.videos.add(id);
  }
  if (data.ids.users.size() != user_ids.size() || data.ids.videos.size() != video_ids.size()) {
    throw DataError("split manifest maps one id to several indices");
  }
  return data;
}

PreparedData prepare_data(const std::vector<Interaction>& interactions, double threshold,
                          std::uint64_t seed) {
  PreparedData data;
  data.threshold = threshold;
  data.ids = build_id_maps(interactions);
  const auto pairs = deduplicate_and_label(interactions, data.ids, threshold);
  data.split = split_per_user(pairs, SplitRatios{}, seed);
  return data;
}

nlohmann::json split_stats(const PreparedData& data) {
  auto hist = [](const std::vector<LabeledPair>& pairs) {
    const auto h = class_histogram(pairs);
    return nlohmann::json{{"H", h[0]}, {"L", h[1]}, {"N", h[2]}};
  };
  std::vector<LabeledPair> all = data.split.train;
  all.insert(all.end(), data.split.validation.begin(), data.split.validation.end());
  all.insert(all.end(), data.split.test.begin(), data.split.test.end());
  return {{"n_users", data.ids.users.size()},
          {"n_videos", data.ids.videos.size()},
          {"n_pairs", all.size()},
          {"seed", data.split.seed},
          {"threshold", data.threshold},
          {"classes", hist(all)},
          {"train", {{"n_pairs", data.split.train.size()}, {"classes", hist(data.split.train)}}},
          {"validation",
           {{"n_pairs", data.split.validation.size()}, {"classes", hist(data.split.validation)}}},
          {"test", {{"n_pairs", data.split.test.size()}, {"classes", hist(data.split.test)}}}};
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricsReport>& reports, bool header) {
  if (header) out << "variant,seed,metric,k,value\n";
  for (const auto& r : reports) {
    for (const auto& v : r.values) {
      out << r.variant << ',' << r.seed << ',' << metric_name(v.metric) << ',' << v.k << ','
          << detail::format_double(v.mean) << '\n';
    }
  }
}

nlohmann::json to_json(const MetricsReport& r) {
  nlohmann::json values = nlohmann::json::array();
  for (const auto& v : r.values) {
    values.push_back({{"metric", metric_name(v.metric)}, {"k", v.k}, {"mean", v.mean},
                      {"std", v.stddev}});
  }
  return {{"variant", r.variant},
          {"seed", r.seed},
          {"users_evaluated", r.users_evaluated},
          {"users_excluded", r.users_excluded},
          {"values", values}};
}

// ---- prepare / train / evaluate ------------------------------------------------

PrepareResult cmd_prepare(const RunConfig& config) {
  config.validate();
  if (config.interactions_path.empty()) throw UsageError("prepare needs --interactions");
  const auto interactions = read_interactions(config.interactions_path);
  PrepareResult result;
  result.data = prepare_data(interactions, config.train.threshold, config.train.seed);
  if (config.train.feature_mode == FeatureMode::Fixed) {
    if (config.features_path.empty()) {
      throw DataError("fixed feature mode needs a features file (--features)");
    }
    read_features(config.features_path, result.data.ids.videos, config.train.dim);
  }
  result.stats = split_stats(result.data);
  const fs::path out_dir(config.out_dir);
  fs::create_directories(out_dir);
  {
    auto out = open_output(out_dir / "split.csv");
    write_split_manifest(out, result.data);
  }
  write_json(out_dir / "stats.json", result.stats);
  write_json(out_dir / "run_config.json", to_json(config));
  log_line("prepared " + std::to_string(result.data.ids.users.size()) + " users, " +
           std::to_string(result.data.ids.videos.size()) + " videos");
  return result;
}

namespace {

PreparedData load_prepared(const fs::path& split_dir) {
  auto in = open_input(split_dir / "split.csv", "split manifest");
  try {
    return read_split_manifest(in);
  } catch (const ParseError& e) {
    throw DataError((split_dir / "split.csv").string() + ": " + e.what());
  }
}

}  // namespace

TrainResult cmd_train(const RunConfig& config) {
  config.validate();
  if (config.split_dir.empty()) throw UsageError("train needs --split (a prepared directory)");
  const auto data = load_prepared(config.split_dir);
  const auto& tc = config.train;
  const std::size_t n_users = data.ids.users.size();
  const std::size_t n_videos = data.ids.videos.size();

  Matrix features;
  if (tc.feature_mode == FeatureMode::Fixed) {
    if (config.features_path.empty()) throw DataError("fixed feature mode needs --features");
    features = read_features(config.features_path, data.ids.videos, tc.dim);
  }
  const auto graphs = build_dual_graphs(data.split.train, n_users, n_videos, tc.graph_mode);
  auto params = init_params(tc.dim, n_users, n_videos, tc.seed, tc.feature_mode,
                            tc.feature_mode == FeatureMode::Fixed ? &features : nullptr);

  const fs::path out_dir(config.out_dir);
  fs::create_directories(out_dir);
  write_json(out_dir / "run_config.json", to_json(config));
  auto history = open_output(out_dir / "history.jsonl");
  auto result = train(tc, data.split, graphs, std::move(params), [&](const EpochRecord& r) {
    history << to_json(r, tc.early_stop_k).dump() << '\n';
    history.flush();
    log_line("epoch " + std::to_string(r.epoch) + " loss " + detail::format_double(r.loss) +
             " val_recall@" + std::to_string(tc.early_stop_k) + " " +
             detail::format_double(r.val_recall));
  });
  Checkpoint ckpt;
  ckpt.config = to_json(config);
  ckpt.n_users = n_users;
  ckpt.params = result.params;
  save_checkpoint(out_dir / "checkpoint.json", ckpt);
  return result;
}

MetricsReport cmd_evaluate(const fs::path& checkpoint, const fs::path& split_dir,
                           const std::vector<std::size_t>& ks, const fs::path& out_dir,
                           bool include_less) {
  const auto ckpt = load_checkpoint(checkpoint);
  const auto data = load_prepared(split_dir);
  if (ckpt.n_users != data.ids.users.size() || ckpt.params.h_v0.rows() != data.ids.videos.size()) {
    throw DataError("checkpoint does not match the split's user/video counts");
  }
  TrainConfig tc;
  {
    // The snapshot is a flat RunConfig; keep the training keys.
    const auto known = to_json(TrainConfig{});
    nlohmann::json only = nlohmann::json::object();
    if (ckpt.config.is_object()) {
      for (const auto& [key, value] : ckpt.config.items()) {
        if (known.contains(key)) only[key] = value;
      }
    }
    try {
      apply_json(only, tc);
    } catch (const UsageError& e) {
      throw DataError(std::string("checkpoint config: ") + e.what());
    }
  }
  const auto graphs =
      build_dual_graphs(data.split.train, data.ids.users.size(), data.ids.videos.size(), tc.graph_mode);
  auto report = evaluate(ckpt.params, graphs, data.split.test, ks, include_less);
  report.variant = std::string(graph_mode_name(tc.graph_mode)) + "+" +
                   std::string(bpr_mode_name(tc.bpr_mode));
  report.seed = tc.seed;
  fs::create_directories(out_dir);
  {
    auto out = open_output(out_dir / "metrics.csv");
    write_metrics_csv(out, {report});
  }
  write_json(out_dir / "metrics.json", to_json(report));
  return report;
}

// ---- experiment ---------------------------------------------------------------

TrainConfig apply_variant(TrainConfig base, const std::string& variant) {
  if (variant == "dual" || variant == "total" || variant == "highly_only") {
    base.graph_mode = parse_graph_mode(variant);
  } else if (variant == "hierarchical" || variant == "unseen_negative") {
    base.bpr_mode = parse_bpr_mode(variant);
  } else {
    throw UsageError("unknown variant '" + variant +
                     "' (expected dual, total, highly_only, hierarchical or unseen_negative)");
  }
  return base;
}

std::vector<double> ExperimentResult::series(const std::string& variant, Metric metric,
                                             std::size_t k) const {
  for (std::size_t i = 0; i < variants.size(); ++i) {
    if (variants[i] != variant) continue;
    std::vector<double> out;
    for (const auto& r : reports[i]) out.push_back(r.mean(metric, k));
    return out;
  }
  throw UsageError("variant '" + variant + "' not in experiment");
}

namespace {

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

nlohmann::json comparison_json(const PairedComparison& c) {
  return {{"reference", c.reference},
          {"other", c.other},
          {"metric", metric_name(c.metric)},
          {"k", c.k},
          {"reference_mean", c.reference_mean},
          {"other_mean", c.other_mean},
          {"t", std::isfinite(c.test.t) ? nlohmann::json(c.test.t) : nlohmann::json(nullptr)},
          {"df", c.test.df},
          {"p", c.test.p},
          {"degenerate", c.test.degenerate}};
}

}  // namespace

ExperimentResult run_experiment(const RunConfig& config, const std::vector<Interaction>& interactions,
                                const Matrix* features) {
  config.validate();
  if (config.variants.size() < 2) throw UsageError("experiment needs at least two variants");
  if (config.repeats < 2) {
    throw UsageError("experiment needs repeats >= 2 for a paired t-test (got " +
                     std::to_string(config.repeats) + ")");
  }
  for (const auto& v : config.variants) apply_variant(config.train, v);
  if (config.train.feature_mode == FeatureMode::Fixed && features == nullptr) {
    throw DataError("fixed feature mode needs a features file");
  }

  const bool write = !config.out_dir.empty();
  const fs::path out_dir(config.out_dir);
  ExperimentResult result;
  result.variants = config.variants;
  result.reports.resize(config.variants.size());

  const auto ids = build_id_maps(interactions);
  const auto pairs = deduplicate_and_label(interactions, ids, config.train.threshold);
  const std::size_t n_users = ids.users.size();
  const std::size_t n_videos = ids.videos.size();

  for (std::size_t rep = 0; rep < config.repeats; ++rep) {
    const std::uint64_t seed = config.train.seed + rep;
    result.seeds.push_back(seed);
    const auto split = split_per_user(pairs, SplitRatios{}, seed);
    for (std::size_t vi = 0; vi < config.variants.size(); ++vi) {
      const auto& variant = config.variants[vi];
      auto tc = apply_variant(config.train, variant);
      tc.seed = seed;
      const auto graphs = build_dual_graphs(split.train, n_users, n_videos, tc.graph_mode);
      auto params = init_params(tc.dim, n_users, n_videos, seed, tc.feature_mode,
                                tc.feature_mode == FeatureMode::Fixed ? features : nullptr);
      std::vector<EpochRecord> history;
      auto trained = train(tc, split, graphs, std::move(params),
                           [&](const EpochRecord& r) { history.push_back(r); });
      auto report = evaluate(trained.params, graphs, split.test, config.ks,
                             tc.include_less_relevant);
      report.variant = variant;
      report.seed = seed;
      log_line(variant + " seed " + std::to_string(seed) + ": best epoch " +
               std::to_string(trained.best_epoch) + ", test recall@" +
               std::to_string(config.ks.back()) + " " +
               detail::format_double(report.mean(Metric::Recall, config.ks.back())));
      if (write) {
        const auto cell = out_dir / variant / std::to_string(seed);
        fs::create_directories(cell);
        RunConfig cell_config = config;
        cell_config.train = tc;
        Checkpoint ckpt;
        ckpt.config = to_json(cell_config);
        ckpt.n_users = n_users;
        ckpt.params = trained.params;
        save_checkpoint(cell / "checkpoint.json", ckpt);
        auto hist = open_output(cell / "history.jsonl");
        for (const auto& r : history) hist << to_json(r, tc.early_stop_k).dump() << '\n';
        auto metrics = open_output(cell / "metrics.csv");
        write_metrics_csv(metrics, {report});
      }
      result.reports[vi].push_back(std::move(report));
    }
  }

  nlohmann::json variants_json = nlohmann::json::object();
  for (const auto& variant : result.variants) {
    nlohmann::json rows = nlohmann::json::array();
    for (auto metric : kAllMetrics) {
      for (auto k : config.ks) {
        const auto s = result.series(variant, metric, k);
        rows.push_back({{"metric", metric_name(metric)}, {"k", k}, {"mean", mean_of(s)},
                        {"std", sd_of(s)}, {"values", s}});
      }
    }
    variants_json[variant] = rows;
  }
  nlohmann::json tests = nlohmann::json::array();
  const auto& reference = result.variants.front();
  for (std::size_t vi = 1; vi < result.variants.size(); ++vi) {
    for (auto metric : kAllMetrics) {
      for (auto k : config.ks) {
        const auto a = result.series(reference, metric, k);
        const auto b = result.series(result.variants[vi], metric, k);
        PairedComparison c{reference, result.variants[vi], metric, k, mean_of(a), mean_of(b),
                           paired_t_test(a, b)};
        tests.push_back(comparison_json(c));
        result.comparisons.push_back(c);
      }
    }
  }
  result.summary = {{"config", to_json(config)},
                    {"seeds", result.seeds},
                    {"variants", variants_json},
                    {"paired_t_tests", tests}};
  if (write) {
    auto out = open_output(out_dir / "metrics.csv");
    bool header = true;
    for (std::size_t rep = 0; rep < result.seeds.size(); ++rep) {
      for (const auto& per_variant : result.reports) {
        write_metrics_csv(out, {per_variant[rep]}, header);
        header = false;
      }
    }
    write_json(out_dir / "summary.json", result.summary);
  }
  return result;
}

ExperimentResult cmd_experiment(const RunConfig& config) {
  config.validate();
  if (config.interactions_path.empty()) throw UsageError("experiment needs --interactions");
  if (config.variants.size() < 2) throw UsageError("experiment needs at least two variants");
  if (config.repeats < 2) {
    throw UsageError("experiment needs repeats >= 2 for a paired t-test (got " +
                     std::to_string(config.repeats) + ")");
  }
  const auto interactions = read_interactions(config.interactions_path);
  Matrix features;
  const Matrix* features_ptr = nullptr;
  if (config.train.feature_mode == FeatureMode::Fixed) {
    if (config.features_path.empty()) throw DataError("fixed feature mode needs --features");
    const auto ids = build_id_maps(interactions);
    features = read_features(config.features_path, ids.videos, config.train.dim);
    features_ptr = &features;
  }
  return run_experiment(config, interactions, features_ptr);
}

// ---- synth / ttest ---------------------------------------------------------------

SynthData cmd_synth(const SynthConfig& config, const fs::path& out_dir) {
  auto data = generate(config);
  fs::create_directories(out_dir);
  {
    auto out = open_output(out_dir / "interactions.csv");
    out << data.interactions_csv;
  }
  {
    auto out = open_output(out_dir / "features.csv");
    out << data.features_csv;
  }
  write_json(out_dir / "synth_config.json", to_json(config));
  const auto hist = tier_histogram(data.interactions, config.quick_skip_window);
  log_line("generated " + std::to_string(data.interactions.size()) + " interactions (H " +
           std::to_string(hist[0]) + ", L " + std::to_string(hist[1]) + ", N " +
           std::to_string(hist[2]) + ")");
  return data;
}

std::vector<PairedComparison> ttest_from_metrics(std::istream& metrics_csv, const std::string& a,
                                                 const std::string& b) {
  // (metric, k) -> seed -> value, per variant
  std::map<std::pair<std::string, std::size_t>, std::map<std::uint64_t, double>> va, vb;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(metrics_csv, line)) {
    ++line_no;
    const auto text = detail::strip_cr(line);
    if (text.empty() || (line_no == 1 && text.starts_with("variant,"))) continue;
    const auto f = detail::split_fields(text);
    if (f.size() != 5) throw ParseError(line_no, "expected variant,seed,metric,k,value");
    const auto seed = detail::parse_int(f[1]);
    const auto k = detail::parse_int(f[3]);
    const auto value = detail::parse_double(f[4]);
    if (!seed || !k || !value) throw ParseError(line_no, "malformed metrics row");
    const std::pair<std::string, std::size_t> key{std::string(f[2]), static_cast<std::size_t>(*k)};
    if (f[0] == a) va[key][static_cast<std::uint64_t>(*seed)] = *value;
    if (f[0] == b) vb[key][static_cast<std::uint64_t>(*seed)] = *value;
  }
  if (va.empty() || vb.empty()) throw DataError("metrics file lacks rows for both variants");
  std::vector<PairedComparison> out;
  for (const auto& [key, seeds_a] : va) {
    const auto it = vb.find(key);
    if (it == vb.end()) continue;
    std::vector<double> xa, xb;
    for (const auto& [seed, value] : seeds_a) {
      const auto jt = it->second.find(seed);
      if (jt == it->second.end()) continue;
      xa.push_back(value);
      xb.push_back(jt->second);
    }
    if (xa.size() < 2) throw UsageError("t-test needs at least two paired seeds");
    out.push_back({a, b, parse_metric(key.first), key.second, mean_of(xa), mean_of(xb),
                   paired_t_test(xa, xb)});
  }
  return out;
}

}  // namespace skiprec
