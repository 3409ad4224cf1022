// glmpath: fit elastic-net regularization paths over GLM decision layers and
// run the debugging toolkit on the results. One subcommand per artifact.

#include "glmpath/glm.hpp"
#include "glmpath/io.hpp"
#include "glmpath/kernels.hpp"
#include "glmpath/oracle.hpp"
#include "glmpath/path.hpp"
#include "glmpath/split.hpp"
#include "glmpath/standardize.hpp"
#include "glmpath/toolkit.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kFormatVersion = 1;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitPrecondition = 4;

struct RunConfig {
  std::string family = "gaussian";
  double alpha = 0.99;
  glmpath::Index k_values = 100;
  double epsilon = 0.001;
  double eps_tol = 1e-4;
  glmpath::Index lookbehind_T = 5;
  std::string stop_rule = "gradient";
  glmpath::Index batch_size = 512;
  double learning_rate = 0.1;
  glmpath::Index max_epochs = 500;
  double val_fraction = 0.10;
  double select_tolerance = 0.05;
  glmpath::Index min_nnz = 1;
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = library default (all cores)
  bool oracle = false;
};

json config_json(const RunConfig& cfg) {
  return json{{"family", cfg.family},
              {"alpha", cfg.alpha},
              {"k_values", cfg.k_values},
              {"epsilon", cfg.epsilon},
              {"eps_tol", cfg.eps_tol},
              {"lookbehind_T", cfg.lookbehind_T},
              {"stop_rule", cfg.stop_rule},
              {"batch_size", cfg.batch_size},
              {"learning_rate", cfg.learning_rate},
              {"max_epochs", cfg.max_epochs},
              {"val_fraction", cfg.val_fraction},
              {"select_tolerance", cfg.select_tolerance},
              {"min_nnz", cfg.min_nnz},
              {"seed", cfg.seed},
              {"threads", cfg.threads},
              {"oracle", cfg.oracle}};
}

json report_skeleton(const std::string& command, const RunConfig& cfg) {
  return json{{"format_version", kFormatVersion},
              {"command", command},
              {"config", config_json(cfg)}};
}

void write_json(const std::string& path, const json& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw glmpath::io_error("cannot open " + path + " for writing");
  out << doc.dump(2) << "\n";
  if (!out) throw glmpath::io_error("failed writing " + path);
}

json read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw glmpath::io_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw glmpath::io_error(path + ": " + e.what());
  }
}

glmpath::TargetVector targets_for_family(const glmpath::Vector& raw, glmpath::Family family) {
  if (family == glmpath::Family::gaussian) {
    return glmpath::TargetVector::regression(raw);
  }
  if (family == glmpath::Family::binomial) {
    return glmpath::TargetVector::classification(raw, 2);
  }
  glmpath::Index k = 0;
  for (glmpath::Index i = 0; i < raw.size(); ++i) {
    k = std::max(k, static_cast<glmpath::Index>(raw[i]) + 1);
  }
  return glmpath::TargetVector::classification(raw, std::max<glmpath::Index>(k, 2));
}

std::string model_file(const std::string& dir, std::size_t index) {
  char name[32];
  std::snprintf(name, sizeof(name), "model_%04zu.glmm", index);
  return dir + "/" + name;
}

// standardizer round trip as a 3 x d csv: mean, scale, constant mask
void save_standardizer(const std::string& path, const glmpath::Standardizer& s) {
  glmpath::Matrix m(3, s.dim());
  for (glmpath::Index j = 0; j < s.dim(); ++j) {
    m(0, j) = s.mean[j];
    m(1, j) = s.scale[j];
    m(2, j) = s.is_constant(j) ? 1.0 : 0.0;
  }
  glmpath::save_matrix(path, m);
}

glmpath::Standardizer load_standardizer(const std::string& path) {
  const glmpath::Matrix m = glmpath::load_matrix(path);
  if (m.rows() != 3) {
    throw glmpath::validation_error(path + ": standardizer file must have 3 rows");
  }
  glmpath::Standardizer s;
  s.mean.resize(m.cols());
  s.scale.resize(m.cols());
  s.constant_mask.assign(static_cast<std::size_t>(m.cols()), 0);
  for (glmpath::Index j = 0; j < m.cols(); ++j) {
    s.mean[j] = m(0, j);
    s.scale[j] = m(1, j);
    s.constant_mask[static_cast<std::size_t>(j)] = m(2, j) != 0.0 ? 1 : 0;
  }
  return s;
}

struct EvalData {
  glmpath::Matrix x;
  glmpath::TargetVector y;
};

EvalData load_eval_data(const std::string& features_path, const std::string& targets_path,
                        glmpath::Family family, const std::string& standardizer_path) {
  EvalData data;
  data.x = glmpath::load_matrix(features_path);
  glmpath::validate_features(data.x);
  data.y = targets_for_family(glmpath::load_targets(targets_path), family);
  if (!standardizer_path.empty()) {
    load_standardizer(standardizer_path).transform_in_place(data.x);
  }
  return data;
}

// ---- fit -------------------------------------------------------------

struct FitArgs {
  std::string features, targets, out_dir = ".";
};

int cmd_fit(const FitArgs& args, RunConfig& cfg) {
  const glmpath::Family family = glmpath::family_from_name(cfg.family);
  glmpath::Matrix x = glmpath::load_matrix(args.features);
  glmpath::validate_features(x);
  const glmpath::TargetVector y = targets_for_family(glmpath::load_targets(args.targets), family);
  glmpath::validate_pair(x, y, family);

  // split first, standardize on the training portion only
  const glmpath::SplitIndices split = glmpath::split_indices(y, cfg.val_fraction, cfg.seed);
  glmpath::Matrix x_train = glmpath::take_rows(x, split.train);
  glmpath::Matrix x_val = glmpath::take_rows(x, split.val);
  const glmpath::TargetVector y_train = glmpath::take_targets(y, split.train);
  const glmpath::TargetVector y_val = glmpath::take_targets(y, split.val);
  const glmpath::Standardizer standardizer = glmpath::Standardizer::fit(x_train);
  standardizer.transform_in_place(x_train);
  standardizer.transform_in_place(x_val);

  glmpath::SolverConfig solver;
  solver.batch_size = cfg.batch_size;
  solver.lr = cfg.learning_rate;
  solver.max_epochs = cfg.max_epochs;
  solver.eps_tol = cfg.eps_tol;
  solver.lookbehind_T = cfg.lookbehind_T;
  solver.stop = glmpath::stop_rule_from_name(cfg.stop_rule);
  solver.seed = cfg.seed;

  const glmpath::PathSchedule schedule{cfg.k_values, cfg.epsilon};
  const auto log_entry = [](glmpath::Index t, const glmpath::PathEntry& e) {
    std::printf("lambda[%3lld] %.6e  nnz=%lld  train_loss=%.6f  val=%.6f  epochs=%lld%s\n",
                static_cast<long long>(t), e.lambda, static_cast<long long>(e.nnz_total),
                e.train_loss, e.val_metric, static_cast<long long>(e.epochs),
                e.converged ? "" : "  (max epochs)");
  };
  glmpath::RegularizationPath path = glmpath::fit_path(x_train, y_train, x_val, y_val, family,
                                                       cfg.alpha, schedule, solver, log_entry);

  if (cfg.oracle) {
    for (glmpath::PathEntry& entry : path.entries) {
      const glmpath::ElasticNetParams params{entry.lambda, cfg.alpha};
      entry.kkt_violation =
          glmpath::oracle::kkt_check(x_train, y_train, entry.model, params).max_kkt_violation;
    }
  }

  fs::create_directories(args.out_dir);
  const std::string config_dump = config_json(cfg).dump();
  glmpath::write_path_summary(args.out_dir + "/path_summary.csv", path, config_dump);
  save_standardizer(args.out_dir + "/standardizer.csv", standardizer);
  for (std::size_t t = 0; t < path.entries.size(); ++t) {
    glmpath::save_model(model_file(args.out_dir, t), path.entries[t].model);
  }

  std::string frontier = "# glmpath frontier v1; config=" + config_dump + "\n";
  frontier += "nnz_total,val_metric\n";
  if (!path.entries.empty()) {
    for (const auto& [nnz, metric] : glmpath::path_sparsity_frontier(path)) {
      char row[64];
      std::snprintf(row, sizeof(row), "%lld,%.17g\n", static_cast<long long>(nnz), metric);
      frontier += row;
    }
  }
  std::ofstream fout(args.out_dir + "/frontier.csv", std::ios::binary | std::ios::trunc);
  fout << frontier;
  if (!fout) throw glmpath::io_error("failed writing " + args.out_dir + "/frontier.csv");

  json run = report_skeleton("fit", cfg);
  run["lambda_max"] = path.lam_max;
  run["entries"] = path.entries.size();
  run["train_rows"] = x_train.rows();
  run["val_rows"] = x_val.rows();
  run["abort_reason"] = path.abort_reason;
  write_json(args.out_dir + "/run_config.json", run);

  if (!path.abort_reason.empty()) {
    std::fprintf(stderr, "%s (partial path written: %zu entries)\n", path.abort_reason.c_str(),
                 path.entries.size());
    return kExitDivergence;
  }
  return kExitOk;
}

// ---- select ----------------------------------------------------------

struct SelectArgs {
  std::string path_dir, out_dir;
};

int cmd_select(const SelectArgs& args, RunConfig& cfg) {
  const std::string out_dir = args.out_dir.empty() ? args.path_dir : args.out_dir;
  const glmpath::PathSummary summary =
      glmpath::read_path_summary(args.path_dir + "/path_summary.csv");
  if (summary.rows.empty()) {
    throw glmpath::io_error(args.path_dir + ": path summary has no entries");
  }

  glmpath::RegularizationPath path;
  for (std::size_t t = 0; t < summary.rows.size(); ++t) {
    glmpath::PathEntry entry;
    entry.model = glmpath::load_model(model_file(args.path_dir, t));
    entry.lambda = summary.rows[t].lambda;
    entry.train_loss = summary.rows[t].train_loss;
    entry.val_metric = summary.rows[t].val_metric;
    entry.nnz_total = summary.rows[t].nnz_total;
    entry.converged = summary.rows[t].converged;
    path.entries.push_back(std::move(entry));
  }

  const glmpath::Index pick =
      glmpath::select_model(path, cfg.select_tolerance, cfg.min_nnz);
  const glmpath::PathEntry& winner = path.entries[static_cast<std::size_t>(pick)];

  const bool higher_better = path.family() != glmpath::Family::gaussian;
  double best = path.entries.front().val_metric;
  for (const glmpath::PathEntry& e : path.entries) {
    best = higher_better ? std::max(best, e.val_metric) : std::min(best, e.val_metric);
  }

  fs::create_directories(out_dir);
  glmpath::save_model(out_dir + "/selected_model.glmm", winner.model);
  json report = report_skeleton("select", cfg);
  report["fit_config"] = json::parse(summary.config_json);
  report["best_metric"] = best;
  report["threshold"] = higher_better ? best - cfg.select_tolerance : best + cfg.select_tolerance;
  report["winner"] = json{{"index", pick},
                          {"lambda", winner.lambda},
                          {"nnz_total", winner.nnz_total},
                          {"val_metric", winner.val_metric}};
  write_json(out_dir + "/selection.json", report);
  std::printf("selected entry %lld: lambda=%.6e nnz=%lld val=%.6f\n",
              static_cast<long long>(pick), winner.lambda,
              static_cast<long long>(winner.nnz_total), winner.val_metric);
  return kExitOk;
}

// ---- ablate ----------------------------------------------------------

struct AblateArgs {
  std::string model_dense, model_sparse, features, targets, standardizer, out = "ablation.json";
  glmpath::Index k = 5;
};

json ablation_half(const glmpath::GlmModel& model, const EvalData& data, glmpath::Index k) {
  const glmpath::DecisionLayer layer = glmpath::decision_layer_from(model);
  const glmpath::AblationReport report = glmpath::topk_ablation(layer, data.x, data.y, k);
  return json{{"all", report.acc_all}, {"topk", report.acc_topk}, {"rest", report.acc_rest}};
}

int cmd_ablate(const AblateArgs& args, RunConfig& cfg) {
  const glmpath::GlmModel dense = glmpath::load_model(args.model_dense);
  cfg.family = glmpath::family_name(dense.family);
  const EvalData data =
      load_eval_data(args.features, args.targets, dense.family, args.standardizer);
  if (args.k > data.x.cols()) {
    std::fprintf(stderr, "warning: k=%lld exceeds feature count %lld, clamping\n",
                 static_cast<long long>(args.k), static_cast<long long>(data.x.cols()));
  }

  json report = report_skeleton("ablate", cfg);
  report["k"] = std::min(args.k, data.x.cols());
  report["dense"] = ablation_half(dense, data, args.k);
  if (!args.model_sparse.empty()) {
    const glmpath::GlmModel sparse = glmpath::load_model(args.model_sparse);
    if (sparse.dim() != dense.dim()) {
      throw glmpath::precondition_error("models have different feature counts");
    }
    report["sparse"] = ablation_half(sparse, data, args.k);
  }
  write_json(args.out, report);
  return kExitOk;
}

// ---- order -----------------------------------------------------------

struct OrderArgs {
  std::string path_dir, out = "ordering.json";
};

int cmd_order(const OrderArgs& args, RunConfig& cfg) {
  const glmpath::PathSummary summary =
      glmpath::read_path_summary(args.path_dir + "/path_summary.csv");
  glmpath::RegularizationPath path;
  for (std::size_t t = 0; t < summary.rows.size(); ++t) {
    glmpath::PathEntry entry;
    entry.model = glmpath::load_model(model_file(args.path_dir, t));
    entry.lambda = summary.rows[t].lambda;
    path.entries.push_back(std::move(entry));
  }
  const glmpath::FeatureOrdering ordering = glmpath::feature_ordering(path);

  json report = report_skeleton("order", cfg);
  report["fit_config"] = json::parse(summary.config_json);
  json entry_index = json::array();
  for (glmpath::Index idx : ordering.entry_index) {
    if (idx == glmpath::FeatureOrdering::kNever) {
      entry_index.push_back(nullptr);  // never enters the path
    } else {
      entry_index.push_back(idx);
    }
  }
  report["entry_index"] = entry_index;
  report["ordering"] = ordering.ordered_features();
  write_json(args.out, report);
  return kExitOk;
}

// ---- attribute ---------------------------------------------------------

struct AttributeArgs {
  std::string model, features, targets, standardizer, out = "attribution.json";
};

int cmd_attribute(const AttributeArgs& args, RunConfig& cfg) {
  const glmpath::GlmModel model = glmpath::load_model(args.model);
  cfg.family = glmpath::family_name(model.family);
  const EvalData data =
      load_eval_data(args.features, args.targets, model.family, args.standardizer);
  const glmpath::DecisionLayer layer = glmpath::decision_layer_from(model);
  const std::vector<glmpath::Index> pred = glmpath::predict_classes(data.x, model);

  json errors = json::array();
  for (glmpath::Index i = 0; i < data.x.rows(); ++i) {
    const glmpath::Index truth = data.y.label(i);
    const glmpath::Index p = pred[static_cast<std::size_t>(i)];
    if (p == truth) continue;
    const glmpath::Vector f = data.x.row(i).transpose();
    const glmpath::AttributionScores scores =
        glmpath::attribute_misclassification(layer, f, truth, p);
    errors.push_back(json{{"example_id", i},
                          {"l", truth},
                          {"p", p},
                          {"top_feature", scores.top_feature},
                          {"gamma", scores.gamma[scores.top_feature]},
                          {"flipped", scores.flip}});
  }

  json report = report_skeleton("attribute", cfg);
  report["misclassified"] = errors.size();
  report["errors"] = errors;
  write_json(args.out, report);
  return kExitOk;
}

// ---- overlap -----------------------------------------------------------

struct OverlapArgs {
  std::string model, features, targets, standardizer, out = "overlap.json";
  double threshold = 0.05;
};

int cmd_overlap(const OverlapArgs& args, RunConfig& cfg) {
  const glmpath::GlmModel model = glmpath::load_model(args.model);
  cfg.family = glmpath::family_name(model.family);
  const EvalData data =
      load_eval_data(args.features, args.targets, model.family, args.standardizer);
  const glmpath::DecisionLayer layer = glmpath::decision_layer_from(model);
  const glmpath::Matrix confusion = glmpath::confusion_matrix(data.x, data.y, model);
  const glmpath::ConfusionOverlapReport overlap =
      glmpath::confusion_overlap(layer, args.threshold, confusion);

  json pairs = json::array();
  for (const glmpath::PairOverlap& p : overlap.pairs) {
    pairs.push_back(json{{"a", p.a},
                         {"b", p.b},
                         {"shared_count", p.shared_count},
                         {"confusion_score", p.confusion_score}});
  }
  json report = report_skeleton("overlap", cfg);
  report["threshold_frac"] = args.threshold;
  report["pairs"] = pairs;
  report["spearman"] = overlap.spearman ? json(*overlap.spearman) : json(nullptr);
  report["pearson"] = overlap.pearson ? json(*overlap.pearson) : json(nullptr);
  report["skipped_classes"] = overlap.skipped_classes;
  write_json(args.out, report);
  return kExitOk;
}

// ---- wordcloud -----------------------------------------------------------

struct WordcloudArgs {
  std::string explanations, out = "wordclouds.json";
};

json cloud_to_json(const glmpath::WordCloud& cloud) {
  const auto side = [](const std::vector<glmpath::WordWeight>& words) {
    json arr = json::array();
    for (const glmpath::WordWeight& w : words) {
      arr.push_back(json{{"word", w.word}, {"weight", w.weight}});
    }
    return arr;
  };
  return json{{"feature_id", cloud.feature_id},
              {"positive", side(cloud.positive)},
              {"negative", side(cloud.negative)}};
}

int cmd_wordcloud(const WordcloudArgs& args, RunConfig& cfg) {
  const json doc = read_json(args.explanations);
  if (!doc.contains("vocab") || !doc.contains("features")) {
    throw glmpath::validation_error(args.explanations +
                                    ": expected top-level \"vocab\" and \"features\"");
  }
  const std::vector<std::string> vocab = doc["vocab"].get<std::vector<std::string>>();

  json clouds = json::array();
  for (const json& feature : doc["features"]) {
    std::vector<glmpath::WeightedSentence> corpus;
    for (const json& sent : feature.at("sentences")) {
      glmpath::WeightedSentence ws;
      ws.sentence.tokens = sent.at("tokens").get<std::vector<std::string>>();
      const std::vector<double> weights = sent.at("weights").get<std::vector<double>>();
      ws.weights.resize(static_cast<glmpath::Index>(weights.size()));
      for (std::size_t i = 0; i < weights.size(); ++i) {
        ws.weights[static_cast<glmpath::Index>(i)] = weights[i];
      }
      corpus.push_back(std::move(ws));
    }
    const auto feature_id = feature.at("feature_id").get<glmpath::Index>();
    clouds.push_back(cloud_to_json(glmpath::aggregate_wordcloud(feature_id, corpus, vocab)));
  }

  json report = report_skeleton("wordcloud", cfg);
  report["clouds"] = clouds;
  write_json(args.out, report);
  return kExitOk;
}

// ---- counterfactual -------------------------------------------------------

struct CounterfactualArgs {
  std::string clouds, model, sentence, out = "counterfactual.json";
};

std::vector<glmpath::WordCloud> clouds_from_json(const json& doc, const std::string& file) {
  const json& arr = doc.is_array() ? doc : doc.at("clouds");
  std::vector<glmpath::WordCloud> clouds;
  for (const json& c : arr) {
    glmpath::WordCloud cloud;
    cloud.feature_id = c.at("feature_id").get<glmpath::Index>();
    for (const json& w : c.at("positive")) {
      cloud.positive.push_back({w.at("word").get<std::string>(), w.at("weight").get<double>()});
    }
    for (const json& w : c.at("negative")) {
      cloud.negative.push_back({w.at("word").get<std::string>(), w.at("weight").get<double>()});
    }
    clouds.push_back(std::move(cloud));
  }
  for (std::size_t i = 0; i < clouds.size(); ++i) {
    if (clouds[i].feature_id != static_cast<glmpath::Index>(i)) {
      throw glmpath::validation_error(file + ": cloud feature_ids must be 0..d-1 in order");
    }
  }
  return clouds;
}

int cmd_counterfactual(const CounterfactualArgs& args, RunConfig& cfg) {
  const std::vector<glmpath::WordCloud> clouds =
      clouds_from_json(read_json(args.clouds), args.clouds);
  const glmpath::GlmModel model = glmpath::load_model(args.model);
  cfg.family = glmpath::family_name(model.family);
  const glmpath::DecisionLayer layer = glmpath::decision_layer_from(model);

  const json sent = read_json(args.sentence);
  glmpath::Sentence sentence;
  sentence.tokens = sent.at("tokens").get<std::vector<std::string>>();
  if (!sent.contains("predicted_class")) {
    throw glmpath::precondition_error(args.sentence +
                                      ": needs \"predicted_class\" (no encoder available)");
  }
  const auto predicted = sent["predicted_class"].get<glmpath::Index>();

  const std::optional<glmpath::CounterfactualResult> result =
      glmpath::generate_counterfactual(sentence, clouds, layer, cfg.seed, predicted);

  json report = report_skeleton("counterfactual", cfg);
  report["input_tokens"] = sentence.tokens;
  if (result) {
    report["result"] = json{{"output_tokens", result->output.tokens},
                            {"substituted_position", result->position},
                            {"feature_id", result->feature_id},
                            {"removed", result->removed},
                            {"replacement", result->replacement}};
  } else {
    report["result"] = nullptr;
    report["reason"] = "no candidates";
  }
  write_json(args.out, report);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse GLM regularization paths and decision-layer debugging"};
  app.require_subcommand(1);

  RunConfig cfg;
  app.add_option("--threads", cfg.threads, "worker thread count (0 = all cores)")
      ->envname("GLMPATH_THREADS");

  FitArgs fit_args;
  CLI::App* fit = app.add_subcommand("fit", "fit a regularization path");
  fit->fallthrough();
  fit->add_option("--features", fit_args.features, "feature matrix (.csv or binary)")->required();
  fit->add_option("--targets", fit_args.targets, "targets (single column)")->required();
  fit->add_option("--family", cfg.family, "gaussian, binomial or multinomial")
      ->required()
      ->check(CLI::IsMember({"gaussian", "binomial", "multinomial"}));
  fit->add_option("--alpha", cfg.alpha, "elastic net mix");
  fit->add_option("--k-values", cfg.k_values, "number of lambdas K");
  fit->add_option("--epsilon", cfg.epsilon, "lambda_min / lambda_max");
  fit->add_option("--batch-size", cfg.batch_size, "mini-batch size");
  fit->add_option("--lr", cfg.learning_rate, "SAGA step size");
  fit->add_option("--stop", cfg.stop_rule, "gradient or lookbehind");
  fit->add_option("--eps-tol", cfg.eps_tol, "stopping tolerance");
  fit->add_option("--lookbehind-T", cfg.lookbehind_T, "lookbehind window");
  fit->add_option("--max-epochs", cfg.max_epochs, "epoch cap per lambda");
  fit->add_option("--val-fraction", cfg.val_fraction, "held-out validation share");
  fit->add_option("--seed", cfg.seed, "rng seed");
  fit->add_flag("--oracle", cfg.oracle, "add a KKT verification column (slow)");
  fit->add_option("--out-dir", fit_args.out_dir, "output directory");

  SelectArgs select_args;
  CLI::App* select = app.add_subcommand("select", "pick the sparsest near-best path entry");
  select->fallthrough();
  select->add_option("--path-dir", select_args.path_dir, "directory written by fit")->required();
  select->add_option("--select-tol", cfg.select_tolerance, "metric tolerance (absolute)");
  select->add_option("--min-nnz", cfg.min_nnz, "minimum nonzeros for a winner");
  select->add_option("--out-dir", select_args.out_dir, "output directory (default: path-dir)");

  AblateArgs ablate_args;
  CLI::App* ablate = app.add_subcommand("ablate", "top-k ablation accuracies");
  ablate->fallthrough();
  ablate->add_option("--model-dense", ablate_args.model_dense, "first model file")->required();
  ablate->add_option("--model-sparse", ablate_args.model_sparse, "second model file (optional)");
  ablate->add_option("--features", ablate_args.features)->required();
  ablate->add_option("--targets", ablate_args.targets)->required();
  ablate->add_option("--standardizer", ablate_args.standardizer,
                     "standardizer.csv from fit (features are raw)");
  ablate->add_option("-k,--top-k", ablate_args.k, "features kept per class");
  ablate->add_option("--out", ablate_args.out, "report path");

  OrderArgs order_args;
  CLI::App* order = app.add_subcommand("order", "feature entry order along the path");
  order->fallthrough();
  order->add_option("--path-dir", order_args.path_dir, "directory written by fit")->required();
  order->add_option("--out", order_args.out, "report path");

  AttributeArgs attr_args;
  CLI::App* attribute = app.add_subcommand("attribute", "misclassification attribution");
  attribute->fallthrough();
  attribute->add_option("--model", attr_args.model)->required();
  attribute->add_option("--features", attr_args.features)->required();
  attribute->add_option("--targets", attr_args.targets)->required();
  attribute->add_option("--standardizer", attr_args.standardizer,
                        "standardizer.csv from fit (features are raw)");
  attribute->add_option("--out", attr_args.out, "report path");

  OverlapArgs overlap_args;
  CLI::App* overlap = app.add_subcommand("overlap", "shared features vs. model confusion");
  overlap->fallthrough();
  overlap->add_option("--model", overlap_args.model)->required();
  overlap->add_option("--features", overlap_args.features)->required();
  overlap->add_option("--targets", overlap_args.targets)->required();
  overlap->add_option("--standardizer", overlap_args.standardizer,
                      "standardizer.csv from fit (features are raw)");
  overlap->add_option("--threshold", overlap_args.threshold, "used-feature weight fraction");
  overlap->add_option("--out", overlap_args.out, "report path");

  WordcloudArgs wc_args;
  CLI::App* wordcloud = app.add_subcommand("wordcloud", "aggregate explanation weights per word");
  wordcloud->fallthrough();
  wordcloud->add_option("--explanations", wc_args.explanations, "explanations json")->required();
  wordcloud->add_option("--out", wc_args.out, "report path");

  CounterfactualArgs cf_args;
  CLI::App* counterfactual =
      app.add_subcommand("counterfactual", "single-token counterfactual from word clouds");
  counterfactual->fallthrough();
  counterfactual->add_option("--clouds", cf_args.clouds, "wordclouds json")->required();
  counterfactual->add_option("--model", cf_args.model, "decision-layer model file")->required();
  counterfactual->add_option("--sentence", cf_args.sentence,
                             "json with tokens and predicted_class")->required();
  counterfactual->add_option("--seed", cfg.seed, "rng seed");
  counterfactual->add_option("--out", cf_args.out, "report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    glmpath::kernels::set_threads(cfg.threads);
    if (fit->parsed()) return cmd_fit(fit_args, cfg);
    if (select->parsed()) return cmd_select(select_args, cfg);
    if (ablate->parsed()) return cmd_ablate(ablate_args, cfg);
    if (order->parsed()) return cmd_order(order_args, cfg);
    if (attribute->parsed()) return cmd_attribute(attr_args, cfg);
    if (overlap->parsed()) return cmd_overlap(overlap_args, cfg);
    if (wordcloud->parsed()) return cmd_wordcloud(wc_args, cfg);
    if (counterfactual->parsed()) return cmd_counterfactual(cf_args, cfg);
  } catch (const glmpath::divergence_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitDivergence;
  } catch (const glmpath::precondition_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitPrecondition;
  } catch (const glmpath::io_error& e) {  // includes validation_error
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  }
  return kExitOk;
}
