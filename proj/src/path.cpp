#include "glmpath/path.hpp"

#include "glmpath/glm.hpp"
#include "glmpath/kernels.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace glmpath {

namespace {

// Residuals of the bias-only optimum: prediction minus target with the
// intercept at its closed-form value (mean / base rate / class priors).
Matrix bias_only_residuals(const TargetVector& y, Family family) {
  const Index n = y.size();
  const Index k = family_outputs(family, y.num_classes);
  Matrix r(n, k);
  if (family == Family::multinomial) {
    Vector prior = Vector::Zero(k);
    for (Index i = 0; i < n; ++i) prior[y.label(i)] += 1.0;
    prior /= static_cast<double>(n);
    for (Index i = 0; i < n; ++i) {
      for (Index c = 0; c < k; ++c) r(i, c) = prior[c] - (y.label(i) == c ? 1.0 : 0.0);
    }
  } else {
    const double mean = y.values.mean();
    for (Index i = 0; i < n; ++i) r(i, 0) = mean - y.values[i];
  }
  return r;
}

void append_g17(std::string& buf, double v) {
  char tmp[40];
  std::snprintf(tmp, sizeof(tmp), "%.17g", v);
  buf += tmp;
}

double parse_double(const std::string& file, const std::string& cell, Index row) {
  double v = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
    throw validation_error(file + ": bad numeric cell \"" + cell + "\" in summary row " +
                           std::to_string(row));
  }
  return v;
}

std::vector<std::string> split_line(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string::npos ? pos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

double lambda_max(const Matrix& x, const TargetVector& y, Family family, double alpha) {
  validate_pair(x, y, family);
  if (alpha <= 0.0) {
    throw precondition_error("lambda_max is undefined for alpha = 0 (ridge has no "
                             "sparsity threshold)");
  }
  const Matrix r = bias_only_residuals(y, family);
  Matrix g;
  kernels::feature_outer(x, r, g);  // (1/N) sum_i outer(x_i, r_i)
  // Rounded up a few ulps so the defining property (the zero model is
  // optimal at lambda_max) survives float summation-order differences
  // between this estimate and the solver's own gradient accumulation.
  const double lam =
      (g.cwiseAbs().maxCoeff() / alpha) * (1.0 + 16.0 * std::numeric_limits<double>::epsilon());
  if (!(lam > 0.0)) {
    throw validation_error("lambda_max is 0: every feature is uncorrelated with the "
                           "targets (degenerate data)");
  }
  return lam;
}

std::vector<double> lambda_schedule(double lam_max, Index K, double epsilon) {
  if (!(lam_max > 0.0)) throw precondition_error("lambda_max must be positive");
  if (K < 2) throw precondition_error("schedule needs K >= 2");
  if (!(epsilon > 0.0) || epsilon >= 1.0) {
    throw precondition_error("epsilon must be in (0, 1)");
  }
  std::vector<double> lambdas(static_cast<std::size_t>(K));
  lambdas.front() = lam_max;
  lambdas.back() = lam_max * epsilon;  // pow is not guaranteed exact at t = K-1
  for (Index t = 1; t + 1 < K; ++t) {
    lambdas[static_cast<std::size_t>(t)] =
        lam_max * std::pow(epsilon, static_cast<double>(t) / static_cast<double>(K - 1));
  }
  return lambdas;
}

Family RegularizationPath::family() const {
  if (entries.empty()) throw precondition_error("empty path has no family");
  return entries.front().model.family;
}

RegularizationPath fit_path(const Matrix& x_train, const TargetVector& y_train,
                            const Matrix& x_val, const TargetVector& y_val, Family family,
                            double alpha, const PathSchedule& schedule,
                            const SolverConfig& solver, const PathCallback& on_entry) {
  validate_pair(x_train, y_train, family);
  validate_pair(x_val, y_val, family);
  if (x_val.cols() != x_train.cols()) {
    throw precondition_error("train and validation feature counts differ");
  }

  RegularizationPath path;
  path.alpha = alpha;
  path.schedule = schedule;
  path.lam_max = lambda_max(x_train, y_train, family, alpha);
  const std::vector<double> lambdas = lambda_schedule(path.lam_max, schedule.K, schedule.epsilon);
  path.entries.reserve(lambdas.size());

  GlmModel warm = GlmModel::zero(x_train.cols(), family, y_train.num_classes);
  for (std::size_t t = 0; t < lambdas.size(); ++t) {
    const ElasticNetParams params{lambdas[t], alpha};
    SolverConfig cfg = solver;
    cfg.seed = solver.seed + static_cast<std::uint64_t>(t);
    FitResult fit;
    try {
      fit = fit_fixed_lambda(x_train, y_train, warm, params, cfg);
    } catch (const divergence_error& e) {
      path.abort_reason = "path aborted at lambda index " + std::to_string(t) + ": " + e.what();
      break;
    }
    PathEntry entry;
    entry.lambda = lambdas[t];
    entry.model = std::move(fit.model);
    entry.train_loss = smooth_loss(x_train, y_train, entry.model);
    entry.val_metric = validation_metric(x_val, y_val, entry.model);
    entry.nnz_total = entry.model.nnz_total();
    entry.converged = fit.converged;
    entry.epochs = fit.epochs;
    warm = entry.model;
    if (on_entry) on_entry(static_cast<Index>(t), entry);
    path.entries.push_back(std::move(entry));
  }
  return path;
}

Index select_model(const RegularizationPath& path, double tolerance, Index min_nnz) {
  if (path.entries.empty()) throw precondition_error("cannot select from an empty path");
  if (tolerance < 0.0) throw precondition_error("selection tolerance must be >= 0");

  const bool higher_better = path.family() != Family::gaussian;
  Index best = 0;
  for (Index i = 1; i < static_cast<Index>(path.entries.size()); ++i) {
    const double m = path.entries[static_cast<std::size_t>(i)].val_metric;
    const double b = path.entries[static_cast<std::size_t>(best)].val_metric;
    if (higher_better ? m > b : m < b) best = i;
  }
  const double bar = path.entries[static_cast<std::size_t>(best)].val_metric +
                     (higher_better ? -tolerance : tolerance);

  Index winner = -1;
  for (Index i = 0; i < static_cast<Index>(path.entries.size()); ++i) {
    const PathEntry& e = path.entries[static_cast<std::size_t>(i)];
    if (e.nnz_total < min_nnz) continue;
    if (higher_better ? e.val_metric < bar : e.val_metric > bar) continue;
    if (winner < 0 || e.nnz_total < path.entries[static_cast<std::size_t>(winner)].nnz_total) {
      winner = i;  // ties keep the earlier (larger lambda) entry
    }
  }
  return winner >= 0 ? winner : best;
}

std::vector<Index> FeatureOrdering::ordered_features() const {
  std::vector<Index> features;
  for (std::size_t j = 0; j < entry_index.size(); ++j) {
    if (entry_index[j] != kNever) features.push_back(static_cast<Index>(j));
  }
  std::stable_sort(features.begin(), features.end(), [this](Index a, Index b) {
    return entry_index[static_cast<std::size_t>(a)] < entry_index[static_cast<std::size_t>(b)];
  });
  return features;
}

FeatureOrdering feature_ordering(const RegularizationPath& path) {
  if (path.entries.empty()) throw precondition_error("cannot order features of an empty path");
  const Index d = path.entries.front().model.dim();
  FeatureOrdering ordering;
  ordering.entry_index.assign(static_cast<std::size_t>(d), FeatureOrdering::kNever);
  for (std::size_t t = 0; t < path.entries.size(); ++t) {
    const GlmModel& model = path.entries[t].model;
    for (Index j = 0; j < d; ++j) {
      if (ordering.entry_index[static_cast<std::size_t>(j)] != FeatureOrdering::kNever) continue;
      for (Index c = 0; c < model.outputs(); ++c) {
        if (model.beta(j, c) != 0.0) {
          ordering.entry_index[static_cast<std::size_t>(j)] = static_cast<Index>(t);
          break;
        }
      }
    }
  }
  return ordering;
}

void write_path_summary(const std::string& file, const RegularizationPath& path,
                        const std::string& config_json) {
  const bool with_kkt =
      !path.entries.empty() &&
      std::all_of(path.entries.begin(), path.entries.end(),
                  [](const PathEntry& e) { return e.kkt_violation >= 0.0; });
  std::string buf = "# glmpath path summary v1; config=" + config_json + "\n";
  buf += "lambda,train_loss,val_metric,nnz_total,nnz_per_class,converged";
  if (with_kkt) buf += ",kkt_violation";
  buf += "\n";
  for (const PathEntry& e : path.entries) {
    append_g17(buf, e.lambda);
    buf.push_back(',');
    append_g17(buf, e.train_loss);
    buf.push_back(',');
    append_g17(buf, e.val_metric);
    buf += ',' + std::to_string(e.nnz_total) + ',';
    const std::vector<Index> per_class = e.model.nnz_per_class();
    for (std::size_t c = 0; c < per_class.size(); ++c) {
      if (c > 0) buf.push_back(';');
      buf += std::to_string(per_class[c]);
    }
    buf += e.converged ? ",1" : ",0";
    if (with_kkt) {
      buf.push_back(',');
      append_g17(buf, e.kkt_violation);
    }
    buf.push_back('\n');
  }
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open " + file + " for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw io_error("failed writing " + file);
}

PathSummary read_path_summary(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw io_error("cannot open " + file);
  PathSummary summary;
  std::string line;
  if (!std::getline(in, line)) throw io_error(file + ": empty summary");
  const std::string prefix = "# glmpath path summary v1; config=";
  if (line.rfind(prefix, 0) != 0) {
    throw io_error(file + ": missing summary header comment");
  }
  summary.config_json = line.substr(prefix.size());
  if (!std::getline(in, line)) throw io_error(file + ": missing column header");
  const bool with_kkt = line.find("kkt_violation") != std::string::npos;
  Index row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_line(line, ',');
    if (cells.size() != (with_kkt ? 7u : 6u)) {
      throw io_error(file + ": summary row " + std::to_string(row) + " has " +
                     std::to_string(cells.size()) + " columns");
    }
    PathSummaryRow r;
    r.lambda = parse_double(file, cells[0], row);
    r.train_loss = parse_double(file, cells[1], row);
    r.val_metric = parse_double(file, cells[2], row);
    r.nnz_total = static_cast<Index>(parse_double(file, cells[3], row));
    for (const std::string& part : split_line(cells[4], ';')) {
      r.nnz_per_class.push_back(static_cast<Index>(parse_double(file, part, row)));
    }
    r.converged = cells[5] == "1";
    if (with_kkt) r.kkt_violation = parse_double(file, cells[6], row);
    summary.rows.push_back(std::move(r));
    ++row;
  }
  return summary;
}

}  // namespace glmpath
