#include "glmpath/saga.hpp"

#include "glmpath/glm.hpp"
#include "glmpath/kernels.hpp"
#include "glmpath/rng.hpp"

#include <algorithm>
#include <cmath>

namespace glmpath {

const char* stop_rule_name(StopRule rule) {
  return rule == StopRule::gradient ? "gradient" : "lookbehind";
}

StopRule stop_rule_from_name(const std::string& name) {
  if (name == "gradient") return StopRule::gradient;
  if (name == "lookbehind") return StopRule::lookbehind;
  throw precondition_error("unknown stop rule \"" + name + "\"");
}

GradientTable GradientTable::zeros(Index n, Index d, Index k) {
  GradientTable t;
  t.a = Matrix::Zero(n, k);
  t.g_avg = Matrix::Zero(d, k);
  t.g_avg0 = Vector::Zero(k);
  return t;
}

void saga_step(const Matrix& x, const TargetVector& y, const std::vector<Index>& batch,
               GlmModel& model, GradientTable& table, double lr,
               const ElasticNetParams& params) {
  if (batch.empty()) throw precondition_error("saga_step needs a non-empty batch");
  const Index k = model.outputs();
  const auto b = static_cast<Index>(batch.size());

  Matrix z;
  kernels::batch_logits(x, batch, model.beta, model.beta0, z);

  // residual deltas w_r = a_new - a_stored; the stored entries are replaced
  // in the same pass
  Matrix w(b, k);
  Vector delta0 = Vector::Zero(k);
  double a_new[8];
  std::vector<double> a_big;
  double* scratch = a_new;
  if (k > 8) {
    a_big.resize(static_cast<std::size_t>(k));
    scratch = a_big.data();
  }
  for (Index r = 0; r < b; ++r) {
    const Index i = batch[static_cast<std::size_t>(r)];
    residual_row(model.family, z.data() + r * k, y.values[i], k, scratch);
    for (Index c = 0; c < k; ++c) {
      const double dw = scratch[c] - table.a(i, c);
      w(r, c) = dw;
      delta0[c] += dw;
      table.a(i, c) = scratch[c];
    }
  }
  delta0 /= static_cast<double>(b);

  Matrix delta;
  kernels::batch_feature_outer(x, batch, w, delta);

  const double lam1 = lr * params.lambda * params.alpha;
  const double lam2 = lr * params.lambda * (1.0 - params.alpha);
  kernels::step_and_prox(model.beta, delta, table.g_avg, lr, lam1, lam2);
  model.beta0 -= lr * (delta0 + table.g_avg0);

  const double share = static_cast<double>(b) / static_cast<double>(x.rows());
  table.g_avg += share * delta;
  table.g_avg0 += share * delta0;
}

bool check_stop_gradient(const GlmModel& prev, const GlmModel& cur, double eps_tol) {
  const double sq = (cur.beta - prev.beta).squaredNorm() + (cur.beta0 - prev.beta0).squaredNorm();
  return std::sqrt(sq) <= eps_tol;
}

bool check_stop_lookbehind(const std::deque<double>& history, Index T, double eps_tol) {
  if (static_cast<Index>(history.size()) <= T) return false;
  double recent = history[history.size() - 1];
  for (std::size_t i = history.size() - static_cast<std::size_t>(T); i + 1 < history.size(); ++i) {
    recent = std::min(recent, history[i]);
  }
  double earlier = history[0];
  for (std::size_t i = 1; i + static_cast<std::size_t>(T) < history.size(); ++i) {
    earlier = std::min(earlier, history[i]);
  }
  return recent > earlier - eps_tol;
}

FitResult fit_fixed_lambda(const Matrix& x, const TargetVector& y, const GlmModel& init,
                           const ElasticNetParams& params, const SolverConfig& config,
                           const EpochCallback& on_epoch) {
  validate_pair(x, y, init.family);
  if (init.dim() != x.cols()) {
    throw precondition_error("initial model dimension does not match feature count");
  }
  if (params.lambda < 0.0) throw precondition_error("lambda must be >= 0");
  if (params.alpha < 0.0 || params.alpha > 1.0) {
    throw precondition_error("alpha must be in [0, 1]");
  }
  if (config.lr <= 0.0) throw precondition_error("learning rate must be positive");
  if (config.batch_size < 1) throw precondition_error("batch_size must be >= 1");
  if (config.max_epochs < 1) throw precondition_error("max_epochs must be >= 1");

  const Index n = x.rows();
  const Index batch_size = std::min(config.batch_size, n);

  FitResult result;
  result.model = init;
  result.model.lambda = params.lambda;
  result.model.alpha = params.alpha;

  GradientTable table = GradientTable::zeros(n, init.dim(), init.outputs());
  Rng rng(config.seed);
  std::deque<double> history;
  GlmModel prev = result.model;
  std::vector<Index> batch;
  batch.reserve(static_cast<std::size_t>(batch_size));

  // A batch spanning every row is order-invariant, so keep row order there:
  // it saves the shuffle and accumulates gradients in the same float order
  // as lambda_max, which keeps coefficients exactly zero at the boundary.
  std::vector<Index> identity;
  if (batch_size == n) {
    identity.resize(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) identity[static_cast<std::size_t>(i)] = i;
  }

  for (Index epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const std::vector<Index> perm = batch_size == n ? identity : rng.permutation(n);
    for (Index start = 0; start < n; start += batch_size) {
      const Index stop = std::min(start + batch_size, n);
      batch.assign(perm.begin() + start, perm.begin() + stop);
      saga_step(x, y, batch, result.model, table, config.lr, params);
    }
    result.epochs = epoch;

    if (!result.model.beta.allFinite() || !result.model.beta0.allFinite()) {
      throw divergence_error("solver diverged at epoch " + std::to_string(epoch) +
                             " (non-finite coefficients); try a smaller learning rate");
    }
    const double obj = objective(x, y, result.model, params);
    if (!std::isfinite(obj)) {
      throw divergence_error("solver diverged at epoch " + std::to_string(epoch) +
                             " (non-finite objective); try a smaller learning rate");
    }
    if (on_epoch) on_epoch(epoch, result.model, obj);

    result.last_change = std::sqrt((result.model.beta - prev.beta).squaredNorm() +
                                   (result.model.beta0 - prev.beta0).squaredNorm());
    if (config.stop == StopRule::gradient) {
      result.converged = check_stop_gradient(prev, result.model, config.eps_tol);
    } else {
      history.push_back(obj);
      result.converged = check_stop_lookbehind(history, config.lookbehind_T, config.eps_tol);
    }
    if (result.converged) break;
    prev = result.model;
  }
  return result;
}

}  // namespace glmpath
