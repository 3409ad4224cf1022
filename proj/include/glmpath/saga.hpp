#pragma once

#include "glmpath/types.hpp"

#include <cstdint>
#include <deque>
#include <functional>

namespace glmpath {

enum class StopRule { gradient, lookbehind };

const char* stop_rule_name(StopRule rule);
StopRule stop_rule_from_name(const std::string& name);

struct SolverConfig {
  Index batch_size = 512;
  double lr = 0.1;
  Index max_epochs = 500;
  double eps_tol = 1e-4;
  Index lookbehind_T = 5;
  StopRule stop = StopRule::gradient;
  std::uint64_t seed = 0;
};

// Stored-residual SAGA state: the per-example gradient is a_i * x_i, so the
// table only keeps the k residual scalars per example plus the running
// average gradient.
struct GradientTable {
  Matrix a;       // n x k residual memory
  Matrix g_avg;   // d x k
  Vector g_avg0;  // k

  static GradientTable zeros(Index n, Index d, Index k);
};

struct FitResult {
  GlmModel model;
  bool converged = false;
  Index epochs = 0;
  double last_change = 0.0;  // final epoch-to-epoch iterate movement
};

// One mini-batch update in place. Uses the delta form: with w_i the change in
// stored residuals, the SAGA direction g - g' + g_avg equals
// (1/|B|) sum w_i x_i + g_avg, and the table average then absorbs
// (|B|/n) of the same sum.
void saga_step(const Matrix& x, const TargetVector& y, const std::vector<Index>& batch,
               GlmModel& model, GradientTable& table, double lr,
               const ElasticNetParams& params);

// epoch-to-epoch movement sqrt(|dbeta|^2 + |dbeta0|^2) <= eps_tol
bool check_stop_gradient(const GlmModel& prev, const GlmModel& cur, double eps_tol);

// true once the trailing window stopped improving on the best earlier value
bool check_stop_lookbehind(const std::deque<double>& history, Index T, double eps_tol);

using EpochCallback = std::function<void(Index epoch, const GlmModel& model, double objective)>;

FitResult fit_fixed_lambda(const Matrix& x, const TargetVector& y, const GlmModel& init,
                           const ElasticNetParams& params, const SolverConfig& config,
                           const EpochCallback& on_epoch = nullptr);

}  // namespace glmpath
