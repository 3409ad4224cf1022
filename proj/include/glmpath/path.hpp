#pragma once

#include "glmpath/saga.hpp"
#include "glmpath/types.hpp"

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace glmpath {

// Smallest lambda at which the all-zero coefficient vector is optimal:
// max over features (and classes) of (1/(N*alpha)) |sum_i x_ij r_i| with
// r the bias-only residuals. Throws precondition_error for alpha == 0 and
// validation_error when the data is degenerate (lambda_max == 0).
double lambda_max(const Matrix& x, const TargetVector& y, Family family, double alpha);

// Geometric grid lambda_t = lam_max * epsilon^(t/(K-1)), endpoints exact.
std::vector<double> lambda_schedule(double lam_max, Index K, double epsilon);

struct PathSchedule {
  Index K = 100;
  double epsilon = 0.001;
};

struct PathEntry {
  double lambda = 0.0;
  GlmModel model;
  double train_loss = 0.0;  // smooth data-fit term on the training split
  double val_metric = 0.0;  // accuracy (classification) or MSE (gaussian)
  Index nnz_total = 0;
  bool converged = false;
  Index epochs = 0;
  double kkt_violation = -1.0;  // < 0: not evaluated
};

struct RegularizationPath {
  std::vector<PathEntry> entries;
  double alpha = 1.0;
  double lam_max = 0.0;
  PathSchedule schedule;
  std::string abort_reason;  // nonempty if the path stopped early

  Family family() const;
};

using PathCallback = std::function<void(Index t, const PathEntry& entry)>;

// Warm-started fits down the schedule, entry 0 from the zero model. The
// gradient table restarts from zero at each lambda; the per-lambda seed is
// solver.seed + t. Divergence aborts the path, returning the prefix with
// abort_reason set.
RegularizationPath fit_path(const Matrix& x_train, const TargetVector& y_train,
                            const Matrix& x_val, const TargetVector& y_val, Family family,
                            double alpha, const PathSchedule& schedule,
                            const SolverConfig& solver, const PathCallback& on_entry = nullptr);

// Sparsest entry whose validation metric is within `tolerance` (absolute) of
// the best entry, skipping entries with nnz_total < min_nnz; ties go to the
// larger lambda. Falls back to the best-metric entry when nothing qualifies.
// Gaussian paths compare MSE (lower is better), classification accuracy
// (higher is better).
Index select_model(const RegularizationPath& path, double tolerance, Index min_nnz = 1);

struct FeatureOrdering {
  static constexpr Index kNever = std::numeric_limits<Index>::max();

  std::vector<Index> entry_index;  // first path index with a nonzero coef, kNever if none

  // features that ever enter, ascending by (entry_index, feature index)
  std::vector<Index> ordered_features() const;
};

FeatureOrdering feature_ordering(const RegularizationPath& path);

// ---- path summary report -------------------------------------------------

struct PathSummaryRow {
  double lambda = 0.0;
  double train_loss = 0.0;
  double val_metric = 0.0;
  Index nnz_total = 0;
  std::vector<Index> nnz_per_class;
  bool converged = false;
  double kkt_violation = -1.0;
};

struct PathSummary {
  std::string config_json;  // echoed run configuration
  std::vector<PathSummaryRow> rows;
};

// CSV with a leading `# glmpath path summary v1; config=<json>` line, a
// column header, then one row per entry; kkt_violation column only when the
// oracle check ran.
void write_path_summary(const std::string& file, const RegularizationPath& path,
                        const std::string& config_json);
PathSummary read_path_summary(const std::string& file);

}  // namespace glmpath
