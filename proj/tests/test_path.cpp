#include "glmpath/path.hpp"

#include "glmpath/glm.hpp"
#include "glmpath/kernels.hpp"
#include "glmpath/rng.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cstdio>
#include <set>

using namespace glmpath;

namespace {

Matrix standardized(Matrix x) {
  Vector mean, stddev;
  kernels::column_moments(x, mean, stddev);
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(x.cols()), 0);
  for (Index j = 0; j < x.cols(); ++j) {
    if (stddev[j] == 0.0) mask[static_cast<std::size_t>(j)] = 1;
  }
  kernels::standardize_columns(x, mean, stddev, mask);
  return x;
}

// synthetic path entry for select_model tests; only the fields select reads
PathEntry fake_entry(Family family, Index k, double lambda, double metric, Index nnz) {
  PathEntry entry;
  entry.lambda = lambda;
  entry.model = GlmModel::zero(2, family, k);
  entry.val_metric = metric;
  entry.nnz_total = nnz;
  entry.converged = true;
  return entry;
}

RegularizationPath fake_path(Family family, Index k, const std::vector<double>& metrics,
                             const std::vector<Index>& nnz) {
  RegularizationPath path;
  double lambda = 1.0;
  for (std::size_t t = 0; t < metrics.size(); ++t) {
    path.entries.push_back(fake_entry(family, k, lambda, metrics[t], nnz[t]));
    lambda *= 0.5;
  }
  return path;
}

}  // namespace

TEST_CASE("lambda_max hand values for all three families") {
  Matrix x(2, 1);
  x << 1, -1;

  // gaussian: bias-only residuals are ybar - y = [-1, 1]; correlation 1
  Vector yg(2);
  yg << 1, -1;
  CHECK(lambda_max(x, TargetVector::regression(yg), Family::gaussian, 1.0) ==
        doctest::Approx(1.0));

  // binomial: prior 0.5, residuals [-0.5, 0.5], correlation 0.5
  Vector yb(2);
  yb << 1, 0;
  CHECK(lambda_max(x, TargetVector::classification(yb, 2), Family::binomial, 1.0) ==
        doctest::Approx(0.5));

  // multinomial, k = 3, uniform prior 1/3: the class-2 column wins with 1/3
  Matrix xm(3, 1);
  xm << 1, 0, -1;
  Vector ym(3);
  ym << 0, 1, 2;
  CHECK(lambda_max(xm, TargetVector::classification(ym, 3), Family::multinomial, 1.0) ==
        doctest::Approx(1.0 / 3.0));
}

TEST_CASE("lambda_max scales as 1/alpha") {
  Rng rng(211);
  Matrix x = testutil::random_matrix(40, 6, rng);
  TargetVector y = TargetVector::regression(testutil::random_vector(40, rng));
  const double base = lambda_max(x, y, Family::gaussian, 1.0);
  CHECK(lambda_max(x, y, Family::gaussian, 0.5) == doctest::Approx(base / 0.5));
  CHECK(lambda_max(x, y, Family::gaussian, 0.25) == doctest::Approx(base / 0.25));
}

TEST_CASE("lambda_max rejects alpha <= 0 and degenerate targets") {
  Matrix x(3, 2);
  x << 1, 0, 0, 1, -1, -1;
  Vector y = Vector::Zero(3);  // constant target: zero residuals everywhere
  CHECK_THROWS_AS(lambda_max(x, TargetVector::regression(y), Family::gaussian, 0.0),
                  precondition_error);
  CHECK_THROWS_AS(lambda_max(x, TargetVector::regression(y), Family::gaussian, -0.5),
                  precondition_error);
  CHECK_THROWS_AS(lambda_max(x, TargetVector::regression(y), Family::gaussian, 1.0),
                  validation_error);
}

TEST_CASE("lambda_schedule endpoints and geometry") {
  const std::vector<double> two = lambda_schedule(1.0, 2, 0.001);
  REQUIRE(two.size() == 2);
  CHECK(two[0] == 1.0);
  CHECK(two[1] == 0.001);

  const std::vector<double> three = lambda_schedule(1.0, 3, 0.01);
  REQUIRE(three.size() == 3);
  CHECK(three[0] == 1.0);
  CHECK(three[1] == doctest::Approx(0.1));
  CHECK(three[2] == 0.01);

  const std::vector<double> grid = lambda_schedule(2.5, 100, 0.001);
  REQUIRE(grid.size() == 100);
  CHECK(grid.front() == 2.5);
  CHECK(grid.back() == doctest::Approx(2.5 * 0.001));
  for (std::size_t t = 2; t < grid.size(); ++t) {
    CHECK(grid[t] / grid[t - 1] == doctest::Approx(grid[1] / grid[0]).epsilon(1e-12));
  }

  CHECK_THROWS_AS(lambda_schedule(1.0, 1, 0.001), precondition_error);
  CHECK_THROWS_AS(lambda_schedule(1.0, 5, 0.0), precondition_error);
  CHECK_THROWS_AS(lambda_schedule(1.0, 5, 1.0), precondition_error);
  CHECK_THROWS_AS(lambda_schedule(0.0, 5, 0.1), precondition_error);
}

TEST_CASE("path starts empty at lambda_max and fills in as lambda shrinks") {
  Rng rng(223);
  const Index n = 120, d = 10;
  Matrix x = standardized(testutil::random_matrix(n, d, rng));
  Vector yv = 2.0 * x.col(0) - 1.5 * x.col(3);
  for (Index i = 0; i < n; ++i) yv[i] += 0.05 * testutil::uniform_pm1(rng);
  yv.array() -= yv.mean();
  TargetVector y = TargetVector::regression(yv);

  SolverConfig solver;
  solver.batch_size = n;  // deterministic full-batch steps keep lambda_max exact
  solver.lr = 0.1;
  solver.eps_tol = 1e-8;
  solver.max_epochs = 2000;

  PathSchedule schedule;
  schedule.K = 6;
  schedule.epsilon = 0.01;
  const RegularizationPath path = fit_path(x, y, x, y, Family::gaussian, 1.0, schedule, solver);
  REQUIRE(path.entries.size() == 6);
  CHECK(path.abort_reason.empty());

  CHECK(path.entries[0].lambda == path.lam_max);
  CHECK(path.entries[0].nnz_total == 0);  // exact, not approximate
  CHECK(path.entries.back().nnz_total >= 1);
  CHECK(path.entries.back().nnz_total >= path.entries[0].nnz_total);
  CHECK(path.entries.back().train_loss <= path.entries[0].train_loss);
  for (const PathEntry& entry : path.entries) CHECK(entry.converged);

  // half of lambda_max must admit at least one active feature
  const FitResult half = fit_fixed_lambda(x, y, GlmModel::zero(d, Family::gaussian),
                                          ElasticNetParams{0.5 * path.lam_max, 1.0}, solver);
  CHECK(half.model.nnz_total() >= 1);
}

TEST_CASE("path recovers a planted sparse support") {
  Rng rng(227);
  const Index n = 300, d = 25;
  Matrix x = standardized(testutil::random_matrix(n, d, rng));
  const std::set<Index> truth{0, 3, 7};
  Vector yv = 2.0 * x.col(0) - 3.0 * x.col(3) + 1.5 * x.col(7);
  for (Index i = 0; i < n; ++i) yv[i] += 0.3 + 0.01 * testutil::uniform_pm1(rng);
  TargetVector y = TargetVector::regression(yv);

  SolverConfig solver;
  solver.batch_size = 64;
  solver.lr = 0.1;
  solver.eps_tol = 1e-6;
  solver.max_epochs = 800;

  PathSchedule schedule;
  schedule.K = 25;
  schedule.epsilon = 0.001;
  const RegularizationPath path =
      fit_path(x, y, x, y, Family::gaussian, 0.99, schedule, solver);

  bool exact_support = false;
  for (const PathEntry& entry : path.entries) {
    std::set<Index> support;
    for (Index j = 0; j < d; ++j) {
      if (entry.model.beta(j, 0) != 0.0) support.insert(j);
    }
    if (support == truth) exact_support = true;
  }
  CHECK(exact_support);
}

TEST_CASE("warm starts land on the same optimum as cold starts") {
  Rng rng(229);
  const Index n = 80, d = 6;
  Matrix x = standardized(testutil::random_matrix(n, d, rng));
  Vector yv = x.col(1) - 0.5 * x.col(4);
  for (Index i = 0; i < n; ++i) yv[i] += 0.02 * testutil::uniform_pm1(rng);
  TargetVector y = TargetVector::regression(yv);

  SolverConfig solver;
  solver.batch_size = 16;
  solver.lr = 0.1;
  solver.eps_tol = 1e-9;
  solver.max_epochs = 4000;
  solver.seed = 17;

  PathSchedule schedule;
  schedule.K = 4;
  schedule.epsilon = 0.05;
  const RegularizationPath path =
      fit_path(x, y, x, y, Family::gaussian, 0.95, schedule, solver);
  REQUIRE(path.entries.size() == 4);

  const std::vector<double> grid = lambda_schedule(path.lam_max, 4, 0.05);
  for (std::size_t t = 1; t < grid.size(); ++t) {  // entry 0 is the cold start itself
    SolverConfig cold = solver;
    cold.seed = solver.seed + t;
    const FitResult scratch = fit_fixed_lambda(x, y, GlmModel::zero(d, Family::gaussian),
                                               ElasticNetParams{grid[t], 0.95}, cold);
    const Matrix& warm = path.entries[t].model.beta;
    CHECK((warm - scratch.model.beta).cwiseAbs().maxCoeff() < 1e-3);
  }
}

TEST_CASE("a constant feature never enters the path") {
  Rng rng(233);
  const Index n = 60, d = 5;
  Matrix x = testutil::random_matrix(n, d, rng);
  x.col(2).setConstant(4.2);
  x = standardized(x);  // constant column becomes exactly zero
  Vector yv = x.col(0) + 0.02 * testutil::random_vector(n, rng);
  TargetVector y = TargetVector::regression(yv);

  SolverConfig solver;
  solver.batch_size = n;
  solver.eps_tol = 1e-7;
  solver.max_epochs = 1000;
  PathSchedule schedule;
  schedule.K = 8;
  schedule.epsilon = 0.005;
  const RegularizationPath path =
      fit_path(x, y, x, y, Family::gaussian, 0.99, schedule, solver);

  const FeatureOrdering order = feature_ordering(path);
  CHECK(order.entry_index[2] == FeatureOrdering::kNever);
  CHECK(order.entry_index[0] != FeatureOrdering::kNever);
}

TEST_CASE("divergence mid-path aborts with the prefix and a reason") {
  Rng rng(239);
  const Index n = 30, d = 3;
  Matrix x = 100.0 * testutil::random_matrix(n, d, rng);
  TargetVector y = TargetVector::regression(testutil::random_vector(n, rng));

  SolverConfig solver;
  solver.batch_size = 8;
  solver.lr = 50.0;  // guaranteed blow-up via the unpenalized intercept
  solver.max_epochs = 300;
  PathSchedule schedule;
  schedule.K = 3;
  schedule.epsilon = 0.01;
  const RegularizationPath path =
      fit_path(x, y, x, y, Family::gaussian, 1.0, schedule, solver);
  CHECK_FALSE(path.abort_reason.empty());
  CHECK(path.abort_reason.find("lambda index") != std::string::npos);
  CHECK(path.entries.size() < 3);
}

TEST_CASE("select_model prefers the sparsest entry within tolerance") {
  // classification metrics: higher is better
  const RegularizationPath flat =
      fake_path(Family::binomial, 1, {0.9, 0.9, 0.9, 0.9}, {1, 2, 5, 9});
  CHECK(select_model(flat, 0.05) == 0);

  // the cautionary grid: nnz-0 entries need min_nnz = 0 to win
  const RegularizationPath caveat =
      fake_path(Family::binomial, 1, {0.90, 0.70, 0.88, 0.91}, {0, 3, 10, 500});
  CHECK(select_model(caveat, 0.05, 1) == 2);
  CHECK(select_model(caveat, 0.05, 0) == 0);

  // nnz ties resolve to the larger lambda, i.e. the earlier entry
  const RegularizationPath tie =
      fake_path(Family::binomial, 1, {0.88, 0.90, 0.89}, {4, 4, 4});
  CHECK(select_model(tie, 0.05) == 0);

  // zero tolerance: only exact-best entries qualify
  const RegularizationPath exact =
      fake_path(Family::binomial, 1, {0.85, 0.92, 0.92, 0.80}, {7, 6, 2, 1});
  CHECK(select_model(exact, 0.0) == 2);

  // nothing qualifies: fall back to the best metric
  const RegularizationPath fallback =
      fake_path(Family::binomial, 1, {0.95, 0.60, 0.50}, {0, 0, 0});
  CHECK(select_model(fallback, 0.05, 1) == 0);
}

TEST_CASE("select_model treats gaussian metrics as lower-is-better") {
  const RegularizationPath path =
      fake_path(Family::gaussian, 1, {4.0, 1.02, 1.00, 1.06}, {2, 6, 11, 20});
  // best MSE 1.00, bar 1.05: entries 1 and 2 qualify, entry 1 is sparser
  CHECK(select_model(path, 0.05) == 1);
}

TEST_CASE("feature_ordering reads first-entry indices off the path") {
  RegularizationPath path;
  for (int t = 0; t < 3; ++t) {
    PathEntry entry;
    entry.model = GlmModel::zero(4, Family::multinomial, 2);
    entry.lambda = 1.0 / (t + 1);
    path.entries.push_back(entry);
  }
  // feature 2 enters at t=0 (class 1), feature 0 at t=1, feature 1 never
  path.entries[0].model.beta(2, 1) = 0.3;
  path.entries[1].model.beta(2, 1) = 0.4;
  path.entries[1].model.beta(0, 0) = -0.1;
  path.entries[2].model.beta(2, 0) = 0.2;
  path.entries[2].model.beta(0, 0) = -0.2;
  path.entries[2].model.beta(3, 0) = 0.05;

  const FeatureOrdering order = feature_ordering(path);
  REQUIRE(order.entry_index.size() == 4);
  CHECK(order.entry_index[0] == 1);
  CHECK(order.entry_index[1] == FeatureOrdering::kNever);
  CHECK(order.entry_index[2] == 0);
  CHECK(order.entry_index[3] == 2);
  CHECK(order.ordered_features() == std::vector<Index>{2, 0, 3});

  // all-zero path: nothing ever enters
  RegularizationPath zero;
  zero.entries.push_back(fake_entry(Family::binomial, 1, 1.0, 0.5, 0));
  const FeatureOrdering none = feature_ordering(zero);
  for (Index idx : none.entry_index) CHECK(idx == FeatureOrdering::kNever);
  CHECK(none.ordered_features().empty());
}

TEST_CASE("path summary survives a write/read round trip") {
  Rng rng(241);
  const Index n = 50, d = 4;
  Matrix x = standardized(testutil::random_matrix(n, d, rng));
  Vector yv = x.col(1) + 0.05 * testutil::random_vector(n, rng);
  TargetVector y = TargetVector::regression(yv);

  SolverConfig solver;
  solver.batch_size = n;
  solver.eps_tol = 1e-6;
  solver.max_epochs = 500;
  PathSchedule schedule;
  schedule.K = 5;
  schedule.epsilon = 0.01;
  RegularizationPath path = fit_path(x, y, x, y, Family::gaussian, 0.99, schedule, solver);

  const std::string file = "path_summary_test.csv";
  write_path_summary(file, path, "{\"seed\": 7}");
  const PathSummary summary = read_path_summary(file);
  std::remove(file.c_str());

  CHECK(summary.config_json == "{\"seed\": 7}");
  REQUIRE(summary.rows.size() == path.entries.size());
  for (std::size_t t = 0; t < summary.rows.size(); ++t) {
    const PathSummaryRow& row = summary.rows[t];
    const PathEntry& entry = path.entries[t];
    CHECK(row.lambda == entry.lambda);  // %.17g is lossless for doubles
    CHECK(row.train_loss == entry.train_loss);
    CHECK(row.val_metric == entry.val_metric);
    CHECK(row.nnz_total == entry.nnz_total);
    CHECK(row.converged == entry.converged);
    CHECK(row.kkt_violation == -1.0);
    REQUIRE(row.nnz_per_class.size() == 1);
    CHECK(row.nnz_per_class[0] == entry.nnz_total);
  }

  // with the oracle column present
  for (PathEntry& entry : path.entries) entry.kkt_violation = 1e-5;
  write_path_summary(file, path, "{}");
  const PathSummary with_kkt = read_path_summary(file);
  std::remove(file.c_str());
  for (const PathSummaryRow& row : with_kkt.rows) CHECK(row.kkt_violation == 1e-5);
}
