#include "glmpath/kernels.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <vector>

using namespace glmpath;

namespace {

// run fn under several forced thread counts and demand bitwise-identical
// output against the serial reference result
template <typename Fn>
void check_thread_invariant(const Matrix& expected, Fn&& parallel_into) {
  for (int threads : {1, 2, 3, 7}) {
    kernels::set_threads(threads);
    Matrix got;
    parallel_into(got);
    REQUIRE(got.rows() == expected.rows());
    REQUIRE(got.cols() == expected.cols());
    for (Index t = 0; t < expected.size(); ++t) {
      REQUIRE(got.data()[t] == expected.data()[t]);  // bitwise, no tolerance
    }
  }
  kernels::set_threads(0);
}

}  // namespace

TEST_CASE("kernels: logits match the serial reference bitwise") {
  Rng rng(89);
  const Index n = 67, d = 13, k = 4;
  Matrix x = testutil::random_matrix(n, d, rng);
  GlmModel m = testutil::random_model(d, Family::multinomial, k, rng);

  Matrix expected;
  kernels::ref::logits(x, m.beta, m.beta0, expected);

  // spot-check the reference against a naive triple loop
  for (Index i = 0; i < 5; ++i) {
    for (Index c = 0; c < k; ++c) {
      double z = m.beta0[c];
      for (Index j = 0; j < d; ++j) z += x(i, j) * m.beta(j, c);
      CHECK(expected(i, c) == doctest::Approx(z).epsilon(1e-12));
    }
  }

  check_thread_invariant(expected, [&](Matrix& out) { kernels::logits(x, m.beta, m.beta0, out); });
}

TEST_CASE("kernels: batch logits agree with row extraction") {
  Rng rng(97);
  const Index n = 40, d = 6, k = 3;
  Matrix x = testutil::random_matrix(n, d, rng);
  GlmModel m = testutil::random_model(d, Family::multinomial, k, rng);
  const std::vector<Index> rows{3, 17, 17, 39, 0};

  Matrix expected;
  kernels::ref::batch_logits(x, rows, m.beta, m.beta0, expected);

  Matrix full;
  kernels::ref::logits(x, m.beta, m.beta0, full);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (Index c = 0; c < k; ++c) CHECK(expected(static_cast<Index>(r), c) == full(rows[r], c));
  }

  check_thread_invariant(
      expected, [&](Matrix& out) { kernels::batch_logits(x, rows, m.beta, m.beta0, out); });
}

TEST_CASE("kernels: feature outer products match the reference bitwise") {
  Rng rng(101);
  const Index n = 53, d = 9, k = 5;
  Matrix x = testutil::random_matrix(n, d, rng);
  Matrix w = testutil::random_matrix(n, k, rng);

  Matrix expected;
  kernels::ref::feature_outer(x, w, expected);

  // naive recomputation
  for (Index j = 0; j < d; ++j) {
    for (Index c = 0; c < k; ++c) {
      double sum = 0.0;
      for (Index i = 0; i < n; ++i) sum += x(i, j) * w(i, c);
      CHECK(expected(j, c) == doctest::Approx(sum / n).epsilon(1e-12));
    }
  }

  check_thread_invariant(expected, [&](Matrix& out) { kernels::feature_outer(x, w, out); });

  const std::vector<Index> rows{5, 5, 12, 40};
  Matrix wb = testutil::random_matrix(static_cast<Index>(rows.size()), k, rng);
  Matrix expected_batch;
  kernels::ref::batch_feature_outer(x, rows, wb, expected_batch);
  check_thread_invariant(expected_batch,
                         [&](Matrix& out) { kernels::batch_feature_outer(x, rows, wb, out); });

  CHECK_THROWS_AS(kernels::batch_feature_outer(x, std::vector<Index>{}, wb, expected_batch),
                  precondition_error);
}

TEST_CASE("kernels: step_and_prox equals the scalar prox applied elementwise") {
  Rng rng(103);
  const Index d = 11, k = 3;
  Matrix beta = testutil::random_matrix(d, k, rng);
  Matrix delta = testutil::random_matrix(d, k, rng);
  Matrix avg = testutil::random_matrix(d, k, rng);
  const double gamma = 0.2, lam1 = 0.03, lam2 = 0.01;

  Matrix expected = beta;
  kernels::ref::step_and_prox(expected, delta, avg, gamma, lam1, lam2);
  for (Index j = 0; j < d; ++j) {
    for (Index c = 0; c < k; ++c) {
      const double stepped = beta(j, c) - gamma * (delta(j, c) + avg(j, c));
      CHECK(expected(j, c) == prox_elastic_net(stepped, lam1, lam2));
    }
  }

  for (int threads : {1, 2, 5}) {
    kernels::set_threads(threads);
    Matrix got = beta;
    kernels::step_and_prox(got, delta, avg, gamma, lam1, lam2);
    for (Index t = 0; t < got.size(); ++t) REQUIRE(got.data()[t] == expected.data()[t]);
  }
  kernels::set_threads(0);
}

TEST_CASE("kernels: column moments and standardization match the reference") {
  Rng rng(107);
  const Index n = 31, d = 8;
  Matrix x = testutil::random_matrix(n, d, rng);

  Vector mean_ref, std_ref;
  kernels::ref::column_moments(x, mean_ref, std_ref);
  for (int threads : {1, 2, 4}) {
    kernels::set_threads(threads);
    Vector mean, stddev;
    kernels::column_moments(x, mean, stddev);
    for (Index j = 0; j < d; ++j) {
      REQUIRE(mean[j] == mean_ref[j]);
      REQUIRE(stddev[j] == std_ref[j]);
    }
  }
  kernels::set_threads(0);

  std::vector<std::uint8_t> mask(static_cast<std::size_t>(d), 0);
  mask[2] = 1;
  Matrix expected = x;
  kernels::ref::standardize_columns(expected, mean_ref, std_ref, mask);
  for (Index i = 0; i < n; ++i) CHECK(expected(i, 2) == 0.0);

  check_thread_invariant(expected, [&](Matrix& out) {
    out = x;
    kernels::standardize_columns(out, mean_ref, std_ref, mask);
  });
}
