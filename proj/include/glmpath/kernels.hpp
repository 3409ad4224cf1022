#pragma once

#include "glmpath/types.hpp"

#include <span>

namespace glmpath::kernels {

// OpenMP-parallel inner loops of the solver and the standardizer. Every
// kernel partitions work over disjoint output locations and accumulates
// each output in a fixed serial order, so results are bitwise identical
// for any thread count. kernels::ref holds the serial implementations the
// tests compare against and the benchmark baselines.

void set_threads(int n);  // n <= 0 leaves the OpenMP default untouched
int max_threads();

/// out(r, :) = beta^T x_{rows[r]} + beta0
void batch_logits(const Matrix& x, std::span<const Index> rows, const Matrix& beta,
                  const Vector& beta0, Matrix& out);

/// Full-data logits: out(i, :) = beta^T x_i + beta0
void logits(const Matrix& x, const Matrix& beta, const Vector& beta0, Matrix& out);

/// out = (1/|rows|) * sum_r outer(x_{rows[r]}, w(r, :))
void batch_feature_outer(const Matrix& x, std::span<const Index> rows, const Matrix& w,
                         Matrix& out);

/// Full-data mean outer product: out = (1/n) * sum_i outer(x_i, w(i, :))
void feature_outer(const Matrix& x, const Matrix& w, Matrix& out);

/// beta <- prox(beta - gamma * (delta + avg), lam1, lam2) elementwise.
void step_and_prox(Matrix& beta, const Matrix& delta, const Matrix& avg, double gamma,
                   double lam1, double lam2);

/// Per-column mean and population (1/n) standard deviation.
void column_moments(const Matrix& x, Vector& mean, Vector& stddev);

/// x(i, j) <- (x(i, j) - mean[j]) / scale[j]; constant columns map to 0.
void standardize_columns(Matrix& x, const Vector& mean, const Vector& scale,
                         const std::vector<std::uint8_t>& constant_mask);

namespace ref {

void batch_logits(const Matrix& x, std::span<const Index> rows, const Matrix& beta,
                  const Vector& beta0, Matrix& out);
void logits(const Matrix& x, const Matrix& beta, const Vector& beta0, Matrix& out);
void batch_feature_outer(const Matrix& x, std::span<const Index> rows, const Matrix& w,
                         Matrix& out);
void feature_outer(const Matrix& x, const Matrix& w, Matrix& out);
void step_and_prox(Matrix& beta, const Matrix& delta, const Matrix& avg, double gamma,
                   double lam1, double lam2);
void column_moments(const Matrix& x, Vector& mean, Vector& stddev);
void standardize_columns(Matrix& x, const Vector& mean, const Vector& scale,
                         const std::vector<std::uint8_t>& constant_mask);

}  // namespace ref

}  // namespace glmpath::kernels
