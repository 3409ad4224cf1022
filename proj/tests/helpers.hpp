#pragma once

#include "glmpath/glm.hpp"
#include "glmpath/rng.hpp"
#include "glmpath/types.hpp"

#include <cmath>

namespace testutil {

using glmpath::Index;
using glmpath::Matrix;
using glmpath::Vector;

// uniform in [-1, 1), deterministic across platforms (hand-rolled mapping)
inline double uniform_pm1(glmpath::Rng& rng) {
  return static_cast<double>(rng.next() >> 11) * (2.0 / 9007199254740992.0) - 1.0;
}

inline double gauss(glmpath::Rng& rng) {
  // Box-Muller on our own uniform stream
  double u = 0.0;
  while (u <= 0.0) u = 0.5 * (uniform_pm1(rng) + 1.0);
  const double v = 0.5 * (uniform_pm1(rng) + 1.0);
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
}

inline Matrix random_matrix(Index n, Index d, glmpath::Rng& rng) {
  Matrix x(n, d);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) x(i, j) = gauss(rng);
  }
  return x;
}

inline Vector random_vector(Index n, glmpath::Rng& rng) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = gauss(rng);
  return v;
}

inline glmpath::TargetVector random_labels(Index n, Index k, glmpath::Rng& rng) {
  Vector labels(n);
  for (Index i = 0; i < n; ++i) labels[i] = static_cast<double>(rng.uniform_index(k));
  return glmpath::TargetVector::classification(labels, k);
}

// random model with entries in [-1, 1)
inline glmpath::GlmModel random_model(Index d, glmpath::Family family, Index num_classes,
                                      glmpath::Rng& rng) {
  glmpath::GlmModel m = glmpath::GlmModel::zero(d, family, num_classes);
  for (Index j = 0; j < m.beta.rows(); ++j) {
    for (Index c = 0; c < m.beta.cols(); ++c) m.beta(j, c) = uniform_pm1(rng);
  }
  for (Index c = 0; c < m.beta0.size(); ++c) m.beta0[c] = uniform_pm1(rng);
  return m;
}

// central finite difference of smooth_loss in one coefficient
inline double fd_grad_beta(const Matrix& x, const glmpath::TargetVector& y, glmpath::GlmModel m,
                           Index j, Index c, double h = 1e-6) {
  m.beta(j, c) += h;
  const double up = glmpath::smooth_loss(x, y, m);
  m.beta(j, c) -= 2.0 * h;
  const double down = glmpath::smooth_loss(x, y, m);
  return (up - down) / (2.0 * h);
}

inline double fd_grad_beta0(const Matrix& x, const glmpath::TargetVector& y, glmpath::GlmModel m,
                            Index c, double h = 1e-6) {
  m.beta0[c] += h;
  const double up = glmpath::smooth_loss(x, y, m);
  m.beta0[c] -= 2.0 * h;
  const double down = glmpath::smooth_loss(x, y, m);
  return (up - down) / (2.0 * h);
}

}  // namespace testutil
