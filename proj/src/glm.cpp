#include "glmpath/glm.hpp"

#include "glmpath/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace glmpath {

namespace {

inline double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow
inline double log1pexp(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

void check_model_shapes(const Matrix& x, const TargetVector& y, const GlmModel& model) {
  validate_pair(x, y, model.family);
  if (model.dim() != x.cols()) {
    throw precondition_error("model dimension " + std::to_string(model.dim()) +
                             " does not match feature count " + std::to_string(x.cols()));
  }
  if (model.family == Family::multinomial && model.outputs() != y.num_classes) {
    throw precondition_error("model has " + std::to_string(model.outputs()) +
                             " outputs but targets have " + std::to_string(y.num_classes) +
                             " classes");
  }
  if (model.beta0.size() != model.outputs()) {
    throw precondition_error("intercept length does not match model outputs");
  }
}

}  // namespace

void residual_row(Family family, const double* z, double y, Index k, double* out) {
  switch (family) {
    case Family::gaussian:
      out[0] = z[0] - y;
      return;
    case Family::binomial:
      out[0] = sigmoid(z[0]) - y;
      return;
    case Family::multinomial: {
      double zmax = z[0];
      for (Index c = 1; c < k; ++c) zmax = std::max(zmax, z[c]);
      double sum = 0.0;
      for (Index c = 0; c < k; ++c) {
        out[c] = std::exp(z[c] - zmax);
        sum += out[c];
      }
      const Index label = static_cast<Index>(y);
      for (Index c = 0; c < k; ++c) {
        out[c] = out[c] / sum - (c == label ? 1.0 : 0.0);
      }
      return;
    }
  }
}

double loss_term(Family family, const double* z, double y, Index k) {
  switch (family) {
    case Family::gaussian: {
      const double r = z[0] - y;
      return 0.5 * r * r;
    }
    case Family::binomial:
      return log1pexp(z[0]) - y * z[0];
    case Family::multinomial: {
      double zmax = z[0];
      for (Index c = 1; c < k; ++c) zmax = std::max(zmax, z[c]);
      double sum = 0.0;
      for (Index c = 0; c < k; ++c) sum += std::exp(z[c] - zmax);
      return zmax + std::log(sum) - z[static_cast<Index>(y)];
    }
  }
  return 0.0;
}

Matrix logits(const Matrix& x, const GlmModel& model) {
  Matrix z;
  kernels::logits(x, model.beta, model.beta0, z);
  return z;
}

Matrix residuals(const Matrix& x, const TargetVector& y, const GlmModel& model) {
  check_model_shapes(x, y, model);
  Matrix z = logits(x, model);
  const Index k = model.outputs();
  Matrix a(x.rows(), k);
  for (Index i = 0; i < x.rows(); ++i) {
    residual_row(model.family, z.data() + i * k, y.values[i], k, a.data() + i * k);
  }
  return a;
}

double smooth_loss(const Matrix& x, const TargetVector& y, const GlmModel& model) {
  check_model_shapes(x, y, model);
  Matrix z = logits(x, model);
  const Index k = model.outputs();
  double total = 0.0;
  for (Index i = 0; i < x.rows(); ++i) {
    total += loss_term(model.family, z.data() + i * k, y.values[i], k);
  }
  return total / static_cast<double>(x.rows());
}

double penalty(const Matrix& beta, const ElasticNetParams& params) {
  double l1 = 0.0;
  double l2 = 0.0;
  const double* b = beta.data();
  for (Index t = 0; t < beta.size(); ++t) {
    l1 += std::abs(b[t]);
    l2 += b[t] * b[t];
  }
  return params.lambda * ((1.0 - params.alpha) * 0.5 * l2 + params.alpha * l1);
}

double objective(const Matrix& x, const TargetVector& y, const GlmModel& model,
                 const ElasticNetParams& params) {
  return smooth_loss(x, y, model) + penalty(model.beta, params);
}

void smooth_gradient(const Matrix& x, const TargetVector& y, const GlmModel& model,
                     Matrix& grad, Vector& grad0) {
  Matrix a = residuals(x, y, model);
  kernels::feature_outer(x, a, grad);
  const Index k = model.outputs();
  grad0 = Vector::Zero(k);
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index c = 0; c < k; ++c) grad0[c] += a(i, c);
  }
  grad0 /= static_cast<double>(a.rows());
}

std::vector<Index> predict_classes(const Matrix& x, const GlmModel& model) {
  if (model.family == Family::gaussian) {
    throw precondition_error("predict_classes requires a classification family");
  }
  Matrix z = logits(x, model);
  std::vector<Index> pred(static_cast<std::size_t>(x.rows()));
  const Index k = model.outputs();
  for (Index i = 0; i < x.rows(); ++i) {
    if (model.family == Family::binomial) {
      pred[static_cast<std::size_t>(i)] = z(i, 0) > 0.0 ? 1 : 0;
    } else {
      Index best = 0;
      for (Index c = 1; c < k; ++c) {
        if (z(i, c) > z(i, best)) best = c;
      }
      pred[static_cast<std::size_t>(i)] = best;
    }
  }
  return pred;
}

double accuracy(const Matrix& x, const TargetVector& y, const GlmModel& model) {
  check_model_shapes(x, y, model);
  const std::vector<Index> pred = predict_classes(x, model);
  Index hits = 0;
  for (Index i = 0; i < x.rows(); ++i) {
    if (pred[static_cast<std::size_t>(i)] == y.label(i)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(x.rows());
}

double mean_squared_error(const Matrix& x, const TargetVector& y, const GlmModel& model) {
  check_model_shapes(x, y, model);
  Matrix z = logits(x, model);
  double total = 0.0;
  for (Index i = 0; i < x.rows(); ++i) {
    const double r = z(i, 0) - y.values[i];
    total += r * r;
  }
  return total / static_cast<double>(x.rows());
}

double validation_metric(const Matrix& x, const TargetVector& y, const GlmModel& model) {
  return model.family == Family::gaussian ? mean_squared_error(x, y, model)
                                          : accuracy(x, y, model);
}

}  // namespace glmpath
