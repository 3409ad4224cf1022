#pragma once

#include "glmpath/types.hpp"

namespace glmpath {

/// Closed-form minimizer of (1/2)(z - beta)^2 + lam1*|z| + (lam2/2)*z^2.
/// Produces exact zeros; applied to coefficients only, never intercepts.
inline double prox_elastic_net(double beta, double lam1, double lam2) {
  if (beta > lam1) return (beta - lam1) / (1.0 + lam2);
  if (beta < -lam1) return (beta + lam1) / (1.0 + lam2);
  return 0.0;
}

/// Writes the family residual a_i for one example given its logits row z
/// (length k). gaussian: z - y; binomial: sigmoid(z) - y; multinomial:
/// softmax(z) - onehot(y).
void residual_row(Family family, const double* z, double y, Index k, double* out);

/// Smooth-loss contribution of one example (before the 1/N average).
double loss_term(Family family, const double* z, double y, Index k);

/// n x k matrix of linear predictors x_i^T beta + beta0.
Matrix logits(const Matrix& x, const GlmModel& model);

/// Per-example residuals a_i; the smooth-loss gradient w.r.t. beta is
/// (1/N) sum_i outer(x_i, a_i) and w.r.t. beta0 is (1/N) sum_i a_i.
Matrix residuals(const Matrix& x, const TargetVector& y, const GlmModel& model);

/// Mean data-fit term: half mean squared error (gaussian) or mean negative
/// log-likelihood (binomial, multinomial).
double smooth_loss(const Matrix& x, const TargetVector& y, const GlmModel& model);

/// lambda * [(1-alpha)/2 ||beta||_F^2 + alpha ||beta||_1], intercepts excluded.
double penalty(const Matrix& beta, const ElasticNetParams& params);

double objective(const Matrix& x, const TargetVector& y, const GlmModel& model,
                 const ElasticNetParams& params);

/// Full-batch gradient of smooth_loss w.r.t. (beta, beta0).
void smooth_gradient(const Matrix& x, const TargetVector& y, const GlmModel& model,
                     Matrix& grad, Vector& grad0);

/// Class predictions for binomial/multinomial models; argmax ties break to
/// the lower class index (binomial predicts 1 iff the logit is positive).
std::vector<Index> predict_classes(const Matrix& x, const GlmModel& model);

double accuracy(const Matrix& x, const TargetVector& y, const GlmModel& model);
double mean_squared_error(const Matrix& x, const TargetVector& y, const GlmModel& model);

/// Accuracy for classification families, mean squared error for gaussian.
double validation_metric(const Matrix& x, const TargetVector& y, const GlmModel& model);

}  // namespace glmpath
