#include "glmpath/oracle.hpp"

#include "glmpath/glm.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace glmpath::oracle {

namespace {

// plain Eigen products on purpose: no shared code with the solver kernels
void dense_gradient(const Matrix& x, const TargetVector& y, const GlmModel& model,
                    Matrix& grad, Vector& grad0) {
  const Matrix a = residuals(x, y, model);
  const double n = static_cast<double>(x.rows());
  grad = (x.transpose() * a) / n;
  grad0 = a.colwise().sum().transpose() / n;
}

}  // namespace

OracleFit ista_fit(const Matrix& x, const TargetVector& y, Family family,
                   const ElasticNetParams& params, Index max_iters, double tol) {
  validate_pair(x, y, family);
  OracleFit fit;
  fit.model = GlmModel::zero(x.cols(), family, y.num_classes);
  fit.model.lambda = params.lambda;
  fit.model.alpha = params.alpha;

  const double lam1 = params.lambda * params.alpha;
  const double lam2 = params.lambda * (1.0 - params.alpha);

  // Constant 1/L step from the curvature bound factor * eigmax of the
  // intercept-augmented Gram matrix (1 gaussian, 1/4 sigmoid, 1/2 softmax).
  // The halving below is only a safety net for float noise.
  const double factor =
      family == Family::gaussian ? 1.0 : (family == Family::binomial ? 0.25 : 0.5);
  Eigen::MatrixXd aug(x.rows(), x.cols() + 1);
  aug.leftCols(x.cols()) = x;
  aug.col(x.cols()).setOnes();
  const Eigen::MatrixXd gram = (aug.transpose() * aug) / static_cast<double>(x.rows());
  const double curvature =
      factor * Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram).eigenvalues().maxCoeff();
  const double base_step = 1.0 / std::max(curvature, 1e-10);

  double loss = smooth_loss(x, y, fit.model);
  Matrix grad;
  Vector grad0;

  for (Index iter = 1; iter <= max_iters; ++iter) {
    dense_gradient(x, y, fit.model, grad, grad0);

    GlmModel next = fit.model;
    double step = base_step;
    double next_loss = 0.0;
    while (true) {
      for (Index j = 0; j < next.beta.rows(); ++j) {
        for (Index c = 0; c < next.beta.cols(); ++c) {
          next.beta(j, c) =
              prox_elastic_net(fit.model.beta(j, c) - step * grad(j, c), step * lam1, step * lam2);
        }
      }
      next.beta0 = fit.model.beta0 - step * grad0;
      next_loss = smooth_loss(x, y, next);
      // Armijo/majorization check for the proximal step
      const Matrix db = next.beta - fit.model.beta;
      const Vector db0 = next.beta0 - fit.model.beta0;
      const double lin = (grad.array() * db.array()).sum() + grad0.dot(db0);
      const double quad = (db.squaredNorm() + db0.squaredNorm()) / (2.0 * step);
      if (next_loss <= loss + lin + quad + 1e-15 || step < 1e-12) break;
      step *= 0.5;
    }

    const double move = std::sqrt((next.beta - fit.model.beta).squaredNorm() +
                                  (next.beta0 - fit.model.beta0).squaredNorm());
    fit.model = std::move(next);
    loss = next_loss;
    fit.iterations = iter;
    if (move <= tol) {
      fit.converged = true;
      break;
    }
  }
  return fit;
}

OracleReport kkt_check(const Matrix& x, const TargetVector& y, const GlmModel& model,
                       const ElasticNetParams& params) {
  Matrix grad;
  Vector grad0;
  dense_gradient(x, y, model, grad, grad0);
  const double lam1 = params.lambda * params.alpha;
  const double lam2 = params.lambda * (1.0 - params.alpha);

  OracleReport report;
  for (Index j = 0; j < model.beta.rows(); ++j) {
    for (Index c = 0; c < model.beta.cols(); ++c) {
      const double b = model.beta(j, c);
      double v;
      if (b != 0.0) {
        v = std::abs(grad(j, c) + lam2 * b + (b > 0.0 ? lam1 : -lam1));
      } else {
        v = std::max(0.0, std::abs(grad(j, c)) - lam1);
      }
      report.max_kkt_violation = std::max(report.max_kkt_violation, v);
    }
  }
  for (Index c = 0; c < grad0.size(); ++c) {
    report.max_kkt_violation = std::max(report.max_kkt_violation, std::abs(grad0[c]));
  }
  return report;
}

OracleReport compare(const Matrix& x, const TargetVector& y, const GlmModel& main,
                     const GlmModel& reference, const ElasticNetParams& params) {
  if (main.dim() != reference.dim() || main.outputs() != reference.outputs()) {
    throw precondition_error("oracle comparison needs models of identical shape");
  }
  OracleReport report = kkt_check(x, y, main, params);
  report.coordinate_gap =
      std::max((main.beta - reference.beta).cwiseAbs().maxCoeff(),
               (main.beta0 - reference.beta0).cwiseAbs().maxCoeff());
  report.objective_gap =
      objective(x, y, main, params) - objective(x, y, reference, params);
  return report;
}

}  // namespace glmpath::oracle
