#pragma once

#include "glmpath/types.hpp"

namespace glmpath::oracle {

// Test-grade verification plumbing: slow, independent of the solver kernels,
// desk-scale inputs only.

struct OracleReport {
  double max_kkt_violation = 0.0;
  double coordinate_gap = 0.0;  // max |beta_main - beta_oracle| incl. intercepts
  double objective_gap = 0.0;   // objective(main) - objective(oracle)
};

struct OracleFit {
  GlmModel model;
  bool converged = false;
  Index iterations = 0;
};

// Full-batch proximal gradient (ISTA) with halving backtracking line search,
// run until the iterate moves less than tol. Shares only the glm-core
// residual/loss primitives with the solver under test.
OracleFit ista_fit(const Matrix& x, const TargetVector& y, Family family,
                   const ElasticNetParams& params, Index max_iters = 20000, double tol = 1e-9);

// Subgradient optimality violation, maximized over coefficients and
// intercepts: nonzero b -> |G + lam2*b + lam1*sign(b)|, zero b ->
// max(0, |G| - lam1), intercept -> |G0|.
OracleReport kkt_check(const Matrix& x, const TargetVector& y, const GlmModel& model,
                       const ElasticNetParams& params);

// kkt_check of `main` plus the coordinatewise and objective gaps against an
// independently fitted reference model.
OracleReport compare(const Matrix& x, const TargetVector& y, const GlmModel& main,
                     const GlmModel& reference, const ElasticNetParams& params);

}  // namespace glmpath::oracle
