#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace glmpath {

// Row-major throughout: example rows and coefficient rows are contiguous,
// which is what the solver kernels iterate over.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class Family { gaussian, binomial, multinomial };

std::string family_name(Family family);
Family family_from_name(const std::string& name);

/// Bad input files or data that violates a format/content invariant.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Data fails a declared invariant (non-finite values, bad labels, ...).
class validation_error : public io_error {
 public:
  using io_error::io_error;
};

/// Caller broke a documented precondition of an operation.
class precondition_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The solver produced non-finite iterates.
class divergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ElasticNetParams {
  double lambda = 0.0;  // overall strength, >= 0
  double alpha = 1.0;   // l1/l2 mix in [0, 1]; 1 = pure lasso
};

/// Regression targets or class labels paired with a feature matrix.
struct TargetVector {
  enum class Kind { regression, classification };

  Kind kind = Kind::regression;
  Vector values;          // real targets, or class indices stored as doubles
  Index num_classes = 0;  // classification only

  Index size() const { return values.size(); }
  Index label(Index i) const { return static_cast<Index>(values[i]); }

  static TargetVector regression(Vector values);
  // Validates that every label is integral and in [0, num_classes).
  static TargetVector classification(Vector labels, Index num_classes);
};

/// A fitted (or zero) generalized linear model. One coefficient column per
/// output: gaussian and binomial have a single output, multinomial has one
/// per class.
struct GlmModel {
  Matrix beta;   // d x k coefficients
  Vector beta0;  // k intercepts, never penalized
  Family family = Family::gaussian;
  double lambda = 0.0;
  double alpha = 1.0;

  Index dim() const { return beta.rows(); }
  Index outputs() const { return beta.cols(); }

  // Exact-zero counts; the proximal operator produces exact zeros.
  std::vector<Index> nnz_per_class() const;
  Index nnz_total() const;

  static GlmModel zero(Index dim, Family family, Index num_classes = 1);
};

/// Number of model outputs k for a family/class-count combination.
Index family_outputs(Family family, Index num_classes);

/// Throws validation_error naming the offending (row, col) on non-finite
/// entries, or on an empty matrix.
void validate_features(const Matrix& x);

/// Checks the pairing invariants between features and targets for a family.
void validate_pair(const Matrix& x, const TargetVector& y, Family family);

}  // namespace glmpath
