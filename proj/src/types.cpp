#include "glmpath/types.hpp"

#include <cmath>

namespace glmpath {

std::string family_name(Family family) {
  switch (family) {
    case Family::gaussian:
      return "gaussian";
    case Family::binomial:
      return "binomial";
    case Family::multinomial:
      return "multinomial";
  }
  return "unknown";
}

Family family_from_name(const std::string& name) {
  if (name == "gaussian") return Family::gaussian;
  if (name == "binomial") return Family::binomial;
  if (name == "multinomial") return Family::multinomial;
  throw precondition_error("unknown family '" + name +
                           "' (expected gaussian, binomial or multinomial)");
}

TargetVector TargetVector::regression(Vector values) {
  TargetVector y;
  y.kind = Kind::regression;
  y.values = std::move(values);
  for (Index i = 0; i < y.values.size(); ++i) {
    if (!std::isfinite(y.values[i])) {
      throw validation_error("non-finite target at row " + std::to_string(i));
    }
  }
  return y;
}

TargetVector TargetVector::classification(Vector labels, Index num_classes) {
  if (num_classes < 2) {
    throw precondition_error("classification targets need at least 2 classes");
  }
  TargetVector y;
  y.kind = Kind::classification;
  y.num_classes = num_classes;
  for (Index i = 0; i < labels.size(); ++i) {
    const double v = labels[i];
    if (!std::isfinite(v) || v != std::floor(v) || v < 0 || v >= static_cast<double>(num_classes)) {
      throw validation_error("label at row " + std::to_string(i) + " is " + std::to_string(v) +
                             ", expected an integer in [0, " + std::to_string(num_classes) + ")");
    }
  }
  y.values = std::move(labels);
  return y;
}

std::vector<Index> GlmModel::nnz_per_class() const {
  std::vector<Index> counts(static_cast<std::size_t>(outputs()), 0);
  for (Index c = 0; c < outputs(); ++c) {
    for (Index j = 0; j < dim(); ++j) {
      if (beta(j, c) != 0.0) ++counts[static_cast<std::size_t>(c)];
    }
  }
  return counts;
}

Index GlmModel::nnz_total() const {
  Index total = 0;
  for (Index count : nnz_per_class()) total += count;
  return total;
}

GlmModel GlmModel::zero(Index dim, Family family, Index num_classes) {
  GlmModel model;
  model.family = family;
  const Index k = family_outputs(family, num_classes);
  model.beta = Matrix::Zero(dim, k);
  model.beta0 = Vector::Zero(k);
  return model;
}

Index family_outputs(Family family, Index num_classes) {
  switch (family) {
    case Family::gaussian:
    case Family::binomial:
      return 1;
    case Family::multinomial:
      if (num_classes < 2) {
        throw precondition_error("multinomial family needs at least 2 classes");
      }
      return num_classes;
  }
  return 1;
}

void validate_features(const Matrix& x) {
  if (x.rows() < 1 || x.cols() < 1) {
    throw validation_error("feature matrix must have at least one row and one column");
  }
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) {
      if (!std::isfinite(x(i, j))) {
        throw validation_error("non-finite feature value at (row " + std::to_string(i) +
                               ", col " + std::to_string(j) + ")");
      }
    }
  }
}

void validate_pair(const Matrix& x, const TargetVector& y, Family family) {
  if (y.size() != x.rows()) {
    throw precondition_error("target length " + std::to_string(y.size()) +
                             " does not match example count " + std::to_string(x.rows()));
  }
  if (family == Family::gaussian) {
    if (y.kind != TargetVector::Kind::regression) {
      throw precondition_error("gaussian family requires regression targets");
    }
    return;
  }
  if (y.kind != TargetVector::Kind::classification) {
    throw precondition_error(family_name(family) + " family requires classification targets");
  }
  if (family == Family::binomial && y.num_classes != 2) {
    throw precondition_error("binomial family requires exactly 2 classes, got " +
                             std::to_string(y.num_classes));
  }
}

}  // namespace glmpath
