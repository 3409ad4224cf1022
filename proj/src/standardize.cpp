#include "glmpath/standardize.hpp"

#include "glmpath/kernels.hpp"

#include <utility>

namespace glmpath {

Standardizer Standardizer::fit(const Matrix& x) {
  if (x.rows() == 0) {
    throw precondition_error("cannot fit standardizer on an empty matrix");
  }
  validate_features(x);
  Standardizer s;
  kernels::column_moments(x, s.mean, s.scale);
  s.constant_mask.assign(static_cast<std::size_t>(x.cols()), 0);
  for (Index j = 0; j < x.cols(); ++j) {
    double lo = x(0, j);
    double hi = x(0, j);
    for (Index i = 1; i < x.rows(); ++i) {
      const double v = x(i, j);
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
    if (lo == hi) {
      s.constant_mask[static_cast<std::size_t>(j)] = 1;
      s.scale[j] = 1.0;
    }
  }
  return s;
}

Matrix Standardizer::transform(const Matrix& x) const {
  Matrix out = x;
  transform_in_place(out);
  return out;
}

void Standardizer::transform_in_place(Matrix& x) const {
  if (x.cols() != dim()) {
    throw precondition_error("standardizer fitted on " + std::to_string(dim()) +
                             " columns, got " + std::to_string(x.cols()));
  }
  kernels::standardize_columns(x, mean, scale, constant_mask);
}

std::pair<Matrix, Standardizer> standardize(const Matrix& x) {
  Standardizer s = Standardizer::fit(x);
  Matrix out = s.transform(x);
  return {std::move(out), std::move(s)};
}

}  // namespace glmpath
