#pragma once

#include "glmpath/types.hpp"

#include <cstdint>
#include <vector>

namespace glmpath {

// Column-wise standardization fitted on training data and replayed on new data.
// Constant columns (exact min == max) get scale 1 and are flagged so transform
// maps them to exactly 0 instead of amplifying float noise.
struct Standardizer {
  Vector mean;
  Vector scale;  // population std; 1.0 for constant columns
  std::vector<std::uint8_t> constant_mask;

  Index dim() const { return mean.size(); }
  bool is_constant(Index j) const { return constant_mask[static_cast<std::size_t>(j)] != 0; }

  static Standardizer fit(const Matrix& x);

  Matrix transform(const Matrix& x) const;
  void transform_in_place(Matrix& x) const;
};

// fit + transform in one go
std::pair<Matrix, Standardizer> standardize(const Matrix& x);

}  // namespace glmpath
