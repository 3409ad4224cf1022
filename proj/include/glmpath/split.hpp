#pragma once

#include "glmpath/types.hpp"

#include <cstdint>
#include <vector>

namespace glmpath {

struct SplitIndices {
  std::vector<Index> train;
  std::vector<Index> val;
};

// Seeded train/validation split. Classification targets are split per class
// so small classes keep validation representation; regression is a plain
// shuffled cut. Rounds the validation share per stratum with at least one
// training row left in each.
SplitIndices split_indices(const TargetVector& y, double val_fraction, std::uint64_t seed);

Matrix take_rows(const Matrix& x, const std::vector<Index>& rows);
TargetVector take_targets(const TargetVector& y, const std::vector<Index>& rows);

}  // namespace glmpath
