#include "glmpath/split.hpp"

#include "glmpath/rng.hpp"

#include <algorithm>
#include <cmath>

namespace glmpath {

namespace {

// shuffle, cut, and leave at least one row on the training side
void cut_stratum(std::vector<Index>& pool, double val_fraction, Rng& rng, SplitIndices& out) {
  rng.shuffle(pool);
  auto n_val = static_cast<std::size_t>(
      std::llround(val_fraction * static_cast<double>(pool.size())));
  if (n_val >= pool.size()) n_val = pool.size() - 1;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    (i < n_val ? out.val : out.train).push_back(pool[i]);
  }
}

}  // namespace

SplitIndices split_indices(const TargetVector& y, double val_fraction, std::uint64_t seed) {
  if (!(val_fraction >= 0.0) || val_fraction >= 1.0) {
    throw precondition_error("val_fraction must be in [0, 1), got " +
                             std::to_string(val_fraction));
  }
  const Index n = y.size();
  if (n < 2) throw precondition_error("need at least 2 rows to split");

  Rng rng(seed);
  SplitIndices out;
  if (y.kind == TargetVector::Kind::classification) {
    for (Index c = 0; c < y.num_classes; ++c) {
      std::vector<Index> pool;
      for (Index i = 0; i < n; ++i) {
        if (y.label(i) == c) pool.push_back(i);
      }
      if (!pool.empty()) cut_stratum(pool, val_fraction, rng, out);
    }
  } else {
    std::vector<Index> pool(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
    cut_stratum(pool, val_fraction, rng, out);
  }
  // tiny strata can all round to zero; keep the validation side usable
  if (out.val.empty() && val_fraction > 0.0) {
    out.val.push_back(out.train.back());
    out.train.pop_back();
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.val.begin(), out.val.end());
  return out;
}

Matrix take_rows(const Matrix& x, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Index>(i)) = x.row(rows[i]);
  }
  return out;
}

TargetVector take_targets(const TargetVector& y, const std::vector<Index>& rows) {
  TargetVector out = y;
  out.values.resize(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.values[static_cast<Index>(i)] = y.values[rows[i]];
  }
  return out;
}

}  // namespace glmpath
