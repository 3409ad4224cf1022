#include "glmpath/kernels.hpp"

#include "glmpath/glm.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace glmpath::kernels {

namespace {

inline void logits_row(const double* x, Index d, const Matrix& beta, const Vector& beta0,
                       double* z) {
  const Index k = beta.cols();
  for (Index c = 0; c < k; ++c) z[c] = beta0[c];
  const double* b = beta.data();  // row-major: row j holds the k class weights
  for (Index j = 0; j < d; ++j) {
    const double xj = x[j];
    for (Index c = 0; c < k; ++c) z[c] += xj * b[c];
    b += k;
  }
}

inline void accumulate_feature(const double* xp, Index d, const double* wp, Index k, Index j,
                               std::span<const Index> rows, double inv, double* acc) {
  for (Index c = 0; c < k; ++c) acc[c] = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const double xv = xp[rows[r] * d + j];
    const double* wr = wp + static_cast<Index>(r) * k;
    for (Index c = 0; c < k; ++c) acc[c] += xv * wr[c];
  }
  for (Index c = 0; c < k; ++c) acc[c] *= inv;
}

inline void accumulate_feature_full(const double* xp, Index n, Index d, const double* wp,
                                    Index k, Index j, double inv, double* acc) {
  for (Index c = 0; c < k; ++c) acc[c] = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double xv = xp[i * d + j];
    const double* wr = wp + i * k;
    for (Index c = 0; c < k; ++c) acc[c] += xv * wr[c];
  }
  for (Index c = 0; c < k; ++c) acc[c] *= inv;
}

inline void moments_column(const double* xp, Index n, Index d, Index j, double& mean,
                           double& stddev) {
  double sum = 0.0;
  for (Index i = 0; i < n; ++i) sum += xp[i * d + j];
  const double m = sum / static_cast<double>(n);
  double ss = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double c = xp[i * d + j] - m;
    ss += c * c;
  }
  mean = m;
  stddev = std::sqrt(ss / static_cast<double>(n));
}

inline void standardize_row(double* row, Index d, const Vector& mean, const Vector& scale,
                            const std::vector<std::uint8_t>& constant_mask) {
  for (Index j = 0; j < d; ++j) {
    row[j] = constant_mask[static_cast<std::size_t>(j)] ? 0.0 : (row[j] - mean[j]) / scale[j];
  }
}

void check_update_shapes(const Matrix& beta, const Matrix& delta, const Matrix& avg) {
  if (delta.rows() != beta.rows() || delta.cols() != beta.cols() || avg.rows() != beta.rows() ||
      avg.cols() != beta.cols()) {
    throw precondition_error("step_and_prox: shape mismatch between beta and gradient terms");
  }
}

}  // namespace

void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void batch_logits(const Matrix& x, std::span<const Index> rows, const Matrix& beta,
                  const Vector& beta0, Matrix& out) {
  const Index d = x.cols();
  const Index k = beta.cols();
  const Index nb = static_cast<Index>(rows.size());
  out.resize(nb, k);
  const double* xp = x.data();
#pragma omp parallel for schedule(static)
  for (Index r = 0; r < nb; ++r) {
    logits_row(xp + rows[static_cast<std::size_t>(r)] * d, d, beta, beta0, out.data() + r * k);
  }
}

void logits(const Matrix& x, const Matrix& beta, const Vector& beta0, Matrix& out) {
  const Index n = x.rows();
  const Index d = x.cols();
  const Index k = beta.cols();
  out.resize(n, k);
  const double* xp = x.data();
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    logits_row(xp + i * d, d, beta, beta0, out.data() + i * k);
  }
}

void batch_feature_outer(const Matrix& x, std::span<const Index> rows, const Matrix& w,
                         Matrix& out) {
  if (rows.empty()) throw precondition_error("batch_feature_outer: empty batch");
  const Index d = x.cols();
  const Index k = w.cols();
  out.resize(d, k);
  const double inv = 1.0 / static_cast<double>(rows.size());
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < d; ++j) {
    accumulate_feature(x.data(), d, w.data(), k, j, rows, inv, out.data() + j * k);
  }
}

void feature_outer(const Matrix& x, const Matrix& w, Matrix& out) {
  const Index n = x.rows();
  const Index d = x.cols();
  const Index k = w.cols();
  out.resize(d, k);
  const double inv = 1.0 / static_cast<double>(n);
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < d; ++j) {
    accumulate_feature_full(x.data(), n, d, w.data(), k, j, inv, out.data() + j * k);
  }
}

void step_and_prox(Matrix& beta, const Matrix& delta, const Matrix& avg, double gamma,
                   double lam1, double lam2) {
  check_update_shapes(beta, delta, avg);
  const Index total = beta.size();
  double* b = beta.data();
  const double* dl = delta.data();
  const double* av = avg.data();
#pragma omp parallel for schedule(static)
  for (Index t = 0; t < total; ++t) {
    b[t] = prox_elastic_net(b[t] - gamma * (dl[t] + av[t]), lam1, lam2);
  }
}

void column_moments(const Matrix& x, Vector& mean, Vector& stddev) {
  const Index n = x.rows();
  const Index d = x.cols();
  mean.resize(d);
  stddev.resize(d);
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < d; ++j) {
    moments_column(x.data(), n, d, j, mean[j], stddev[j]);
  }
}

void standardize_columns(Matrix& x, const Vector& mean, const Vector& scale,
                         const std::vector<std::uint8_t>& constant_mask) {
  const Index n = x.rows();
  const Index d = x.cols();
  if (mean.size() != d || scale.size() != d || static_cast<Index>(constant_mask.size()) != d) {
    throw precondition_error("standardize_columns: statistics do not match matrix width");
  }
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    standardize_row(x.data() + i * d, d, mean, scale, constant_mask);
  }
}

namespace ref {

void batch_logits(const Matrix& x, std::span<const Index> rows, const Matrix& beta,
                  const Vector& beta0, Matrix& out) {
  const Index d = x.cols();
  const Index k = beta.cols();
  const Index nb = static_cast<Index>(rows.size());
  out.resize(nb, k);
  for (Index r = 0; r < nb; ++r) {
    logits_row(x.data() + rows[static_cast<std::size_t>(r)] * d, d, beta, beta0,
               out.data() + r * k);
  }
}

void logits(const Matrix& x, const Matrix& beta, const Vector& beta0, Matrix& out) {
  const Index n = x.rows();
  const Index k = beta.cols();
  out.resize(n, k);
  for (Index i = 0; i < n; ++i) {
    logits_row(x.data() + i * x.cols(), x.cols(), beta, beta0, out.data() + i * k);
  }
}

void batch_feature_outer(const Matrix& x, std::span<const Index> rows, const Matrix& w,
                         Matrix& out) {
  if (rows.empty()) throw precondition_error("batch_feature_outer: empty batch");
  const Index d = x.cols();
  const Index k = w.cols();
  out.resize(d, k);
  const double inv = 1.0 / static_cast<double>(rows.size());
  for (Index j = 0; j < d; ++j) {
    accumulate_feature(x.data(), d, w.data(), k, j, rows, inv, out.data() + j * k);
  }
}

void feature_outer(const Matrix& x, const Matrix& w, Matrix& out) {
  const Index n = x.rows();
  const Index d = x.cols();
  const Index k = w.cols();
  out.resize(d, k);
  const double inv = 1.0 / static_cast<double>(n);
  for (Index j = 0; j < d; ++j) {
    accumulate_feature_full(x.data(), n, d, w.data(), k, j, inv, out.data() + j * k);
  }
}

void step_and_prox(Matrix& beta, const Matrix& delta, const Matrix& avg, double gamma,
                   double lam1, double lam2) {
  check_update_shapes(beta, delta, avg);
  double* b = beta.data();
  const double* dl = delta.data();
  const double* av = avg.data();
  for (Index t = 0; t < beta.size(); ++t) {
    b[t] = prox_elastic_net(b[t] - gamma * (dl[t] + av[t]), lam1, lam2);
  }
}

void column_moments(const Matrix& x, Vector& mean, Vector& stddev) {
  mean.resize(x.cols());
  stddev.resize(x.cols());
  for (Index j = 0; j < x.cols(); ++j) {
    moments_column(x.data(), x.rows(), x.cols(), j, mean[j], stddev[j]);
  }
}

void standardize_columns(Matrix& x, const Vector& mean, const Vector& scale,
                         const std::vector<std::uint8_t>& constant_mask) {
  const Index d = x.cols();
  if (mean.size() != d || scale.size() != d || static_cast<Index>(constant_mask.size()) != d) {
    throw precondition_error("standardize_columns: statistics do not match matrix width");
  }
  for (Index i = 0; i < x.rows(); ++i) {
    standardize_row(x.data() + i * d, d, mean, scale, constant_mask);
  }
}

}  // namespace ref

}  // namespace glmpath::kernels
