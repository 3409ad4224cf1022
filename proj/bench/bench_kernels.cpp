// Kernel timings: the OpenMP implementations against their serial references.
// Run with --benchmark_filter=large to see only the big shapes.

#include "glmpath/kernels.hpp"
#include "glmpath/rng.hpp"

#include <benchmark/benchmark.h>

using namespace glmpath;

namespace {

double unit(Rng& rng) {
  return static_cast<double>(rng.next() >> 11) * (2.0 / 9007199254740992.0) - 1.0;
}

Matrix filled(Index n, Index d, Rng& rng) {
  Matrix m(n, d);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) m(i, j) = unit(rng);
  }
  return m;
}

struct Shapes {
  Matrix x, w, beta;
  Vector beta0;
  Matrix out;

  Shapes(Index n, Index d, Index k) {
    Rng rng(42);
    x = filled(n, d, rng);
    w = filled(n, k, rng);
    beta = filled(d, k, rng);
    beta0 = filled(k, 1, rng).col(0);
  }
};

template <void (*Fn)(const Matrix&, const Matrix&, const Vector&, Matrix&)>
void bm_logits(benchmark::State& state) {
  Shapes s(state.range(0), state.range(1), state.range(2));
  s.out.resize(s.x.rows(), s.beta.cols());
  for (auto _ : state) {
    Fn(s.x, s.beta, s.beta0, s.out);
    benchmark::DoNotOptimize(s.out.data());
  }
  state.SetItemsProcessed(state.iterations() * s.x.rows() * s.x.cols() * s.beta.cols());
}

template <void (*Fn)(const Matrix&, const Matrix&, Matrix&)>
void bm_feature_outer(benchmark::State& state) {
  Shapes s(state.range(0), state.range(1), state.range(2));
  s.out.resize(s.x.cols(), s.w.cols());
  for (auto _ : state) {
    Fn(s.x, s.w, s.out);
    benchmark::DoNotOptimize(s.out.data());
  }
  state.SetItemsProcessed(state.iterations() * s.x.rows() * s.x.cols() * s.w.cols());
}

template <void (*Fn)(Matrix&, const Matrix&, const Matrix&, double, double, double)>
void bm_step_and_prox(benchmark::State& state) {
  const Index d = state.range(1), k = state.range(2);
  Rng rng(7);
  const Matrix beta0 = filled(d, k, rng);
  const Matrix delta = filled(d, k, rng);
  const Matrix avg = filled(d, k, rng);
  Matrix beta;
  // the copy is inside the loop for both variants, so it cancels out
  for (auto _ : state) {
    beta = beta0;
    Fn(beta, delta, avg, 0.1, 0.01, 0.001);
    benchmark::DoNotOptimize(beta.data());
  }
  state.SetItemsProcessed(state.iterations() * d * k);
}

template <void (*Fn)(const Matrix&, Vector&, Vector&)>
void bm_column_moments(benchmark::State& state) {
  Shapes s(state.range(0), state.range(1), 1);
  Vector mean, stddev;
  for (auto _ : state) {
    Fn(s.x, mean, stddev);
    benchmark::DoNotOptimize(mean.data());
  }
  state.SetItemsProcessed(state.iterations() * s.x.rows() * s.x.cols());
}

void register_all() {
  const std::vector<std::pair<const char*, std::vector<int64_t>>> shapes = {
      {"small", {4096, 64, 2}},
      {"large", {50000, 256, 10}},
  };
  for (const auto& [tag, args] : shapes) {
    std::string suffix = std::string("/") + tag;
    benchmark::RegisterBenchmark(("logits/omp" + suffix).c_str(),
                                 bm_logits<kernels::logits>)
        ->Args(args);
    benchmark::RegisterBenchmark(("logits/ref" + suffix).c_str(),
                                 bm_logits<kernels::ref::logits>)
        ->Args(args);
    benchmark::RegisterBenchmark(("feature_outer/omp" + suffix).c_str(),
                                 bm_feature_outer<kernels::feature_outer>)
        ->Args(args);
    benchmark::RegisterBenchmark(("feature_outer/ref" + suffix).c_str(),
                                 bm_feature_outer<kernels::ref::feature_outer>)
        ->Args(args);
    benchmark::RegisterBenchmark(("step_and_prox/omp" + suffix).c_str(),
                                 bm_step_and_prox<kernels::step_and_prox>)
        ->Args(args);
    benchmark::RegisterBenchmark(("step_and_prox/ref" + suffix).c_str(),
                                 bm_step_and_prox<kernels::ref::step_and_prox>)
        ->Args(args);
    benchmark::RegisterBenchmark(("column_moments/omp" + suffix).c_str(),
                                 bm_column_moments<kernels::column_moments>)
        ->Args(args);
    benchmark::RegisterBenchmark(("column_moments/ref" + suffix).c_str(),
                                 bm_column_moments<kernels::ref::column_moments>)
        ->Args(args);
  }
}

}  // namespace

int main(int argc, char** argv) {
  register_all();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
