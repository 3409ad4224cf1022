#pragma once

#include "glmpath/types.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace glmpath {

// mt19937_64 with hand-rolled draws. std::shuffle / uniform_int_distribution
// are implementation-defined, and reruns must be byte-identical everywhere,
// so we take the modulo bias (negligible for our sizes) in exchange for a
// stable stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  Index uniform_index(Index n) {
    return static_cast<Index>(next() % static_cast<std::uint64_t>(n));
  }

  // Fisher-Yates with our own index draws
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(next() % i);
      std::swap(v[i - 1], v[j]);
    }
  }

  std::vector<Index> permutation(Index n) {
    std::vector<Index> p(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
    shuffle(p);
    return p;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace glmpath
