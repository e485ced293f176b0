#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace fgc {

// One splitmix64 step; also used as the mixing function for seed derivation.
uint64_t splitmix64_next(uint64_t& state);

// xoshiro256** stream generator. The algorithm is fixed so that identical
// seeds produce identical streams on every platform; std::mt19937 etc. are
// avoided because distribution adapters are implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t next_u64();

  // Uniform in [0, bound) without modulo bias (rejection sampling).
  uint64_t next_below(uint64_t bound);

  // Uniform in [0, 1) with 53 random bits.
  double next_unit();

  // Standard normal via the Marsaglia polar method (sqrt/log only, no
  // trig, to keep cross-platform drift out of the stream).
  double next_normal();

  bool next_bernoulli(double p);

  // `count` distinct indices from [0, n), returned sorted ascending.
  std::vector<size_t> sample_without_replacement(size_t n, size_t count);

  // `count` indices from [0, n) drawn independently (with replacement).
  std::vector<size_t> sample_with_replacement(size_t n, size_t count);

 private:
  uint64_t s_[4];
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Child seed for a named sub-computation. All stochastic stages derive
// their seeds as derive_seed(master, purpose_tag, index) so that stages
// are independent and insensitive to each other's draw counts.
uint64_t derive_seed(uint64_t master, std::string_view purpose, uint64_t index);

}  // namespace fgc
