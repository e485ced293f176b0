#include "fgc/rand.hpp"

#include <algorithm>
#include <cmath>

#include "fgc/errors.hpp"
#include "fgc/hash.hpp"

namespace fgc {

uint64_t splitmix64_next(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

inline uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(uint64_t seed) {
  // Expand the seed through splitmix64; this also rescues seed = 0,
  // which would be a fixed point of the raw xoshiro state.
  uint64_t sm = seed;
  for (auto& word : s_) word = splitmix64_next(sm);
}

uint64_t Rng::next_u64() {
  const uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

uint64_t Rng::next_below(uint64_t bound) {
  if (bound == 0) throw ValidationError("next_below: bound must be positive");
  const uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

double Rng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  for (;;) {
    const double u = 2.0 * next_unit() - 1.0;
    const double v = 2.0 * next_unit() - 1.0;
    const double s = u * u + v * v;
    if (s >= 1.0 || s == 0.0) continue;
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }
}

bool Rng::next_bernoulli(double p) { return next_unit() < p; }

std::vector<size_t> Rng::sample_without_replacement(size_t n, size_t count) {
  if (count > n) throw ValidationError("sample_without_replacement: count > n");
  std::vector<size_t> pool(n);
  for (size_t i = 0; i < n; ++i) pool[i] = i;
  for (size_t i = 0; i < count; ++i) {
    const size_t j = i + static_cast<size_t>(next_below(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::vector<size_t> Rng::sample_with_replacement(size_t n, size_t count) {
  if (n == 0) throw ValidationError("sample_with_replacement: empty population");
  std::vector<size_t> out(count);
  for (auto& v : out) v = static_cast<size_t>(next_below(n));
  return out;
}

uint64_t derive_seed(uint64_t master, std::string_view purpose, uint64_t index) {
  uint64_t state = master ^ rotl(fnv1a64(purpose), 23);
  splitmix64_next(state);
  state ^= 0x6a09e667f3bcc909ULL + index * 0x9e3779b97f4a7c15ULL;
  return splitmix64_next(state);
}

}  // namespace fgc
