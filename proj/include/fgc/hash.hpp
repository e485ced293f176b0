#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace fgc {

inline constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

// FNV-1a, resumable: feed chunks by passing the previous result as `state`.
inline std::uint64_t fnv1a64(const void* data, std::size_t size,
                             std::uint64_t state = kFnvOffsetBasis) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    state ^= bytes[i];
    state *= kFnvPrime;
  }
  return state;
}

inline std::uint64_t fnv1a64(std::string_view text,
                             std::uint64_t state = kFnvOffsetBasis) {
  return fnv1a64(text.data(), text.size(), state);
}

}  // namespace fgc
