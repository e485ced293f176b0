#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fgc/leaf_matrix.hpp"

namespace fgc {

// Proximity of samples i and j: shared-leaf count over tree count, in [0,1].
double proximity(const LeafMatrix& leaf, std::size_t i, std::size_t j);

// Symmetric float32 matrix of 1 - proximity. Either fully in memory or
// memory-mapped from a file written as: 4-byte magic "FGDM", u32 version,
// u64 sample count (little-endian), then n*n row-major float32 entries.
// Both backends compute entries with identical float arithmetic, so the
// stored bytes never depend on the backend (or on the thread count: each
// entry is a pure function of its leaf rows and is written exactly once).
class DistanceMatrix {
 public:
  enum class Backend { dense, memmap };

  static constexpr std::size_t kHeaderBytes = 16;
  static constexpr std::uint32_t kFormatVersion = 1;
  static constexpr std::size_t kDefaultRamBudget = 256ull * 1024 * 1024;

  DistanceMatrix() = default;
  DistanceMatrix(const DistanceMatrix&) = delete;
  DistanceMatrix& operator=(const DistanceMatrix&) = delete;
  DistanceMatrix(DistanceMatrix&& other) noexcept;
  DistanceMatrix& operator=(DistanceMatrix&& other) noexcept;
  ~DistanceMatrix();

  static DistanceMatrix dense_from_leaves(const LeafMatrix& leaf, unsigned threads = 1);
  // Writes the file in row blocks sized to ram_budget_bytes, holding an
  // advisory lock; on any failure the partial file is unlinked first.
  static DistanceMatrix memmap_from_leaves(const LeafMatrix& leaf,
                                           const std::string& path,
                                           unsigned threads = 1,
                                           std::size_t ram_budget_bytes = kDefaultRamBudget);
  static DistanceMatrix open(const std::string& path);
  // Dense matrix from precomputed values (row-major n*n), e.g. Euclidean.
  static DistanceMatrix from_values(std::size_t n, std::vector<float> values);

  std::size_t size() const { return n_; }
  Backend backend() const { return backend_; }
  const std::string& path() const { return path_; }
  const float* row(std::size_t i) const { return data_ + i * n_; }
  float at(std::size_t i, std::size_t j) const;

  // Dense copy restricted to `indices` (in the given order); entries are the
  // same float values as in the parent matrix.
  DistanceMatrix submatrix(const std::vector<std::size_t>& indices) const;

 private:
  Backend backend_ = Backend::dense;
  std::size_t n_ = 0;
  std::vector<float> dense_;
  const float* data_ = nullptr;
  std::string path_;
  int fd_ = -1;
  void* map_ = nullptr;
  std::size_t map_size_ = 0;

  void reset() noexcept;
};

// Rectangular block of distances to selected target samples without
// materializing the full matrix: result[i * targets.size() + t].
std::vector<float> distance_to_points(const LeafMatrix& leaf,
                                      const std::vector<std::size_t>& targets);

struct MatrixFileInfo {
  bool magic_ok = false;
  std::uint32_t version = 0;
  std::uint64_t n = 0;
  std::uint64_t file_size = 0;
  std::uint64_t expected_size = 0;
  std::uint64_t checksum = 0;  // FNV-1a64 over the whole file
};

MatrixFileInfo inspect_matrix_file(const std::string& path);

}  // namespace fgc
