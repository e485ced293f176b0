#pragma once

#include <cstdint>
#include <vector>

#include "fgc/dataset.hpp"
#include "fgc/distance_matrix.hpp"

namespace fgc {

struct KMedoidsConfig {
  int k = 2;
  std::size_t max_iter = 100;  // swap-phase sweep cap
  enum class Variant { pam_naive, pam_fast };
  Variant variant = Variant::pam_fast;
  enum class Init { greedy, random };
  Init init = Init::greedy;
  std::uint64_t seed = 0;
};

struct ClusteringResult {
  int k = 0;
  std::vector<std::size_t> medoids;  // sorted ascending
  Partition assignments;             // cluster j = medoids[j]'s cluster
  double inertia = 0.0;
  std::size_t iterations_used = 0;  // swap sweeps executed
  bool converged = false;
};

// Nearest-medoid assignment from a rectangular block of distances
// (block[i * medoids.size() + j] = d(i, medoids[j])). A medoid always joins
// its own cluster; other ties go to the lowest medoid position.
struct AssignResult {
  Partition partition;
  double inertia = 0.0;
};
AssignResult assign_to_medoids(const std::vector<float>& block, std::size_t n,
                               const std::vector<std::size_t>& medoids);

// PAM: greedy BUILD (or seeded random) initialization, then swap descent.
// pam_naive applies the single best swap per sweep; pam_fast greedily
// applies any improving swap as it scans. Both stop at a swap-local optimum
// or after max_iter sweeps.
ClusteringResult pam(const DistanceMatrix& distances, const KMedoidsConfig& config);

struct ClaraConfig {
  std::size_t iterations = 5;      // T
  std::size_t subsample_size = 0;  // 0 = min(n, 40 + 2k^2)
  KMedoidsConfig inner;
  std::uint64_t seed = 0;
};

// CLARA: PAM on T random subsamples, every sample assigned to the winning
// iteration's medoids (lowest full-dataset inertia, ties to the earliest
// iteration). Subsample indices are kept sorted, so subsample_size == n
// reproduces plain PAM exactly.
ClusteringResult clara(const LeafMatrix& leaf, const ClaraConfig& config);

}  // namespace fgc
