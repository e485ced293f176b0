#include "fgc/kmedoids.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fgc/errors.hpp"
#include "fgc/kernels.hpp"
#include "fgc/rand.hpp"

namespace fgc {

namespace {

// Per-sample nearest / second-nearest medoid bookkeeping for the swap phase.
struct NeighborCache {
  std::vector<int> nearest;  // position in the medoid list
  std::vector<float> dnear;
  std::vector<float> dsecond;
};

// Rebuilds the cache for the given medoids and returns the inertia, summed
// in index order so the value is identical on every code path that uses it.
double rebuild_cache(const DistanceMatrix& d, const std::vector<std::size_t>& medoids,
                     const std::vector<int>& medoid_of, NeighborCache& cache) {
  const std::size_t n = d.size();
  const std::size_t k = medoids.size();
  cache.nearest.resize(n);
  cache.dnear.resize(n);
  cache.dsecond.resize(n);
  double inertia = 0.0;
  const float inf = std::numeric_limits<float>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const float* row = d.row(i);
    int self = medoid_of[i];
    int best_pos = -1;
    float best = inf, second = inf;
    for (std::size_t j = 0; j < k; ++j) {
      float dist = row[medoids[j]];
      if (dist < best) {
        second = best;
        best = dist;
        best_pos = static_cast<int>(j);
      } else if (dist < second) {
        second = dist;
      }
    }
    if (self >= 0) {
      // A medoid stays in its own cluster even when another medoid is at
      // distance zero; its second-best is the best of the others.
      second = inf;
      for (std::size_t j = 0; j < k; ++j) {
        if (static_cast<int>(j) == self) continue;
        second = std::min(second, row[medoids[j]]);
      }
      best_pos = self;
      best = 0.0f;
    }
    cache.nearest[i] = best_pos;
    cache.dnear[i] = best;
    cache.dsecond[i] = second;
    inertia += static_cast<double>(best);
  }
  return inertia;
}

void check_matrix(const DistanceMatrix& d) {
  const std::size_t n = d.size();
  for (std::size_t i = 0; i < n; ++i) {
    const float* row = d.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(row[j])) {
        throw ValidationError("distance matrix has a non-finite entry at (" +
                              std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
}

std::vector<std::size_t> build_greedy(const DistanceMatrix& d, int k) {
  const KernelOps& ops = kernels();
  const std::size_t n = d.size();

  std::size_t first = 0;
  double first_sum = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double s = ops.sum_f32(d.row(i), n);
    if (s < first_sum) {
      first_sum = s;
      first = i;
    }
  }

  std::vector<std::size_t> medoids = {first};
  std::vector<char> is_medoid(n, 0);
  is_medoid[first] = 1;
  std::vector<float> dnear(d.row(first), d.row(first) + n);

  while (medoids.size() < static_cast<std::size_t>(k)) {
    std::size_t best_o = n;
    double best_gain = -1.0;
    for (std::size_t o = 0; o < n; ++o) {
      if (is_medoid[o]) continue;
      double gain = ops.sum_pos_diff_f32(dnear.data(), d.row(o), n);
      if (gain > best_gain) {
        best_gain = gain;
        best_o = o;
      }
    }
    medoids.push_back(best_o);
    is_medoid[best_o] = 1;
    const float* row = d.row(best_o);
    for (std::size_t i = 0; i < n; ++i) dnear[i] = std::min(dnear[i], row[i]);
  }
  return medoids;
}

// ΔTD of replacing medoid position j with candidate o, for every j at once:
// delta[j] = shared + corr[j], where `shared` treats the swapped-out medoid
// as still present and corr[j] repairs the samples whose nearest is j.
void swap_deltas(const DistanceMatrix& d, const NeighborCache& cache, std::size_t o,
                 std::vector<double>& delta) {
  const std::size_t n = d.size();
  const float* row = d.row(o);
  std::fill(delta.begin(), delta.end(), 0.0);
  double shared = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double doi = row[i];
    double dn = cache.dnear[i];
    shared += std::min(doi, dn) - dn;
    double ds = cache.dsecond[i];
    delta[static_cast<std::size_t>(cache.nearest[i])] +=
        std::min(doi, ds) - std::min(doi, dn);
  }
  for (double& v : delta) v += shared;
}

struct SwapState {
  std::vector<std::size_t> medoids;
  std::vector<int> medoid_of;  // sample -> medoid position, -1 otherwise
  NeighborCache cache;
  double inertia = 0.0;
};

// Applies medoids[j] = o if the recomputed inertia genuinely drops; the
// incremental delta is a screen, the recompute is the arbiter, so float
// rounding can never produce an "improvement" loop.
bool try_swap(const DistanceMatrix& d, SwapState& state, std::size_t j, std::size_t o) {
  std::size_t old = state.medoids[j];
  state.medoids[j] = o;
  state.medoid_of[old] = -1;
  state.medoid_of[o] = static_cast<int>(j);
  NeighborCache fresh;
  double new_inertia = rebuild_cache(d, state.medoids, state.medoid_of, fresh);
  if (new_inertia < state.inertia) {
    state.cache = std::move(fresh);
    state.inertia = new_inertia;
    return true;
  }
  state.medoids[j] = old;
  state.medoid_of[old] = static_cast<int>(j);
  state.medoid_of[o] = -1;
  return false;
}

}  // namespace

AssignResult assign_to_medoids(const std::vector<float>& block, std::size_t n,
                               const std::vector<std::size_t>& medoids) {
  const std::size_t k = medoids.size();
  if (k == 0) throw ValidationError("assignment needs at least one medoid");
  if (block.size() != n * k) {
    throw ValidationError("distance block size does not match n x medoid count");
  }

  std::vector<int> medoid_of(n, -1);
  for (std::size_t j = 0; j < k; ++j) {
    if (medoids[j] >= n) throw ValidationError("medoid index out of range");
    medoid_of[medoids[j]] = static_cast<int>(j);
  }

  AssignResult out;
  out.partition.k = static_cast<int>(k);
  out.partition.assignments.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const float* row = block.data() + i * k;
    int best_pos = medoid_of[i];
    if (best_pos < 0) {
      float best = std::numeric_limits<float>::infinity();
      for (std::size_t j = 0; j < k; ++j) {
        if (row[j] < best) {  // strict: ties stay with the lowest position
          best = row[j];
          best_pos = static_cast<int>(j);
        }
      }
    }
    out.partition.assignments[i] = best_pos;
    out.inertia += static_cast<double>(row[best_pos]);
  }
  return out;
}

ClusteringResult pam(const DistanceMatrix& d, const KMedoidsConfig& config) {
  const std::size_t n = d.size();
  if (config.k < 2) throw ValidationError("k must be at least 2");
  if (static_cast<std::size_t>(config.k) >= n) {
    throw ValidationError("k = " + std::to_string(config.k) +
                          " needs more than k samples (n = " + std::to_string(n) + ")");
  }
  if (config.max_iter < 1) throw ValidationError("max_iter must be at least 1");
  check_matrix(d);

  SwapState state;
  if (config.init == KMedoidsConfig::Init::greedy) {
    state.medoids = build_greedy(d, config.k);
  } else {
    Rng rng(derive_seed(config.seed, "pam.random_init", 0));
    state.medoids = rng.sample_without_replacement(n, static_cast<std::size_t>(config.k));
  }
  state.medoid_of.assign(n, -1);
  for (std::size_t j = 0; j < state.medoids.size(); ++j) {
    state.medoid_of[state.medoids[j]] = static_cast<int>(j);
  }
  state.inertia = rebuild_cache(d, state.medoids, state.medoid_of, state.cache);

  const auto k = static_cast<std::size_t>(config.k);
  std::vector<double> delta(k);
  std::size_t sweeps = 0;
  bool converged = false;

  while (sweeps < config.max_iter) {
    ++sweeps;
    bool accepted_any = false;

    if (config.variant == KMedoidsConfig::Variant::pam_fast) {
      for (std::size_t o = 0; o < n; ++o) {
        if (state.medoid_of[o] >= 0) continue;
        swap_deltas(d, state.cache, o, delta);
        std::size_t best_j = 0;
        for (std::size_t j = 1; j < k; ++j) {
          if (delta[j] < delta[best_j]) best_j = j;
        }
        if (delta[best_j] < 0.0 && try_swap(d, state, best_j, o)) accepted_any = true;
      }
    } else {
      double best_delta = 0.0;
      std::size_t best_o = n, best_j = k;
      for (std::size_t o = 0; o < n; ++o) {
        if (state.medoid_of[o] >= 0) continue;
        swap_deltas(d, state.cache, o, delta);
        for (std::size_t j = 0; j < k; ++j) {
          if (delta[j] < best_delta) {  // strict: ties keep lowest (o, j)
            best_delta = delta[j];
            best_o = o;
            best_j = j;
          }
        }
      }
      if (best_o < n && try_swap(d, state, best_j, best_o)) accepted_any = true;
    }

    if (!accepted_any) {
      converged = true;
      break;
    }
  }

  // Canonical output order: medoids ascending, assignments recomputed.
  std::sort(state.medoids.begin(), state.medoids.end());
  std::fill(state.medoid_of.begin(), state.medoid_of.end(), -1);
  for (std::size_t j = 0; j < state.medoids.size(); ++j) {
    state.medoid_of[state.medoids[j]] = static_cast<int>(j);
  }
  ClusteringResult result;
  result.inertia = rebuild_cache(d, state.medoids, state.medoid_of, state.cache);
  result.k = config.k;
  result.medoids = state.medoids;
  result.assignments.k = config.k;
  result.assignments.assignments.assign(state.cache.nearest.begin(),
                                        state.cache.nearest.end());
  result.iterations_used = sweeps;
  result.converged = converged;
  result.assignments.validate();
  return result;
}

ClusteringResult clara(const LeafMatrix& leaf, const ClaraConfig& config) {
  leaf.validate();
  const std::size_t n = leaf.n;
  const int k = config.inner.k;
  if (config.iterations < 1) throw ValidationError("clara needs at least one iteration");
  if (k < 2) throw ValidationError("k must be at least 2");

  std::size_t s = config.subsample_size;
  if (s == 0) {
    s = std::min<std::size_t>(n, 40 + 2 * static_cast<std::size_t>(k) *
                                          static_cast<std::size_t>(k));
  }
  if (s > n) throw ValidationError("clara subsample exceeds the dataset size");
  if (s <= static_cast<std::size_t>(k)) {
    throw ValidationError("clara subsample must be larger than k");
  }

  ClusteringResult best;
  double best_inertia = std::numeric_limits<double>::infinity();

  for (std::size_t t = 0; t < config.iterations; ++t) {
    Rng rng(derive_seed(config.seed, "clara.iter", t));
    std::vector<std::size_t> idx = rng.sample_without_replacement(n, s);

    LeafMatrix sub;
    sub.n = s;
    sub.n_trees = leaf.n_trees;
    sub.leaf_ids.resize(s * leaf.n_trees);
    for (std::size_t a = 0; a < s; ++a) {
      const std::int32_t* src = leaf.row(idx[a]);
      std::copy(src, src + leaf.n_trees, sub.leaf_ids.begin() + a * leaf.n_trees);
    }

    DistanceMatrix sub_d = DistanceMatrix::dense_from_leaves(sub);
    KMedoidsConfig inner = config.inner;
    inner.seed = derive_seed(config.seed, "clara.pam", t);
    ClusteringResult local = pam(sub_d, inner);

    std::vector<std::size_t> medoids(local.medoids.size());
    for (std::size_t j = 0; j < medoids.size(); ++j) medoids[j] = idx[local.medoids[j]];

    std::vector<float> block = distance_to_points(leaf, medoids);
    AssignResult assigned = assign_to_medoids(block, n, medoids);

    if (assigned.inertia < best_inertia) {
      best_inertia = assigned.inertia;
      best.k = k;
      best.medoids = std::move(medoids);
      best.assignments = std::move(assigned.partition);
      best.inertia = assigned.inertia;
      best.iterations_used = local.iterations_used;
      best.converged = local.converged;
    }
  }

  best.assignments.validate();
  return best;
}

}  // namespace fgc
