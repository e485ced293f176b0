#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fgc/errors.hpp"

namespace fgc {

// Terminal-node ids per (sample, tree), row-major by sample. The proximity
// of two samples is the fraction of trees in which their ids match.
struct LeafMatrix {
  std::size_t n = 0;        // samples
  std::size_t n_trees = 0;  // trees
  std::vector<std::int32_t> leaf_ids;

  const std::int32_t* row(std::size_t i) const { return leaf_ids.data() + i * n_trees; }

  void validate() const {
    if (n == 0 || n_trees == 0) throw ValidationError("leaf matrix is empty");
    if (leaf_ids.size() != n * n_trees) {
      throw InternalError("leaf matrix storage does not match its dimensions");
    }
  }
};

}  // namespace fgc
