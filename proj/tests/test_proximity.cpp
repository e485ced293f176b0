#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "fgc/distance_matrix.hpp"
#include "fgc/errors.hpp"
#include "fgc/leaf_matrix.hpp"
#include "fgc/rand.hpp"

using namespace fgc;

namespace {

LeafMatrix leaves_from_rows(std::vector<std::vector<int32_t>> rows) {
  LeafMatrix leaf;
  leaf.n = rows.size();
  leaf.n_trees = rows[0].size();
  for (const auto& row : rows) {
    leaf.leaf_ids.insert(leaf.leaf_ids.end(), row.begin(), row.end());
  }
  return leaf;
}

LeafMatrix random_leaves(size_t n, size_t n_trees, int32_t leaf_span, uint64_t seed) {
  LeafMatrix leaf;
  leaf.n = n;
  leaf.n_trees = n_trees;
  leaf.leaf_ids.resize(n * n_trees);
  Rng rng(seed);
  for (auto& id : leaf.leaf_ids) {
    id = static_cast<int32_t>(rng.next_below(static_cast<uint64_t>(leaf_span)));
  }
  return leaf;
}

size_t shared_leaf_count(const LeafMatrix& leaf, size_t i, size_t j) {
  size_t m = 0;
  for (size_t t = 0; t < leaf.n_trees; t++) {
    m += leaf.row(i)[t] == leaf.row(j)[t];
  }
  return m;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

struct FileCleanup {
  std::string path;
  ~FileCleanup() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("proximity counts shared terminal nodes per tree") {
  LeafMatrix leaf = leaves_from_rows({{4, 7}, {4, 9}});
  CHECK(proximity(leaf, 0, 0) == 1.0);
  CHECK(proximity(leaf, 1, 1) == 1.0);
  // the pair lands together in one of the two trees
  CHECK(proximity(leaf, 0, 1) == 0.5);
  CHECK(proximity(leaf, 1, 0) == 0.5);
}

TEST_CASE("proximity matches a direct per-tree count") {
  LeafMatrix leaf = random_leaves(5, 4, 3, 41);
  for (size_t i = 0; i < leaf.n; i++) {
    for (size_t j = 0; j < leaf.n; j++) {
      double expected = static_cast<double>(shared_leaf_count(leaf, i, j)) /
                        static_cast<double>(leaf.n_trees);
      CHECK(proximity(leaf, i, j) == expected);
    }
  }
  CHECK_THROWS_AS(proximity(leaf, 0, 5), ValidationError);
}

TEST_CASE("identical samples give an all-zero distance matrix") {
  LeafMatrix leaf = leaves_from_rows({{1, 2, 3}, {1, 2, 3}, {1, 2, 3}});
  DistanceMatrix dm = DistanceMatrix::dense_from_leaves(leaf);
  for (size_t i = 0; i < 3; i++) {
    for (size_t j = 0; j < 3; j++) CHECK(dm.at(i, j) == 0.0f);
  }
}

TEST_CASE("samples that never share a leaf are at distance one") {
  LeafMatrix leaf = leaves_from_rows({{0, 0}, {1, 1}, {2, 2}});
  DistanceMatrix dm = DistanceMatrix::dense_from_leaves(leaf);
  for (size_t i = 0; i < 3; i++) {
    for (size_t j = 0; j < 3; j++) {
      CHECK(dm.at(i, j) == (i == j ? 0.0f : 1.0f));
    }
  }
}

TEST_CASE("dense entries equal the single-precision complement of proximity") {
  LeafMatrix leaf = random_leaves(40, 7, 3, 43);
  DistanceMatrix dm = DistanceMatrix::dense_from_leaves(leaf);
  for (size_t i = 0; i < leaf.n; i++) {
    for (size_t j = 0; j < leaf.n; j++) {
      float expected = 1.0f - static_cast<float>(shared_leaf_count(leaf, i, j)) /
                                  static_cast<float>(leaf.n_trees);
      CHECK(dm.at(i, j) == expected);
    }
  }
}

TEST_CASE("distance matrix is symmetric with a zero diagonal") {
  LeafMatrix leaf = random_leaves(60, 11, 4, 47);
  DistanceMatrix dm = DistanceMatrix::dense_from_leaves(leaf, 2);
  for (size_t i = 0; i < leaf.n; i++) {
    CHECK(dm.at(i, i) == 0.0f);
    for (size_t j = i + 1; j < leaf.n; j++) {
      float d = dm.at(i, j);
      CHECK(d >= 0.0f);
      CHECK(d <= 1.0f);
      CHECK(d == dm.at(j, i));
    }
  }
}

TEST_CASE("memmap and dense builds store identical bytes") {
  LeafMatrix leaf = random_leaves(100, 13, 5, 53);
  DistanceMatrix dense = DistanceMatrix::dense_from_leaves(leaf);

  FileCleanup file{temp_path("fgc_test_prox_eq.bin")};
  // a tiny budget forces several write blocks
  DistanceMatrix mapped =
      DistanceMatrix::memmap_from_leaves(leaf, file.path, 1, 8 * 1024);
  REQUIRE(mapped.backend() == DistanceMatrix::Backend::memmap);
  REQUIRE(mapped.size() == dense.size());
  for (size_t i = 0; i < leaf.n; i++) {
    CHECK(std::memcmp(dense.row(i), mapped.row(i), leaf.n * sizeof(float)) == 0);
  }
}

TEST_CASE("a written matrix reopens with the same contents") {
  LeafMatrix leaf = random_leaves(30, 9, 3, 59);
  FileCleanup file{temp_path("fgc_test_prox_reopen.bin")};
  {
    DistanceMatrix built = DistanceMatrix::memmap_from_leaves(leaf, file.path);
    CHECK(built.path() == file.path);
  }
  DistanceMatrix reopened = DistanceMatrix::open(file.path);
  DistanceMatrix dense = DistanceMatrix::dense_from_leaves(leaf);
  REQUIRE(reopened.size() == 30);
  for (size_t i = 0; i < leaf.n; i++) {
    CHECK(std::memcmp(dense.row(i), reopened.row(i), leaf.n * sizeof(float)) == 0);
  }
}

TEST_CASE("target-column distances match the full matrix") {
  LeafMatrix leaf = random_leaves(200, 15, 6, 61);
  DistanceMatrix dense = DistanceMatrix::dense_from_leaves(leaf);
  std::vector<size_t> targets = {0, 57, 199};
  std::vector<float> block = distance_to_points(leaf, targets);
  REQUIRE(block.size() == leaf.n * targets.size());
  for (size_t i = 0; i < leaf.n; i++) {
    for (size_t t = 0; t < targets.size(); t++) {
      CHECK(block[i * targets.size() + t] == dense.at(i, targets[t]));
    }
  }
}

TEST_CASE("submatrix copies the selected entries in order") {
  LeafMatrix leaf = random_leaves(25, 6, 3, 67);
  DistanceMatrix dense = DistanceMatrix::dense_from_leaves(leaf);
  std::vector<size_t> pick = {20, 3, 3, 11};
  DistanceMatrix sub = dense.submatrix(pick);
  REQUIRE(sub.size() == pick.size());
  for (size_t a = 0; a < pick.size(); a++) {
    for (size_t b = 0; b < pick.size(); b++) {
      CHECK(sub.at(a, b) == dense.at(pick[a], pick[b]));
    }
  }
  CHECK_THROWS_AS(dense.submatrix({25}), ValidationError);
}

TEST_CASE("matrix files carry a verifiable header and checksum") {
  LeafMatrix leaf = random_leaves(17, 5, 3, 71);
  FileCleanup first{temp_path("fgc_test_prox_info_a.bin")};
  FileCleanup second{temp_path("fgc_test_prox_info_b.bin")};
  DistanceMatrix::memmap_from_leaves(leaf, first.path);
  DistanceMatrix::memmap_from_leaves(leaf, second.path);

  MatrixFileInfo info = inspect_matrix_file(first.path);
  CHECK(info.magic_ok);
  CHECK(info.version == DistanceMatrix::kFormatVersion);
  CHECK(info.n == 17);
  CHECK(info.expected_size == DistanceMatrix::kHeaderBytes + 4ull * 17 * 17);
  CHECK(info.file_size == info.expected_size);
  // same leaves, same bytes, same digest
  CHECK(inspect_matrix_file(second.path).checksum == info.checksum);

  LeafMatrix other = random_leaves(17, 5, 3, 72);
  FileCleanup third{temp_path("fgc_test_prox_info_c.bin")};
  DistanceMatrix::memmap_from_leaves(other, third.path);
  CHECK(inspect_matrix_file(third.path).checksum != info.checksum);
}

TEST_CASE("corrupt or missing matrix files are refused") {
  CHECK_THROWS_AS(DistanceMatrix::open(temp_path("fgc_test_prox_absent.bin")), IoError);
  CHECK_THROWS_AS(inspect_matrix_file(temp_path("fgc_test_prox_absent.bin")), IoError);

  FileCleanup bad{temp_path("fgc_test_prox_bad.bin")};
  {
    FILE* f = std::fopen(bad.path.c_str(), "wb");
    REQUIRE(f != nullptr);
    std::fputs("XXXX not a matrix", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(DistanceMatrix::open(bad.path), ValidationError);
  CHECK_FALSE(inspect_matrix_file(bad.path).magic_ok);

  // valid header, truncated payload
  LeafMatrix leaf = random_leaves(10, 4, 3, 73);
  FileCleanup cut{temp_path("fgc_test_prox_cut.bin")};
  DistanceMatrix::memmap_from_leaves(leaf, cut.path);
  std::filesystem::resize_file(cut.path, DistanceMatrix::kHeaderBytes + 12);
  CHECK_THROWS_AS(DistanceMatrix::open(cut.path), ValidationError);
  MatrixFileInfo info = inspect_matrix_file(cut.path);
  CHECK(info.magic_ok);
  CHECK(info.file_size != info.expected_size);
}

TEST_CASE("unwritable output paths raise io errors") {
  LeafMatrix leaf = random_leaves(4, 3, 2, 79);
  CHECK_THROWS_AS(
      DistanceMatrix::memmap_from_leaves(leaf, "/nonexistent-dir/matrix.bin"),
      IoError);
}
