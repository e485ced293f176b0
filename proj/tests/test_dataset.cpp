#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "fgc/dataset.hpp"
#include "fgc/errors.hpp"
#include "fgc/rand.hpp"

using namespace fgc;

namespace {

Dataset numeric_dataset(std::vector<std::vector<double>> columns) {
  Dataset ds;
  ds.row_count = columns.empty() ? 0 : columns[0].size();
  for (size_t i = 0; i < columns.size(); i++) {
    FeatureColumn col;
    col.name = "f" + std::to_string(i + 1);
    col.kind = FeatureKind::numeric;
    col.numeric = std::move(columns[i]);
    ds.columns.push_back(std::move(col));
  }
  ds.target.kind = TargetKind::classification;
  ds.target.classes = {"a", "b"};
  ds.target.labels.assign(ds.row_count, 0);
  if (ds.row_count > 1) ds.target.labels.back() = 1;
  return ds;
}

Partition partition_of(std::vector<int32_t> ids, int32_t k) {
  Partition p;
  p.assignments = std::move(ids);
  p.k = k;
  return p;
}

// Pair-counting ARI oracle: classify all sample pairs as together/apart in
// each partition and apply the chance-corrected agreement formula directly.
double ari_pairs(const Partition& a, const Partition& b) {
  size_t n = a.assignments.size();
  double n11 = 0, n00 = 0, n10 = 0, n01 = 0;
  for (size_t i = 0; i < n; i++) {
    for (size_t j = i + 1; j < n; j++) {
      bool sa = a.assignments[i] == a.assignments[j];
      bool sb = b.assignments[i] == b.assignments[j];
      if (sa && sb) n11++;
      else if (!sa && !sb) n00++;
      else if (sa) n10++;
      else n01++;
    }
  }
  double denom = (n11 + n10) * (n10 + n00) + (n11 + n01) * (n01 + n00);
  if (denom == 0.0) return n10 + n01 == 0 ? 1.0 : 0.0;
  return 2.0 * (n11 * n00 - n10 * n01) / denom;
}

}  // namespace

TEST_CASE("standardize maps {1,2,3} to the exact population z-scores") {
  Dataset ds = numeric_dataset({{1.0, 2.0, 3.0}});
  StandardizeResult st = standardize(ds);
  REQUIRE(st.stats.size() == 1);
  CHECK(st.stats[0].mean == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(st.stats[0].stddev == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-15));
  CHECK_FALSE(st.stats[0].constant);
  const auto& vals = st.data.columns[0].numeric;
  CHECK(vals[0] == doctest::Approx(-1.224744871391589).epsilon(1e-12));
  CHECK(vals[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(vals[2] == doctest::Approx(1.224744871391589).epsilon(1e-12));
}

TEST_CASE("standardize is idempotent and normalizes random columns") {
  Rng rng(11);
  std::vector<double> col(500);
  for (double& v : col) v = 3.0 + 2.5 * rng.next_normal();
  Dataset ds = numeric_dataset({col});
  StandardizeResult once = standardize(ds);

  const auto& v1 = once.data.columns[0].numeric;
  double mean = 0.0;
  for (double v : v1) mean += v;
  mean /= static_cast<double>(v1.size());
  double var = 0.0;
  for (double v : v1) var += (v - mean) * (v - mean);
  var /= static_cast<double>(v1.size());
  CHECK(std::abs(mean) < 1e-10);
  CHECK(std::abs(std::sqrt(var) - 1.0) < 1e-10);

  StandardizeResult twice = standardize(once.data);
  for (size_t i = 0; i < v1.size(); i++) {
    CHECK(twice.data.columns[0].numeric[i] == doctest::Approx(v1[i]).epsilon(1e-12));
  }
}

TEST_CASE("standardize flags constant columns and zeroes them") {
  Dataset ds = numeric_dataset({{5.0, 5.0, 5.0}, {1.0, 2.0, 3.0}});
  StandardizeResult st = standardize(ds);
  CHECK(st.stats[0].constant);
  CHECK_FALSE(st.stats[1].constant);
  for (double v : st.data.columns[0].numeric) CHECK(v == 0.0);
}

TEST_CASE("standardize leaves categorical columns untouched") {
  Dataset ds = numeric_dataset({{1.0, 2.0, 3.0}});
  FeatureColumn cat;
  cat.name = "c";
  cat.kind = FeatureKind::categorical;
  cat.categories = {"x", "y"};
  cat.codes = {0, 1, 0};
  ds.columns.push_back(cat);
  StandardizeResult st = standardize(ds);
  REQUIRE(st.stats.size() == 1);  // stats only for numeric columns
  CHECK(st.data.columns[1].codes == cat.codes);
}

TEST_CASE("adjusted rand index endpoints") {
  Partition a = partition_of({0, 0, 1, 1, 2, 2}, 3);
  CHECK(adjusted_rand_index(a, a) == doctest::Approx(1.0).epsilon(1e-15));

  Partition singletons = partition_of({0, 1, 2, 3}, 4);
  Partition lump = partition_of({0, 0, 0, 0}, 1);
  CHECK(adjusted_rand_index(singletons, lump) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
}

TEST_CASE("adjusted rand index matches the pair-counting oracle") {
  Partition a = partition_of({0, 0, 1, 1}, 2);
  Partition b = partition_of({0, 1, 1, 1}, 2);
  double oracle = ari_pairs(a, b);
  CHECK(adjusted_rand_index(a, b) == doctest::Approx(oracle).epsilon(1e-12));
  // For this fixture the chance-corrected agreement is exactly zero.
  CHECK(adjusted_rand_index(a, b) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

  Rng rng(17);
  for (int trial = 0; trial < 25; trial++) {
    size_t n = 5 + rng.next_below(20);
    int32_t ka = 2 + static_cast<int32_t>(rng.next_below(3));
    int32_t kb = 2 + static_cast<int32_t>(rng.next_below(3));
    std::vector<int32_t> va(n), vb(n);
    // Force every cluster id to appear so the partitions validate.
    for (size_t i = 0; i < n; i++) {
      va[i] = i < static_cast<size_t>(ka) ? static_cast<int32_t>(i)
                                          : static_cast<int32_t>(rng.next_below(ka));
      vb[i] = i < static_cast<size_t>(kb) ? static_cast<int32_t>(i)
                                          : static_cast<int32_t>(rng.next_below(kb));
    }
    Partition pa = partition_of(va, ka), pb = partition_of(vb, kb);
    double expect = ari_pairs(pa, pb);
    CHECK(adjusted_rand_index(pa, pb) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(adjusted_rand_index(pa, pb) ==
          doctest::Approx(adjusted_rand_index(pb, pa)).epsilon(1e-15));
  }
}

TEST_CASE("adjusted rand index ignores cluster relabeling") {
  Partition a = partition_of({0, 0, 1, 1, 2, 2, 2}, 3);
  Partition b = partition_of({2, 2, 0, 0, 1, 1, 1}, 3);  // same grouping, renamed
  CHECK(adjusted_rand_index(a, b) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("adjusted rand index rejects length mismatches") {
  Partition a = partition_of({0, 1}, 2);
  Partition b = partition_of({0, 1, 0}, 2);
  CHECK_THROWS_AS(adjusted_rand_index(a, b), ValidationError);
}

TEST_CASE("partition validation rejects gaps and range breaks") {
  CHECK_NOTHROW(partition_of({0, 1, 0}, 2).validate());
  CHECK_THROWS_AS(partition_of({0, 2, 0}, 3).validate(), ValidationError);  // cluster 1 empty
  CHECK_THROWS_AS(partition_of({0, 3, 0}, 3).validate(), ValidationError);  // out of range
  CHECK_THROWS_AS(partition_of({-1, 0, 1}, 2).validate(), ValidationError);
}

TEST_CASE("dataset validation rejects duplicate names and ragged columns") {
  Dataset ds = numeric_dataset({{1.0, 2.0}, {3.0, 4.0}});
  CHECK_NOTHROW(ds.validate());

  Dataset dup = ds;
  dup.columns[1].name = dup.columns[0].name;
  CHECK_THROWS_AS(dup.validate(), ValidationError);

  Dataset ragged = ds;
  ragged.columns[1].numeric.pop_back();
  CHECK_THROWS_AS(ragged.validate(), ValidationError);
}

TEST_CASE("dataset column lookup by name") {
  Dataset ds = numeric_dataset({{1.0}, {2.0}});
  CHECK(ds.column_index("f2") == 1);
  CHECK(ds.column_index("missing") == -1);
  CHECK(ds.column("f1").numeric[0] == 1.0);
  CHECK_THROWS_AS(ds.column("missing"), ValidationError);
}
