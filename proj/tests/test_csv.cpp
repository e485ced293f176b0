#include <cstdio>
#include <string>

#include "doctest.h"
#include "fgc/csv.hpp"
#include "fgc/dataset.hpp"
#include "fgc/errors.hpp"

using namespace fgc;

namespace {

const char* kToySchema =
    "f1=numeric\n"
    "color=categorical\n"
    "label=class\n";

const char* kToyCsv =
    "f1,color,label\n"
    "1.5,red,yes\n"
    "-2.25,blue,no\n"
    "0.125,red,yes\n";

bool datasets_equal(const Dataset& a, const Dataset& b) {
  return serialize_csv(a) == serialize_csv(b);
}

}  // namespace

TEST_CASE("parse_csv echoes a small declared table") {
  CsvSchema schema = CsvSchema::parse(kToySchema);
  Dataset ds = parse_csv(kToyCsv, schema);
  REQUIRE(ds.row_count == 3);
  REQUIRE(ds.columns.size() == 2);
  CHECK(ds.columns[0].name == "f1");
  CHECK(ds.columns[0].kind == FeatureKind::numeric);
  CHECK(ds.columns[0].numeric[1] == doctest::Approx(-2.25));
  CHECK(ds.columns[1].kind == FeatureKind::categorical);
  // Category labels are collected sorted, codes point into them.
  REQUIRE(ds.columns[1].categories == std::vector<std::string>{"blue", "red"});
  CHECK(ds.columns[1].codes == std::vector<int32_t>{1, 0, 1});
  CHECK(ds.target.kind == TargetKind::classification);
  REQUIRE(ds.target.classes == std::vector<std::string>{"no", "yes"});
  CHECK(ds.target.labels == std::vector<int32_t>{1, 0, 1});
}

TEST_CASE("parse errors name the offending cell") {
  CsvSchema schema = CsvSchema::parse(kToySchema);
  std::string bad =
      "f1,color,label\n"
      "1.5,red,yes\n"
      "oops,blue,no\n";
  try {
    parse_csv(bad, schema);
    FAIL("expected a parse error");
  } catch (const ValidationError& e) {
    std::string msg = e.what();
    CHECK(msg.find("row 2") != std::string::npos);
    CHECK(msg.find("f1") != std::string::npos);
  }
}

TEST_CASE("csv rejects structural problems") {
  CsvSchema schema = CsvSchema::parse(kToySchema);
  CHECK_THROWS_AS(parse_csv("", schema), ValidationError);
  // missing cell
  CHECK_THROWS_AS(parse_csv("f1,color,label\n1.0,red\n", schema), ValidationError);
  // column not in schema
  CHECK_THROWS_AS(parse_csv("f1,color,label,extra\n1,red,yes,0\n", schema), ValidationError);
  // schema column absent from header
  CHECK_THROWS_AS(parse_csv("f1,label\n1,yes\n", schema), ValidationError);
  // duplicate header name
  CHECK_THROWS_AS(parse_csv("f1,f1,label\n1,2,yes\n", schema), ValidationError);
  // no target declared
  CsvSchema no_target = CsvSchema::parse("f1=numeric\n");
  CHECK_THROWS_AS(parse_csv("f1\n1.0\n", no_target), ValidationError);
  // two targets declared
  CsvSchema two = CsvSchema::parse("a=class\nb=class\n");
  CHECK_THROWS_AS(parse_csv("a,b\nx,y\n", two), ValidationError);
}

TEST_CASE("schema parser validates its line format") {
  CHECK_THROWS_AS(CsvSchema::parse("f1\n"), ValidationError);
  CHECK_THROWS_AS(CsvSchema::parse("f1=float\n"), ValidationError);
  CHECK_THROWS_AS(CsvSchema::parse("f1=numeric\nf1=numeric\n"), ValidationError);
  CsvSchema ok = CsvSchema::parse("# comment\n\nf1=numeric\ny=target_numeric\n");
  CHECK(ok.kinds.size() == 2);
}

TEST_CASE("dataset round-trips through files") {
  CsvSchema schema = CsvSchema::parse(kToySchema);
  Dataset ds = parse_csv(kToyCsv, schema);
  std::string data_path = "roundtrip_data.csv";
  std::string schema_path = "roundtrip_data.schema";
  save_csv(ds, data_path, schema_path);
  Dataset back = load_csv(data_path, schema_path);
  CHECK(datasets_equal(ds, back));
  std::remove(data_path.c_str());
  std::remove(schema_path.c_str());
}

TEST_CASE("regression targets parse as numbers") {
  CsvSchema schema = CsvSchema::parse("x=numeric\ny=target_numeric\n");
  Dataset ds = parse_csv("x,y\n1,0.5\n2,1.5\n", schema);
  CHECK(ds.target.kind == TargetKind::regression);
  CHECK(ds.target.values == std::vector<double>{0.5, 1.5});
}

TEST_CASE("partition wire format is 1-based and round-trips") {
  Partition p;
  p.assignments = {0, 2, 1, 0};
  p.k = 3;
  std::string text = serialize_partition(p);
  CHECK(text.rfind("row_index,cluster\n", 0) == 0);
  CHECK(text.find("1,1\n") != std::string::npos);
  CHECK(text.find("2,3\n") != std::string::npos);
  Partition back = parse_partition(text);
  CHECK(back.k == 3);
  CHECK(back.assignments == p.assignments);

  CHECK_THROWS_AS(parse_partition("bogus\n1,1\n"), ValidationError);
  CHECK_THROWS_AS(parse_partition("row_index,cluster\n1,0\n"), ValidationError);
  // row indices must be the contiguous sequence 1..n
  CHECK_THROWS_AS(parse_partition("row_index,cluster\n2,1\n"), ValidationError);
}

TEST_CASE("format_double renders shortest round-trip decimals") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(-2.25) == "-2.25");
  CHECK(format_double(1.0) == "1");
  double v = 0.1 + 0.2;
  CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("file helpers surface io errors") {
  CHECK_THROWS_AS(read_file("does/not/exist.txt"), IoError);
  CHECK_THROWS_AS(write_file("no-such-dir/file.txt", "x"), IoError);
}
