#include <doctest.h>

#include <json.hpp>

#include "test_support.hpp"
#include "witkit/core.hpp"
#include "witkit/io.hpp"
#include "witkit/zoo.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

using namespace witkit;
using testsupport::near;

namespace {

const char* valid_pure =
    R"({"dims":[2,2],"kind":"pure_vector","data":[[1,0],[0,0],[0,0],[0,0]]})";

// diagonal matrices as row-major nested rows of [re, im] pairs
std::string diagonal_file(const char* kind, double a, double b, double c, double d) {
  const double diag[4] = {a, b, c, d};
  std::string out = std::string(R"({"dims":[2,2],"kind":")") + kind + R"(","data":[)";
  for (int i = 0; i < 4; ++i) {
    out += i == 0 ? "[" : ",[";
    for (int j = 0; j < 4; ++j) {
      if (j > 0) out += ",";
      out += "[" + io::format_double(i == j ? diag[i] : 0.0) + ",0]";
    }
    out += "]";
  }
  return out + "]}";
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("committed fixtures survive a byte-for-byte round trip") {
  int seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(WITKIT_FIXTURES_DIR)) {
    if (entry.path().extension() != ".json") continue;
    ++seen;
    const std::string bytes = io::read_file(entry.path().string());
    const io::OperatorFile file = io::parse_operator(bytes);
    CHECK(io::serialize(file) == bytes);
  }
  CHECK(seen >= 10);
}

TEST_CASE("save and load are inverse") {
  const auto path = std::filesystem::temp_directory_path() / "witkit_io_roundtrip.json";
  const io::OperatorFile out = io::OperatorFile::from_hermitian(
      zoo::pt_witness(zoo::bell_state(zoo::BellLabel::psi_minus)), {{"name", "round trip"}});
  io::save_operator(out, path.string());
  const io::OperatorFile back = io::load_operator(path.string());
  CHECK(io::serialize(back) == io::serialize(out));
  CHECK(back.meta().at("name") == "round trip");
  std::filesystem::remove(path);
}

TEST_CASE("parse rejections name the offending field") {
  using io::parse_operator;
  using io::ParseError;

  CHECK_THROWS_WITH_AS(parse_operator("{"), doctest::Contains("JSON syntax error"), ParseError);
  CHECK_THROWS_WITH_AS(parse_operator("[1, 2]"), doctest::Contains("top level"), ParseError);
  CHECK_THROWS_WITH_AS(parse_operator(R"({"dims":[2],"kind":"pure_vector","data":[]})"),
                       doctest::Contains("expected [d1, d2]"), ParseError);
  CHECK_THROWS_WITH_AS(parse_operator(R"({"dims":[2,2],"kind":"unitary","data":[]})"),
                       doctest::Contains("is not one of"), ParseError);
  CHECK_THROWS_WITH_AS(parse_operator(R"({"dims":[2,2],"kind":"pure_vector"})"),
                       doctest::Contains("missing field 'data'"), ParseError);
  CHECK_THROWS_WITH_AS(
      parse_operator(R"({"dims":[2,2],"kind":"pure_vector","data":[[1,0],[0,0]]})"),
      doctest::Contains("expected 4 [re, im] entries"), ParseError);
  CHECK_THROWS_WITH_AS(
      parse_operator(
          R"({"dims":[2,2],"kind":"pure_vector","data":[[1,0],[0,0],[0,0],[0,0]],"bogus":1})"),
      doctest::Contains("unknown field 'bogus'"), ParseError);
  CHECK_THROWS_WITH_AS(
      parse_operator(
          R"({"dims":[2,2],"kind":"pure_vector","data":[[1,0],[0,0],[0,0],[0,0]],"meta":{"a":1}})"),
      doctest::Contains("meta.a: expected a string"), ParseError);

  // matrix payloads are nested rows; shape errors name the row
  CHECK_THROWS_WITH_AS(
      parse_operator(R"({"dims":[2,2],"kind":"hermitian","data":[[1,0],[0,0]]})"),
      doctest::Contains("expected 4 rows, found 2"), ParseError);
  CHECK_THROWS_WITH_AS(
      parse_operator(
          R"({"dims":[2,2],"kind":"hermitian","data":[[[1,0]],[[0,0]],[[0,0]],[[0,0]]]})"),
      doctest::Contains("data[0]: expected 4"), ParseError);

  // content that parses but violates the target type's invariants
  const std::string skew =
      R"({"dims":[2,2],"kind":"hermitian","data":[)"
      R"([[0,0],[1,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]],)"
      R"([[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]]]})";
  CHECK_THROWS_WITH_AS(parse_operator(skew), doctest::Contains("worst entry pair"), ParseError);
  CHECK_THROWS_WITH_AS(parse_operator(diagonal_file("density", 0.45, 0.45, 0.0, 0.0)),
                       doctest::Contains("trace"), ParseError);
  CHECK_THROWS_WITH_AS(parse_operator(diagonal_file("density", 1.5, -0.5, 0.0, 0.0)),
                       doctest::Contains("negative eigenvalue"), ParseError);
  const char* loud =
      R"({"dims":[2,2],"kind":"pure_vector","data":[[1,0],[1,0],[0,0],[0,0]]})";
  CHECK_THROWS_WITH_AS(parse_operator(loud), doctest::Contains("data:"), ParseError);

  CHECK_THROWS_WITH_AS(io::load_operator("/nonexistent/witkit.json"),
                       doctest::Contains("cannot open file"), ParseError);
}

TEST_CASE("kind promotions") {
  const io::OperatorFile pure = io::parse_operator(valid_pure);
  CHECK(pure.as_pure().amps()(0) == 1.0);
  CHECK(near(pure.as_density().matrix()(0, 0).real(), 1.0, 1e-15));
  CHECK_THROWS_WITH_AS(pure.as_hermitian(),
                       doctest::Contains("cannot be used as a Hermitian operator"), io::ParseError);

  const io::OperatorFile density =
      io::parse_operator(diagonal_file("density", 0.25, 0.25, 0.25, 0.25));
  CHECK(near(density.as_hermitian().matrix().trace().real(), 1.0, 1e-15));
  CHECK(near(density.as_density().matrix()(1, 1).real(), 0.25, 1e-15));
  CHECK_THROWS_WITH_AS(density.as_pure(), doctest::Contains("is not a pure vector"),
                       io::ParseError);

  const io::OperatorFile hermitian =
      io::parse_operator(diagonal_file("hermitian", 1.0, -1.0, 1.0, -1.0));
  CHECK(hermitian.as_hermitian().matrix()(1, 1).real() == -1.0);
  CHECK_THROWS_WITH_AS(hermitian.as_density(), doctest::Contains("is not a state"),
                       io::ParseError);
}

TEST_CASE("doubles are rendered with enough digits to round-trip") {
  const double values[] = {1.0 / 3.0, 0.1,  1e-300, -2.5e17, M_PI, 0.25, 1.0, 0.0,
                           1e308,     5e-324};
  for (double x : values) {
    const std::string text = io::format_double(x);
    CHECK(std::strtod(text.c_str(), nullptr) == x);
  }
  CHECK(io::format_double(0.25) == "0.25");
  CHECK_THROWS_AS(io::format_double(std::nan("")), std::invalid_argument);
}

TEST_CASE("digest pins known vectors") {
  CHECK(io::hex_digest("") == "cbf29ce484222325");
  CHECK(io::hex_digest("a") == "af63dc4c8601ec8c");
  CHECK(io::hex_digest("foobar") == "85944171f73967e8");
}

TEST_CASE("json emission is ordered, indented, and standard") {
  io::JsonNode obj = io::JsonNode::object();
  obj.set("zebra", 1);
  obj.set("alpha", io::JsonNode::array().push(1).push(2));
  obj.set("pair", io::JsonNode::complex_pair(Cplx(1.5, -2.5)));
  obj.set("text", "witness");
  obj.set("real", 0.1);

  const std::string text = obj.dump();
  CHECK(text.back() == '\n');
  CHECK(text.find("\"zebra\"") < text.find("\"alpha\""));   // insertion order, not sorted
  CHECK(text.find("[1, 2]") != std::string::npos);          // shallow arrays stay inline
  CHECK(text.find("[1.5, -2.5]") != std::string::npos);
  CHECK(text.find("  \"zebra\"") != std::string::npos);     // two-space indent
  CHECK(text == obj.dump());

  const nlohmann::json parsed = nlohmann::json::parse(text);
  CHECK(parsed["zebra"] == 1);
  CHECK(parsed["alpha"][1] == 2);
  CHECK(parsed["pair"][0] == 1.5);
  CHECK(parsed["text"] == "witness");
  CHECK(parsed["real"] == 0.1);
}

}  // TEST_SUITE
