#include "glmpath/io.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

using namespace glmpath;

namespace {

// unique-ish scratch path per test file; cleaned up by each case
std::string tmp_path(const std::string& name) { return "io_test_" + name; }

void write_raw(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

struct Cleanup {
  std::string path;
  ~Cleanup() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("format selection by extension") {
  CHECK(format_from_path("x.csv") == FileFormat::csv);
  CHECK(format_from_path("x.CSV") == FileFormat::csv);
  CHECK(format_from_path("x.glmx") == FileFormat::binary);
  CHECK(format_from_path("matrix") == FileFormat::binary);
}

TEST_CASE("binary matrix round trip is bit exact") {
  Rng rng(53);
  Matrix x = testutil::random_matrix(100, 50, rng);
  const std::string path = tmp_path("roundtrip.glmx");
  Cleanup c{path};
  save_matrix(path, x);
  const Matrix back = load_matrix(path);
  REQUIRE(back.rows() == x.rows());
  REQUIRE(back.cols() == x.cols());
  for (Index t = 0; t < x.size(); ++t) CHECK(back.data()[t] == x.data()[t]);
}

TEST_CASE("csv parse and round trip") {
  const std::string path = tmp_path("parse.csv");
  Cleanup c{path};

  SUBCASE("literal 2x2 parse") {
    write_raw(path, "1.0,2.0\n3.0,4.0\n");
    const Matrix x = load_matrix(path);
    CHECK(x(0, 0) == 1.0);
    CHECK(x(0, 1) == 2.0);
    CHECK(x(1, 0) == 3.0);
    CHECK(x(1, 1) == 4.0);
  }
  SUBCASE("round trip at %.17g is exact for doubles") {
    Rng rng(59);
    Matrix x = testutil::random_matrix(20, 7, rng);
    save_matrix(path, x);  // .csv extension routes to text
    const Matrix back = load_matrix(path);
    for (Index t = 0; t < x.size(); ++t) CHECK(back.data()[t] == x.data()[t]);
  }
}

TEST_CASE("csv errors name the offending cell") {
  const std::string path = tmp_path("bad.csv");
  Cleanup c{path};

  SUBCASE("non-numeric cell") {
    write_raw(path, "1.0,2.0\n3.0,oops\n");
    try {
      load_matrix(path);
      FAIL("expected validation_error");
    } catch (const validation_error& e) {
      const std::string msg = e.what();
      CHECK(msg.find("oops") != std::string::npos);
      CHECK(msg.find("row 1") != std::string::npos);
      CHECK(msg.find("column 1") != std::string::npos);
    }
  }
  SUBCASE("ragged rows") {
    write_raw(path, "1,2\n3\n");
    CHECK_THROWS_AS(load_matrix(path), validation_error);
  }
  SUBCASE("empty file") {
    write_raw(path, "");
    CHECK_THROWS_AS(load_matrix(path), io_error);
  }
}

TEST_CASE("binary matrix corruption errors") {
  const std::string path = tmp_path("corrupt.glmx");
  Cleanup c{path};
  Matrix x(2, 2);
  x << 1, 2, 3, 4;
  save_matrix(path, x);

  std::ifstream in(path, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();

  SUBCASE("bad magic") {
    std::string bad = bytes;
    bad[0] = 'X';
    write_raw(path, bad);
    CHECK_THROWS_AS(load_matrix(path), io_error);
  }
  SUBCASE("unsupported version") {
    std::string bad = bytes;
    bad[4] = 9;
    write_raw(path, bad);
    CHECK_THROWS_AS(load_matrix(path), io_error);
  }
  SUBCASE("truncated payload") {
    write_raw(path, bytes.substr(0, bytes.size() - 3));
    CHECK_THROWS_AS(load_matrix(path), io_error);
  }
  SUBCASE("trailing garbage") {
    write_raw(path, bytes + "zz");
    CHECK_THROWS_AS(load_matrix(path), io_error);
  }
  SUBCASE("missing file") { CHECK_THROWS_AS(load_matrix("no_such_file.glmx"), io_error); }
}

TEST_CASE("model round trip") {
  const std::string path = tmp_path("model.glmm");
  Cleanup c{path};

  SUBCASE("zero model") {
    GlmModel m = GlmModel::zero(4, Family::binomial);
    m.lambda = 0.25;
    m.alpha = 0.99;
    save_model(path, m);
    const GlmModel back = load_model(path);
    CHECK(back.family == Family::binomial);
    CHECK(back.lambda == 0.25);
    CHECK(back.alpha == 0.99);
    CHECK(back.beta == m.beta);
    CHECK(back.beta0 == m.beta0);
  }
  SUBCASE("random multinomial model keeps exact nnz") {
    Rng rng(61);
    GlmModel m = testutil::random_model(6, Family::multinomial, 3, rng);
    m.beta(2, 1) = 0.0;
    m.beta(4, 0) = 0.0;
    m.lambda = 0.1;
    save_model(path, m);
    const GlmModel back = load_model(path);
    CHECK(back.beta == m.beta);
    CHECK(back.nnz_per_class() == m.nnz_per_class());
    CHECK(back.nnz_total() == m.nnz_total());
  }
  SUBCASE("wrong magic is rejected") {
    write_raw(path, std::string("GLMX") + std::string(60, '\0'));
    CHECK_THROWS_AS(load_model(path), io_error);
  }
  SUBCASE("unknown family code is rejected") {
    GlmModel m = GlmModel::zero(2, Family::gaussian);
    save_model(path, m);
    std::ifstream in(path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    bytes[8] = 7;  // family field
    write_raw(path, bytes);
    CHECK_THROWS_AS(load_model(path), io_error);
  }
}

TEST_CASE("targets: single column in both formats") {
  Rng rng(67);
  Vector y = testutil::random_vector(9, rng);

  for (const char* name : {"targets.csv", "targets.glmx"}) {
    const std::string path = tmp_path(name);
    Cleanup c{path};
    save_targets(path, y);
    const Vector back = load_targets(path);
    REQUIRE(back.size() == y.size());
    for (Index i = 0; i < y.size(); ++i) CHECK(back[i] == y[i]);
  }

  const std::string path = tmp_path("wide.csv");
  Cleanup c{path};
  write_raw(path, "1,2\n3,4\n");
  CHECK_THROWS_AS(load_targets(path), validation_error);
}
