#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "lacelab/lattice_io.hpp"
#include "lacelab/srw.hpp"

using namespace lacelab;

TEST_SUITE("io") {
  TEST_CASE("exact function round trip") {
    auto f = pn_exact(2, 3);
    f.set(LatticePoint{0, 0}, Rational(-7, 13));
    std::stringstream ss;
    write_function(ss, f);
    const auto g = read_function<Rational>(ss);
    CHECK(g == f);
    CHECK(g.radius_cap() == f.radius_cap());
  }

  TEST_CASE("float function round trip is bit exact") {
    LatticeFunction<double> f(Box(3, 1), 4);
    f.set(LatticePoint{1, 0, -1}, 0.1);
    f.set(LatticePoint{0, 0, 0}, 1.0 / 3.0);
    f.set(LatticePoint{-1, 1, 1}, -2.5e-300);
    f.record_truncation(1e-9);
    std::stringstream ss;
    write_function(ss, f);
    const auto g = read_function<double>(ss);
    CHECK((g.values() == f.values()).all());
    CHECK(g.truncation_bound() == f.truncation_bound());
  }

  TEST_CASE("series round trip") {
    const auto s = green_rw_series(2, 5);
    std::stringstream ss;
    write_series(ss, s);
    const auto t = read_series<Rational>(ss);
    CHECK(t.n_max() == 5);
    CHECK((t - s).is_zero_series());
  }

  TEST_CASE("files on disk") {
    const auto path = std::filesystem::temp_directory_path() / "lacelab_io_test.csv";
    const auto f = pn_float(3, 2);
    save_function(path, f);
    CHECK(load_function<double>(path) == f);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_function<double>(path), Error);
  }

  TEST_CASE("malformed input is rejected") {
    std::stringstream bad("not a cache\n");
    CHECK_THROWS_AS(read_function<double>(bad), Error);
    std::stringstream wrong_mode;
    write_function(wrong_mode, pn_exact(1, 2));
    CHECK_THROWS_AS(read_function<double>(wrong_mode), Error);
  }

  TEST_CASE("scalar formatting") {
    CHECK(format_scalar(Rational(3, 4)) == "3/4");
    CHECK(parse_scalar<Rational>("-6/8") == Rational(-3, 4));
    CHECK(parse_scalar<double>(format_scalar(0.1)) == 0.1);
  }
}
