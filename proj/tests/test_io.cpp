#include <cstdio>
#include <fstream>

#include <doctest.h>

#include "ermfdr/errors.hpp"
#include "ermfdr/io.hpp"

using namespace ermfdr;

namespace {
void write_file(const char* path, const char* body) {
  std::ofstream out(path);
  out << body;
}
}  // namespace

TEST_CASE("csv space with explicit weights") {
  const char* path = "io_space_a.csv";
  write_file(path,
             "theta_1,theta_2,weight,risk\n"
             "0.0,1.0,0.5,0.0\n"
             "1.0,0.0,0.5,1.0\n");
  const auto space = load_space(path);
  CHECK(space.size() == 2);
  CHECK(space.dim == 2);
  CHECK(space.weights[0] == doctest::Approx(0.5));
  CHECK(space.risks[1] == doctest::Approx(1.0));
  CHECK(space.atoms[1] == doctest::Approx(1.0));
  std::remove(path);
}

TEST_CASE("csv space defaults to uniform weights") {
  const char* path = "io_space_b.csv";
  write_file(path,
             "theta_1,risk\n"
             "0.5,0.25\n"
             "1.5,0.75\n"
             "2.5,0.5\n");
  const auto space = load_space_csv(path);
  CHECK(space.size() == 3);
  CHECK(space.weights[2] == doctest::Approx(1.0 / 3.0));
  std::remove(path);
}

TEST_CASE("csv rejections") {
  const char* path = "io_space_c.csv";
  write_file(path, "theta_1,loss\n0.5,0.25\n");
  CHECK_THROWS_AS((void)load_space_csv(path), Error);
  write_file(path, "theta_1,risk\n0.5\n");
  CHECK_THROWS_AS((void)load_space_csv(path), Error);
  write_file(path, "theta_1,risk\nfoo,0.25\n");
  CHECK_THROWS_AS((void)load_space_csv(path), Error);
  std::remove(path);
  CHECK_THROWS_AS((void)load_space_csv("does_not_exist.csv"), Error);
}

TEST_CASE("json space") {
  const char* path = "io_space_d.json";
  write_file(path,
             R"({"atoms": [[0.0, 1.0], [1.0, 0.0]],
                 "weights": [0.25, 0.75],
                 "risks": [0.1, 0.9]})");
  const auto space = load_space(path);
  CHECK(space.size() == 2);
  CHECK(space.dim == 2);
  CHECK(space.weights[1] == doctest::Approx(0.75));
  std::remove(path);

  const char* minimal = "io_space_e.json";
  write_file(minimal, R"({"risks": [0.1, 0.9, 0.4]})");
  const auto uniform = load_space_json(minimal);
  CHECK(uniform.size() == 3);
  CHECK(uniform.weights[0] == doctest::Approx(1.0 / 3.0));
  CHECK(uniform.atoms.empty());
  std::remove(minimal);

  const char* broken = "io_space_f.json";
  write_file(broken, R"({"weights": [1.0]})");
  CHECK_THROWS_AS((void)load_space_json(broken), Error);
  std::remove(broken);
}

TEST_CASE("extension dispatch") {
  CHECK_THROWS_AS((void)load_space("space.yaml"), Error);
}
