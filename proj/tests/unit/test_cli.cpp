#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "quasilat/cli.hpp"
#include "quasilat/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = quasilat::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string tmp(const std::string& name) { return (fs::path(QUASILAT_TEST_TMP) / name).string(); }

}  // namespace

TEST_CASE("unknown command and invalid fields exit with 2") {
  Result r = run({"frobnicate"});
  CHECK(r.code == 2);
  CHECK(r.err.find("unknown command") != std::string::npos);

  r = run({"generate", "--scheme", "silver", "--R", "-1", "--T", "10"});
  CHECK(r.code == 2);
  CHECK(r.err.find("R") != std::string::npos);

  r = run({});
  CHECK(r.code == 2);
}

TEST_CASE("generate writes a patch") {
  const Result r = run({"generate", "--scheme", "silver", "--R", "1", "--T", "3"});
  REQUIRE(r.code == 0);
  const quasilat::PointPatch P = quasilat::patch_from_json(r.out);
  CHECK(P.size() == 5);
}

TEST_CASE("computational errors exit with 1") {
  const std::string path = tmp("cli_small.json");
  REQUIRE(run({"generate", "--scheme", "lattice", "--dim", "1", "--T", "10", "-o", path}).code == 0);
  const Result r = run({"density", "-i", path, "--T", "20"});
  CHECK(r.code == 1);
  CHECK(r.err.find("insufficient") != std::string::npos);
}

TEST_CASE("bragg on the integers") {
  const std::string path = tmp("cli_z.json");
  REQUIRE(run({"generate", "--scheme", "lattice", "--dim", "1", "--T", "110", "-o", path}).code == 0);
  const Result r = run({"bragg", "-i", path, "--eps", "0.1", "--K", "5", "--T", "100"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("theta_0,c_xi,is_peak,c_1,eps\n", 0) == 0);
  CHECK(r.out.find(",1,") != std::string::npos);
}

TEST_CASE("config files and overrides") {
  const std::string cfg = tmp("cli_cfg.json");
  quasilat::write_file(cfg, "{\"scheme\": \"silver\", \"R\": 1, \"T\": 100}\n");
  const Result a = run({"generate", "--config", cfg, "--T", "3"});
  REQUIRE(a.code == 0);
  CHECK(quasilat::patch_from_json(a.out).size() == 5);

  quasilat::write_file(cfg, "{\"colour\": 1}\n");
  const Result b = run({"generate", "--config", cfg});
  CHECK(b.code == 2);
  CHECK(b.err.find("colour") != std::string::npos);
}

TEST_CASE("serial output is deterministic") {
  const std::vector<std::string> args{"generate", "--scheme", "heisenberg-integer", "--T", "2"};
  const Result a = run(args), b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
}
