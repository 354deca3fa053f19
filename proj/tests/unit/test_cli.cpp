#include <doctest.h>

#include <filesystem>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "cli.hpp"
#include "qlh/instance_io.hpp"

namespace fs = std::filesystem;
using qlh::cli::run;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "qlh");
  std::ostringstream out, err;
  const int c = run(args, out, err);
  return {c, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("qlh_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

}  // namespace

TEST_CASE("usage errors") {
  CHECK(call({}).code == qlh::cli::kUsage);
  CHECK(call({"frobnicate"}).code == qlh::cli::kUsage);
  CHECK(call({"generate"}).code == qlh::cli::kUsage);
  CHECK(call({"generate", "--kind", "nope"}).code == qlh::cli::kUsage);
  CHECK(call({"generate", "--kind", "gap", "--rank", "4"}).code == qlh::cli::kUsage);
  CHECK(call({"ratio", "/nonexistent/x.json"}).code == qlh::cli::kUsage);
  CHECK(call({"bounds"}).code == qlh::cli::kUsage);
  CHECK(call({"--help"}).code == qlh::cli::kOk);
}

TEST_CASE("generate then ratio") {
  TempDir d;
  const Result g = call({"generate", "--kind", "gap", "--rank", "1", "-o", d / "g.json"});
  REQUIRE(g.code == qlh::cli::kOk);
  CHECK(qlh::read_instance(d / "g.json").terms.size() == 1);
  const Result r = call({"ratio", d / "g.json", "--samples", "500", "-o", d / "r.json"});
  CHECK(r.code == qlh::cli::kOk);
  const auto j = nlohmann::json::parse(qlh::read_text_file(d / "r.json"));
  CHECK(j.at("ratio_vs_sdp").get<double>() == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(call({"ratio", d / "g.json", "--samples", "0"}).code == qlh::cli::kUsage);
  CHECK(call({"ratio", d / "g.json", "-o", d / "missing/r.json"}).code == qlh::cli::kUsage);
}

TEST_CASE("malformed instances are input errors") {
  TempDir d;
  qlh::write_text_file(d / "bad.json", "{\"n\": 2");
  CHECK(call({"ratio", d / "bad.json"}).code == qlh::cli::kUsage);
}

TEST_CASE("odd cycles exit with the structure code") {
  TempDir d;
  const std::vector<qlh::pauli::WeightedEdge> tri = {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}};
  qlh::write_instance(d / "tri.json", qlh::pauli::ising_instance(tri, 3));
  const Result r = call({"krivine", d / "tri.json", "--samples", "100"});
  CHECK(r.code == qlh::cli::kStructure);
  CHECK(r.err.find("odd cycle: Z") != std::string::npos);
  CHECK(call({"krivine", d / "tri.json", "--samples", "100", "--rounder", "hyperplane"}).code ==
        qlh::cli::kOk);
  CHECK(call({"krivine", d / "tri.json", "--rounder", "coin"}).code == qlh::cli::kUsage);
}

TEST_CASE("solver failures exit with the solver code but still write the report") {
  TempDir d;
  REQUIRE(call({"generate", "--kind", "rank-projector", "--rank", "2", "--n", "5", "--edges", "8",
                "-o", d / "p.json"})
              .code == qlh::cli::kOk);
  const Result r =
      call({"ratio", d / "p.json", "--samples", "100", "--tol", "1e-15", "-o", d / "r.json"});
  CHECK(r.code == qlh::cli::kSolver);
  CHECK(fs::exists(d / "r.json"));
}

TEST_CASE("bounds for one rank") {
  const Result r = call({"bounds", "--rank", "3", "--grid", "4", "--samples", "1000"});
  CHECK(r.code == qlh::cli::kOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("ranks").size() == 1);
}
