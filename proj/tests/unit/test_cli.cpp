#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "qgraph/fixtures.hpp"
#include "qgraph/graph_io.hpp"

using namespace qgraph;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "qgraph_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string write_text(const std::string& name, const std::string& text) {
  const fs::path p = scratch(name);
  std::ofstream(p) << text;
  return p.string();
}

std::string write_graph(const std::string& name, const MarkedGraph& g) {
  return write_text(name, to_json(g));
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("examples list and emit") {
  const Result list = run({"examples", "list"});
  CHECK(list.code == cli::kSuccess);
  for (Family f : kAllFamilies) CHECK(list.out.find(std::string(to_string(f))) != std::string::npos);
  const Result emit = run({"examples", "emit", "cycle"});
  CHECK(emit.code == cli::kSuccess);
  CHECK(parse_graph_json(emit.out) == default_fixture(Family::Cycle));
  CHECK(run({"examples", "emit", "petersen"}).code == cli::kValidationError);
}

TEST_CASE("validate") {
  for (Family f : kAllFamilies) {
    const std::string path = write_graph(std::string(to_string(f)) + ".json", default_fixture(f));
    const Result r = run({"validate", path});
    CHECK(r.code == cli::kSuccess);
    CHECK_FALSE(r.out.empty());
  }
  const std::string negative = write_text("negative.json", R"({
    "vertices": [{"type": "delta", "alpha": 0}, {"type": "delta", "alpha": 0}],
    "edges": [{"from": 0, "to": 1, "length": -1}]})");
  CHECK(run({"validate", negative}).code == cli::kValidationError);
  const std::string split = write_text("split.json", R"({
    "vertices": [{"type": "delta", "alpha": 0}, {"type": "delta", "alpha": 0},
                 {"type": "delta", "alpha": 0}],
    "edges": [{"from": 0, "to": 1, "length": 1}]})");
  const Result r = run({"validate", split});
  CHECK(r.code == cli::kValidationError);
  CHECK_FALSE(r.err.empty());
  CHECK(run({"validate", scratch("missing.json").string()}).code == cli::kValidationError);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == cli::kUsageError);
  CHECK(run({"frobnicate"}).code == cli::kUsageError);
  CHECK(run({"spectrum"}).code == cli::kUsageError);
  const std::string g = write_graph("c4.json", default_fixture(Family::Cycle));
  CHECK(run({"spectrum", g, "--lambda-max", "-3"}).code == cli::kUsageError);
  CHECK(run({"spectrum", g, "--lambda-max", "10", "--method", "magic"}).code == cli::kUsageError);
}

TEST_CASE("compare the C4 pair") {
  const MarkedGraph a = default_fixture(Family::Cycle);
  const std::string p1 = write_graph("c4a.json", a);
  const std::string p2 = write_graph("c4b.json", a.with_couplings({-2.0, 2.0, -2.0, 2.0}));
  const Result r = run({"compare", p1, p2, "--lambda-max", "50"});
  CHECK(r.code == cli::kSuccess);
  CHECK(r.out.rfind("ISOSPECTRAL up to 50", 0) == 0);

  const std::string p3 = write_graph("c4c.json", a.with_couplings({2.0, -2.0, 2.0, 2.0}));
  const Result n = run({"compare", p1, p3, "--lambda-max", "50"});
  CHECK(n.code == cli::kSuccess);
  CHECK(n.out.rfind("NOT ISOSPECTRAL below 50", 0) == 0);

  const Result j = run({"compare", p1, p2, "--lambda-max", "50", "--format", "json"});
  CHECK(j.out.find("\"verdict\": \"ISOSPECTRAL\"") != std::string::npos);
}

TEST_CASE("secular table leaves pole cells empty") {
  const std::string g = write_text("neumann.json", R"({
    "vertices": [{"type": "delta", "alpha": 0}, {"type": "delta", "alpha": 0}],
    "edges": [{"from": 0, "to": 1, "length": 3.141592653589793}]})");
  const Result r = run({"secular", g, "--from", "0.25", "--to", "4", "--step", "0.25",
                        "--formulation", "both"});
  CHECK(r.code == cli::kSuccess);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "lambda,mu_or_kappa,vertex,edge");
  int rows = 0, empty = 0;
  while (std::getline(in, line)) {
    ++rows;
    // lambda = 1 and 4 sit on poles of the vertex form
    if (line.find(",,") != std::string::npos) {
      ++empty;
      CHECK((line.rfind("1,", 0) == 0 || line.rfind("4,", 0) == 0));
    }
  }
  CHECK(rows == 16);
  CHECK(empty == 2);
}

TEST_CASE("spectrum output is independent of the thread count") {
  const std::string g = write_graph("mixed.json", default_fixture(Family::Example34));
  const fs::path o1 = scratch("s1.csv"), o2 = scratch("s2.csv");
  CHECK(run({"spectrum", g, "--lambda-max", "80", "--threads", "1", "--out", o1.string()}).code ==
        cli::kSuccess);
  CHECK(run({"spectrum", g, "--lambda-max", "80", "--threads", "6", "--out", o2.string()}).code ==
        cli::kSuccess);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const std::string a = slurp(o1);
  CHECK(a.rfind("lambda,multiplicity,method\n", 0) == 0);
  CHECK(a == slurp(o2));

  const Result fd = run({"spectrum", g, "--lambda-max", "20", "--method", "fd", "--mesh", "100"});
  CHECK(fd.code == cli::kSuccess);
  CHECK(fd.out.find(",fd") != std::string::npos);
}

TEST_CASE("traces and search") {
  const MarkedGraph a = default_fixture(Family::Cycle);
  const std::string p1 = write_graph("t1.json", a);
  const std::string p2 = write_graph("t2.json", a.with_couplings({-2.0, 2.0, -2.0, 2.0}));
  const Result t = run({"traces", p1, p2, "-m", "4"});
  CHECK(t.code == cli::kSuccess);
  CHECK(t.out.find("necessary_check") != std::string::npos);
  const Result s = run({"search", p1, "--lambda-max", "60"});
  CHECK(s.code == cli::kSuccess);
  CHECK(s.out.find("-2.0") != std::string::npos);
  const Result m = run({"mmatrix", p1, "--lambda", "2.5", "--format", "json"});
  CHECK(m.code == cli::kSuccess);
}

}  // TEST_SUITE
