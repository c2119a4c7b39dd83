#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sqham/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = sqham::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "sqham_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("cli: usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"copies"}).code == 2);
  CHECK(run({"gen", "--n", "10", "--p", "0.5"}).code == 2);  // seed required
  CHECK(run({"gen", "--n", "10", "--p", "0.5", "--m", "3", "--seed", "1"}).code == 2);
  CHECK(run({"audit", "--statement", "prop_easy", "--n", "9", "--samples", "10"}).code == 2);
  CHECK(run({"threshold", "--n-list", "9", "--c-list", "1,2"}).code == 2);
  CHECK(run({"threshold", "--n-list", "9", "--c-list", "2,1", "--seed", "1"}).code == 2);
  const Result r = run({"copies", "--n", "13", "--enumerate", "--budget", "1000"});
  CHECK(r.code == 2);
  CHECK(r.err.find("error:") == 0);
}

TEST_CASE("cli: copies") {
  CHECK(run({"copies", "--n", "7"}).out == "360\n");
  CHECK(run({"copies", "--n", "7", "--enumerate"}).out == "360\n");
  CHECK(run({"--version"}).code == 0);
}

TEST_CASE("cli: gen then solve") {
  const fs::path graph = scratch("k6.txt");
  REQUIRE(run({"gen", "--n", "6", "--complete", "--out", graph.string()}).code == 0);
  CHECK(slurp(graph).rfind("6 15\n", 0) == 0);
  const Result r = run({"--no-timestamp", "solve", "--input", graph.string()});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["status"] == "found");
  CHECK(j["witness"].size() == 6);
  CHECK(j.contains("config"));
  CHECK_FALSE(j.contains("timestamp"));

  const fs::path power = scratch("c9.txt");
  REQUIRE(run({"gen", "--n", "9", "--power", "1", "--out", power.string()}).code == 0);
  const auto no = nlohmann::json::parse(run({"solve", "--input", power.string()}).out);
  CHECK(no["status"] == "exhausted_no");
  CHECK(no.contains("timestamp"));
  CHECK(run({"solve", "--input", scratch("missing.txt").string()}).code == 2);
}

TEST_CASE("cli: reruns are byte identical without timestamps") {
  const fs::path a = scratch("grid_a.csv");
  const fs::path b = scratch("grid_b.csv");
  const fs::path fa = scratch("fit_a.json");
  const fs::path fb = scratch("fit_b.json");
  const std::vector<std::string> base = {"--no-timestamp", "threshold", "--n-list", "9,10", "--c-list",
                                         "1,2,3", "--trials", "10", "--seed", "4", "--coupled"};
  auto first = base;
  first.insert(first.end(), {"--out", a.string(), "--fit-out", fa.string()});
  auto second = base;
  second.insert(second.begin(), {"--threads", "3"});
  second.insert(second.end(), {"--out", b.string(), "--fit-out", fb.string()});
  REQUIRE(run(first).code == 0);
  REQUIRE(run(second).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(fa) == slurp(fb));
  const std::string csv = slurp(a);
  CHECK(csv.rfind("# config: {", 0) == 0);
  CHECK(csv.find("# timestamp") == std::string::npos);
  CHECK(csv.find("n,C,p,trials,successes,failures,unknowns,estimate,ci_lo,ci_hi") != std::string::npos);
  CHECK_FALSE(fs::exists(a.string() + ".tmp"));
  const auto fit = nlohmann::json::parse(slurp(fa));
  CHECK(fit["fits"].size() == 2);
  CHECK(fit["monotonicity_inversions"] == 0);
}

TEST_CASE("cli: timestamps are present by default") {
  const Result r = run({"threshold", "--n-list", "9", "--c-list", "1,2", "--trials", "3", "--seed", "1",
                        "--fit-out", scratch("fit_ts.json").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("# timestamp: ") != std::string::npos);
}

TEST_CASE("cli: audit output and exit status") {
  const Result r = run({"--no-timestamp", "audit", "--statement", "ivc", "--n", "9", "--exhaustive", "--max-l", "2"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("statement,n,instance,lhs,rhs,holds,asserted,note") != std::string::npos);
  CHECK(r.err.find("0 violations") != std::string::npos);
  // The spread profile comparison is reported, never asserted.
  const Result s = run({"audit", "--statement", "spread_profile", "--n", "7", "--exhaustive", "--max-l", "1"});
  CHECK(s.code == 0);
  CHECK(s.out.find(",false,false,") != std::string::npos);
  CHECK(run({"audit", "--statement", "fiand", "--n", "8", "--samples", "20", "--seed", "3"}).code == 0);
}

TEST_CASE("cli: fragments") {
  const Result census = run({"--no-timestamp", "fragments", "census", "--n", "8", "--C", "1", "--c0", "1",
                             "--k", "6", "--trials", "10", "--seed", "2"});
  REQUIRE(census.code == 0);
  const auto j = nlohmann::json::parse(census.out);
  CHECK(j["config"]["n"] == 8);
  CHECK(run({"fragments", "census", "--n", "8", "--C", "1", "--trials", "5", "--seed", "2"}).code == 2);

  const fs::path cfg = scratch("frag.json");
  std::ofstream(cfg) << R"({"n": 8, "C": 1, "c0_surrogate": 1.5, "k": 8, "trials": 3, "master_seed": 5})";
  const Result two = run({"--no-timestamp", "fragments", "two-round", "--config", cfg.string()});
  CHECK(two.code == 0);
  CHECK(two.out.find("trial,w0_size,w0_successful,bad_pairs,family_size,X,solver_status,sound,seconds") !=
        std::string::npos);
  const Result second = run({"--no-timestamp", "fragments", "second-moment", "--config", cfg.string(),
                             "--simulations", "500"});
  CHECK(second.code <= 1);
  CHECK(nlohmann::json::parse(second.out).contains("family_size"));
}
