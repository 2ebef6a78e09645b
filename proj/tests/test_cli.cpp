#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "towercalc/cli.hpp"

using namespace towercalc;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "towercalc_test_cli";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("build is deterministic and serial equals parallel") {
  const auto a = scratch("a.json"), b = scratch("b.json");
  REQUIRE(call({"build", "--n", "3", "--q", "1", "--sigma-max", "2", "--floors", "3", "--out", a.string()}).code == 0);
  REQUIRE(call({"build", "--n", "3", "--q", "1", "--sigma-max", "2", "--floors", "3", "--parallel", "--out",
                b.string()})
              .code == 0);
  CHECK(slurp(a) == slurp(b));
  const auto doc = nlohmann::json::parse(slurp(a));
  CHECK(doc["kind"] == "tower-set");
  CHECK(doc["families"].size() == 6);
}

TEST_CASE("build records empty families as skipped") {
  const auto r = call({"build", "--n", "3", "--q", "0", "--sigma-max", "1", "--floors", "1", "--sign", "plus",
                       "--out", "-"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  // mu^0_1 = mu^1_1 is nonzero, so only q = 0 families with both counts zero are skipped
  for (const auto& s : doc["skipped"]) CHECK(s["reason"] == "empty family");
  CHECK(doc["families"].size() + doc["skipped"].size() == 2);
}

TEST_CASE("even dimension is a usage error with an error record") {
  const auto r = call({"build", "--n", "4"});
  CHECK(r.code == 2);
  const auto e = nlohmann::json::parse(r.err);
  CHECK(e["kind"] == "error");
  CHECK(e["error"] == "unsupported-dimension");
}

TEST_CASE("verify passes on a fresh file and names the relation on a tampered one") {
  const auto a = scratch("v.json");
  REQUIRE(call({"build", "--n", "3", "--q", "2", "--sigma-max", "1", "--floors", "2", "--out", a.string()}).code == 0);
  CHECK(call({"verify", a.string()}).code == 0);

  auto doc = nlohmann::json::parse(slurp(a));
  auto& terms = doc["families"][0]["D_floors"][1][0]["components"].begin().value()[0]["terms"][0]["coef"];
  terms = "17/5";
  const auto t = scratch("tampered.json");
  std::ofstream(t) << doc.dump();
  const auto r = call({"verify", t.string()});
  CHECK(r.code == 1);
  CHECK(r.out.find("FAIL ") != std::string::npos);
  CHECK(r.out.find(" at (q=2,") != std::string::npos);
}

TEST_CASE("malformed JSON is a parse error") {
  const auto p = scratch("bad.json");
  std::ofstream(p) << "{\"schema\": ";
  const auto r = call({"verify", p.string()});
  CHECK(r.code == 2);
  CHECK(nlohmann::json::parse(r.err)["error"] == "parse-error");
}

TEST_CASE("compose then expand reproduces the coefficients") {
  const auto p = scratch("pair.json");
  REQUIRE(call({"compose", "--n", "3", "--q", "1", "--D", "(-,0,0,1)=2", "--D", "(+,1,0,1)=1/2", "--R",
                "(-,0,0,1)=1", "--out", p.string()})
              .code == 0);
  const auto r = call({"expand", "--input", p.string(), "--floors", "3", "--weight", "3"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["e_coeffs"].size() == 2);
  CHECK(j["h_coeffs"].size() == 1);
  CHECK(j["membership"][0]["verdict"] == "out");
  CHECK(r.err.find("(-,0,0,1)") != std::string::npos);
}

TEST_CASE("expand rejects a pair that is not a solution of the given order") {
  const auto p = scratch("pair2.json");
  REQUIRE(call({"compose", "--n", "3", "--q", "1", "--D", "(+,2,0,1)=1", "--out", p.string()}).code == 0);
  CHECK(call({"expand", "--input", p.string(), "--floors", "2"}).code == 2);
  CHECK(call({"expand", "--input", p.string(), "--floors", "3"}).code == 0);
}

TEST_CASE("indices warns at exceptional weights and emits csv") {
  const auto r = call({"indices", "--n", "3", "--q", "1", "--floors", "1", "--weight", "3/2", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.err.find("exceptional weight") != std::string::npos);
  CHECK(r.out.rfind("sign,k,sigma,m,degree\n", 0) == 0);
  const auto e = call({"indices", "--n", "3", "--q", "1", "--floors", "2", "--weight", "-5/4"});
  CHECK(nlohmann::json::parse(e.out)["empty"] == true);
}

TEST_CASE("hypotheses exit code follows the verdict") {
  CHECK(call({"hypotheses", "--theorem", "thm41", "--n", "5", "--weight", "1", "--tau", "2"}).code == 0);
  CHECK(call({"hypotheses", "--theorem", "thm41", "--n", "5", "--weight", "5/2", "--tau", "3"}).code == 1);
  CHECK(call({"hypotheses", "--theorem", "thm99", "--n", "5", "--weight", "1", "--tau", "2"}).code == 2);
}

TEST_CASE("iterate and recursion on a composed profile") {
  const auto p = scratch("profile.json");
  REQUIRE(call({"compose", "--n", "5", "--q", "1", "--weight", "11/4", "--D", "(-,0,0,1)=1", "--R", "(-,1,0,2)=3",
                "--out", p.string()})
              .code == 0);
  const auto it = call({"iterate", "--seed", p.string(), "--power", "2"});
  REQUIRE(it.code == 0);
  const auto j = nlohmann::json::parse(it.out);
  CHECK(j["steps"].size() == 3);
  CHECK(j["range_consistent"] == true);
  CHECK(call({"recursion", "--seed", p.string(), "--power", "1"}).code == 0);
  CHECK(call({"iterate", "--seed", p.string(), "--power", "2", "--tau", "0"}).code == 1);
}

TEST_CASE("dims and alpha agree with their cross checks") {
  const auto d = call({"dims", "--n", "5", "--sigma-max", "1", "--computed"});
  REQUIRE(d.code == 0);
  for (const auto& row : nlohmann::json::parse(d.out)["rows"]) CHECK(row["mu"] == row["computed"]);
  CHECK(call({"alpha", "--n", "7", "--q", "3", "--sign", "minus", "--sigma", "2", "--k-max", "8"}).code == 0);
}

TEST_CASE("index parsing") {
  const auto I = cli::parse_index("(-,2,1,3)");
  CHECK(I.sign == Sign::minus);
  CHECK(I.k == 2);
  CHECK(I.sigma == 1);
  CHECK(I.m == 3);
  CHECK(cli::parse_index("+,0,0,1").sign == Sign::plus);
  CHECK_THROWS(cli::parse_index("(-,2,1)"));
  CHECK_THROWS(cli::parse_index("(-,2,1,0)"));
}
