#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "oracles.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch_dir() {
  const fs::path p = fs::temp_directory_path() / "womc_cli_tests";
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs womctl with `args`; stdout goes to `out`.
int womctl(const std::string& args, const fs::path& out) {
  const std::string cmd = std::string("\"") + WOMCTL_PATH + "\" " + args + " > \"" + out.string() + "\" 2> \"" +
                          (out.string() + ".err") + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string fx(const char* name) { return "--scenario \"" + oracle::fixture(name) + "\""; }

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string l; std::getline(ss, l);) out.push_back(l);
  return out;
}

std::vector<std::string> label_names(const json& arr) {
  std::vector<std::string> out;
  for (const auto& l : arr)
    out.push_back(l.at("kind").get<std::string>() + std::to_string(l.at("agent").get<int>()) + "@" +
                  std::to_string(l.at("time").get<int>()));
  return out;
}

}  // namespace

TEST_CASE("validate") {
  const fs::path dir = scratch_dir();
  CHECK(womctl("validate " + fx("instance_a.wom"), dir / "v.txt") == 0);
  CHECK(womctl("validate --scenario /nonexistent.wom", dir / "v.txt") == 2);
  CHECK(slurp(dir / "v.txt.err").find("error: Io") == 0);

  std::string doc = slurp(oracle::fixture("instance_a.wom"));
  doc.replace(doc.find("a 0.6"), 5, "a 0.5");
  std::ofstream(dir / "bad.wom") << doc;
  CHECK(womctl("validate --scenario \"" + (dir / "bad.wom").string() + "\"", dir / "v.txt") == 2);
  CHECK(slurp(dir / "v.txt.err").find("error: ") == 0);
  CHECK(womctl("frobnicate", dir / "v.txt") == 2);
}

TEST_CASE("compare agrees across methods on Instance A") {
  const fs::path dir = scratch_dir();
  REQUIRE(womctl("compare " + fx("instance_a.wom"), dir / "c.csv") == 0);
  const auto rows = lines(slurp(dir / "c.csv"));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "method,value,candidates,seconds,match_brute");
  CHECK(rows[1].rfind("brute,0.3065,", 0) == 0);
  CHECK(rows[2].rfind("common-info,0.3065,", 0) == 0);
  CHECK(rows[3].rfind("structural,0.3065,", 0) == 0);
  for (std::size_t i = 1; i < 4; ++i) CHECK(rows[i].substr(rows[i].size() - 7) == ",NA,yes");
}

TEST_CASE("solve reports caps with exit code 3") {
  const fs::path dir = scratch_dir();
  CHECK(womctl("solve --method brute " + fx("instance_a_prime.wom"), dir / "s.json") == 3);
  CHECK(slurp(dir / "s.json.err").find("error: EnumerationCapExceeded") == 0);
  REQUIRE(womctl("solve --method structural --agent 1 " + fx("instance_a.wom"), dir / "s.json") == 0);
  const json j = json::parse(slurp(dir / "s.json"));
  CHECK(j.at("method") == "structural");
  CHECK(j.at("agent") == 1);
  CHECK(j.at("value").get<double>() == doctest::Approx(0.3065));
  CHECK_FALSE(j.contains("seconds"));
}

TEST_CASE("infostruct lists the sets of the two-agent cycle") {
  const fs::path dir = scratch_dir();
  REQUIRE(womctl("infostruct --t 2 " + fx("instance_a.wom"), dir / "i.json") == 0);
  const json j = json::parse(slurp(dir / "i.json"));
  CHECK(j.at("time") == 2);
  const json& a1 = j.at("agents").at(0);
  CHECK(label_names(a1.at("memory")) ==
        std::vector<std::string>{"Y1@0", "U1@0", "Y1@1", "U1@1", "Y1@2", "Y2@0", "U2@0", "Y2@1"});
  CHECK(label_names(a1.at("inaccessible").at("2")) == std::vector<std::string>{"U1@1", "Y1@2"});
  CHECK(a1.at("inaccessible").at("1").empty());
  const json& a2 = j.at("agents").at(1);
  CHECK(label_names(a2.at("accessible")) ==
        std::vector<std::string>{"Y1@0", "U1@0", "Y1@1", "Y2@0", "U2@0", "Y2@1"});
  CHECK(label_names(a2.at("new")) == std::vector<std::string>{"U1@0", "Y1@1", "U2@0", "Y2@1"});
}

TEST_CASE("belief of a recorded history") {
  const fs::path dir = scratch_dir();
  std::ofstream(dir / "h.json") << R"({"time": 1, "accessible": {"Y1@0": "y1", "Y2@0": "y0"},
    "prescriptions": [{"1": {"Y1@0=y0": "u1", "Y1@0=y1": "u0"}, "2": {"Y2@0=y0": "u1"}}]})";
  REQUIRE(womctl("belief --agent 2 --history \"" + (dir / "h.json").string() + "\" " + fx("instance_a.wom"),
                 dir / "b.json") == 0);
  const json j = json::parse(slurp(dir / "b.json"));
  CHECK(j.at("agent") == 2);
  double total = 0;
  for (const auto& st : j.at("states")) {
    total += st.at("prob").get<double>();
    const json& l = st.at("l");
    CHECK(l.at("U1@0") == "u0");
    CHECK(l.at("U2@0") == "u1");
    CHECK(l.at("Y2@1") == "y0");
    CHECK(l.at("Y1@1") == (st.at("x") == "a" ? "y0" : "y1"));
  }
  CHECK(total == doctest::Approx(1.0));

  std::ofstream(dir / "h0.json") << R"({"time": 0, "accessible": {}, "prescriptions": []})";
  CHECK(womctl("belief --agent 2 --history \"" + (dir / "h0.json").string() + "\" " + fx("instance_a.wom"),
               dir / "b.json") == 0);
  std::ofstream(dir / "hz.json") << R"({"time": 1, "accessible": {"Y1@0": "y1", "Y2@0": "y1"}, "prescriptions": [{}]})";
  CHECK(womctl("belief --agent 2 --history \"" + (dir / "hz.json").string() + "\" " + fx("instance_a.wom"),
               dir / "b.json") == 2);
  CHECK(slurp(dir / "b.json.err").find("ZeroProbability") != std::string::npos);
}

TEST_CASE("export-strategy writes every part of the owner") {
  const fs::path dir = scratch_dir();
  REQUIRE(womctl("export-strategy --method common-info " + fx("instance_a.wom") + " --out \"" +
                     (dir / "x.json").string() + "\"",
                 dir / "x.txt") == 0);
  const json j = json::parse(slurp(dir / "x.json"));
  CHECK(j.at("owner") == 2);
  for (const char* target : {"1", "2"})
    for (const char* t : {"0", "1", "2"}) CHECK_FALSE(j.at("parts").at(target).at(t).empty());
  CHECK(j.at("parts").at("1").at("0").contains("-"));
  REQUIRE(womctl("export-strategy --method brute --agent 1 " + fx("instance_a.wom"), dir / "y.json") == 0);
  CHECK(json::parse(slurp(dir / "y.json")).at("owner") == 1);
}

TEST_CASE("verify flags a corrupted transition model") {
  const fs::path dir = scratch_dir();
  CHECK(womctl("verify " + fx("instance_a.wom"), dir / "r.json") == 0);
  CHECK(json::parse(slurp(dir / "r.json")).at("pass") == true);
  CHECK(womctl("verify --corrupt-transition " + fx("instance_a.wom"), dir / "r.json") == 1);
  const json j = json::parse(slurp(dir / "r.json"));
  for (const auto& c : j.at("checks"))
    if (c.at("name") == "witsenhausen_determinism") {
      CHECK(c.at("pass") == false);
      CHECK_FALSE(c.at("counterexample").get<std::string>().empty());
    }
}
