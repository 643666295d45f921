#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "cpgenus/bieberbach.hpp"
#include "cpgenus/classdata.hpp"

using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
  json j() const { return json::parse(out); }
};

Result run(std::initializer_list<std::string> args) {
  std::vector<std::string> store{"cpgenus"};
  store.insert(store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : store) argv.push_back(s.c_str());
  std::ostringstream out, err;
  int code = cpgenus::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempFile {
 public:
  explicit TempFile(const std::string& name, const std::string& content)
      : path_(std::filesystem::temp_directory_path() / ("cpgenus_cli_" + name)) {
    std::ofstream(path_) << content;
  }
  ~TempFile() { std::filesystem::remove(path_); }
  std::string path() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

const char* kP29 = R"({
  "p": 29,
  "h_minus": 8,
  "factors": [2, 2, 2],
  "galois_generator": 2,
  "action": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
  "provenance": "user-file"
})";

}  // namespace

TEST_SUITE("reports") {
  TEST_CASE("class numbers") {
    auto r = run({"classnumber", "-p", "7"});
    CHECK(r.code == 0);
    CHECK(r.out == "{\"p\":7,\"h_minus\":1}\n");
    CHECK(run({"classnumber", "-p", "23"}).j()["h_minus"] == 3);
    CHECK(run({"classnumber", "-p", "2"}).j()["h_minus"] == 1);
  }

  TEST_CASE("enumeration and genus") {
    auto r = run({"bieberbach", "enumerate", "-n", "23", "-p", "23"});
    REQUIRE(r.code == 0);
    CHECK(r.j()["iso_classes"] == 2);
    CHECK(r.j()["profinite_classes"] == 1);
    CHECK(run({"bieberbach", "genus", "--tuple", "1,1,0", "-p", "13"}).out == "{\"genus_size\":1}\n");
    auto g = run({"bieberbach", "genus", "--tuple", "1,0,1", "-p", "23", "--members"});
    CHECK(g.j()["genus_size"] == 2);
    CHECK(g.j()["members"].size() == 2);
  }

  TEST_CASE("csv enumeration") {
    auto r = run({"--format", "csv", "bieberbach", "enumerate", "-n", "24", "-p", "23"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "n,p,a,b,c,theta,exceptional,genus_size");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 4);
  }

  TEST_CASE("orbits") {
    auto r = run({"orbits", "-p", "23", "--subgroup", "c2"});
    CHECK(r.j()["count"] == 2);
    CHECK(r.j()["burnside"] == 2);
    CHECK(r.j()["representatives"] == json::parse("[[0],[1]]"));
  }

  TEST_CASE("ideal commands") {
    CHECK(run({"ideal", "norm", "-p", "23", "--ideal", "47^2"}).j()["norm"] == 2209);
    auto s = run({"ideal", "split", "-p", "5", "-q", "11"});
    CHECK(s.j()["root"] == 3);
    CHECK(s.j()["ideal"]["p"] == 5);
    auto m = run({"ideal", "mul", "-p", "5", "--ideal", "11", "--ideal", "31"});
    CHECK(m.code == 0);
    TempFile f("ideal.json", m.out);
    CHECK(run({"ideal", "norm", "-p", "5", "--ideal", "file:" + f.path()}).j()["norm"] == 341);
    CHECK(run({"ideal", "galois", "-p", "5", "--ideal", "11", "-k", "2"}).j()["p"] == 5);
    CHECK(run({"ideal", "gram", "-p", "3", "--ideal", "1"}).j()["gram"] == json::parse("[[2,-1],[-1,2]]"));
  }

  TEST_CASE("principality verdicts") {
    auto yes = run({"ideal", "principal", "-p", "23", "--ideal", "47^3"});
    CHECK(yes.code == 0);
    CHECK(yes.j()["status"] == "principal");
    CHECK(yes.j()["generator_norm"] == 103823);
    auto no = run({"ideal", "principal", "-p", "23", "--ideal", "47"});
    CHECK(no.code == 0);
    CHECK(no.j()["status"] == "indeterminate");
    CHECK(run({"ideal", "class", "-p", "23", "--ideal", "47*47"}).j()["class"] == json::parse("[2]"));
  }

  TEST_CASE("construct, decompose and steinitz through files") {
    auto c = run({"--format", "text", "construct", "-p", "5", "--tuple", "1,1,1", "--ideals", "11,31"});
    REQUIRE(c.code == 0);
    TempFile f("action.txt", c.out);
    auto d = run({"decompose", "--matrix", f.path()});
    CHECK(d.out == "{\"a\":1,\"b\":1,\"c\":1,\"steinitz\":[]}\n");
    CHECK(run({"steinitz", "--matrix", f.path(), "-p", "5"}).j()["steinitz"] == json::array());
    CHECK(run({"decompose", "--matrix", f.path(), "-p", "7"}).code == 1);

    auto j = run({"construct", "-p", "3", "--tuple", "1,0,1"}).j();
    CHECK(j["n"] == 4);
    TempFile bare("bare.txt", "1 1\n1\n");
    CHECK(run({"decompose", "--matrix", bare.path()}).code == 2);
    CHECK(run({"decompose", "--matrix", bare.path(), "-p", "3"}).j()["a"] == 1);
  }

  TEST_CASE("affine models") {
    auto b = run({"bieberbach", "build", "-p", "2", "--tuple", "1,1,0"});
    REQUIRE(b.code == 0);
    CHECK(b.j()["gamma"] == json::parse(R"([[1,0,"1/2"],[0,-1,0],[0,0,1]])"));
    CHECK(b.j()["torsion_free"] == true);
    auto s = run({"bieberbach", "build", "-p", "3", "--tuple", "0,1,0", "--semidirect"});
    CHECK(s.j()["torsion_free"] == false);
    auto t = run({"--format", "text", "bieberbach", "build", "-p", "3", "--tuple", "1,1,0"});
    std::istringstream in(t.out);
    auto a = cpgenus::bieberbach::read_affine(in);
    CHECK(a.p == 3);
    CHECK(a.dimension() == 3);
  }

  TEST_CASE("pair decisions and fingerprints") {
    CHECK(run({"bieberbach", "iso", "-p", "23", "--tuple", "1,1,0", "--theta", "1", "--tuple2", "1,1,0", "--theta2", "2"})
              .j()["isomorphic"] == true);
    CHECK(run({"bieberbach", "iso", "-p", "23", "--tuple", "1,1,0", "--tuple2", "1,1,0", "--theta2", "1"})
              .j()["isomorphic"] == false);
    CHECK(run({"bieberbach", "profinite-iso", "-p", "23", "--tuple", "1,1,0", "--tuple2", "1,1,0", "--theta2", "1"})
              .j()["profinite_isomorphic"] == true);
    auto f0 = run({"bieberbach", "fingerprint", "-p", "23", "--tuple", "1,1,0", "--moduli", "2,3"});
    auto f1 = run({"bieberbach", "fingerprint", "-p", "23", "--tuple", "1,1,0", "--theta", "1", "--moduli", "2,3"});
    CHECK(f0.code == 0);
    CHECK(f0.out == f1.out);
    auto v = run({"bieberbach", "validate", "-p", "5", "--tuple", "0,1,0"});
    CHECK(v.code == 0);
    CHECK(v.j()["valid"] == false);
    CHECK(v.j()["violations"] == json::parse(R"(["a=0"])"));
  }

  TEST_CASE("reports are deterministic") {
    auto a = run({"selfcheck", "--seed", "7", "--count", "8"});
    auto b = run({"selfcheck", "--seed", "7", "--count", "8"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.j()["failures"].empty());
    CHECK(run({"bieberbach", "enumerate", "-n", "24", "-p", "23"}).out ==
          run({"bieberbach", "enumerate", "-n", "24", "-p", "23"}).out);
  }
}

TEST_SUITE("class data files") {
  TEST_CASE("show round-trips a file") {
    TempFile f("p29.json", kP29);
    auto r = run({"classgroup", "show", "-p", "29", "--file", f.path()});
    REQUIRE(r.code == 0);
    CHECK(r.out == cpgenus::classdata::serialize(cpgenus::classdata::parse_class_group(kP29)));
    TempFile again("p29b.json", r.out);
    CHECK(run({"classgroup", "show", "-p", "29", "--file", again.path()}).out == r.out);
    CHECK(run({"classgroup", "show", "-p", "23"}).j()["provenance"] == "builtin");
  }

  TEST_CASE("user data beyond the builtin range") {
    TempFile f("p29c.json", kP29);
    CHECK(run({"orbits", "-p", "29"}).code == 1);
    auto r = run({"--class-data", f.path(), "orbits", "-p", "29"});
    REQUIRE(r.code == 0);
    CHECK(r.j()["count"] == 8);
    CHECK(run({"--class-data", f.path(), "bieberbach", "genus", "-p", "29", "--tuple", "1,0,1"}).j()["genus_size"] == 8);
    // no reference ideals are known for this data
    CHECK(run({"--class-data", f.path(), "bieberbach", "build", "-p", "29", "--tuple", "1,1,0"}).code == 1);
  }

  TEST_CASE("overriding builtin data needs an explicit flag") {
    auto text = cpgenus::classdata::serialize(cpgenus::classdata::builtin_class_group(23));
    TempFile f("p23.json", text);
    CHECK(run({"--class-data", f.path(), "orbits", "-p", "23"}).code == 2);
    CHECK(run({"--class-data", f.path(), "--allow-override", "orbits", "-p", "23"}).code == 0);
  }

  TEST_CASE("inconsistent data is a domain error") {
    std::string bad = kP29;
    bad.replace(bad.find("[2, 2, 2]"), 9, "[8]");
    bad.replace(bad.find("[[1, 0, 0], [0, 1, 0], [0, 0, 1]]"), 33, "[[3]]");
    TempFile ok("p29d.json", bad);
    CHECK(run({"--class-data", ok.path(), "orbits", "-p", "29"}).code == 0);
    std::string wrong_h = kP29;
    wrong_h.replace(wrong_h.find("\"h_minus\": 8"), 12, "\"h_minus\": 4");
    wrong_h.replace(wrong_h.find("[2, 2, 2]"), 9, "[2, 2]");
    wrong_h.replace(wrong_h.find("[[1, 0, 0], [0, 1, 0], [0, 0, 1]]"), 33, "[[1, 0], [0, 1]]");
    TempFile f("p29e.json", wrong_h);
    auto r = run({"--class-data", f.path(), "orbits", "-p", "29"});
    CHECK(r.code == 1);
    CHECK(r.j()["error"] == "domain");
    TempFile garbage("p29f.json", "{not json");
    auto g = run({"--class-data", garbage.path(), "orbits", "-p", "29"});
    CHECK(g.code == 1);
    CHECK(g.j().contains("message"));
  }
}

TEST_SUITE("exit codes") {
  TEST_CASE("usage errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"classnumber"}).code == 2);
    CHECK(run({"nonsense"}).code == 2);
    CHECK(run({"--format", "xml", "classnumber", "-p", "7"}).code == 2);
    CHECK(run({"--format", "csv", "classnumber", "-p", "7"}).code == 2);
    CHECK(run({"--radius", "-1", "classnumber", "-p", "7"}).code == 2);
    CHECK(run({"construct", "-p", "5", "--tuple", "1,1"}).code == 2);
    CHECK(run({"orbits", "-p", "23", "--subgroup", "c3"}).code == 2);
    auto r = run({"classnumber"});
    CHECK(r.out.empty());
    CHECK_FALSE(r.err.empty());
  }

  TEST_CASE("domain errors carry an error report") {
    auto r = run({"classnumber", "-p", "9"});
    CHECK(r.code == 1);
    CHECK(r.j()["error"] == "domain");
    CHECK(run({"bieberbach", "genus", "-p", "23", "--tuple", "1,0,0"}).code == 1);
    CHECK(run({"ideal", "split", "-p", "5", "-q", "13"}).code == 1);
    CHECK(run({"decompose", "--matrix", "/nonexistent/file"}).j()["error"] == "input");
  }

  TEST_CASE("help") {
    auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("bieberbach") != std::string::npos);
  }
}
