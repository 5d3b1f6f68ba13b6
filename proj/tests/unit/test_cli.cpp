#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "cli.hpp"
#include "curvcap/plane/io.hpp"
#include "manifest.hpp"

using namespace curvcap;
using namespace curvcap::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream o, e;
  int c = run_cli(args, o, e);
  return {c, o.str(), e.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("curvcap_cli_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) { return read_text_file(p); }

}  // namespace

TEST_CASE("fnv1a digest matches the published test vectors") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("format_double is shortest round trip") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(3.0) == "3");
  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("cantor command") {
  TempDir t;
  auto r = run({"cantor", "--n", "3", "--out", t / "c3.json"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "atoms 64 mass 1\n");
  auto m = measure_from_json(read_json_file(t / "c3.json"));
  CHECK(m.size() == 64);
  CHECK(run({"cantor", "--n", "0"}).out == "atoms 1 mass 1\n");
  CHECK(run({"cantor", "--n", "9"}).code == kExitInput);
  CHECK(run({"cantor", "--n", "-1"}).code == kExitInput);
  CHECK(run({"cantor"}).code == kExitInput);

  // Replay gives identical bytes and the manifest records both digests.
  std::string first = slurp(t / "c3.json");
  run({"cantor", "--n", "3", "--out", t / "c3.json"});
  CHECK(slurp(t / "c3.json") == first);
  auto man = RunManifest::from_json(read_json_file(t / "c3.json.manifest.json"));
  CHECK(man.command == "cantor");
  REQUIRE(man.outputs.size() == 1);
  CHECK(man.outputs[0].digest == fnv1a_hex(first));
  auto rep = run({"replay", t / "c3.json.manifest.json"});
  CHECK(rep.code == kExitOk);
  CHECK(rep.out.find("identical") != std::string::npos);

  // Replay rewrites the outputs, so a mismatch needs a wrong recorded digest.
  Json j = read_json_file(t / "c3.json.manifest.json");
  j["outputs"][0]["fnv1a"] = "0000000000000000";
  write_text_file(t / "m.json", dump_json(j));
  CHECK(run({"replay", t / "m.json"}).code == kExitReplayMismatch);
}

TEST_CASE("mv command table") {
  TempDir t;
  write_text_file(t / "line.json",
                  R"({"resolution": 1, "atoms": [{"x":0,"y":0,"re":1,"im":0},{"x":1,"y":0,"re":1,"im":0},)"
                  R"({"x":2,"y":0,"re":1,"im":0}]})");
  auto r = run({"mv", "--measure", t / "line.json", "--epsilon", "0.5,5"});
  CHECK(r.code == kExitOk);
  // eps = 0.5: each atom sees |C mu|^2 of (1+1/2)^2, 0, (1+1/2)^2 -> 4.5; eps
  // beyond the diameter truncates everything.
  CHECK(r.out == "epsilon,lhs,curv_term,remainder,mass\n0.5,4.5,0,4.5,3\n5,0,0,0,3\n");
  CHECK(run({"mv", "--measure", t / "line.json", "--epsilon", "0"}).code == kExitInput);
  CHECK(run({"mv", "--measure", t / "missing.json"}).code == kExitInput);
  write_text_file(t / "bad.json", "{oops");
  auto bad = run({"mv", "--measure", t / "bad.json"});
  CHECK(bad.code == kExitInput);
  CHECK(bad.err.find("malformed JSON") != std::string::npos);
}

TEST_CASE("estimate command") {
  TempDir t;
  write_text_file(t / "line.json",
                  R"({"resolution": 1, "atoms": [{"x":0,"y":0,"re":1,"im":0},{"x":1,"y":0,"re":1,"im":0},)"
                  R"({"x":2,"y":0,"re":1,"im":0}]})");
  auto r = run({"estimate", "--measure", t / "line.json", "--seed", "4", "--out", t / "e.json"});
  CHECK(r.code == kExitOk);
  Json j = read_json_file(t / "e.json");
  // Collinear: no curvature, and g is the growth-projected mass (scale 1/3).
  CHECK(j["curvature"].get<double>() == 0.0);
  CHECK(j["g_value"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(j["seed"].get<int>() == 4);
  CHECK(slurp(t / "e.json.trace.csv").rfind("iter,g_value,mass,curvature,scale\n", 0) == 0);
  std::string first = slurp(t / "e.json");
  run({"estimate", "--measure", t / "line.json", "--seed", "4", "--out", t / "e.json"});
  CHECK(slurp(t / "e.json") == first);

  auto few = run({"estimate", "--sweep", "2..3", "--max-iter", "1"});
  CHECK(few.code == kExitUnconverged);
  auto sw = run({"estimate", "--sweep", "1..3", "--out", t / "s.csv"});
  CHECK(sw.code == kExitOk);
  std::istringstream csv(slurp(t / "s.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "n,atoms,g,g_sqrt_n,scaling_only,curvature,converged,iterations");
  int rows = 0;
  while (std::getline(csv, line)) {
    std::vector<double> v;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) v.push_back(std::stod(cell));
    REQUIRE(v.size() == 8);
    CHECK(v[3] == doctest::Approx(v[2] * std::sqrt(v[0])).epsilon(1e-15));
    CHECK(v[2] >= v[4] - 1e-9);
    ++rows;
  }
  CHECK(rows == 3);
  CHECK(run({"estimate", "--sweep", "3..2"}).code == kExitInput);
  CHECK(run({"estimate", "--sweep", "x"}).code == kExitInput);
  CHECK(run({"estimate"}).code == kExitInput);
}

TEST_CASE("pipeline command failure paths") {
  TempDir t;
  write_text_file(t / "empty.json", R"({"segments": []})");
  CHECK(run({"pipeline", "--segments", t / "empty.json"}).code == kExitInput);
  write_text_file(t / "seg.json", R"({"segments": [[[0,0],[1,0]]]})");
  auto r = run({"pipeline", "--segments", t / "seg.json", "--lambda", "1e9", "--out", t / "p.json"});
  CHECK(r.code == kExitStage);
  CHECK(r.err.find("omega") != std::string::npos);
  Json j = read_json_file(t / "p.json");
  CHECK(j["status"] == "failed");
  CHECK(j["failed_stage"] == "omega");
  CHECK(j["stages"].size() == 2);  // surrogate, sigma
  CHECK(fs::exists(t / "p.json.manifest.json"));
  CHECK(run({"pipeline", "--segments", t / "seg.json", "--cd", "0.5"}).code == kExitInput);
}

TEST_CASE("tb command") {
  TempDir t;
  run({"cantor", "--n", "2", "--out", t / "c2.json"});
  auto r = run({"tb", "--measure", t / "c2.json", "--trials", "40", "--seed", "3", "--out", t / "tb.json"});
  CHECK(r.code == kExitOk);
  Json j = read_json_file(t / "tb.json");
  CHECK(j["paraaccretive"] == true);
  // b = 1: the b-adapted martingale is the standard one, an isometry.
  CHECK(j["martingale"]["norm_equivalence"]["lower"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(j["martingale"]["norm_equivalence"]["upper"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(j["martingale"]["reconstruction_residual"].get<double>() <= 1e-10);
  CHECK(j["carleson"]["violations"] == 0);
  CHECK(j["bad_squares"]["sweep"].size() == 4);
  CHECK(j["g_set"]["trials"] == 40);
  std::string first = slurp(t / "tb.json");
  run({"tb", "--measure", t / "c2.json", "--trials", "40", "--seed", "3", "--out", t / "tb.json"});
  CHECK(slurp(t / "tb.json") == first);

  // nu with alternating signs has |nu(C)| = 0 on the top square.
  auto mu = measure_from_json(read_json_file(t / "c2.json"));
  std::vector<Point> p(mu.positions().begin(), mu.positions().end());
  std::vector<Complex> w;
  for (std::size_t i = 0; i < mu.size(); ++i) w.push_back(i % 2 ? -mu.weight(i) : mu.weight(i));
  write_text_file(t / "nu.json", dump_json(to_json(ComplexAtomicMeasure(p, w, mu.resolution()))));
  auto bad = run({"tb", "--measure", t / "c2.json", "--nu", t / "nu.json", "--trials", "40", "--out", t / "b.json"});
  CHECK(bad.code == kExitParaaccretive);
  CHECK(read_json_file(t / "b.json")["paraaccretive"] == false);

  // nu on other atoms is an input error.
  write_text_file(t / "nu2.json", R"({"resolution": 1, "atoms": [{"x":9,"y":9,"re":1,"im":0}]})");
  CHECK(run({"tb", "--measure", t / "c2.json", "--nu", t / "nu2.json"}).code == kExitInput);
  CHECK(run({"tb", "--measure", t / "c2.json", "--m", "0"}).code == kExitInput);
}
