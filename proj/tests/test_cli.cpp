#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

int cli(const std::string& args) {
  std::string cmd = std::string(SPANNER_CLI) + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path p = fs::temp_directory_path() / ("spanner_cli_" + std::to_string(::getpid()));
  TempDir() { fs::create_directories(p); }
  ~TempDir() { fs::remove_all(p); }
  std::string operator/(const std::string& f) const { return (p / f).string(); }
};

}  // namespace

TEST_CASE("run imp3 writes all reports") {
  TempDir d;
  CHECK(cli("run --alg imp3 --gen er:n=100,p=0.1 --seed 1 --out " + d / "report.json") == 0);
  auto j = nlohmann::json::parse(slurp(d / "report.json"));
  CHECK(j["pass"] == true);
  CHECK(j["stretch"]["max_stretch"].get<double>() <= 3.0);
  CHECK(fs::exists(d / "report.edges"));
  CHECK(slurp(d / "report.csv").rfind("n,m,k,H,rounds,max_bits,max_stretch\n100,", 0) == 0);
}

TEST_CASE("odd k runs the odd path") {
  TempDir d;
  CHECK(cli("run --alg improved --k 3 --gen er:n=120,p=0.1 --out " + d / "r.json") == 0);
  auto j = nlohmann::json::parse(slurp(d / "r.json"));
  CHECK(j["stats"]["last_level"] == 1);
  CHECK(j["stats"]["path"] == "improved");
}

TEST_CASE("k is ignored for fixed-k algorithms") {
  TempDir d;
  CHECK(cli("run --alg imp3 --k 5 --gen er:n=50,p=0.1 --out " + d / "r.json") == 0);
  CHECK(nlohmann::json::parse(slurp(d / "r.json"))["k"] == 2);
}

TEST_CASE("K4 with imp3 keeps all six edges") {
  TempDir d;
  CHECK(cli("run --alg imp3 --gen kn:n=4 --out " + d / "k4.json") == 0);
  // pinned from a recorded run
  CHECK(slurp(d / "k4.csv") == "n,m,k,H,rounds,max_bits,max_stretch\n4,6,2,6,13,14,1\n");
}

TEST_CASE("empty graph gives a zero row") {
  TempDir d;
  CHECK(cli("run --alg naive --k 3 --gen er:n=0,p=0.1 --out " + d / "e.json") == 0);
  CHECK(slurp(d / "e.csv") == "n,m,k,H,rounds,max_bits,max_stretch\n0,0,3,0,0,0,0\n");
}

TEST_CASE("reports are byte-identical across runs") {
  TempDir d;
  for (const char* alg : {"naive --k 3", "improved --k 4", "zerosc --k 4", "bs-baseline --k 3"}) {
    CHECK(cli(std::string("run --alg ") + alg + " --gen er:n=90,p=0.1 --out " + d / "a.json") == 0);
    CHECK(cli(std::string("run --alg ") + alg + " --gen er:n=90,p=0.1 --out " + d / "b.json") == 0);
    CHECK(slurp(d / "a.json") == slurp(d / "b.json"));
    CHECK(slurp(d / "a.edges") == slurp(d / "b.edges"));
    CHECK(slurp(d / "a.csv") == slurp(d / "b.csv"));
  }
}

TEST_CASE("every registered algorithm passes on a small graph") {
  TempDir d;
  for (const char* a : {"naive --k 4", "improved --k 4", "naive-bfs-zero --k 4", "zerosc --k 4",
                        "bs-baseline --k 4", "imp3", "small-id"})
    CHECK(cli(std::string("run --alg ") + a + " --gen er:n=80,p=0.1 --out " + d / "r.json") == 0);
  for (const char* a : {"sparserbip --k 4", "sparserbip --k 5", "bip3"})
    CHECK(cli(std::string("run --alg ") + a + " --gen bip:a=20,b=60,p=0.2 --out " + d / "r.json") == 0);
}

TEST_CASE("verify subcommand") {
  TempDir d;
  CHECK(cli("run --alg naive --k 3 --gen er:n=60,p=0.2 --save-graph " + d / "g.txt" + " --out " + d / "h.json") == 0);
  CHECK(cli("verify --graph " + d / "g.txt" + " --spanner " + d / "h.edges" + " --t 5") == 0);
  // a spanning path of C_9 has stretch 8
  {
    std::ofstream f(d / "c9.txt");
    for (int i = 0; i < 9; ++i) f << i << ' ' << (i + 1) % 9 << '\n';
    std::ofstream t(d / "p9.txt");
    for (int i = 0; i < 8; ++i) t << i << ' ' << i + 1 << '\n';
  }
  CHECK(cli("verify --graph " + d / "c9.txt" + " --spanner " + d / "p9.txt" + " --t 3") == 1);
  CHECK(cli("verify --graph " + d / "c9.txt" + " --spanner " + d / "p9.txt" + " --t 8") == 0);
}

TEST_CASE("exit codes for bad input") {
  TempDir d;
  const std::string out = " --out " + d / "x.json";
  CHECK(cli("run --alg bogus --k 3 --gen er:n=10,p=0.5" + out) == 2);
  CHECK(cli("run --alg naive --gen er:n=10,p=0.5" + out) == 2);
  CHECK(cli("run --alg naive --k 1 --gen er:n=10,p=0.5" + out) == 2);
  CHECK(cli("run --alg improved --k 4 --weighted --gen er:n=10,p=0.5" + out) == 2);
  CHECK(cli("run --alg sparserbip --k 4 --gen kn:n=5" + out) == 2);
  CHECK(cli("run --alg naive --k 3 --gen nosuch:n=3" + out) == 2);
  CHECK(cli("run --alg naive --k 3" + out) == 2);
  CHECK(cli("run --alg naive --k 3 --graph " + d / "missing.txt" + out) == 3);
  CHECK(cli("run --alg naive --k 3 --gen er:n=10,p=0.5 --out /nonexistent/dir/x.json") == 3);
  CHECK(cli("frobnicate") == 2);
}

TEST_CASE("weighted 3-spanners from the CLI") {
  TempDir d;
  CHECK(cli("run --alg imp3 --weighted --gen er:n=80,p=0.2 --out " + d / "w.json") == 0);
  CHECK(nlohmann::json::parse(slurp(d / "w.json"))["graph"]["weighted"] == true);
}
