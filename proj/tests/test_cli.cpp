#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(EPISHAPE_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("epishape_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(run("") == 2);
  CHECK(run("epidemic --no-such-flag 1") == 2);
  CHECK(run("epidemic --t 2") == 2);  // no recovery law
  CHECK(run("epidemic --recovery const:0.0 --t 2") == 2);
  CHECK(run("epidemic --recovery exp:1 --d x") == 2);
}

TEST_CASE("truncation exits 3") {
  const auto dir = scratch("trunc");
  CHECK(run("radial --recovery const:1 -L 4 --c-prime 8 --n-ladder 1,2,3 --replicas 4 --out " + dir.string()) == 3);
}

TEST_CASE("epidemic output is byte-identical across reruns and thread counts") {
  const auto a = scratch("a"), b = scratch("b");
  const std::string common = "epidemic --recovery exp:1 --lambda 1.5 -L 6 --t 3 --seed 5 --out ";
  REQUIRE(run(common + a.string()) == 0);
  REQUIRE(run(common + b.string() + " --jobs 1") == 0);
  const auto ta = slurp(a / "epidemic.csv");
  CHECK(ta.rfind("# epishape ", 0) == 0);
  CHECK(ta.find("seed=5") != std::string::npos);
  CHECK(ta == slurp(b / "epidemic.csv"));
}

TEST_CASE("config file and flag precedence") {
  const auto dir = scratch("cfg");
  {
    std::ofstream f(dir / "run.ini");
    f << "[field]\nrecovery = exp:1\nlambda = 0.1\n[experiment]\nL = 5\nt = 2\n";
  }
  REQUIRE(run("epidemic --config " + (dir / "run.ini").string() + " --out " + (dir / "x").string()) == 0);
  REQUIRE(run("epidemic --config " + (dir / "run.ini").string() + " --lambda 3 --out " + (dir / "y").string()) == 0);
  CHECK(slurp(dir / "x" / "epidemic.csv") != slurp(dir / "y" / "epidemic.csv"));
  {
    std::ofstream f(dir / "bad.ini");
    f << "recovery = exp:1\nlambdaa = 2\n";
  }
  CHECK(run("epidemic --config " + (dir / "bad.ini").string()) == 2);
}

TEST_CASE("shape writes radii with provenance") {
  const auto dir = scratch("shape");
  REQUIRE(run("shape --recovery const:1 --t 3 -L 16 --replicas 4 --refinement 1 --out " + dir.string()) == 0);
  const auto radii = slurp(dir / "radii.csv");
  CHECK(radii.rfind("# epishape ", 0) == 0);
  CHECK(radii.find("direction") != std::string::npos);
}

TEST_CASE("verify --quick passes") { CHECK(run("verify --quick") == 0); }
