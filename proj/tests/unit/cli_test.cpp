#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() /
          ("milnorkit-cli-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter()++));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " \"" MILNORKIT_CLI_PATH "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("formulas writes a report") {
    Scratch s;
    CHECK(run("--out-dir " + s.dir.string() + " formulas --m 3 --k 2 --chi-f 1") == 0);
    const auto report = s.dir / "formulas-M3-K2-chi1" / "report.json";
    REQUIRE(fs::exists(report));
    CHECK(slurp(report).find("\"db\": 0") != std::string::npos);
    CHECK(fs::exists(s.dir / "formulas-M3-K2-chi1" / "run.json"));
    CHECK(run("--out-dir " + s.dir.string() + " --format csv formulas --m 3 --k 2 --chi-f 1") == 0);
    CHECK(fs::exists(s.dir / "formulas-M3-K2-chi1" / "report.csv"));
  }

  TEST_CASE("usage and hypothesis errors exit 2") {
    Scratch s;
    const std::string out = "--out-dir " + s.dir.string() + " ";
    CHECK(run(out + "formulas --m 2 --k 2 --chi-f 1") == 2);
    CHECK(run(out + "formulas --m 3") == 2);
    CHECK(run(out + "openbook linear-3-2 --stage 1 --angles 0") == 2);
    CHECK(run(out + "catalog show no-such-germ") == 2);
    CHECK(run(out + "verify no-such-germ") == 2);
    CHECK(run(out + "frobnicate") == 2);
    CHECK(run("--help") == 0);
  }

  TEST_CASE("exhausted clique budget exits 3") {
    Scratch s;
    CHECK(run("--out-dir " + s.dir.string() +
              " verify linear-3-2 --stage 1 --kinds boundary --budget 1") == 3);
    const auto verdict = slurp(s.dir / "linear-3-2" / "verdict.json");
    CHECK(verdict.find("UNSTABLE") != std::string::npos);
  }

  TEST_CASE("output directory from the environment") {
    Scratch s;
    const auto env_dir = s.dir / "from-env";
    const std::string env = "MILNORKIT_OUT_DIR=\"" + env_dir.string() + "\"";
    CHECK(run("formulas --m 4 --k 2 --chi-f 0", env) == 0);
    CHECK(fs::exists(env_dir / "formulas-M4-K2-chi0" / "report.json"));
    // An explicit flag wins over the environment.
    const auto flag_dir = s.dir / "from-flag";
    CHECK(run("--out-dir " + flag_dir.string() + " formulas --m 4 --k 2 --chi-f 0", env) == 0);
    CHECK(fs::exists(flag_dir / "formulas-M4-K2-chi0" / "report.json"));
    CHECK(run("catalog list", env) == 0);
    CHECK(run("catalog show zw-4-2", env) == 0);
  }

  TEST_CASE("sample exports a cloud") {
    Scratch s;
    CHECK(run("--out-dir " + s.dir.string() + " sample linear-3-2 --kind boundary --stage 2 --n 200") == 0);
    bool found = false;
    for (const auto& e : fs::recursive_directory_iterator(s.dir))
      if (e.path().extension() == ".mkpc") {
        found = true;
        CHECK(slurp(e.path()).rfind("MKPC", 0) == 0);
      }
    CHECK(found);
  }

  TEST_CASE("replay reproduces the report") {
    Scratch s;
    const auto first = s.dir / "first";
    const auto second = s.dir / "second";
    REQUIRE(run("--out-dir " + first.string() +
                " --seed 4 verify linear-3-2 --stage 2 --kinds boundary,link") == 0);
    const auto record = first / "linear-3-2" / "run.json";
    REQUIRE(fs::exists(record));
    CHECK(run("replay " + record.string() + " --out-dir " + second.string()) == 0);
    const auto a = slurp(first / "linear-3-2" / "verdict.json");
    const auto b = slurp(second / "linear-3-2" / "verdict.json");
    CHECK_FALSE(a.empty());
    CHECK(a == b);
    CHECK(slurp(first / "linear-3-2" / "scans.json") == slurp(second / "linear-3-2" / "scans.json"));
  }
}
