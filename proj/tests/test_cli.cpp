#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string g_cli;
std::string g_golden;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = g_cli + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing file: ", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct GoldenCase {
  const char* file;
  const char* args;
};

const GoldenCase kGolden[] = {
    {"encode_ep.json", "encode --spec 'ep:9;5,6' --horizon 10"},
    {"encode_cutpoints.csv",
     "encode --spec 'ep:9;5,6;2=9' --horizon 10 --format csv --cutpoints"},
    {"encode_monotone.json", "encode --spec 'ep:;5' --horizon 8 --monotone"},
    {"star_pred.json", "star --spec 'ep:9;5,6' --horizon 24"},
    {"verify_pair.json",
     "verify --pair 'ep:9;5,6|ep:9;5,6;2=9' --claims 5,7 --horizon 40"},
};

}  // namespace

TEST_CASE("repeated runs are byte-identical") {
  for (const GoldenCase& g : kGolden) {
    RunResult a = run(g.args);
    RunResult b = run(g.args);
    CHECK(a.exit_code == 0);
    CHECK(a.exit_code == b.exit_code);
    CHECK(a.out == b.out);
  }
  RunResult a = run("demo --spec 'ep:9;5,6' --target 1 --nprime 8");
  RunResult b = run("demo --spec 'ep:9;5,6' --target 1 --nprime 8");
  CHECK(a.out == b.out);
}

TEST_CASE("golden outputs") {
  for (const GoldenCase& g : kGolden) {
    RunResult r = run(g.args);
    CHECK(r.exit_code == 0);
    CHECK_MESSAGE(r.out == slurp(g_golden + "/" + g.file), "golden mismatch: ", g.file);
  }
}

TEST_CASE("exit codes") {
  CHECK(run("demo --spec 'ep:9;5,6' --target 1 --nprime 8").exit_code == 0);
  CHECK(run("verify --claims star0 --spec ramp:1,0 --algebra succ").exit_code == 1);
  CHECK(run("verify --claims nonsense").exit_code == 2);
  CHECK(run("--no-such-flag").exit_code == 2);
  CHECK(run("encode --spec bogus").exit_code == 2);
  CHECK(run("encode --spec 'ep:9;5,6' --horizon 12 --pool-budget 10").exit_code == 3);
}

TEST_CASE("suite summary is stable under parallel execution") {
  std::string args = "verify --claims replay --seed 11";
  RunResult serial = run(args);
  RunResult parallel = run(args + " --parallel");
  CHECK(serial.exit_code == 0);
  CHECK(serial.out == parallel.out);
}

TEST_CASE("config file fills unset flags") {
  std::string path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                     "/kalikow_cli_cfg.json";
  {
    std::ofstream out(path);
    out << "{\"spec\": \"ep:9;5,6\", \"horizon\": 10}\n";
  }
  RunResult via_config = run("encode --config " + path);
  RunResult direct = run("encode --spec 'ep:9;5,6' --horizon 10");
  CHECK(via_config.exit_code == 0);
  CHECK(via_config.out == direct.out);
  // explicit flags win over the file
  RunResult overridden = run("encode --config " + path + " --horizon 4");
  RunResult expect = run("encode --spec 'ep:9;5,6' --horizon 4");
  CHECK(overridden.out == expect.out);
  std::remove(path.c_str());
}

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: test_cli <cli-binary> <golden-dir>\n");
    return 2;
  }
  g_cli = argv[1];
  g_golden = argv[2];
  doctest::Context ctx;
  ctx.applyCommandLine(1, argv);
  return ctx.run();
}
