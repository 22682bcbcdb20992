#include <chrono>
#include <cstdio>
#include <string>

#include "kalikow/suites.hpp"

// Times each suite in both execution lanes and cross-checks that they
// produce identical reports.

namespace {

using namespace kalikow;
using Runner = SuiteResult (*)(const Algebra&, const SuiteOptions&);

double run_timed(Runner fn, const Algebra& alg, const SuiteOptions& opt,
                 SuiteResult& out) {
  auto t0 = std::chrono::steady_clock::now();
  out = fn(alg, opt);
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

bool same_reports(const SuiteResult& a, const SuiteResult& b) {
  return a.to_json() == b.to_json();
}

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t seed = argc > 1 ? std::stoull(argv[1]) : 42;
  Algebra pred = Algebra::predecessor();
  struct Entry {
    const char* name;
    Runner fn;
  } entries[] = {
      {"cl4", run_cl4_suite},     {"cl5", run_cl5_suite},
      {"cl7", run_cl7_suite},     {"cl8", run_cl8_suite},
      {"replay", run_replay_suite}, {"monotone", run_monotone_suite},
  };
  std::printf("%-9s %10s %10s %8s %6s\n", "suite", "serial_s", "parallel_s", "speedup",
              "same");
  bool all_same = true;
  for (const Entry& e : entries) {
    SuiteOptions opt;
    opt.seed = seed;
    SuiteResult serial, parallel;
    opt.parallel = false;
    double ts = run_timed(e.fn, pred, opt, serial);
    opt.parallel = true;
    double tp = run_timed(e.fn, pred, opt, parallel);
    bool same = same_reports(serial, parallel);
    all_same = all_same && same && serial.pass();
    std::printf("%-9s %10.3f %10.3f %8.2f %6s\n", e.name, ts, tp,
                tp > 0 ? ts / tp : 0.0, same ? "yes" : "NO");
  }
  return all_same ? 0 : 1;
}
