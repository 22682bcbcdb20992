#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kalikow/suites.hpp"

namespace {

using namespace kalikow;

constexpr int kExitPass = 0;
constexpr int kExitCounterexample = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;

struct RunConfig {
  std::string algebra = "pred";
  std::string spec_text;
  std::string pair_text;
  std::string claims = "4,5,7,8";
  std::string format = "json";
  std::string config_path;
  std::uint64_t horizon = 16;
  std::uint64_t seed = 1;
  std::uint64_t pool_budget = kDefaultPoolBudget;
  std::uint32_t closure_depth = 6;
  std::uint64_t target = 1;
  std::uint64_t nprime = 8;
  bool monotone = false;
  bool cutpoints = false;
  bool parallel = false;
};

Algebra make_algebra(const RunConfig& cfg) {
  if (cfg.algebra == "pred") return Algebra::predecessor();
  if (cfg.algebra == "succ") return Algebra::successor();
  if (cfg.algebra.rfind("layered", 0) == 0) {
    std::uint32_t degree = 3;
    auto colon = cfg.algebra.find(':');
    if (colon != std::string::npos)
      degree = std::uint32_t(std::stoul(cfg.algebra.substr(colon + 1)));
    return Algebra::layered(degree, cfg.closure_depth);
  }
  throw ConfigError("unknown algebra: " + cfg.algebra);
}

SequenceSpec spec_of(const RunConfig& cfg) {
  if (cfg.spec_text.empty()) throw ConfigError("--spec is required for this command");
  return SequenceSpec::parse(cfg.spec_text);
}

PairSpec pair_of(const RunConfig& cfg) {
  if (cfg.pair_text.empty()) throw ConfigError("--pair is required for this command");
  return PairSpec::parse(cfg.pair_text);
}

// A JSON file mirroring the flags fills in any option the command line left
// at its default.
void apply_config_file(const CLI::App& app, RunConfig& cfg) {
  if (cfg.config_path.empty()) return;
  std::ifstream in(cfg.config_path);
  if (!in.good()) throw ConfigError("cannot read config file: " + cfg.config_path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, true, true);
  auto unset = [&](const std::string& flag) {
    const CLI::Option* opt = app.get_option_no_throw("--" + flag);
    return opt == nullptr || opt->count() == 0;
  };
  auto load_str = [&](const char* key, std::string& into) {
    if (j.contains(key) && unset(key)) into = j[key].get<std::string>();
  };
  auto load_u64 = [&](const char* key, std::uint64_t& into) {
    if (j.contains(key) && unset(key)) into = j[key].get<std::uint64_t>();
  };
  auto load_bool = [&](const char* key, bool& into) {
    if (j.contains(key) && unset(key)) into = j[key].get<bool>();
  };
  load_str("algebra", cfg.algebra);
  load_str("spec", cfg.spec_text);
  load_str("pair", cfg.pair_text);
  load_str("claims", cfg.claims);
  load_str("format", cfg.format);
  load_u64("horizon", cfg.horizon);
  load_u64("seed", cfg.seed);
  load_u64("pool-budget", cfg.pool_budget);
  load_u64("target", cfg.target);
  load_u64("nprime", cfg.nprime);
  if (j.contains("closure-depth") && unset("closure-depth"))
    cfg.closure_depth = j["closure-depth"].get<std::uint32_t>();
  load_bool("monotone", cfg.monotone);
  load_bool("cutpoints", cfg.cutpoints);
  load_bool("parallel", cfg.parallel);
}

int cmd_encode(const RunConfig& cfg) {
  Algebra alg = make_algebra(cfg);
  SequenceSpec spec = spec_of(cfg);
  bool csv = cfg.format == "csv";
  if (cfg.monotone) {
    Prefix pre = spec.prefix(cfg.horizon);
    std::vector<std::uint64_t> stream = monotone_encode(alg, pre, cfg.pool_budget);
    std::size_t pos = 0;
    for (std::uint64_t n = 1; n <= cfg.horizon; ++n) {
      std::uint64_t count = stream[pos++];
      nlohmann::json digits = nlohmann::json::array();
      std::string csv_digits;
      for (std::uint64_t i = 0; i < count; ++i, ++pos) {
        digits.push_back(stream[pos]);
        csv_digits += (i ? " " : "") + std::to_string(stream[pos]);
      }
      if (csv)
        std::cout << n << "," << csv_digits << "\n";
      else
        std::cout << nlohmann::json{{"n", n}, {"digits", digits}}.dump() << "\n";
    }
    return kExitPass;
  }
  Session ses(alg, spec);
  if (csv) std::cout << "n,code" << (cfg.cutpoints ? ",k0,k1,l,m,k" : "") << "\n";
  for (std::uint64_t n = 0; n <= cfg.horizon; ++n) {
    CodeWord code = encode_Fn(alg, ses.prefix(n), cfg.pool_budget);
    if (csv) {
      std::cout << n << "," << code.to_string();
      if (cfg.cutpoints) {
        if (n >= 2) {
          CutPoints cp = ses.lmk(n);
          std::cout << "," << cp.k0 << "," << cp.k1 << "," << cp.l << "," << cp.m << ","
                    << cp.k;
        } else {
          std::cout << ",,,,,";
        }
      }
      std::cout << "\n";
      continue;
    }
    nlohmann::json rec{{"n", n}, {"code", code.to_string()}};
    if (cfg.cutpoints && n >= 2) {
      CutPoints cp = ses.lmk(n);
      rec["u"] = ses.u(n);
      rec["k0"] = cp.k0;
      rec["k1"] = cp.k1;
      rec["l"] = cp.l;
      rec["m"] = cp.m;
      rec["k"] = cp.k;
    }
    std::cout << rec.dump() << "\n";
  }
  return kExitPass;
}

void emit_report(const RunConfig& cfg, const PropertyReport& rep, bool& wrote_header) {
  if (cfg.format == "csv") {
    if (!wrote_header) {
      std::cout << PropertyReport::csv_header() << "\n";
      wrote_header = true;
    }
    std::cout << rep.csv_row() << "\n";
  } else {
    std::cout << rep.to_json().dump() << "\n";
  }
}

int cmd_verify(const RunConfig& cfg) {
  Algebra alg = make_algebra(cfg);
  SuiteOptions opt;
  opt.seed = cfg.seed;
  opt.horizon = 0;
  opt.parallel = cfg.parallel;
  bool all_pass = true;
  bool wrote_header = false;
  std::stringstream claims(cfg.claims);
  std::string claim;
  while (std::getline(claims, claim, ',')) {
    if (claim.empty()) continue;
    if (claim == "star0") {
      SequenceSpec spec = spec_of(cfg);
      Star0Report rep = star0_check(alg, spec, cfg.horizon);
      std::cout << rep.to_json().dump() << "\n";
      all_pass = all_pass && rep.verdict != Star0Report::Verdict::violated;
      continue;
    }
    std::uint64_t horizon = cfg.horizon;
    if (claim == "4" && !cfg.spec_text.empty()) {
      SequenceSpec spec = spec_of(cfg);
      TailReport tail = tail_u(alg, spec);
      std::vector<std::uint64_t> grid = {tail.n_star, tail.n_star + 2, tail.n_star + 4};
      PropertyReport rep = tail.violated
                               ? check_cl4(alg, spec, {}, horizon)
                               : check_cl4(alg, spec, grid, horizon);
      emit_report(cfg, rep, wrote_header);
      all_pass = all_pass && rep.pass();
      continue;
    }
    if ((claim == "5" || claim == "7" || claim == "8") && !cfg.pair_text.empty()) {
      PairSpec pair = pair_of(cfg);
      PropertyReport rep;
      if (claim == "5")
        rep = check_cl5(alg, pair, horizon);
      else if (claim == "7")
        rep = check_cl7(alg, pair, horizon);
      else {
        std::uint64_t start =
            2 + std::max(pair.left.settled_index(), pair.right.settled_index());
        rep = check_cl8(alg, pair, start, 0, horizon);
      }
      emit_report(cfg, rep, wrote_header);
      all_pass = all_pass && rep.pass();
      continue;
    }
    SuiteResult res;
    if (claim == "4")
      res = run_cl4_suite(alg, opt);
    else if (claim == "5")
      res = run_cl5_suite(alg, opt);
    else if (claim == "7")
      res = run_cl7_suite(alg, opt);
    else if (claim == "8")
      res = run_cl8_suite(alg, opt);
    else if (claim == "replay")
      res = run_replay_suite(alg, opt);
    else if (claim == "monotone")
      res = run_monotone_suite(alg, opt);
    else
      throw ConfigError("unknown claim: " + claim);
    if (cfg.format == "csv")
      std::cout << res.csv();
    else
      std::cout << nlohmann::json{{"suite", res.name},
                                  {"seed", res.seed},
                                  {"horizon", res.horizon},
                                  {"cases", res.reports.size()},
                                  {"failures", res.failures()},
                                  {"pass", res.pass()}}
                       .dump()
                << "\n";
    all_pass = all_pass && res.pass();
  }
  return all_pass ? kExitPass : kExitCounterexample;
}

int cmd_star(const RunConfig& cfg) {
  Algebra alg = make_algebra(cfg);
  SequenceSpec spec = spec_of(cfg);
  nlohmann::json out;
  bool clean = true;

  Star0Report s0 = star0_check(alg, spec, cfg.horizon);
  out["star0"] = s0.to_json();
  clean = clean && s0.verdict != Star0Report::Verdict::violated;

  // Seed the descent from the values the spec actually takes; the upward
  // algebra needs the shift rule to expose its descending chain.
  std::vector<Ordinal> gens;
  for (std::uint64_t n = 0; n < spec.settled_index() + spec.cycle_length(); ++n)
    gens.push_back(spec.entry(n));
  try {
    DescentRule rule = alg.kind() == AlgebraKind::successor ? DescentRule::shift_up
                                                            : DescentRule::drop_max;
    Star1Report s1 = star1_descent(alg, gens, 20, rule);
    out["star1"] = s1.to_json();
    clean = clean && !s1.descended;
  } catch (const ConfigError& e) {
    out["star1"] = {{"skipped", e.what()}};
  }

  try {
    Star2Report s2 = star2_probe(alg, spec, spec.settled_index());
    out["star2"] = s2.to_json();
    clean = clean && s2.holds;
  } catch (const ConfigError& e) {
    out["star2"] = {{"skipped", e.what()}};
  }

  std::cout << out.dump() << "\n";
  return clean ? kExitPass : kExitCounterexample;
}

int cmd_demo(const RunConfig& cfg) {
  Algebra alg = make_algebra(cfg);
  SequenceSpec spec = spec_of(cfg);
  if (cfg.nprime > cfg.horizon + 64)
    throw ConfigError("nprime is far beyond the horizon");
  RecoveryReport rep = decode_replay(alg, spec, cfg.target, cfg.nprime);
  std::cout << rep.to_json().dump(2) << "\n";
  return rep.status == RecoveryReport::Status::recovered ? kExitPass
                                                         : kExitCounterexample;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"encoder family and claim verification harness"};
  app.require_subcommand(1);
  app.add_option("--algebra", cfg.algebra, "pred | succ | layered[:N]");
  app.add_option("--spec", cfg.spec_text, "sequence, e.g. ep:9;5,6 or ramp:1,0");
  app.add_option("--pair", cfg.pair_text, "pair, e.g. ep:9;5,6|ep:9;5,6;2=9");
  app.add_option("--horizon", cfg.horizon, "prefix-length horizon");
  app.add_option("--claims", cfg.claims, "comma list: 4,5,7,8,replay,monotone,star0");
  app.add_option("--seed", cfg.seed, "suite seed");
  app.add_option("--format", cfg.format, "json | csv");
  app.add_option("--pool-budget", cfg.pool_budget, "term pool budget");
  app.add_option("--closure-depth", cfg.closure_depth, "bounded closure depth");
  app.add_option("--target", cfg.target, "demo: index to recover");
  app.add_option("--nprime", cfg.nprime, "demo: bound the chain must clear");
  app.add_option("--config", cfg.config_path, "JSON file mirroring the flags");
  app.add_flag("--monotone", cfg.monotone, "emit prefix-monotone blocks");
  app.add_flag("--cutpoints", cfg.cutpoints, "include cut statistics per record");
  app.add_flag("--parallel", cfg.parallel, "run suite cases in parallel");
  CLI::App* encode = app.add_subcommand("encode", "emit code words per prefix length");
  CLI::App* verify = app.add_subcommand("verify", "run claim suites");
  CLI::App* star = app.add_subcommand("star", "run the closure property battery");
  CLI::App* demo = app.add_subcommand("demo", "replay the decoding argument");
  for (CLI::App* sub : {encode, verify, star, demo}) sub->fallthrough();

  try {
    app.parse(argc, argv);
    apply_config_file(app, cfg);
    if (cfg.format != "json" && cfg.format != "csv")
      throw ConfigError("unknown format: " + cfg.format);
    if (encode->parsed()) return cmd_encode(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    if (star->parsed()) return cmd_star(cfg);
    if (demo->parsed()) return cmd_demo(cfg);
    return kExitConfig;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  }
}
