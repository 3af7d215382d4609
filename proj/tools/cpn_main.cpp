#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cpn/bench.hpp"
#include "cpn/errors.hpp"
#include "cpn/firing_set.hpp"
#include "cpn/generators.hpp"
#include "cpn/milp.hpp"
#include "cpn/net_format.hpp"
#include "cpn/reachability.hpp"
#include "cpn/witness.hpp"
#include "cpn/yield.hpp"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cpn::InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

json names_of(const cpn::Cpn& net, const cpn::IndexSet& transitions) {
  json arr = json::array();
  for (cpn::Index t : transitions) arr.push_back(net.transition_name(t));
  return arr;
}

json parikh_json(const cpn::Cpn& net, const cpn::Parikh& v) {
  json obj = json::object();
  for (cpn::Index t : v.support()) obj[net.transition_name(t)] = cpn::format_rat(v[t]);
  return obj;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

int run_fireable(const std::string& net_path, const std::string& subset) {
  cpn::ParsedNet parsed = cpn::parse_net(read_file(net_path));
  cpn::FireableResult result = cpn::fireable(parsed.net, parsed.m0, split_commas(subset));
  json out;
  out["query"] = "fireable";
  out["member"] = result.member;
  out["max_subset"] = names_of(parsed.net, result.max_subset);
  json order = json::array();
  for (cpn::Index t : result.order) order.push_back(parsed.net.transition_name(t));
  out["order"] = order;
  std::cout << out.dump(2) << "\n";
  return result.member ? kExitTrue : kExitFalse;
}

int run_reach(const std::string& net_path, const std::string& target_path, bool limit) {
  cpn::ParsedNet parsed = cpn::parse_net(read_file(net_path));
  cpn::Marking target = cpn::parse_marking(parsed.net, read_file(target_path));
  Timer timer;
  cpn::ReachResult result =
      cpn::reachable(parsed.net, parsed.m0, target,
                     limit ? cpn::ReachMode::Limit : cpn::ReachMode::Finite);
  json out;
  out["query"] = "reach";
  out["mode"] = limit ? "limit" : "finite";
  out["reachable"] = result.reachable;
  out["support"] = names_of(parsed.net, result.support);
  out["parikh"] = result.parikh ? parikh_json(parsed.net, *result.parikh) : json::object();
  out["iterations"] = result.iterations;
  out["wall_time_ms"] = timer.ms();
  std::cout << out.dump(2) << "\n";
  return result.reachable ? kExitTrue : kExitFalse;
}

json yield_json(const cpn::Cpn& net, const cpn::YieldResult& r, const std::string& method,
                bool limit, double wall_ms) {
  json out;
  out["query"] = "max-yield";
  out["method"] = method;
  out["mode"] = limit ? "limit" : "finite";
  switch (r.status) {
    case cpn::YieldStatus::Ok:
      out["status"] = "ok";
      break;
    case cpn::YieldStatus::NoSolution:
      out["status"] = "no-solution";
      break;
    case cpn::YieldStatus::BudgetExhausted:
      out["status"] = "exclusion budget exhausted";
      break;
  }
  out["bound_status"] = r.bound_status == cpn::BoundStatus::Finite ? "finite" : "unbounded";
  out["yield"] = cpn::format_rat(r.yield);
  out["support"] = names_of(net, r.support);
  out["parikh"] = r.parikh ? parikh_json(net, *r.parikh) : json::object();
  out["queries_or_cuts"] = method == "binsearch" ? r.queries : r.cuts;
  out["wall_time_ms"] = wall_ms;
  return out;
}

int run_max_yield(const std::string& net_path, const std::string& goal, const std::string& method,
                  const std::string& epsilon, int cap, bool limit, int n_best) {
  cpn::ParsedNet parsed = cpn::parse_net(read_file(net_path));
  cpn::Index goal_place = parsed.net.place_index(goal);
  const cpn::ReachMode mode = limit ? cpn::ReachMode::Limit : cpn::ReachMode::Finite;

  if (method == "binsearch") {
    Timer timer;
    cpn::YieldResult r = cpn::max_yield_binsearch(parsed.net, parsed.m0, goal_place,
                                                  cpn::parse_rat(epsilon), mode);
    std::cout << yield_json(parsed.net, r, "binsearch", limit, timer.ms()).dump(2) << "\n";
    return kExitTrue;
  }
  if (method != "milp") throw cpn::InputError("method must be binsearch or milp");

  cpn::MilpOptions opts;
  opts.exclusion_cap = cap;
  opts.strict_finite = !limit;
  if (n_best <= 1) {
    Timer timer;
    cpn::YieldResult r = cpn::milp_max(parsed.net, parsed.m0, goal_place, opts);
    std::cout << yield_json(parsed.net, r, "milp", limit, timer.ms()).dump(2) << "\n";
    if (r.status == cpn::YieldStatus::BudgetExhausted) return kExitBudget;
    return r.status == cpn::YieldStatus::Ok ? kExitTrue : kExitFalse;
  }
  Timer timer;
  std::vector<cpn::YieldResult> all =
      cpn::enumerate_solutions(parsed.net, parsed.m0, goal_place, n_best, opts);
  double ms = timer.ms();
  json arr = json::array();
  for (const auto& r : all) arr.push_back(yield_json(parsed.net, r, "milp", limit, ms));
  std::cout << arr.dump(2) << "\n";
  return all.empty() ? kExitFalse : kExitTrue;
}

int run_check_witness(const std::string& net_path, const std::string& target_path,
                      const std::string& parikh_path, bool limit) {
  cpn::ParsedNet parsed = cpn::parse_net(read_file(net_path));
  cpn::Marking target = cpn::parse_marking(parsed.net, read_file(target_path));
  cpn::Parikh v = cpn::parse_parikh(parsed.net, read_file(parikh_path));
  bool ok = cpn::check_certificate(parsed.net, parsed.m0, target, v,
                                   limit ? cpn::ReachMode::Limit : cpn::ReachMode::Finite);
  json out;
  out["query"] = "check-witness";
  out["mode"] = limit ? "limit" : "finite";
  out["verdict"] = ok;
  std::cout << out.dump(2) << "\n";
  return ok ? kExitTrue : kExitFalse;
}

int run_gen_lattice(int rows, int cols, std::uint64_t seed, const std::string& fraction) {
  cpn::LatticeInstance inst = cpn::gen_lattice(rows, cols, seed, cpn::parse_rat(fraction));
  std::cout << cpn::serialize_net(inst.net, inst.m0, inst.name + " goal=" + inst.goal);
  return kExitTrue;
}

int run_bench_cmd(const std::string& config_path) {
  cpn::BenchConfig cfg = cpn::parse_bench_config(read_file(config_path));
  std::cout << cpn::bench_csv(cpn::run_bench(cfg));
  return kExitTrue;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous Petri net reachability and yield analysis"};
  app.require_subcommand(1);

  std::string net_path, subset, target_path, parikh_path, goal, config_path;
  std::string method = "binsearch";
  std::string epsilon = "1/1000";
  std::string fraction = "1/10";
  int cap = 400;
  int n_best = 1;
  int rows = 5, cols = 5;
  std::uint64_t seed = 0;
  bool limit = false;
  bool finite = false;

  auto* cmd_fireable = app.add_subcommand("fireable", "Firing set membership of a transition set");
  cmd_fireable->add_option("net", net_path, "net file")->required();
  cmd_fireable->add_option("--subset", subset, "comma-separated transition ids")->required();

  auto* cmd_reach = app.add_subcommand("reach", "Exact reachability of a target marking");
  cmd_reach->add_option("net", net_path, "net file")->required();
  cmd_reach->add_option("--target", target_path, "marking file")->required();
  cmd_reach->add_flag("--limit", limit, "decide limit-reachability");

  auto* cmd_yield = app.add_subcommand("max-yield", "Maximum token mass on a goal place");
  cmd_yield->add_option("net", net_path, "net file")->required();
  cmd_yield->add_option("--goal", goal, "goal place id")->required();
  cmd_yield->add_option("--method", method, "binsearch or milp");
  cmd_yield->add_option("--epsilon", epsilon, "binary search precision (rational)");
  cmd_yield->add_option("--cap", cap, "MILP exclusion cut budget");
  cmd_yield->add_option("--n-best", n_best, "enumerate the n best distinct supports (milp)");
  auto* lim = cmd_yield->add_flag("--limit", limit, "limit-reachable yield (default)");
  cmd_yield->add_flag("--finite", finite, "finite-reachable yield")->excludes(lim);

  auto* cmd_witness = app.add_subcommand("check-witness", "Validate a Parikh certificate");
  cmd_witness->add_option("net", net_path, "net file")->required();
  cmd_witness->add_option("--target", target_path, "marking file")->required();
  cmd_witness->add_option("--parikh", parikh_path, "parikh file")->required();
  cmd_witness->add_flag("--limit", limit, "limit-mode certificate");

  auto* cmd_gen = app.add_subcommand("gen", "Generate benchmark instances");
  auto* cmd_gen_lattice = cmd_gen->add_subcommand("lattice", "Grid net with east/south edges");
  cmd_gen_lattice->add_option("--rows", rows, "grid rows")->required();
  cmd_gen_lattice->add_option("--cols", cols, "grid columns")->required();
  cmd_gen_lattice->add_option("--seed", seed, "PRNG seed")->required();
  cmd_gen_lattice->add_option("--fraction", fraction, "marked place fraction");
  cmd_gen->require_subcommand(1);

  auto* cmd_bench = app.add_subcommand("bench", "Run the benchmark harness, CSV to stdout");
  cmd_bench->add_option("--config", config_path, "bench config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (cmd_fireable->parsed()) return run_fireable(net_path, subset);
    if (cmd_reach->parsed()) return run_reach(net_path, target_path, limit);
    if (cmd_yield->parsed()) {
      return run_max_yield(net_path, goal, method, epsilon, cap, !finite, n_best);
    }
    if (cmd_witness->parsed()) return run_check_witness(net_path, target_path, parikh_path, limit);
    if (cmd_gen->parsed()) return run_gen_lattice(rows, cols, seed, fraction);
    if (cmd_bench->parsed()) return run_bench_cmd(config_path);
  } catch (const cpn::CpnError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
