#include "cpn/bench.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cpn/errors.hpp"
#include "cpn/generators.hpp"
#include "cpn/milp.hpp"
#include "cpn/net_format.hpp"
#include "cpn/yield.hpp"

namespace cpn {

namespace {

using json = nlohmann::ordered_json;

Rat rat_of(const json& v, const char* what) {
  if (v.is_string()) return parse_rat(v.get<std::string>());
  if (v.is_number_integer()) return Rat(static_cast<long>(v.get<long long>()));
  throw ParseError(std::string("expected a rational for ") + what);
}

}  // namespace

BenchConfig parse_bench_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid bench config: ") + e.what());
  }
  BenchConfig cfg;
  cfg.seed = doc.value("seed", 0ull);
  cfg.repetitions = doc.value("repetitions", 100);
  if (cfg.repetitions < 1) throw InputError("repetitions must be positive");
  if (doc.contains("epsilon")) cfg.epsilon = rat_of(doc["epsilon"], "epsilon");
  cfg.cap = doc.value("cap", 400);
  std::string mode = doc.value("mode", std::string("limit"));
  if (mode == "limit") {
    cfg.mode = ReachMode::Limit;
  } else if (mode == "finite") {
    cfg.mode = ReachMode::Finite;
  } else {
    throw InputError("mode must be 'limit' or 'finite'");
  }
  if (doc.contains("algorithms")) {
    for (const auto& a : doc["algorithms"]) {
      std::string name = a.get<std::string>();
      if (name == "binsearch") {
        cfg.algorithms.push_back(BenchAlgorithm::Binsearch);
      } else if (name == "milp") {
        cfg.algorithms.push_back(BenchAlgorithm::Milp);
      } else {
        throw InputError("unknown algorithm '" + name + "'");
      }
    }
  } else {
    cfg.algorithms = {BenchAlgorithm::Binsearch, BenchAlgorithm::Milp};
  }
  if (!doc.contains("instances") || !doc["instances"].is_array()) {
    throw InputError("bench config needs an instances array");
  }
  for (const auto& inst : doc["instances"]) {
    BenchInstance b;
    std::string type = inst.value("type", std::string("lattice"));
    b.resource_fraction =
        inst.contains("resource_fraction") ? rat_of(inst["resource_fraction"], "resource_fraction")
                                           : Rat(1, 10);
    if (type == "lattice") {
      b.kind = BenchInstance::Kind::Lattice;
      b.rows = inst.value("rows", 0);
      b.cols = inst.value("cols", 0);
      if (b.rows < 1 || b.cols < 1) throw InputError("lattice instance needs rows and cols");
      b.label = "lattice-" + std::to_string(b.rows) + "x" + std::to_string(b.cols);
    } else if (type == "random") {
      b.kind = BenchInstance::Kind::Random;
      b.places = inst.value("places", 0);
      b.transitions = inst.value("transitions", 0);
      b.max_weight = inst.value("max_weight", 1);
      b.density = inst.contains("density") ? rat_of(inst["density"], "density") : Rat(1, 10);
      b.shape_seed = inst.value("shape_seed", 0ull);
      if (b.places < 1) throw InputError("random instance needs places");
      b.label = "random-" + std::to_string(b.places) + "p" + std::to_string(b.transitions) + "t-s" +
                std::to_string(b.shape_seed);
    } else if (type == "file") {
      b.kind = BenchInstance::Kind::File;
      b.path = inst.value("path", std::string());
      if (b.path.empty()) throw InputError("file instance needs a path");
      b.label = b.path;
    } else {
      throw InputError("unknown instance type '" + type + "'");
    }
    if (inst.contains("label")) b.label = inst["label"].get<std::string>();
    cfg.instances.push_back(std::move(b));
  }
  return cfg;
}

namespace {

Cpn load_shape(const BenchInstance& inst) {
  switch (inst.kind) {
    case BenchInstance::Kind::Lattice: {
      // The marking from this draw is discarded; trials redraw it.
      return gen_lattice(inst.rows, inst.cols, 1, Rat(1, 10)).net;
    }
    case BenchInstance::Kind::Random:
      return gen_random(inst.places, inst.transitions, inst.max_weight, inst.density,
                        inst.shape_seed);
    case BenchInstance::Kind::File: {
      std::ifstream in(inst.path);
      if (!in) throw InputError("cannot open instance file '" + inst.path + "'");
      std::stringstream ss;
      ss << in.rdbuf();
      return parse_net(ss.str()).net;
    }
  }
  throw InputError("unreachable instance kind");
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchConfig& config) {
  std::vector<BenchRow> rows;
  SplitMix64 master(config.seed);

  for (const auto& inst : config.instances) {
    Cpn net = load_shape(inst);

    // Identical trial draws for every algorithm on this instance.
    std::vector<ResourceDraw> draws;
    {
      SplitMix64 trial_rng(master.next());
      for (int r = 0; r < config.repetitions; ++r) {
        draws.push_back(draw_resources(net, inst.resource_fraction, trial_rng));
      }
    }

    for (BenchAlgorithm algo : config.algorithms) {
      BenchRow row;
      row.instance = inst.label;
      row.algorithm = algo;
      row.rows = inst.rows;
      row.cols = inst.cols;
      row.resource_fraction = inst.resource_fraction;
      row.repetitions = config.repetitions;
      row.num_places = net.num_places();
      row.num_transitions = net.num_transitions();

      double total = 0.0;
      double alr_total = 0.0;
      long alr_calls = 0;
      long cuts_total = 0;
      for (int r = 0; r < config.repetitions; ++r) {
        const ResourceDraw& draw = draws[r];
        auto t0 = std::chrono::steady_clock::now();
        if (algo == BenchAlgorithm::Binsearch) {
          YieldResult yr =
              max_yield_binsearch(net, draw.m0, draw.goal, config.epsilon, config.mode);
          total += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
          alr_total += yr.alr_seconds;
          alr_calls += yr.queries;
        } else {
          MilpOptions opts;
          opts.exclusion_cap = config.cap;
          opts.strict_finite = config.mode == ReachMode::Finite;
          YieldResult yr = milp_max(net, draw.m0, draw.goal, opts);
          total += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
          cuts_total += yr.cuts;
        }
      }
      row.mean_seconds = total / config.repetitions;
      if (algo == BenchAlgorithm::Binsearch) {
        row.mean_alr_call_seconds = alr_calls > 0 ? alr_total / alr_calls : 0.0;
      } else {
        row.cuts_mean = static_cast<double>(cuts_total) / config.repetitions;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "instance,algorithm,rows,cols,resource_fraction,repetitions,mean_seconds,"
         "mean_alr_call_seconds,cuts_mean\n";
  out.setf(std::ios::fixed);
  for (const auto& row : rows) {
    out << row.instance << ','
        << (row.algorithm == BenchAlgorithm::Binsearch ? "binsearch" : "milp") << ',';
    if (row.rows > 0) out << row.rows;
    out << ',';
    if (row.cols > 0) out << row.cols;
    out << ',' << format_rat(row.resource_fraction) << ',' << row.repetitions << ',';
    out.precision(5);
    out << row.mean_seconds << ',';
    if (row.mean_alr_call_seconds) out << *row.mean_alr_call_seconds;
    out << ',';
    if (row.cuts_mean) out << *row.cuts_mean;
    out << '\n';
  }
  return out.str();
}

}  // namespace cpn
