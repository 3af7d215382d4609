#include "cpn/generators.hpp"

#include <algorithm>
#include <numeric>

#include "cpn/errors.hpp"

namespace cpn {

std::uint64_t SplitMix64::below(std::uint64_t n) {
  if (n == 0) throw InputError("uniform draw from an empty range");
  const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    std::uint64_t x = next();
    if (x >= threshold) return x % n;
  }
}

namespace {

// ceil(fraction * count) with exact integer arithmetic.
long ceil_fraction(const Rat& fraction, long count) {
  Rat scaled = fraction * Rat(count);
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), scaled.get_num().get_mpz_t(), scaled.get_den().get_mpz_t());
  if (!q.fits_slong_p()) throw InputError("resource count out of range");
  return q.get_si();
}

bool bernoulli(SplitMix64& rng, const Rat& probability) {
  const mpz_class& num = probability.get_num();
  const mpz_class& den = probability.get_den();
  if (!num.fits_ulong_p() || !den.fits_ulong_p()) throw InputError("density out of range");
  return rng.below(den.get_ui()) < num.get_ui();
}

}  // namespace

ResourceDraw draw_resources(const Cpn& net, const Rat& fraction, SplitMix64& rng) {
  if (!(fraction > 0) || fraction > 1) throw InputError("resource fraction must be in (0, 1]");
  const int np = net.num_places();
  if (np == 0) throw InputError("cannot place resources on an empty net");
  long k = ceil_fraction(fraction, np);
  std::vector<Index> order(np);
  std::iota(order.begin(), order.end(), 0);
  for (long i = 0; i < k; ++i) {
    std::uint64_t j = i + rng.below(static_cast<std::uint64_t>(np - i));
    std::swap(order[i], order[j]);
  }
  ResourceDraw draw{Marking(np), 0};
  for (long i = 0; i < k; ++i) draw.m0.set(order[i], Rat(1));
  draw.goal = static_cast<Index>(rng.below(static_cast<std::uint64_t>(np)));
  return draw;
}

LatticeInstance gen_lattice(int rows, int cols, std::uint64_t seed, const Rat& resource_fraction) {
  if (rows < 1 || cols < 1) throw InputError("lattice dimensions must be at least 1x1");

  std::vector<std::string> places;
  places.reserve(static_cast<size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      places.push_back("p" + std::to_string(r) + "_" + std::to_string(c));
    }
  }
  auto place_at = [&](int r, int c) { return r * cols + c; };

  std::vector<std::string> transitions;
  std::vector<std::pair<int, int>> edges;  // (source place, destination place)
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) {
        transitions.push_back("t" + std::to_string(r) + "_" + std::to_string(c) + "_e");
        edges.emplace_back(place_at(r, c), place_at(r, c + 1));
      }
      if (r + 1 < rows) {
        transitions.push_back("t" + std::to_string(r) + "_" + std::to_string(c) + "_s");
        edges.emplace_back(place_at(r, c), place_at(r + 1, c));
      }
    }
  }
  std::vector<std::vector<long>> in(places.size(), std::vector<long>(transitions.size(), 0));
  std::vector<std::vector<long>> out = in;
  for (size_t t = 0; t < edges.size(); ++t) {
    in[edges[t].first][t] = 1;
    out[edges[t].second][t] = 1;
  }
  Cpn net(places, transitions, in, out);

  SplitMix64 rng(seed);
  ResourceDraw draw = draw_resources(net, resource_fraction, rng);
  LatticeInstance inst{std::move(net), std::move(draw.m0), "", ""};
  inst.goal = inst.net.place_name(draw.goal);
  inst.name = "lattice " + std::to_string(rows) + "x" + std::to_string(cols) + " seed=" +
              std::to_string(seed) + " fraction=" + format_rat(resource_fraction) +
              " rng=splitmix64";
  return inst;
}

Cpn gen_random(int num_places, int num_transitions, long max_weight, const Rat& density,
               std::uint64_t seed) {
  if (num_places < 1) throw InputError("random net needs at least one place");
  if (num_transitions < 0) throw InputError("negative transition count");
  if (max_weight < 1) throw InputError("max arc weight must be at least 1");
  if (!(density > 0) || density > 1) throw InputError("density must be in (0, 1]");

  std::vector<std::string> places;
  for (int p = 0; p < num_places; ++p) places.push_back("p" + std::to_string(p));
  std::vector<std::string> transitions;
  for (int t = 0; t < num_transitions; ++t) transitions.push_back("t" + std::to_string(t));

  SplitMix64 rng(seed);
  std::vector<std::vector<long>> in(num_places, std::vector<long>(num_transitions, 0));
  std::vector<std::vector<long>> out = in;
  for (int t = 0; t < num_transitions; ++t) {
    for (int p = 0; p < num_places; ++p) {
      if (bernoulli(rng, density)) {
        in[p][t] = 1 + static_cast<long>(rng.below(static_cast<std::uint64_t>(max_weight)));
      }
    }
    bool has_output = false;
    while (!has_output) {
      for (int p = 0; p < num_places; ++p) {
        if (bernoulli(rng, density)) {
          out[p][t] = 1 + static_cast<long>(rng.below(static_cast<std::uint64_t>(max_weight)));
          has_output = true;
        }
      }
    }
  }
  return Cpn(places, transitions, in, out);
}

}  // namespace cpn
