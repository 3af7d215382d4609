#include "cpn/witness.hpp"

#include "cpn/errors.hpp"
#include "cpn/firing_set.hpp"

namespace cpn {

bool check_certificate(const Cpn& net, const Marking& m0, const Marking& target, const Parikh& v,
                       ReachMode mode, bool at_least) {
  if (m0.size() != net.num_places() || target.size() != net.num_places() ||
      v.size() != net.num_transitions()) {
    throw DimensionError("certificate dimensions incompatible with net");
  }
  std::vector<Rat> reached = m0.raw();
  for (int t = 0; t < net.num_transitions(); ++t) {
    if (v[t] == 0) continue;
    for (int p = 0; p < net.num_places(); ++p) {
      long c = net.incidence(p, t);
      if (c != 0) reached[p] += v[t] * Rat(c);
    }
  }
  for (int p = 0; p < net.num_places(); ++p) {
    if (reached[p] < 0) return false;
    if (at_least ? reached[p] < target[p] : reached[p] != target[p]) return false;
  }

  IndexSet supp = v.support();
  if (!fireable(net, m0, supp).member) return false;
  if (mode == ReachMode::Finite) {
    Marking m(net.num_places());
    for (int p = 0; p < net.num_places(); ++p) m.set(p, reached[p]);
    if (!fireable(reverse_net(net), m, supp).member) return false;
  }
  return true;
}

ReplayResult replay(const Cpn& net, const Marking& m0, const Parikh& v, int max_rounds) {
  Marking reached;
  try {
    reached = apply_parikh(net, m0, v);
  } catch (const InfeasibleVectorError& e) {
    throw InputError(std::string("replay refused: ") + e.what());
  }
  if (!check_certificate(net, m0, reached, v, ReachMode::Limit)) {
    throw InputError("parikh vector is not a limit-valid certificate; replay refused");
  }

  ReplayResult result;
  std::vector<Index> order = fireable(net, m0, v.support()).order;
  std::vector<Rat> remaining = v.raw();
  Marking m = m0;
  for (int round = 0; round < max_rounds; ++round) {
    bool outstanding = false;
    bool fired_any = false;
    for (Index t : order) {
      if (remaining[t] == 0) continue;
      ExtRat degree = enab(net, m, t);
      Rat amount;
      if (!degree.is_finite() || degree.value() >= remaining[t]) {
        amount = remaining[t];
      } else {
        Rat half = remaining[t] / 2;
        amount = degree.value() < half ? degree.value() : half;
      }
      if (amount > 0) {
        m = fire(net, m, t, amount);
        remaining[t] -= amount;
        result.schedule.push_back(ReplayStep{t, amount});
        fired_any = true;
      }
      if (remaining[t] != 0) outstanding = true;
    }
    if (!outstanding) break;
    if (!fired_any) break;  // every remaining quota is dead at this marking
  }
  result.completed = true;
  for (const Rat& r : remaining) {
    if (r != 0) {
      result.completed = false;
      break;
    }
  }
  result.final = std::move(m);
  return result;
}

}  // namespace cpn
