#include "cpn/firing_set.hpp"

#include <algorithm>

#include "cpn/errors.hpp"

namespace cpn {

FireableResult fireable(const Cpn& net, const Marking& m0, const IndexSet& sub) {
  for (Index t : sub) {
    if (t < 0 || t >= net.num_transitions()) {
      throw IdentifierError("transition index " + std::to_string(t) + " out of range");
    }
  }
  if (m0.size() != net.num_places()) throw DimensionError("marking incompatible with net");

  std::vector<bool> marked(net.num_places(), false);
  for (Index p : m0.support()) marked[p] = true;
  std::vector<bool> added(net.num_transitions(), false);

  FireableResult result;
  size_t taken = 0;
  bool grew = true;
  while (taken < sub.size() && grew) {
    grew = false;
    ++result.passes;
    for (Index t : sub) {
      if (added[t]) continue;
      bool enabled = true;
      for (Index p : net.inputs_of(t)) {
        if (!marked[p]) {
          enabled = false;
          break;
        }
      }
      if (!enabled) continue;
      added[t] = true;
      ++taken;
      result.order.push_back(t);
      for (Index p : net.outputs_of(t)) marked[p] = true;
      grew = true;
    }
  }
  result.max_subset = result.order;
  std::sort(result.max_subset.begin(), result.max_subset.end());
  result.member = taken == sub.size();
  return result;
}

FireableResult fireable(const Cpn& net, const Marking& m0, const std::vector<std::string>& sub) {
  IndexSet idx;
  for (const auto& id : sub) idx.push_back(net.transition_index(id));
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  return fireable(net, m0, idx);
}

IndexSet max_fs(const Cpn& net, const Marking& m0) {
  return fireable(net, m0, net.all_transitions()).max_subset;
}

}  // namespace cpn
