#pragma once

#include <string>
#include <vector>

#include "cpn/net.hpp"

namespace cpn {

struct FireableResult {
  bool member = false;
  // The unique maximal firing set included in the queried subset; equals the
  // subset itself when member is true.
  IndexSet max_subset;
  // Transitions in the order the saturation added them; a replay witness
  // can fire small amounts along this order.
  std::vector<Index> order;
  // Saturation passes executed; at most |T|.
  int passes = 0;
};

// Decides membership of `sub` in FS(net, m0) by saturation from the support
// of m0. Ties within a pass follow transition list order.
FireableResult fireable(const Cpn& net, const Marking& m0, const IndexSet& sub);
FireableResult fireable(const Cpn& net, const Marking& m0,
                        const std::vector<std::string>& sub);

// The unique maximal firing set of (net, m0).
IndexSet max_fs(const Cpn& net, const Marking& m0);

}  // namespace cpn
