#pragma once

#include <vector>

#include "cpn/net.hpp"
#include "cpn/reachability.hpp"

namespace cpn {

// Certificate check for a Parikh vector v: (1) m0 + C*v equals the target
// exactly (dominates it when at_least is set), (2) the support of v is a
// firing set of (net, m0), (3) in finite mode, also of the reversed net from
// the reached marking. Pure predicate, never throws on certificate failure.
bool check_certificate(const Cpn& net, const Marking& m0, const Marking& target, const Parikh& v,
                       ReachMode mode, bool at_least = false);

struct ReplayStep {
  Index transition;
  Rat amount;
};

struct ReplayResult {
  Marking final;
  std::vector<ReplayStep> schedule;
  bool completed = false;
};

// Best-effort expansion of a limit-valid certificate into an explicit firing
// schedule. Rounds walk the saturation order; a transition fires its whole
// remaining quota when enabled for it, otherwise min(enab, quota/2). Stops
// when all quotas are exhausted or after max_rounds rounds. Every emitted
// step is a legal firing.
ReplayResult replay(const Cpn& net, const Marking& m0, const Parikh& v, int max_rounds);

}  // namespace cpn
