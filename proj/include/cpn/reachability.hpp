#pragma once

#include <optional>

#include "cpn/net.hpp"

namespace cpn {

enum class ReachMode { Finite, Limit };

// Which marking feeds the reverse-net firing-set check in finite mode. The
// default evaluates it from the marking actually reached; the alternative
// keeps the initial marking.
enum class ReverseCheckFrom { ReachedMarking, InitialMarking };

// How the per-iteration support is discovered. Grouped batches transitions
// into shared maximization LPs and is the default; PerTransition runs one LP
// per transition. Both produce the same support set and the same decision.
enum class InnerLpStrategy { Grouped, PerTransition };

struct ReachOptions {
  ReverseCheckFrom reverse_from = ReverseCheckFrom::ReachedMarking;
  InnerLpStrategy strategy = InnerLpStrategy::Grouped;
};

struct ReachResult {
  bool reachable = false;
  // Aggregate solution on success.
  std::optional<Parikh> parikh;
  // On success the support of parikh; on failure the last candidate set,
  // as a diagnostic only.
  IndexSet support;
  // Outer while-loop passes; at most |T|.
  int iterations = 0;
};

// Exact reachability decision: is `target` reachable (finite mode) or
// limit-reachable (limit mode) from m0?
ReachResult reachable(const Cpn& net, const Marking& m0, const Marking& target, ReachMode mode,
                      const ReachOptions& options = {});

// At-least reachability: can some marking dominating `goal` be reached?
// The goal's support should consist of the goal place(s) only.
ReachResult at_least_reachable(const Cpn& net, const Marking& m0, const Marking& goal,
                               ReachMode mode, const ReachOptions& options = {});

}  // namespace cpn
