#pragma once

#include <map>
#include <string>
#include <vector>

#include "cpn/rational.hpp"

namespace cpn {

using Index = int;
// Sorted ascending, no duplicates.
using IndexSet = std::vector<Index>;

bool contains(const IndexSet& set, Index x);
IndexSet intersect(const IndexSet& a, const IndexSet& b);

/// Immutable continuous Petri net: places, transitions and the backward /
/// forward incidence matrices over naturals. Shareable across threads.
class Cpn {
 public:
  // Weight matrices are place-major: weights[p][t]. Throws InputError when
  // ids collide, dimensions disagree, or a weight is negative.
  Cpn(std::vector<std::string> places, std::vector<std::string> transitions,
      std::vector<std::vector<long>> in_weights,
      std::vector<std::vector<long>> out_weights);

  int num_places() const { return static_cast<int>(places_.size()); }
  int num_transitions() const { return static_cast<int>(transitions_.size()); }

  const std::string& place_name(Index p) const { return places_.at(p); }
  const std::string& transition_name(Index t) const { return transitions_.at(t); }
  const std::vector<std::string>& place_names() const { return places_; }
  const std::vector<std::string>& transition_names() const { return transitions_; }

  // Throw IdentifierError on unknown ids.
  Index place_index(const std::string& id) const;
  Index transition_index(const std::string& id) const;
  bool has_place(const std::string& id) const;
  bool has_transition(const std::string& id) const;

  long in_weight(Index p, Index t) const { return in_.at(p).at(t); }
  long out_weight(Index p, Index t) const { return out_.at(p).at(t); }
  // Incidence C = Out - In, derived on demand.
  long incidence(Index p, Index t) const { return out_[p][t] - in_[p][t]; }

  // Input places of t (places p with In(p,t) > 0), ascending.
  const IndexSet& inputs_of(Index t) const { return inputs_of_.at(t); }
  // Output places of t (places p with Out(p,t) > 0), ascending.
  const IndexSet& outputs_of(Index t) const { return outputs_of_.at(t); }

  IndexSet all_transitions() const;

  bool same_structure(const Cpn& other) const;

 private:
  std::vector<std::string> places_;
  std::vector<std::string> transitions_;
  std::vector<std::vector<long>> in_;
  std::vector<std::vector<long>> out_;
  std::map<std::string, Index> place_by_name_;
  std::map<std::string, Index> transition_by_name_;
  std::vector<IndexSet> inputs_of_;
  std::vector<IndexSet> outputs_of_;
};

/// Incremental net construction by id; the usual way to write fixtures.
class NetBuilder {
 public:
  NetBuilder& place(const std::string& id);
  NetBuilder& transition(const std::string& id, const std::map<std::string, long>& in,
                         const std::map<std::string, long>& out);
  Cpn build() const;

 private:
  std::vector<std::string> places_;
  std::vector<std::string> transitions_;
  std::vector<std::map<std::string, long>> in_;
  std::vector<std::map<std::string, long>> out_;
};

/// Place-indexed token mass vector. Entries are exact nonnegative rationals;
/// any operation that would produce a negative entry throws instead.
class Marking {
 public:
  Marking() = default;
  explicit Marking(int num_places) : mass_(num_places, Rat(0)) {}
  // Named entries; unmentioned places get 0. Unknown ids throw.
  static Marking of(const Cpn& net, const std::map<std::string, Rat>& mass);

  int size() const { return static_cast<int>(mass_.size()); }
  const Rat& operator[](Index p) const { return mass_.at(p); }
  void set(Index p, Rat value);

  bool operator==(const Marking& other) const = default;
  // Entrywise >=.
  bool dominates(const Marking& other) const;
  IndexSet support() const;
  const std::vector<Rat>& raw() const { return mass_; }

 private:
  std::vector<Rat> mass_;
};

/// Transition-indexed aggregate firing amounts. Support uses exact
/// strictly-positive comparison.
class Parikh {
 public:
  Parikh() = default;
  explicit Parikh(int num_transitions) : amount_(num_transitions, Rat(0)) {}
  static Parikh of(const Cpn& net, const std::map<std::string, Rat>& amounts);

  int size() const { return static_cast<int>(amount_.size()); }
  const Rat& operator[](Index t) const { return amount_.at(t); }
  void set(Index t, Rat value);

  bool operator==(const Parikh& other) const = default;
  IndexSet support() const;
  const std::vector<Rat>& raw() const { return amount_; }
  bool is_zero() const;

 private:
  std::vector<Rat> amount_;
};

// Enabling degree of t at m: min over input places of m(p)/In(p,t);
// infinity when t has no input places.
ExtRat enab(const Cpn& net, const Marking& m, Index t);
ExtRat enab(const Cpn& net, const Marking& m, const std::string& t);

// Fires t by alpha. Requires 0 <= alpha <= enab(net, m, t); a violation
// throws FiringAmountError naming the starved input place.
Marking fire(const Cpn& net, const Marking& m, Index t, const Rat& alpha);

// m + C*v. Performs no firing-set check; throws InfeasibleVectorError listing
// the places driven negative.
Marking apply_parikh(const Cpn& net, const Marking& m, const Parikh& v);

// Net restricted to the given transitions; keeps exactly the places with an
// arc to or from the subset. An empty subset yields the empty net.
Cpn restrict_net(const Cpn& net, const IndexSet& sub);

// Swaps In and Out.
Cpn reverse_net(const Cpn& net);

}  // namespace cpn
