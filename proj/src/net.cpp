#include "cpn/net.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "cpn/errors.hpp"

namespace cpn {

bool contains(const IndexSet& set, Index x) {
  return std::binary_search(set.begin(), set.end(), x);
}

IndexSet intersect(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Cpn::Cpn(std::vector<std::string> places, std::vector<std::string> transitions,
         std::vector<std::vector<long>> in_weights, std::vector<std::vector<long>> out_weights)
    : places_(std::move(places)),
      transitions_(std::move(transitions)),
      in_(std::move(in_weights)),
      out_(std::move(out_weights)) {
  const size_t np = places_.size();
  const size_t nt = transitions_.size();
  if (in_.size() != np || out_.size() != np) {
    throw InputError("incidence matrices must have one row per place");
  }
  for (size_t p = 0; p < np; ++p) {
    if (in_[p].size() != nt || out_[p].size() != nt) {
      throw InputError("incidence matrices must have one column per transition");
    }
    for (size_t t = 0; t < nt; ++t) {
      if (in_[p][t] < 0 || out_[p][t] < 0) {
        throw InputError("arc weights must be nonnegative naturals");
      }
    }
  }
  std::set<std::string> seen;
  for (size_t p = 0; p < np; ++p) {
    if (places_[p].empty()) throw InputError("empty place id");
    if (!seen.insert(places_[p]).second) throw InputError("duplicate id '" + places_[p] + "'");
    place_by_name_[places_[p]] = static_cast<Index>(p);
  }
  for (size_t t = 0; t < nt; ++t) {
    if (transitions_[t].empty()) throw InputError("empty transition id");
    if (!seen.insert(transitions_[t]).second) {
      throw InputError("duplicate id '" + transitions_[t] + "'");
    }
    transition_by_name_[transitions_[t]] = static_cast<Index>(t);
  }
  inputs_of_.resize(nt);
  outputs_of_.resize(nt);
  for (size_t t = 0; t < nt; ++t) {
    for (size_t p = 0; p < np; ++p) {
      if (in_[p][t] > 0) inputs_of_[t].push_back(static_cast<Index>(p));
      if (out_[p][t] > 0) outputs_of_[t].push_back(static_cast<Index>(p));
    }
  }
}

Index Cpn::place_index(const std::string& id) const {
  auto it = place_by_name_.find(id);
  if (it == place_by_name_.end()) throw IdentifierError("unknown place '" + id + "'");
  return it->second;
}

Index Cpn::transition_index(const std::string& id) const {
  auto it = transition_by_name_.find(id);
  if (it == transition_by_name_.end()) throw IdentifierError("unknown transition '" + id + "'");
  return it->second;
}

bool Cpn::has_place(const std::string& id) const { return place_by_name_.count(id) > 0; }

bool Cpn::has_transition(const std::string& id) const { return transition_by_name_.count(id) > 0; }

IndexSet Cpn::all_transitions() const {
  IndexSet all(transitions_.size());
  for (size_t t = 0; t < all.size(); ++t) all[t] = static_cast<Index>(t);
  return all;
}

bool Cpn::same_structure(const Cpn& other) const {
  return places_ == other.places_ && transitions_ == other.transitions_ && in_ == other.in_ &&
         out_ == other.out_;
}

NetBuilder& NetBuilder::place(const std::string& id) {
  places_.push_back(id);
  return *this;
}

NetBuilder& NetBuilder::transition(const std::string& id, const std::map<std::string, long>& in,
                                   const std::map<std::string, long>& out) {
  transitions_.push_back(id);
  in_.push_back(in);
  out_.push_back(out);
  return *this;
}

Cpn NetBuilder::build() const {
  std::map<std::string, Index> pos;
  for (size_t p = 0; p < places_.size(); ++p) pos[places_[p]] = static_cast<Index>(p);
  std::vector<std::vector<long>> in(places_.size(), std::vector<long>(transitions_.size(), 0));
  std::vector<std::vector<long>> out = in;
  for (size_t t = 0; t < transitions_.size(); ++t) {
    for (const auto& [id, w] : in_[t]) {
      auto it = pos.find(id);
      if (it == pos.end()) throw IdentifierError("arc references undeclared place '" + id + "'");
      in[it->second][t] = w;
    }
    for (const auto& [id, w] : out_[t]) {
      auto it = pos.find(id);
      if (it == pos.end()) throw IdentifierError("arc references undeclared place '" + id + "'");
      out[it->second][t] = w;
    }
  }
  return Cpn(places_, transitions_, in, out);
}

Marking Marking::of(const Cpn& net, const std::map<std::string, Rat>& mass) {
  Marking m(net.num_places());
  for (const auto& [id, value] : mass) m.set(net.place_index(id), value);
  return m;
}

void Marking::set(Index p, Rat value) {
  if (value < 0) {
    throw InfeasibleVectorError("negative token mass on place index " + std::to_string(p));
  }
  mass_.at(p) = std::move(value);
}

bool Marking::dominates(const Marking& other) const {
  if (size() != other.size()) throw DimensionError("marking size mismatch");
  for (int p = 0; p < size(); ++p) {
    if (mass_[p] < other.mass_[p]) return false;
  }
  return true;
}

IndexSet Marking::support() const {
  IndexSet s;
  for (int p = 0; p < size(); ++p) {
    if (mass_[p] > 0) s.push_back(p);
  }
  return s;
}

Parikh Parikh::of(const Cpn& net, const std::map<std::string, Rat>& amounts) {
  Parikh v(net.num_transitions());
  for (const auto& [id, value] : amounts) v.set(net.transition_index(id), value);
  return v;
}

void Parikh::set(Index t, Rat value) {
  if (value < 0) {
    throw InfeasibleVectorError("negative firing amount on transition index " + std::to_string(t));
  }
  amount_.at(t) = std::move(value);
}

IndexSet Parikh::support() const {
  IndexSet s;
  for (int t = 0; t < size(); ++t) {
    if (amount_[t] > 0) s.push_back(t);
  }
  return s;
}

bool Parikh::is_zero() const {
  for (const auto& a : amount_) {
    if (a != 0) return false;
  }
  return true;
}

namespace {

void check_compatible(const Cpn& net, const Marking& m) {
  if (m.size() != net.num_places()) {
    throw DimensionError("marking has " + std::to_string(m.size()) + " entries, net has " +
                         std::to_string(net.num_places()) + " places");
  }
}

}  // namespace

ExtRat enab(const Cpn& net, const Marking& m, Index t) {
  check_compatible(net, m);
  if (t < 0 || t >= net.num_transitions()) {
    throw IdentifierError("transition index " + std::to_string(t) + " out of range");
  }
  const IndexSet& inputs = net.inputs_of(t);
  if (inputs.empty()) return ExtRat::infinity();
  ExtRat degree = ExtRat::infinity();
  for (Index p : inputs) {
    Rat ratio = m[p] / Rat(net.in_weight(p, t));
    degree = min(degree, ExtRat(ratio));
  }
  return degree;
}

ExtRat enab(const Cpn& net, const Marking& m, const std::string& t) {
  return enab(net, m, net.transition_index(t));
}

Marking fire(const Cpn& net, const Marking& m, Index t, const Rat& alpha) {
  check_compatible(net, m);
  if (t < 0 || t >= net.num_transitions()) {
    throw IdentifierError("transition index " + std::to_string(t) + " out of range");
  }
  if (alpha < 0) throw FiringAmountError("negative firing amount");
  for (Index p : net.inputs_of(t)) {
    if (m[p] < alpha * Rat(net.in_weight(p, t))) {
      throw FiringAmountError("firing " + net.transition_name(t) + " by " + format_rat(alpha) +
                              " exceeds the enabling degree; input place '" + net.place_name(p) +
                              "' holds only " + format_rat(m[p]));
    }
  }
  Marking result = m;
  for (int p = 0; p < net.num_places(); ++p) {
    long c = net.incidence(p, t);
    if (c != 0) result.set(p, m[p] + alpha * Rat(c));
  }
  return result;
}

Marking apply_parikh(const Cpn& net, const Marking& m, const Parikh& v) {
  check_compatible(net, m);
  if (v.size() != net.num_transitions()) {
    throw DimensionError("parikh vector size mismatch");
  }
  std::vector<Rat> mass = m.raw();
  for (int t = 0; t < net.num_transitions(); ++t) {
    if (v[t] == 0) continue;
    for (int p = 0; p < net.num_places(); ++p) {
      long c = net.incidence(p, t);
      if (c != 0) mass[p] += v[t] * Rat(c);
    }
  }
  std::string offending;
  for (int p = 0; p < net.num_places(); ++p) {
    if (mass[p] < 0) {
      if (!offending.empty()) offending += ", ";
      offending += net.place_name(p);
    }
  }
  if (!offending.empty()) {
    throw InfeasibleVectorError("parikh vector drives places negative: " + offending);
  }
  Marking result(net.num_places());
  for (int p = 0; p < net.num_places(); ++p) result.set(p, std::move(mass[p]));
  return result;
}

Cpn restrict_net(const Cpn& net, const IndexSet& sub) {
  for (Index t : sub) {
    if (t < 0 || t >= net.num_transitions()) {
      throw IdentifierError("transition index " + std::to_string(t) + " out of range");
    }
  }
  std::vector<bool> keep_place(net.num_places(), false);
  for (Index t : sub) {
    for (Index p : net.inputs_of(t)) keep_place[p] = true;
    for (Index p : net.outputs_of(t)) keep_place[p] = true;
  }
  std::vector<std::string> places;
  std::vector<Index> place_src;
  for (int p = 0; p < net.num_places(); ++p) {
    if (keep_place[p]) {
      places.push_back(net.place_name(p));
      place_src.push_back(p);
    }
  }
  std::vector<std::string> transitions;
  for (Index t : sub) transitions.push_back(net.transition_name(t));
  std::vector<std::vector<long>> in(places.size(), std::vector<long>(sub.size(), 0));
  std::vector<std::vector<long>> out = in;
  for (size_t pi = 0; pi < place_src.size(); ++pi) {
    for (size_t ti = 0; ti < sub.size(); ++ti) {
      in[pi][ti] = net.in_weight(place_src[pi], sub[ti]);
      out[pi][ti] = net.out_weight(place_src[pi], sub[ti]);
    }
  }
  return Cpn(places, transitions, in, out);
}

Cpn reverse_net(const Cpn& net) {
  std::vector<std::vector<long>> in(net.num_places(), std::vector<long>(net.num_transitions(), 0));
  std::vector<std::vector<long>> out = in;
  for (int p = 0; p < net.num_places(); ++p) {
    for (int t = 0; t < net.num_transitions(); ++t) {
      in[p][t] = net.out_weight(p, t);
      out[p][t] = net.in_weight(p, t);
    }
  }
  return Cpn(net.place_names(), net.transition_names(), in, out);
}

}  // namespace cpn
