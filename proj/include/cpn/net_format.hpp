#pragma once

#include <map>
#include <string>

#include "cpn/net.hpp"

namespace cpn {

struct ParsedNet {
  Cpn net;
  Marking m0;
  std::string name;
};

// Net file format, JSON:
//   {
//     "format_version": "1",
//     "name": "...",
//     "places": [ {"id": "p1", "initial": "1/2"}, ... ],
//     "transitions": [ {"id": "t1", "in": {"p1": 2}, "out": {"p2": 1}}, ... ]
//   }
// Initial markings take "p/q" or decimal strings; arc weights are naturals.
// Rejected: duplicate ids, negative numbers, fractional arc weights, arcs to
// undeclared places.
ParsedNet parse_net(const std::string& text);

// Canonical form: places and transitions sorted by id, rationals in lowest
// terms, two-space indentation. Byte-stable for equal nets.
std::string serialize_net(const Cpn& net, const Marking& m0, const std::string& name = "");

// Marking / parikh side files: a JSON object mapping ids to rational strings.
Marking parse_marking(const Cpn& net, const std::string& text);
Parikh parse_parikh(const Cpn& net, const std::string& text);

std::string serialize_marking(const Cpn& net, const Marking& m);
std::string serialize_parikh(const Cpn& net, const Parikh& v);

}  // namespace cpn
