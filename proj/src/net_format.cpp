#include "cpn/net_format.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "cpn/errors.hpp"

namespace cpn {

namespace {

using json = nlohmann::ordered_json;

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

Rat rational_field(const json& value, const std::string& where) {
  if (value.is_string()) return parse_rat(value.get<std::string>());
  if (value.is_number_integer()) {
    auto n = value.get<long long>();
    if (n < 0) throw ParseError("negative number in " + where);
    return Rat(static_cast<long>(n));
  }
  throw ParseError("expected a rational string in " + where);
}

long natural_field(const json& value, const std::string& where) {
  if (value.is_number_unsigned() || value.is_number_integer()) {
    auto n = value.get<long long>();
    if (n < 0) throw ParseError("negative arc weight in " + where);
    return static_cast<long>(n);
  }
  if (value.is_number_float()) throw ParseError("fractional arc weight in " + where);
  if (value.is_string()) {
    Rat r = parse_rat(value.get<std::string>());
    if (r < 0) throw ParseError("negative arc weight in " + where);
    if (!rat_is_integer(r)) throw ParseError("fractional arc weight in " + where);
    if (!r.get_num().fits_slong_p()) throw ParseError("arc weight out of range in " + where);
    return r.get_num().get_si();
  }
  throw ParseError("expected a natural arc weight in " + where);
}

}  // namespace

ParsedNet parse_net(const std::string& text) {
  json doc = parse_document(text);
  if (!doc.is_object()) throw ParseError("net file must be a JSON object");
  if (!doc.contains("format_version") || doc["format_version"] != "1") {
    throw ParseError("unsupported or missing format_version (expected \"1\")");
  }
  std::string name = doc.value("name", std::string());

  if (!doc.contains("places") || !doc["places"].is_array()) {
    throw ParseError("missing places array");
  }
  if (!doc.contains("transitions") || !doc["transitions"].is_array()) {
    throw ParseError("missing transitions array");
  }

  std::vector<std::string> place_ids;
  std::map<std::string, Rat> initial;
  for (const auto& entry : doc["places"]) {
    if (!entry.is_object() || !entry.contains("id") || !entry["id"].is_string()) {
      throw ParseError("each place needs a string id");
    }
    std::string id = entry["id"].get<std::string>();
    place_ids.push_back(id);
    if (entry.contains("initial")) {
      Rat mass = rational_field(entry["initial"], "initial marking of '" + id + "'");
      if (mass < 0) throw ParseError("negative initial marking on '" + id + "'");
      initial[id] = mass;
    }
  }

  std::vector<std::string> transition_ids;
  std::vector<std::map<std::string, long>> ins, outs;
  for (const auto& entry : doc["transitions"]) {
    if (!entry.is_object() || !entry.contains("id") || !entry["id"].is_string()) {
      throw ParseError("each transition needs a string id");
    }
    std::string id = entry["id"].get<std::string>();
    transition_ids.push_back(id);
    std::map<std::string, long> in, out;
    for (const char* side : {"in", "out"}) {
      if (!entry.contains(side)) continue;
      if (!entry[side].is_object()) {
        throw ParseError("'" + std::string(side) + "' of transition '" + id +
                         "' must map places to weights");
      }
      for (auto it = entry[side].begin(); it != entry[side].end(); ++it) {
        long w = natural_field(it.value(),
                               "arc " + id + (side[0] == 'i' ? " <- " : " -> ") + it.key());
        if (w == 0) continue;
        (side[0] == 'i' ? in : out)[it.key()] = w;
      }
    }
    ins.push_back(std::move(in));
    outs.push_back(std::move(out));
  }

  NetBuilder builder;
  for (const auto& id : place_ids) builder.place(id);
  for (size_t t = 0; t < transition_ids.size(); ++t) {
    builder.transition(transition_ids[t], ins[t], outs[t]);
  }
  Cpn net = [&]() {
    try {
      return builder.build();
    } catch (const IdentifierError& e) {
      throw ParseError(e.what());
    } catch (const InputError& e) {
      throw ParseError(e.what());
    }
  }();
  Marking m0 = Marking::of(net, initial);
  return ParsedNet{std::move(net), std::move(m0), std::move(name)};
}

std::string serialize_net(const Cpn& net, const Marking& m0, const std::string& name) {
  if (m0.size() != net.num_places()) throw DimensionError("marking incompatible with net");
  json doc;
  doc["format_version"] = "1";
  doc["name"] = name;

  std::vector<Index> place_order(net.num_places());
  for (int p = 0; p < net.num_places(); ++p) place_order[p] = p;
  std::sort(place_order.begin(), place_order.end(), [&](Index a, Index b) {
    return net.place_name(a) < net.place_name(b);
  });
  doc["places"] = json::array();
  for (Index p : place_order) {
    json entry;
    entry["id"] = net.place_name(p);
    entry["initial"] = format_rat(m0[p]);
    doc["places"].push_back(std::move(entry));
  }

  std::vector<Index> transition_order(net.num_transitions());
  for (int t = 0; t < net.num_transitions(); ++t) transition_order[t] = t;
  std::sort(transition_order.begin(), transition_order.end(), [&](Index a, Index b) {
    return net.transition_name(a) < net.transition_name(b);
  });
  doc["transitions"] = json::array();
  for (Index t : transition_order) {
    json entry;
    entry["id"] = net.transition_name(t);
    json in = json::object(), out = json::object();
    // Place keys in sorted order for byte-stable output.
    for (Index p : place_order) {
      if (net.in_weight(p, t) > 0) in[net.place_name(p)] = net.in_weight(p, t);
      if (net.out_weight(p, t) > 0) out[net.place_name(p)] = net.out_weight(p, t);
    }
    entry["in"] = std::move(in);
    entry["out"] = std::move(out);
    doc["transitions"].push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

namespace {

std::map<std::string, Rat> parse_rational_map(const std::string& text) {
  json doc = parse_document(text);
  if (!doc.is_object()) throw ParseError("expected a JSON object of id -> rational");
  std::map<std::string, Rat> out;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    Rat value = rational_field(it.value(), "entry '" + it.key() + "'");
    if (value < 0) throw ParseError("negative value for '" + it.key() + "'");
    out[it.key()] = value;
  }
  return out;
}

}  // namespace

Marking parse_marking(const Cpn& net, const std::string& text) {
  try {
    return Marking::of(net, parse_rational_map(text));
  } catch (const IdentifierError& e) {
    throw ParseError(e.what());
  }
}

Parikh parse_parikh(const Cpn& net, const std::string& text) {
  try {
    return Parikh::of(net, parse_rational_map(text));
  } catch (const IdentifierError& e) {
    throw ParseError(e.what());
  }
}

std::string serialize_marking(const Cpn& net, const Marking& m) {
  json doc = json::object();
  std::vector<std::string> names = net.place_names();
  std::sort(names.begin(), names.end());
  for (const auto& id : names) {
    const Rat& v = m[net.place_index(id)];
    if (v != 0) doc[id] = format_rat(v);
  }
  return doc.dump(2) + "\n";
}

std::string serialize_parikh(const Cpn& net, const Parikh& v) {
  json doc = json::object();
  std::vector<std::string> names = net.transition_names();
  std::sort(names.begin(), names.end());
  for (const auto& id : names) {
    const Rat& a = v[net.transition_index(id)];
    if (a != 0) doc[id] = format_rat(a);
  }
  return doc.dump(2) + "\n";
}

}  // namespace cpn
