#include "persuasion/instance_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "persuasion/errors.hpp"

namespace persuasion {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw InputError("instance file: at " + path + ": " + what);
}

const json& member(const json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, "missing key \"" + key + "\"");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number, got " + std::string(v.type_name()));
  return v.get<double>();
}

std::string string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string, got " + std::string(v.type_name()));
  return v.get<std::string>();
}

const json& array(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array, got " + std::string(v.type_name()));
  return v;
}

std::vector<double> numbers(const json& v, const std::string& path) {
  std::vector<double> out;
  for (std::size_t i = 0; i < array(v, path).size(); ++i) {
    out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known |= key == a;
    if (!known) fail(path + "." + key, "unknown key");
  }
}

// Byte offset -> 1-based line and column.
std::pair<std::size_t, std::size_t> position(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

LocationModel parse_location(const json& v, const std::string& path) {
  if (!v.is_object()) fail(path, "expected an object");
  check_keys(v, {"name", "states", "prior", "utility", "payoff"}, path);
  LocationModel loc;
  loc.name = string(member(v, "name", path), path + ".name");
  const auto& states = array(member(v, "states", path), path + ".states");
  for (std::size_t i = 0; i < states.size(); ++i) {
    loc.states.push_back(string(states[i], path + ".states[" + std::to_string(i) + "]"));
  }
  loc.prior = numbers(member(v, "prior", path), path + ".prior");
  loc.utility = numbers(member(v, "utility", path), path + ".utility");
  if (auto it = v.find("payoff"); it != v.end()) loc.payoff = number(*it, path + ".payoff");
  if (loc.prior.size() != loc.states.size()) {
    fail(path + ".prior", "has " + std::to_string(loc.prior.size()) + " entries for " +
                              std::to_string(loc.states.size()) + " states");
  }
  if (loc.utility.size() != loc.states.size()) {
    fail(path + ".utility", "has " + std::to_string(loc.utility.size()) + " entries for " +
                                std::to_string(loc.states.size()) + " states");
  }
  return loc;
}

}  // namespace

SystemModel parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = position(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string what = e.what();
    if (auto p = what.find("syntax error"); p != std::string::npos) what = what.substr(p);
    throw InputError("instance file: line " + std::to_string(line) + ", column " +
                     std::to_string(col) + ": " + what);
  }
  if (!doc.is_object()) fail("top level", "expected an object");
  check_keys(doc, {"locations", "joint_prior"}, "top level");

  const auto& locs_json = array(member(doc, "locations", "top level"), "locations");
  if (locs_json.empty()) fail("locations", "needs at least one location");
  std::vector<LocationModel> locs;
  for (std::size_t k = 0; k < locs_json.size(); ++k) {
    locs.push_back(parse_location(locs_json[k], "locations[" + std::to_string(k) + "]"));
  }
  for (std::size_t k = 0; k < locs.size(); ++k) {
    if (auto v = validate(locs[k]); !v.empty()) {
      fail("locations[" + std::to_string(k) + "]", describe(v));
    }
  }

  auto it = doc.find("joint_prior");
  if (it == doc.end()) return make_system(std::move(locs));

  SystemModel shape(locs);
  std::vector<std::map<std::string, std::size_t>> index(locs.size());
  for (std::size_t k = 0; k < locs.size(); ++k) {
    for (std::size_t w = 0; w < locs[k].num_states(); ++w) index[k][locs[k].states[w]] = w;
  }
  if (shape.num_joint_states() > kMaxJointStates) {
    fail("joint_prior", "joint prior over more than 2^20 state tuples is not supported");
  }
  std::vector<double> joint(shape.num_joint_states(), 0.0);
  std::vector<bool> seen(joint.size(), false);
  const auto& entries = array(*it, "joint_prior");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string path = "joint_prior[" + std::to_string(i) + "]";
    const auto& e = entries[i];
    if (!e.is_object()) fail(path, "expected an object");
    check_keys(e, {"state", "prob"}, path);
    const auto& st = array(member(e, "state", path), path + ".state");
    if (st.size() != locs.size()) {
      fail(path + ".state", "has " + std::to_string(st.size()) + " labels for " +
                                std::to_string(locs.size()) + " locations");
    }
    StateTuple tuple(locs.size());
    for (std::size_t k = 0; k < locs.size(); ++k) {
      const std::string label = string(st[k], path + ".state[" + std::to_string(k) + "]");
      auto f = index[k].find(label);
      if (f == index[k].end()) {
        fail(path + ".state[" + std::to_string(k) + "]",
             "unknown state \"" + label + "\" for location '" + locs[k].name + "'");
      }
      tuple[k] = f->second;
    }
    const std::size_t flat = shape.encode(tuple);
    if (seen[flat]) fail(path + ".state", "duplicate state tuple");
    seen[flat] = true;
    joint[flat] = number(member(e, "prob", path), path + ".prob");
  }
  return make_system(std::move(locs), std::move(joint));
}

SystemModel load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open instance file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

std::string serialize_instance(const SystemModel& system) {
  nlohmann::ordered_json doc;
  doc["locations"] = nlohmann::ordered_json::array();
  for (const auto& loc : system.locations()) {
    nlohmann::ordered_json l;
    l["name"] = loc.name;
    l["states"] = loc.states;
    l["prior"] = loc.prior;
    l["utility"] = loc.utility;
    l["payoff"] = loc.payoff;
    doc["locations"].push_back(std::move(l));
  }
  if (!system.independent()) {
    auto entries = nlohmann::ordered_json::array();
    const auto& table = system.joint_table();
    for (std::size_t w = 0; w < table.size(); ++w) {
      if (table[w] == 0.0) continue;
      auto st = nlohmann::ordered_json::array();
      for (std::size_t k = 0; k < system.num_locations(); ++k) {
        st.push_back(system.location(k).states[system.state_of(w, k)]);
      }
      entries.push_back({{"state", std::move(st)}, {"prob", table[w]}});
    }
    doc["joint_prior"] = std::move(entries);
  }
  return doc.dump(2) + "\n";
}

}  // namespace persuasion
