#include "atlplus/cgm.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace atlplus {

namespace {

int find_name(const std::vector<std::string>& xs, const std::string& name) {
  auto it = std::find(xs.begin(), xs.end(), name);
  return it == xs.end() ? -1 : static_cast<int>(it - xs.begin());
}

}  // namespace

int cgm::agent_id(const std::string& name) const { return find_name(agents, name); }
int cgm::state_id(const std::string& name) const { return find_name(states, name); }
int cgm::prop_id(const std::string& name) const { return find_name(propositions, name); }
int cgm::action_id(const std::string& name) const { return find_name(actions, name); }

std::string cgm::profile_str(const std::vector<int>& profile) const {
  std::ostringstream os;
  os << '(';
  for (size_t a = 0; a < profile.size(); ++a) {
    if (a) os << ", ";
    os << agents[a] << '=' << actions[static_cast<size_t>(profile[a])];
  }
  os << ')';
  return os.str();
}

int cgm::outcome(int q, const std::vector<int>& profile) const {
  const auto& tr = transitions[static_cast<size_t>(q)];
  auto it = tr.find(profile);
  if (it == tr.end())
    throw model_error("inadmissible profile " + profile_str(profile) + " at state '" +
                      states[static_cast<size_t>(q)] + "'");
  return it->second;
}

std::vector<std::vector<int>> cgm::full_profiles(int q) const {
  std::vector<int> all(agents.size());
  for (size_t a = 0; a < agents.size(); ++a) all[a] = static_cast<int>(a);
  return coalition_profiles(q, all);
}

std::vector<std::vector<int>> cgm::coalition_profiles(int q,
                                                      const std::vector<int>& coalition) const {
  std::vector<std::vector<int>> out;
  std::vector<size_t> idx(coalition.size(), 0);
  for (;;) {
    std::vector<int> p(coalition.size());
    for (size_t i = 0; i < coalition.size(); ++i)
      p[i] = available[static_cast<size_t>(coalition[i])][static_cast<size_t>(q)][idx[i]];
    out.push_back(std::move(p));
    size_t i = coalition.size();
    while (i > 0) {
      --i;
      const auto& acts = available[static_cast<size_t>(coalition[i])][static_cast<size_t>(q)];
      if (++idx[i] < acts.size()) break;
      idx[i] = 0;
      if (i == 0) return out;
    }
    if (coalition.empty()) return out;  // single empty profile
  }
}

std::vector<int> cgm::successors_under(int q, const std::vector<int>& coalition,
                                       const std::vector<int>& cp) const {
  std::vector<int> out;
  for (const auto& [profile, succ] : transitions[static_cast<size_t>(q)]) {
    bool match = true;
    for (size_t i = 0; i < coalition.size(); ++i)
      if (profile[static_cast<size_t>(coalition[i])] != cp[i]) {
        match = false;
        break;
      }
    if (match && std::find(out.begin(), out.end(), succ) == out.end()) out.push_back(succ);
  }
  return out;
}

std::vector<int> cgm::successors(int q) const {
  return successors_under(q, {}, {});
}

void cgm::validate() const {
  if (agents.empty()) throw model_error("model declares no agents");
  if (states.empty()) throw model_error("model declares no states");
  auto check_unique = [](const std::vector<std::string>& xs, const char* what) {
    std::set<std::string> seen;
    for (const auto& x : xs)
      if (!seen.insert(x).second)
        throw model_error(std::string("duplicate ") + what + " '" + x + "'");
  };
  check_unique(agents, "agent");
  check_unique(states, "state");
  check_unique(propositions, "proposition");
  check_unique(actions, "action");

  for (size_t a = 0; a < agents.size(); ++a)
    for (size_t q = 0; q < states.size(); ++q) {
      const auto& acts = available[a][q];
      if (acts.empty())
        throw model_error("empty action set for agent '" + agents[a] + "' at state '" +
                          states[q] + "'");
      for (int act : acts)
        if (act < 0 || act >= static_cast<int>(actions.size()))
          throw model_error("undeclared action id in availability table");
    }

  // Outcome must be total on admissible profiles and defined on no others.
  std::vector<std::string> missing;
  for (size_t q = 0; q < states.size(); ++q) {
    const auto& tr = transitions[q];
    for (const auto& profile : full_profiles(static_cast<int>(q)))
      if (!tr.count(profile))
        missing.push_back("(" + states[q] + ", " + profile_str(profile) + ")");
    for (const auto& [profile, succ] : tr) {
      if (profile.size() != agents.size())
        throw model_error("profile arity mismatch at state '" + states[q] + "'");
      for (size_t a = 0; a < agents.size(); ++a) {
        const auto& acts = available[a][q];
        if (std::find(acts.begin(), acts.end(), profile[a]) == acts.end())
          throw model_error("transition at state '" + states[q] + "' uses action '" +
                            actions[static_cast<size_t>(profile[a])] +
                            "' not available to agent '" + agents[a] + "'");
      }
      if (succ < 0 || succ >= static_cast<int>(states.size()))
        throw model_error("undeclared successor state at '" + states[q] + "'");
    }
  }
  if (!missing.empty()) {
    std::string msg = "outcome function is not total, missing:";
    for (const auto& m : missing) msg += " " + m;
    throw model_error(msg);
  }
}

std::vector<int> agent_ids(const cgm& m, const std::vector<std::string>& names) {
  std::vector<int> ids;
  for (const auto& n : names) {
    int id = m.agent_id(n);
    if (id < 0) throw model_error("agent '" + n + "' is not declared in the model");
    ids.push_back(id);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

// ------------------------------------------------------------------- JSON

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw model_error("unknown key '" + it.key() + "' in " + where);
}

std::vector<std::string> string_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw model_error(where + " must be a list of strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw model_error(where + " must be a list of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace

cgm load_model(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw model_error(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw model_error("model file must be a JSON object");
  reject_unknown_keys(doc,
                      {"agents", "states", "propositions", "actions", "available",
                       "transitions", "valuation"},
                      "model document");
  for (const char* key : {"agents", "states", "propositions", "actions", "available",
                          "transitions", "valuation"})
    if (!doc.contains(key)) throw model_error(std::string("missing key '") + key + "'");

  cgm m;
  m.agents = string_list(doc["agents"], "agents");
  m.states = string_list(doc["states"], "states");
  m.propositions = string_list(doc["propositions"], "propositions");
  m.actions = string_list(doc["actions"], "actions");

  m.available.assign(m.agents.size(), std::vector<std::vector<int>>(m.states.size()));
  if (!doc["available"].is_array()) throw model_error("available must be a list");
  for (const auto& entry : doc["available"]) {
    reject_unknown_keys(entry, {"agent", "state", "actions"}, "available entry");
    for (const char* key : {"agent", "state", "actions"})
      if (!entry.contains(key))
        throw model_error(std::string("available entry missing '") + key + "'");
    int a = m.agent_id(entry["agent"].get<std::string>());
    if (a < 0) throw model_error("undeclared agent '" + entry["agent"].get<std::string>() +
                                 "' in available");
    int q = m.state_id(entry["state"].get<std::string>());
    if (q < 0) throw model_error("undeclared state '" + entry["state"].get<std::string>() +
                                 "' in available");
    if (!m.available[static_cast<size_t>(a)][static_cast<size_t>(q)].empty())
      throw model_error("duplicate available entry for agent '" + m.agents[static_cast<size_t>(a)] +
                        "' at state '" + m.states[static_cast<size_t>(q)] + "'");
    std::vector<int> acts;
    for (const auto& name : string_list(entry["actions"], "available actions")) {
      int id = m.action_id(name);
      if (id < 0) throw model_error("undeclared action '" + name + "' in available");
      acts.push_back(id);
    }
    std::sort(acts.begin(), acts.end());
    acts.erase(std::unique(acts.begin(), acts.end()), acts.end());
    if (acts.empty())
      throw model_error("empty action set for agent '" + m.agents[static_cast<size_t>(a)] +
                        "' at state '" + m.states[static_cast<size_t>(q)] + "'");
    m.available[static_cast<size_t>(a)][static_cast<size_t>(q)] = std::move(acts);
  }
  for (size_t a = 0; a < m.agents.size(); ++a)
    for (size_t q = 0; q < m.states.size(); ++q)
      if (m.available[a][q].empty())
        throw model_error("empty action set for agent '" + m.agents[a] + "' at state '" +
                          m.states[q] + "'");

  m.transitions.assign(m.states.size(), {});
  if (!doc["transitions"].is_array()) throw model_error("transitions must be a list");
  for (const auto& entry : doc["transitions"]) {
    reject_unknown_keys(entry, {"from", "profile", "to"}, "transition entry");
    for (const char* key : {"from", "profile", "to"})
      if (!entry.contains(key))
        throw model_error(std::string("transition entry missing '") + key + "'");
    int from = m.state_id(entry["from"].get<std::string>());
    if (from < 0)
      throw model_error("undeclared state '" + entry["from"].get<std::string>() +
                        "' in transitions");
    int to = m.state_id(entry["to"].get<std::string>());
    if (to < 0)
      throw model_error("undeclared state '" + entry["to"].get<std::string>() +
                        "' in transitions");
    if (!entry["profile"].is_object())
      throw model_error("transition profile must map agents to actions");
    std::vector<int> profile(m.agents.size(), -1);
    for (auto it = entry["profile"].begin(); it != entry["profile"].end(); ++it) {
      int a = m.agent_id(it.key());
      if (a < 0) throw model_error("undeclared agent '" + it.key() + "' in a profile");
      int act = m.action_id(it.value().get<std::string>());
      if (act < 0)
        throw model_error("undeclared action '" + it.value().get<std::string>() +
                          "' in a profile");
      profile[static_cast<size_t>(a)] = act;
    }
    for (size_t a = 0; a < m.agents.size(); ++a)
      if (profile[a] < 0)
        throw model_error("profile at state '" + m.states[static_cast<size_t>(from)] +
                          "' assigns no action to agent '" + m.agents[a] + "'");
    auto& tr = m.transitions[static_cast<size_t>(from)];
    if (tr.count(profile))
      throw model_error("duplicate transition for state '" +
                        m.states[static_cast<size_t>(from)] + "' and profile " +
                        m.profile_str(profile));
    tr[profile] = to;
  }

  m.valuation.assign(m.propositions.size(), std::vector<char>(m.states.size(), 0));
  if (!doc["valuation"].is_object()) throw model_error("valuation must be an object");
  for (auto it = doc["valuation"].begin(); it != doc["valuation"].end(); ++it) {
    int p = m.prop_id(it.key());
    if (p < 0) throw model_error("undeclared proposition '" + it.key() + "' in valuation");
    for (const auto& name : string_list(it.value(), "valuation states")) {
      int q = m.state_id(name);
      if (q < 0) throw model_error("undeclared state '" + name + "' in valuation");
      m.valuation[static_cast<size_t>(p)][static_cast<size_t>(q)] = 1;
    }
  }

  m.validate();
  return m;
}

cgm load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw model_error("cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_model(buf.str());
}

std::string dump_model(const cgm& m) {
  nlohmann::ordered_json doc;
  doc["agents"] = m.agents;
  doc["states"] = m.states;
  doc["propositions"] = m.propositions;
  doc["actions"] = m.actions;
  auto& avail = doc["available"] = nlohmann::ordered_json::array();
  for (size_t a = 0; a < m.agents.size(); ++a)
    for (size_t q = 0; q < m.states.size(); ++q) {
      nlohmann::ordered_json e;
      e["agent"] = m.agents[a];
      e["state"] = m.states[q];
      auto& acts = e["actions"] = nlohmann::ordered_json::array();
      for (int id : m.available[a][q]) acts.push_back(m.actions[static_cast<size_t>(id)]);
      avail.push_back(std::move(e));
    }
  auto& trans = doc["transitions"] = nlohmann::ordered_json::array();
  for (size_t q = 0; q < m.states.size(); ++q)
    for (const auto& [profile, to] : m.transitions[q]) {
      nlohmann::ordered_json e;
      e["from"] = m.states[q];
      nlohmann::ordered_json prof;
      for (size_t a = 0; a < m.agents.size(); ++a)
        prof[m.agents[a]] = m.actions[static_cast<size_t>(profile[a])];
      e["profile"] = std::move(prof);
      e["to"] = m.states[static_cast<size_t>(to)];
      trans.push_back(std::move(e));
    }
  auto& val = doc["valuation"] = nlohmann::ordered_json::object();
  for (size_t p = 0; p < m.propositions.size(); ++p) {
    auto arr = nlohmann::ordered_json::array();
    for (size_t q = 0; q < m.states.size(); ++q)
      if (m.valuation[p][q]) arr.push_back(m.states[q]);
    val[m.propositions[p]] = std::move(arr);
  }
  return doc.dump(2) + "\n";
}

std::vector<coalition_move> coalition_moves(const cgm& m, int q,
                                            const std::vector<int>& coalition) {
  std::vector<coalition_move> out;
  for (auto& cp : m.coalition_profiles(q, coalition)) {
    coalition_move mv;
    mv.successors = m.successors_under(q, coalition, cp);
    mv.profile = std::move(cp);
    out.push_back(std::move(mv));
  }
  return out;
}

bool is_finite_path(const cgm& m, const std::vector<int>& path) {
  if (path.empty()) return false;
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    const auto& tr = m.transitions[static_cast<size_t>(path[i])];
    bool witnessed = false;
    for (const auto& [profile, succ] : tr)
      if (succ == path[i + 1]) {
        witnessed = true;
        break;
      }
    if (!witnessed) return false;
  }
  return true;
}

// --------------------------------------------------------------- fixtures

namespace fixtures {

const char* mstar_json() {
  return R"({
  "agents": ["a1", "a2"],
  "states": ["q0", "q1", "q2", "q3", "q4"],
  "propositions": ["p1", "p2", "p3"],
  "actions": ["alpha", "beta"],
  "available": [
    {"agent": "a1", "state": "q0", "actions": ["alpha"]},
    {"agent": "a1", "state": "q1", "actions": ["alpha", "beta"]},
    {"agent": "a1", "state": "q2", "actions": ["alpha"]},
    {"agent": "a1", "state": "q3", "actions": ["alpha"]},
    {"agent": "a1", "state": "q4", "actions": ["alpha"]},
    {"agent": "a2", "state": "q0", "actions": ["alpha", "beta"]},
    {"agent": "a2", "state": "q1", "actions": ["alpha"]},
    {"agent": "a2", "state": "q2", "actions": ["alpha"]},
    {"agent": "a2", "state": "q3", "actions": ["alpha"]},
    {"agent": "a2", "state": "q4", "actions": ["alpha"]}
  ],
  "transitions": [
    {"from": "q0", "profile": {"a1": "alpha", "a2": "alpha"}, "to": "q1"},
    {"from": "q0", "profile": {"a1": "alpha", "a2": "beta"}, "to": "q2"},
    {"from": "q1", "profile": {"a1": "alpha", "a2": "alpha"}, "to": "q3"},
    {"from": "q1", "profile": {"a1": "beta", "a2": "alpha"}, "to": "q4"},
    {"from": "q2", "profile": {"a1": "alpha", "a2": "alpha"}, "to": "q3"},
    {"from": "q3", "profile": {"a1": "alpha", "a2": "alpha"}, "to": "q1"},
    {"from": "q4", "profile": {"a1": "alpha", "a2": "alpha"}, "to": "q4"}
  ],
  "valuation": {"p1": ["q2", "q4"], "p2": ["q3"], "p3": ["q1"]}
})";
}

const char* m3_json() {
  return R"({
  "agents": ["a1", "a2"],
  "states": ["q0", "q1", "q2"],
  "propositions": ["p1", "p2"],
  "actions": ["alpha", "beta"],
  "available": [
    {"agent": "a1", "state": "q0", "actions": ["alpha", "beta"]},
    {"agent": "a1", "state": "q1", "actions": ["alpha"]},
    {"agent": "a1", "state": "q2", "actions": ["alpha"]},
    {"agent": "a2", "state": "q0", "actions": ["alpha"]},
    {"agent": "a2", "state": "q1", "actions": ["alpha", "beta"]},
    {"agent": "a2", "state": "q2", "actions": ["alpha"]}
  ],
  "transitions": [
    {"from": "q0", "profile": {"a1": "alpha", "a2": "alpha"}, "to": "q1"},
    {"from": "q0", "profile": {"a1": "beta", "a2": "alpha"}, "to": "q0"},
    {"from": "q1", "profile": {"a1": "alpha", "a2": "alpha"}, "to": "q2"},
    {"from": "q1", "profile": {"a1": "alpha", "a2": "beta"}, "to": "q1"},
    {"from": "q2", "profile": {"a1": "alpha", "a2": "alpha"}, "to": "q2"}
  ],
  "valuation": {"p1": ["q0"], "p2": ["q2"]}
})";
}

cgm mstar() { return load_model(mstar_json()); }
cgm m3() { return load_model(m3_json()); }

cgm chain(int length) {
  if (length < 2) throw model_error("chain needs at least 2 states");
  cgm m;
  m.agents = {"mover"};
  m.actions = {"go", "stay"};
  m.propositions = {"mid", "goal"};
  for (int i = 0; i < length; ++i) m.states.push_back("s" + std::to_string(i));
  m.available.assign(1, std::vector<std::vector<int>>(m.states.size()));
  m.transitions.assign(m.states.size(), {});
  for (int i = 0; i < length; ++i) {
    if (i + 1 < length) {
      m.available[0][static_cast<size_t>(i)] = {0, 1};
      m.transitions[static_cast<size_t>(i)][{0}] = i + 1;
      m.transitions[static_cast<size_t>(i)][{1}] = i;
    } else {
      m.available[0][static_cast<size_t>(i)] = {1};
      m.transitions[static_cast<size_t>(i)][{1}] = i;
    }
  }
  m.valuation.assign(2, std::vector<char>(m.states.size(), 0));
  m.valuation[0][static_cast<size_t>((length - 1) / 2)] = 1;
  m.valuation[1][static_cast<size_t>(length - 1)] = 1;
  m.validate();
  return m;
}

cgm memory_hub() {
  cgm m;
  m.agents = {"c"};
  m.states = {"hub", "sp", "sq"};
  m.propositions = {"pa", "pb"};
  m.actions = {"left", "right", "back"};
  m.available.assign(1, std::vector<std::vector<int>>(3));
  m.available[0][0] = {0, 1};
  m.available[0][1] = {2};
  m.available[0][2] = {2};
  m.transitions.assign(3, {});
  m.transitions[0][{0}] = 1;
  m.transitions[0][{1}] = 2;
  m.transitions[1][{2}] = 0;
  m.transitions[2][{2}] = 0;
  m.valuation.assign(2, std::vector<char>(3, 0));
  m.valuation[0][1] = 1;
  m.valuation[1][2] = 1;
  m.validate();
  return m;
}

}  // namespace fixtures

}  // namespace atlplus
