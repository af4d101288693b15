#include "atlplus/strategy.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include <json.hpp>

#include "atlplus/oracle.hpp"

namespace atlplus {

long long transducer_memory_bound(int atom_count) {
  long long p3 = 1, p2 = 1;
  for (int i = 0; i < atom_count; ++i) {
    p3 *= 3;
    p2 *= 2;
  }
  return p3 - p2;
}

namespace {

struct step_choice {
  player seeker;
  int counter;
  int cp_index;
};

// All winning step-phase choices of the positional strategy, per (state,
// truth function).
std::map<std::pair<int, uint64_t>, std::vector<step_choice>> collect_step_choices(
    const buchi_solution& sol, const transition_arena& arena) {
  std::map<std::pair<int, uint64_t>, std::vector<step_choice>> out;
  for (size_t i = 0; i < arena.positions.size(); ++i) {
    const position& p = arena.positions[i];
    if (p.kind != position::kind_t::config ||
        p.phase != position::config_phase::step_verifier)
      continue;
    if (sol.winner[i] != player::eloise || sol.strategy[i] < 0) continue;
    const position& succ = arena.positions[static_cast<size_t>(sol.strategy[i])];
    out[{p.state, p.truth.raw()}].push_back({p.seeker, p.counter, succ.profile});
  }
  return out;
}

class synthesizer {
public:
  synthesizer(const buchi_solution& sol, const transition_arena& arena, int from)
      : arena_(arena), from_(from), choices_(collect_step_choices(sol, arena)) {}

  // tagged = use (T, seeker, counter) memory cells
  transducer run(bool tagged) {
    transducer t;
    t.coalition = arena_.coalition;
    t.tagged = tagged;
    t.cells.push_back(truth_fn::all_open(arena_.atoms.size()));
    t.cell_tags.emplace_back(player::eloise, arena_.atoms.size());
    cell_index_.clear();

    truth_fn theta0 = initial_status(arena_.labels, arena_.atoms, from_);
    if (theta0.fully_determined()) {
      // Everything is decided at step 0, so the play is won or lost no
      // matter what gets played: a constant machine suffices.
      for (int q = 0; q < arena_.model->num_states(); ++q) {
        t.update[{0, q}] = 0;
        t.act[{0, q}] = arena_.profiles_at(q)[0];
      }
      return t;
    }
    int c0 = cell_of(t, theta0, start_tag(theta0));
    t.update[{0, from_}] = c0;

    std::set<std::pair<int, int>> seen;
    std::deque<std::pair<int, int>> queue;
    queue.emplace_back(from_, c0);
    seen.insert({from_, c0});
    while (!queue.empty()) {
      auto [q, c] = queue.front();
      queue.pop_front();
      const truth_fn& theta = t.cells[static_cast<size_t>(c)];
      auto tag = t.cell_tags[static_cast<size_t>(c)];

      std::vector<int> cp = choose_action(q, theta, tag, tagged);
      t.act[{c, q}] = cp;

      for (int s : arena_.model->successors_under(q, arena_.coalition, cp)) {
        truth_fn next = step_status(arena_.labels, arena_.atoms, theta, s);
        int nc;
        if (next.fully_determined() || next == theta) {
          nc = c;  // saturating updates freeze the cell
        } else {
          nc = cell_of(t, next, evolve_tag(tag, next));
        }
        t.update[{c, s}] = nc;
        if (seen.insert({s, nc}).second) queue.emplace_back(s, nc);
      }
    }
    return t;
  }

private:
  const transition_arena& arena_;
  int from_;
  std::map<std::pair<int, uint64_t>, std::vector<step_choice>> choices_;
  std::map<std::tuple<uint64_t, player, int>, int> cell_index_;

  bool theta_winning(const truth_fn& theta) const {
    return resolve_boolean_exit(player::eloise, arena_.skeleton, theta) == player::eloise;
  }

  // Who is seeking in a play that continues: Eloise exactly while the truth
  // function is not yet winning for her.
  std::pair<player, int> start_tag(const truth_fn& theta0) const {
    int k = arena_.atoms.size();
    if (theta_winning(theta0)) return {player::abelard, k - 1};
    return {player::eloise, k};
  }

  std::pair<player, int> evolve_tag(std::pair<player, int> tag, const truth_fn& next) const {
    player s = theta_winning(next) ? player::abelard : player::eloise;
    int n = tag.second - (s != tag.first ? 1 : 0);
    return {s, std::max(0, n)};
  }

  int cell_of(transducer& t, const truth_fn& theta, std::pair<player, int> tag) {
    auto key = std::make_tuple(theta.raw(), t.tagged ? tag.first : player::eloise,
                               t.tagged ? tag.second : 0);
    auto it = cell_index_.find(key);
    if (it != cell_index_.end()) return it->second;
    int id = static_cast<int>(t.cells.size());
    cell_index_.emplace(key, id);
    t.cells.push_back(theta);
    t.cell_tags.push_back(tag);
    return id;
  }

  std::vector<int> choose_action(int q, const truth_fn& theta, std::pair<player, int> tag,
                                 bool tagged) const {
    auto it = choices_.find({q, theta.raw()});
    if (it == choices_.end() || it->second.empty())
      return arena_.profiles_at(q)[0];  // unreachable under a winning play

    const step_choice* best = nullptr;
    long best_score = -1;
    for (const auto& ch : it->second) {
      long score;
      if (tagged) {
        // anchor at the tracked slice, then its takeover, then the default
        if (ch.seeker == tag.first && ch.counter == tag.second)
          score = 1 << 20;
        else if (ch.seeker == tag.first)
          score = (1 << 18) - std::abs(ch.counter - tag.second);
        else if (ch.counter == tag.second - 1)
          score = 1 << 16;
        else
          score = (ch.seeker == player::eloise ? 1 << 10 : 0) + ch.counter;
      } else {
        score = (ch.seeker == player::eloise ? 1 << 10 : 0) + ch.counter;
      }
      if (score > best_score) {
        best_score = score;
        best = &ch;
      }
    }
    return arena_.profiles_at(q)[static_cast<size_t>(best->cp_index)];
  }
};

pruned_system transducer_product(const cgm& m, const std::vector<int>& coalition,
                                 const transducer& t, int q) {
  for (const auto& [key, cp] : t.act) {
    if (cp.size() != coalition.size())
      throw std::invalid_argument("transducer action arity mismatch");
    for (size_t i = 0; i < coalition.size(); ++i) {
      const auto& acts =
          m.available[static_cast<size_t>(coalition[i])][static_cast<size_t>(key.second)];
      if (std::find(acts.begin(), acts.end(), cp[i]) == acts.end())
        throw std::invalid_argument("transducer prescribes an inadmissible action at state '" +
                                    m.states[static_cast<size_t>(key.second)] + "'");
    }
  }

  auto start = t.update.find({0, q});
  if (start == t.update.end())
    throw std::invalid_argument("transducer has no initial update for state '" +
                                m.states[static_cast<size_t>(q)] + "'");

  pruned_system sys;
  std::map<std::pair<int, int>, int> ids;
  std::deque<std::pair<int, int>> queue;
  auto intern = [&](int state, int cell) {
    auto it = ids.find({state, cell});
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(sys.state_of.size());
    ids.emplace(std::make_pair(state, cell), id);
    sys.state_of.push_back(state);
    sys.succ.emplace_back();
    queue.emplace_back(state, cell);
    return id;
  };
  sys.initial = intern(q, start->second);
  while (!queue.empty()) {
    auto [state, cell] = queue.front();
    queue.pop_front();
    int id = ids[{state, cell}];
    auto act = t.act.find({cell, state});
    if (act == t.act.end())
      throw std::invalid_argument("transducer has no action for cell " + std::to_string(cell) +
                                  " at state '" + m.states[static_cast<size_t>(state)] + "'");
    for (int s : m.successors_under(state, coalition, act->second)) {
      auto up = t.update.find({cell, s});
      if (up == t.update.end())
        throw std::invalid_argument("transducer has no update for cell " + std::to_string(cell) +
                                    " observing state '" + m.states[static_cast<size_t>(s)] +
                                    "'");
      sys.succ[static_cast<size_t>(id)].push_back(intern(s, up->second));
    }
  }
  return sys;
}

}  // namespace

bool verify_witness(const cgm& m, const std::vector<int>& coalition, const path_formula& phi,
                    const label_table& labels, const transducer& t, int q) {
  pruned_system sys = transducer_product(m, coalition, t, q);
  return all_paths_satisfy(sys, phi, labels);
}

witness_report synthesize_transducer(const buchi_solution& sol, const transition_arena& arena,
                                     int from_state) {
  if (sol.winner[static_cast<size_t>(arena.initial[static_cast<size_t>(from_state)])] !=
      player::eloise)
    throw std::invalid_argument("synthesize_transducer: state '" +
                                arena.model->states[static_cast<size_t>(from_state)] +
                                "' is not in Eloise's winning region");

  witness_report rep;
  rep.memory_bound = transducer_memory_bound(arena.atoms.size());

  synthesizer synth(sol, arena, from_state);

  auto verify = [&](const transducer& t) {
    pruned_system sys = transducer_product(*arena.model, arena.coalition, t, from_state);
    return all_paths_satisfy(sys, arena.atoms, arena.skeleton, arena.labels);
  };

  transducer primary = synth.run(false);
  if (verify(primary)) {
    rep.machine = std::move(primary);
    rep.verified = true;
    rep.level = fallback_level::t_only;
  } else {
    transducer tagged = synth.run(true);
    rep.machine = std::move(tagged);
    rep.verified = verify(rep.machine);
    rep.level = fallback_level::t_seeker_counter;
  }

  if (rep.level == fallback_level::t_only) {
    std::set<uint64_t> distinct;
    for (const auto& c : rep.machine.cells) distinct.insert(c.raw());
    rep.memory_used = static_cast<int>(distinct.size());
  } else {
    rep.memory_used = static_cast<int>(rep.machine.cells.size());
  }
  return rep;
}

std::string dump_witness(const transition_arena& arena, const witness_report& w,
                         int from_state) {
  const cgm& m = *arena.model;
  nlohmann::ordered_json doc;
  std::vector<std::string> agents;
  for (int a : arena.coalition) agents.push_back(m.agents[static_cast<size_t>(a)]);
  doc["coalition"] = agents;
  std::vector<std::string> atoms;
  for (const auto& a : arena.atoms.atoms) atoms.push_back(a.key);
  doc["atoms"] = atoms;
  doc["state"] = m.states[static_cast<size_t>(from_state)];
  auto cells = nlohmann::ordered_json::array();
  for (size_t i = 0; i < w.machine.cells.size(); ++i) {
    nlohmann::ordered_json c;
    c["status"] = w.machine.cells[i].str();
    if (w.machine.tagged) {
      c["seeker"] = std::string(1, player_char(w.machine.cell_tags[i].first));
      c["counter"] = w.machine.cell_tags[i].second;
    }
    cells.push_back(std::move(c));
  }
  doc["cells"] = std::move(cells);
  doc["initial"] = 0;
  auto upd = nlohmann::ordered_json::array();
  for (const auto& [key, to] : w.machine.update)
    upd.push_back({key.first, m.states[static_cast<size_t>(key.second)], to});
  doc["update"] = std::move(upd);
  auto act = nlohmann::ordered_json::array();
  for (const auto& [key, cp] : w.machine.act) {
    nlohmann::ordered_json prof;
    for (size_t i = 0; i < arena.coalition.size(); ++i)
      prof[m.agents[static_cast<size_t>(arena.coalition[i])]] =
          m.actions[static_cast<size_t>(cp[i])];
    act.push_back({key.first, m.states[static_cast<size_t>(key.second)], std::move(prof)});
  }
  doc["act"] = std::move(act);
  doc["memory_used"] = w.memory_used;
  doc["memory_bound"] = w.memory_bound;
  doc["fallback_level"] = fallback_name(w.level);
  doc["verified"] = w.verified;
  return doc.dump(2) + "\n";
}

}  // namespace atlplus
