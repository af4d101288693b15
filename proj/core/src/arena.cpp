#include "atlplus/arena.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace atlplus {

namespace {

const char* stage_name(adjust_stage s) {
  switch (s) {
    case adjust_stage::offer_v_ver: return "ovv";
    case adjust_stage::respond_vbar_ver: return "rbv";
    case adjust_stage::offer_vbar_ver: return "obv";
    case adjust_stage::respond_v_ver: return "rvv";
    case adjust_stage::offer_v_fal: return "ovf";
    case adjust_stage::respond_vbar_fal: return "rbf";
    case adjust_stage::offer_vbar_fal: return "obf";
    case adjust_stage::respond_v_fal: return "rvf";
  }
  return "?";
}

bool atom_kind_updatable(relative_atom::kind_t kind, round_flag r) {
  switch (kind) {
    case relative_atom::kind_t::state: return r == round_flag::first;
    case relative_atom::kind_t::next: return r == round_flag::second;
    case relative_atom::kind_t::until: return true;
  }
  return false;
}

position make_config(player seeker, int q, const truth_fn& t, int n, round_flag r,
                     position::config_phase phase) {
  position p;
  p.kind = position::kind_t::config;
  p.seeker = seeker;
  p.state = q;
  p.truth = t;
  p.counter = n;
  p.round = r;
  p.phase = phase;
  return p;
}

position make_ending(player winner) {
  position p;
  p.kind = position::kind_t::ending;
  p.winner = winner;
  return p;
}

}  // namespace

std::array<uint64_t, 2> position::key() const {
  uint64_t w = 0;
  auto push = [&w](uint64_t v, int bits) { w = (w << bits) | v; };
  push(static_cast<uint64_t>(kind), 2);
  push(static_cast<uint64_t>(seeker), 1);
  push(static_cast<uint64_t>(verifier), 1);
  push(static_cast<uint64_t>(winner), 1);
  push(static_cast<uint64_t>(phase), 3);
  push(static_cast<uint64_t>(round), 2);
  push(static_cast<uint64_t>(stage), 3);
  push(static_cast<uint64_t>(atom), 6);
  push(static_cast<uint64_t>(counter), 6);
  push(static_cast<uint64_t>(state), 12);
  push(static_cast<uint64_t>(node), 12);
  push(static_cast<uint64_t>(profile), 12);
  return {truth.raw(), w};
}

player resolve_challenge_exit(player claimant, const label_table& labels, int state,
                              const state_formula& claimed) {
  return labels.lookup(claimed, state) ? claimant : opponent(claimant);
}

player resolve_boolean_exit(player verifier, const atom_skeleton& sk, const truth_fn& truth) {
  bool value = sk.eval([&truth](int atom) { return open_as_false(truth.get(atom)); });
  return value ? verifier : opponent(verifier);
}

const std::vector<std::vector<int>>& transition_arena::profiles_at(int state) const {
  auto it = profile_cache_.find(state);
  if (it == profile_cache_.end())
    it = profile_cache_.emplace(state, model->coalition_profiles(state, coalition)).first;
  return it->second;
}

std::vector<int> transition_arena::opposing_agents() const {
  std::vector<int> out;
  for (int a = 0; a < model->num_agents(); ++a)
    if (std::find(coalition.begin(), coalition.end(), a) == coalition.end()) out.push_back(a);
  return out;
}

const std::vector<std::vector<int>>& transition_arena::opposing_profiles_at(int state) const {
  auto it = opposing_cache_.find(state);
  if (it == opposing_cache_.end())
    it = opposing_cache_.emplace(state, model->coalition_profiles(state, opposing_agents())).first;
  return it->second;
}

int transition_arena::distinct_truth_functions() const {
  std::set<uint64_t> seen;
  for (const auto& p : positions)
    if (p.kind == position::kind_t::config) seen.insert(p.truth.raw());
  return static_cast<int>(seen.size());
}

namespace {

// Shared by the builder and by transition_arena::enumerate_moves.
class move_gen {
public:
  explicit move_gen(const transition_arena& ar) : ar_(ar) {}

  std::vector<std::pair<std::string, position>> moves(const position& p) const {
    std::vector<std::pair<std::string, position>> out;
    switch (p.kind) {
      case position::kind_t::ending: out.emplace_back("loop", p); break;
      case position::kind_t::boolean: boolean_moves(p, out); break;
      case position::kind_t::config: config_moves(p, out); break;
    }
    return out;
  }

  // First live adjust stage at or after `from_atom`, else the phase-ii entry.
  position advance_adjust(player seeker, int q, const truth_fn& t, int n, round_flag r,
                          int from_atom) const {
    for (int j = from_atom; j < ar_.atoms.size(); ++j) {
      if (t.get(j) != tv::open) continue;  // determined values never update
      if (!atom_kind_updatable(ar_.atoms[j].kind, r)) continue;
      position p = make_config(seeker, q, t, n, r, position::config_phase::adjust);
      p.atom = j;
      p.stage = adjust_stage::offer_v_ver;
      return p;
    }
    return make_config(seeker, q, t, n, r, position::config_phase::decide_seeker);
  }

  position initial_position(int q) const {
    return advance_adjust(player::eloise, q, truth_fn::all_open(ar_.atoms.size()),
                          ar_.atoms.size(), round_flag::first, 0);
  }

  player owner_of(const position& p) const {
    switch (p.kind) {
      case position::kind_t::ending: return p.winner;
      case position::kind_t::boolean: return p.verifier;
      case position::kind_t::config: break;
    }
    switch (p.phase) {
      case position::config_phase::decide_seeker: return p.seeker;
      case position::config_phase::decide_opponent: return opponent(p.seeker);
      case position::config_phase::step_verifier: return player::eloise;
      case position::config_phase::step_falsifier: return player::abelard;
      case position::config_phase::adjust:
        switch (p.stage) {
          case adjust_stage::offer_v_ver:
          case adjust_stage::respond_v_ver:
          case adjust_stage::offer_v_fal:
          case adjust_stage::respond_v_fal: return player::eloise;
          default: return player::abelard;
        }
    }
    return player::eloise;
  }

private:
  const transition_arena& ar_;

  const state_formula& ver_target(int atom) const {
    const relative_atom& a = ar_.atoms[atom];
    return a.kind == relative_atom::kind_t::until ? *a.arg2 : *a.arg1;
  }

  state_ref fal_challenge_formula(int atom) const {
    // claiming "arg1 is false"; a challenge continues on its negation
    return sf::neg(ar_.atoms[atom].arg1);
  }

  position boolean_or_ending(player verifier, int q, int node, const truth_fn& t) const {
    const auto& n = ar_.skeleton.nodes[static_cast<size_t>(node)];
    if (n.op == atom_skeleton::node::op_t::atom)
      return make_ending(open_as_false(t.get(n.atom)) ? verifier : opponent(verifier));
    position p;
    p.kind = position::kind_t::boolean;
    p.verifier = verifier;
    p.state = q;
    p.node = node;
    p.truth = t;
    return p;
  }

  void boolean_moves(const position& p, std::vector<std::pair<std::string, position>>& out) const {
    const auto& n = ar_.skeleton.nodes[static_cast<size_t>(p.node)];
    if (n.op == atom_skeleton::node::op_t::neg) {
      out.emplace_back("flip",
                       boolean_or_ending(opponent(p.verifier), p.state, n.child, p.truth));
    } else {
      out.emplace_back("left", boolean_or_ending(p.verifier, p.state, n.child, p.truth));
      out.emplace_back("right", boolean_or_ending(p.verifier, p.state, n.child2, p.truth));
    }
  }

  position next_atom(const position& p, const truth_fn& t) const {
    return advance_adjust(p.seeker, p.state, t, p.counter, p.round, p.atom + 1);
  }

  position at_stage(const position& p, adjust_stage s) const {
    position q = p;
    q.stage = s;
    return q;
  }

  // A claim that loses on challenge may be pruned (claimant's move only).
  bool keep_claim(player claimant, const state_formula& claimed, int q) const {
    if (!ar_.options.prune_losing_claims) return true;
    return resolve_challenge_exit(claimant, ar_.labels, q, claimed) == claimant;
  }

  void adjust_moves(const position& p, std::vector<std::pair<std::string, position>>& out) const {
    const bool is_until = ar_.atoms[p.atom].kind == relative_atom::kind_t::until;
    switch (p.stage) {
      case adjust_stage::offer_v_ver:
        if (keep_claim(player::eloise, ver_target(p.atom), p.state))
          out.emplace_back("claim", at_stage(p, adjust_stage::respond_vbar_ver));
        out.emplace_back("pass", at_stage(p, adjust_stage::offer_vbar_ver));
        break;
      case adjust_stage::respond_vbar_ver:
        out.emplace_back("accept", next_atom(p, p.truth.set(p.atom, tv::yes)));
        out.emplace_back("challenge",
                         make_ending(resolve_challenge_exit(player::eloise, ar_.labels, p.state,
                                                            ver_target(p.atom))));
        break;
      case adjust_stage::offer_vbar_ver:
        if (keep_claim(player::abelard, ver_target(p.atom), p.state))
          out.emplace_back("claim", at_stage(p, adjust_stage::respond_v_ver));
        out.emplace_back("pass", is_until ? at_stage(p, adjust_stage::offer_v_fal)
                                          : next_atom(p, p.truth));
        break;
      case adjust_stage::respond_v_ver:
        out.emplace_back("accept", next_atom(p, p.truth.set(p.atom, tv::yes)));
        out.emplace_back("challenge",
                         make_ending(resolve_challenge_exit(player::abelard, ar_.labels, p.state,
                                                            ver_target(p.atom))));
        break;
      case adjust_stage::offer_v_fal:
        if (keep_claim(player::eloise, *fal_challenge_formula(p.atom), p.state))
          out.emplace_back("claim", at_stage(p, adjust_stage::respond_vbar_fal));
        out.emplace_back("pass", at_stage(p, adjust_stage::offer_vbar_fal));
        break;
      case adjust_stage::respond_vbar_fal:
        out.emplace_back("accept", next_atom(p, p.truth.set(p.atom, tv::no)));
        out.emplace_back("challenge",
                         make_ending(resolve_challenge_exit(player::eloise, ar_.labels, p.state,
                                                            *fal_challenge_formula(p.atom))));
        break;
      case adjust_stage::offer_vbar_fal:
        if (keep_claim(player::abelard, *fal_challenge_formula(p.atom), p.state))
          out.emplace_back("claim", at_stage(p, adjust_stage::respond_v_fal));
        out.emplace_back("pass", next_atom(p, p.truth));
        break;
      case adjust_stage::respond_v_fal:
        out.emplace_back("accept", next_atom(p, p.truth.set(p.atom, tv::no)));
        out.emplace_back("challenge",
                         make_ending(resolve_challenge_exit(player::abelard, ar_.labels, p.state,
                                                            *fal_challenge_formula(p.atom))));
        break;
    }
  }

  std::string profile_label(const char* prefix, const std::vector<int>& agents,
                            const std::vector<int>& prof) const {
    std::string s = prefix;
    for (size_t i = 0; i < agents.size(); ++i) {
      s += i ? "," : ":";
      s += ar_.model->agents[static_cast<size_t>(agents[i])];
      s += '=';
      s += ar_.model->actions[static_cast<size_t>(prof[i])];
    }
    return s;
  }

  void config_moves(const position& p, std::vector<std::pair<std::string, position>>& out) const {
    switch (p.phase) {
      case position::config_phase::adjust: adjust_moves(p, out); return;
      case position::config_phase::decide_seeker: {
        out.emplace_back("continue",
                         make_config(p.seeker, p.state, p.truth, p.counter, p.round,
                                     position::config_phase::step_verifier));
        if (p.counter == 0) {
          out.emplace_back("stop",
                           boolean_or_ending(player::eloise, p.state, ar_.skeleton.root, p.truth));
        } else {
          out.emplace_back("stop", make_config(p.seeker, p.state, p.truth, p.counter, p.round,
                                               position::config_phase::decide_opponent));
        }
        return;
      }
      case position::config_phase::decide_opponent: {
        out.emplace_back("takeover",
                         make_config(opponent(p.seeker), p.state, p.truth, p.counter - 1, p.round,
                                     position::config_phase::step_verifier));
        out.emplace_back("end",
                         boolean_or_ending(player::eloise, p.state, ar_.skeleton.root, p.truth));
        return;
      }
      case position::config_phase::step_verifier: {
        const auto& cps = ar_.profiles_at(p.state);
        for (size_t i = 0; i < cps.size(); ++i) {
          position q = make_config(p.seeker, p.state, p.truth, p.counter, p.round,
                                   position::config_phase::step_falsifier);
          q.profile = static_cast<int>(i);
          out.emplace_back(profile_label("act", ar_.coalition, cps[i]), q);
        }
        return;
      }
      case position::config_phase::step_falsifier: {
        const auto& cp = ar_.profiles_at(p.state)[static_cast<size_t>(p.profile)];
        auto opp = ar_.opposing_agents();
        for (const auto& op : ar_.opposing_profiles_at(p.state)) {
          std::vector<int> full(static_cast<size_t>(ar_.model->num_agents()));
          for (size_t i = 0; i < ar_.coalition.size(); ++i)
            full[static_cast<size_t>(ar_.coalition[i])] = cp[i];
          for (size_t i = 0; i < opp.size(); ++i) full[static_cast<size_t>(opp[i])] = op[i];
          int succ = ar_.model->outcome(p.state, full);
          out.emplace_back(profile_label("resp", opp, op),
                           advance_adjust(p.seeker, succ, p.truth, p.counter,
                                          advance_round(p.round), 0));
        }
        return;
      }
    }
  }
};

}  // namespace

std::vector<std::pair<std::string, position>> transition_arena::enumerate_moves(
    const position& pos) const {
  return move_gen(*this).moves(pos);
}

transition_arena build_transition_arena(const cgm& m, const label_table& labels,
                                        const std::vector<int>& coalition,
                                        const path_formula& phi, arena_options opts) {
  transition_arena ar(m, labels);
  ar.coalition = coalition;
  ar.options = opts;
  ar.atoms = relative_atoms(phi);
  ar.skeleton = compile_skeleton(phi, ar.atoms);

  if (ar.atoms.size() == 0) throw std::invalid_argument("arena: formula has no relative atoms");
  if (ar.atoms.size() > 32) throw std::invalid_argument("arena: more than 32 relative atoms");
  if (m.num_states() >= 4096) throw std::invalid_argument("arena: too many states");
  if (ar.skeleton.nodes.size() >= 4096) throw std::invalid_argument("arena: formula too large");
  for (int a : coalition)
    if (a < 0 || a >= m.num_agents())
      throw model_error("coalition agent id out of range");

  // Fail fast if the label table cannot decide every claim (names the
  // missing entry).
  for (const auto& atom : ar.atoms.atoms) {
    for (int q = 0; q < m.num_states(); ++q) {
      labels.lookup(*atom.arg1, q);
      if (atom.arg2) labels.lookup(*atom.arg2, q);
    }
  }

  move_gen gen(ar);
  std::map<std::array<uint64_t, 2>, int> index;

  auto intern = [&](const position& p) {
    auto key = p.key();
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(ar.positions.size());
    index.emplace(key, id);
    ar.positions.push_back(p);
    ar.graph.owner.push_back(gen.owner_of(p));
    ar.graph.succ.emplace_back();
    bool in_f = (p.kind == position::kind_t::config && p.seeker == player::eloise) ||
                (p.kind == position::kind_t::ending && p.winner == player::abelard);
    ar.graph.target.push_back(in_f ? 1 : 0);
    return id;
  };

  ar.initial.resize(static_cast<size_t>(m.num_states()));
  for (int q = 0; q < m.num_states(); ++q)
    ar.initial[static_cast<size_t>(q)] = intern(gen.initial_position(q));

  for (size_t i = 0; i < ar.positions.size(); ++i) {
    // positions[i] may be invalidated by push_back inside the loop
    for (auto& [label, succ] : gen.moves(ar.positions[i])) {
      int j = intern(succ);
      ar.graph.succ[i].push_back(j);
      ar.edge_list.emplace_back(static_cast<int>(i), j);
      ar.move_labels.push_back(label);
    }
  }
  return ar;
}

// ------------------------------------------------------------------- dump

namespace {

std::string position_token(const transition_arena& ar, const position& p) {
  std::ostringstream os;
  switch (p.kind) {
    case position::kind_t::config: {
      os << "s=" << player_char(p.seeker) << ",q=" << ar.model->states[static_cast<size_t>(p.state)]
         << ",T=" << p.truth.str() << ",n=" << p.counter << ",r=" << static_cast<int>(p.round)
         << ",ph=";
      switch (p.phase) {
        case position::config_phase::adjust:
          os << "adj,atom=" << p.atom << ",st=" << stage_name(p.stage);
          break;
        case position::config_phase::decide_seeker: os << "ds"; break;
        case position::config_phase::decide_opponent: os << "do"; break;
        case position::config_phase::step_verifier: os << "sv"; break;
        case position::config_phase::step_falsifier: os << "sf,cp=" << p.profile; break;
      }
      break;
    }
    case position::kind_t::boolean:
      os << "v=" << player_char(p.verifier) << ",q="
         << ar.model->states[static_cast<size_t>(p.state)] << ",node=" << p.node
         << ",T=" << p.truth.str();
      break;
    case position::kind_t::ending: os << "w=" << player_char(p.winner); break;
  }
  return os.str();
}

}  // namespace

void transition_arena::dump(std::ostream& os) const {
  for (size_t i = 0; i < positions.size(); ++i) {
    const position& p = positions[i];
    const char* kind = p.kind == position::kind_t::config
                           ? "cfg"
                           : (p.kind == position::kind_t::boolean ? "bool" : "end");
    os << i << ' ' << player_char(graph.owner[i]) << ' ' << kind << ' '
       << position_token(*this, p) << '\n';
  }
  os << "# edges\n";
  for (size_t e = 0; e < edge_list.size(); ++e)
    os << edge_list[e].first << ' ' << move_labels[e] << ' ' << edge_list[e].second << '\n';
  os << "# buchi\n";
  for (size_t i = 0; i < graph.target.size(); ++i)
    if (graph.target[i]) os << i << '\n';
}

game_graph read_game_dump(std::istream& in) {
  game_graph g;
  std::string line;
  int section = 0;  // 0 positions, 1 edges, 2 buchi
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line == "# edges") {
      section = 1;
      continue;
    }
    if (line == "# buchi") {
      section = 2;
      continue;
    }
    std::istringstream ls(line);
    if (section == 0) {
      long id;
      std::string owner, kind, rest;
      ls >> id >> owner >> kind >> rest;
      if (id != static_cast<long>(g.owner.size()))
        throw std::runtime_error("game dump: non-contiguous position ids");
      g.owner.push_back(owner == "E" ? player::eloise : player::abelard);
      g.succ.emplace_back();
      g.target.push_back(0);
    } else if (section == 1) {
      int from, to;
      std::string label;
      ls >> from >> label >> to;
      g.succ[static_cast<size_t>(from)].push_back(to);
    } else {
      int id;
      ls >> id;
      g.target[static_cast<size_t>(id)] = 1;
    }
  }
  return g;
}

}  // namespace atlplus
