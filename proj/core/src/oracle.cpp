#include "atlplus/oracle.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <stdexcept>

namespace atlplus {

truth_fn initial_status(const label_table& labels, const atom_list& atoms, int q0) {
  truth_fn t = truth_fn::all_open(atoms.size());
  for (int i = 0; i < atoms.size(); ++i) {
    const relative_atom& a = atoms[i];
    switch (a.kind) {
      case relative_atom::kind_t::state:
        t = t.set(i, labels.lookup(*a.arg1, q0) ? tv::yes : tv::no);
        break;
      case relative_atom::kind_t::until:
        if (labels.lookup(*a.arg2, q0))
          t = t.set(i, tv::yes);
        else if (!labels.lookup(*a.arg1, q0))
          t = t.set(i, tv::no);
        break;
      case relative_atom::kind_t::next: break;
    }
  }
  return t;
}

truth_fn step_status(const label_table& labels, const atom_list& atoms, const truth_fn& cur,
                     int q) {
  truth_fn t = cur;
  for (int i = 0; i < atoms.size(); ++i) {
    if (t.get(i) != tv::open) continue;
    const relative_atom& a = atoms[i];
    switch (a.kind) {
      case relative_atom::kind_t::next:
        t = t.set(i, labels.lookup(*a.arg1, q) ? tv::yes : tv::no);
        break;
      case relative_atom::kind_t::until:
        if (labels.lookup(*a.arg2, q))
          t = t.set(i, tv::yes);
        else if (!labels.lookup(*a.arg1, q))
          t = t.set(i, tv::no);
        break;
      case relative_atom::kind_t::state: break;  // decidable at step 0 only
    }
  }
  return t;
}

bool eval_finite_path(const cgm& m, const std::vector<int>& path, const path_formula& phi,
                      const label_table& labels) {
  if (path.empty()) throw std::invalid_argument("eval_finite_path: empty path");
  if (!is_finite_path(m, path))
    throw std::invalid_argument("eval_finite_path: state sequence is not a path of the model");
  std::function<bool(const path_formula&)> eval = [&](const path_formula& f) -> bool {
    switch (f.op) {
      case path_op::lift: return labels.lookup(*f.sarg, path[0]);
      case path_op::neg: return !eval(*f.lhs);
      case path_op::lor: return eval(*f.lhs) || eval(*f.rhs);
      case path_op::next: return path.size() >= 2 && labels.lookup(*f.sarg, path[1]);
      case path_op::until: {
        for (size_t i = 0; i < path.size(); ++i) {
          if (!labels.lookup(*f.sarg2, path[i])) continue;
          bool left_holds = true;
          for (size_t j = 0; j < i && left_holds; ++j)
            left_holds = labels.lookup(*f.sarg, path[j]);
          if (left_holds) return true;
        }
        return false;
      }
      default:
        throw std::invalid_argument("eval_finite_path expects an abbreviation-free formula");
    }
  };
  return eval(phi);
}

int tsn(const cgm& m, const lasso& l, const path_formula& phi, const label_table& labels) {
  if (l.prefix.empty() || l.cycle.empty())
    throw std::invalid_argument("tsn: lasso needs a nonempty prefix and cycle");
  atom_list atoms = relative_atoms(phi);
  size_t horizon = (l.prefix.size() - 1) +
                   static_cast<size_t>(atoms.size() + 2) * l.cycle.size();

  std::vector<int> states = l.prefix;
  while (states.size() < horizon + 1)
    states.push_back(l.cycle[(states.size() - l.prefix.size()) % l.cycle.size()]);
  if (!is_finite_path(m, states))
    throw std::invalid_argument("tsn: lasso is not a path of the model");

  int swaps = 0;
  bool prev = eval_finite_path(m, {states[0]}, phi, labels);
  for (size_t i = 1; i < states.size(); ++i) {
    std::vector<int> prefix(states.begin(), states.begin() + static_cast<long>(i) + 1);
    bool cur = eval_finite_path(m, prefix, phi, labels);
    if (cur != prev) ++swaps;
    prev = cur;
  }
  return swaps;
}

// ------------------------------------------------------- fixpoint labelling

namespace {

std::vector<char> pre_force(const cgm& m, const std::vector<int>& coalition,
                            const std::vector<char>& zone) {
  std::vector<char> out(static_cast<size_t>(m.num_states()), 0);
  for (int q = 0; q < m.num_states(); ++q) {
    for (const auto& cp : m.coalition_profiles(q, coalition)) {
      bool all_in = true;
      for (int s : m.successors_under(q, coalition, cp))
        if (!zone[static_cast<size_t>(s)]) {
          all_in = false;
          break;
        }
      if (all_in) {
        out[static_cast<size_t>(q)] = 1;
        break;
      }
    }
  }
  return out;
}

std::vector<char> flip_row(std::vector<char> row) {
  for (auto& v : row) v = v ? 0 : 1;
  return row;
}

std::vector<char> fixpoint_label_rec(const cgm& m, const state_formula& f);

// <<A>>alpha / <<A>>!alpha for a single relative atom alpha.
std::vector<char> atom_row(const cgm& m, const std::vector<int>& coalition,
                           const relative_atom& a, bool positive) {
  const size_t n = static_cast<size_t>(m.num_states());
  switch (a.kind) {
    case relative_atom::kind_t::state: {
      auto row = fixpoint_label_rec(m, *a.arg1);
      return positive ? row : flip_row(row);
    }
    case relative_atom::kind_t::next: {
      auto target = fixpoint_label_rec(m, *a.arg1);
      if (!positive) target = flip_row(target);
      return pre_force(m, coalition, target);
    }
    case relative_atom::kind_t::until: {
      auto left = fixpoint_label_rec(m, *a.arg1);
      auto right = fixpoint_label_rec(m, *a.arg2);
      if (positive) {
        // least fixpoint: Z = [psi] | ([phi] & Pre(Z))
        std::vector<char> z = right;
        for (;;) {
          auto pre = pre_force(m, coalition, z);
          bool changed = false;
          for (size_t q = 0; q < n; ++q) {
            char v = right[q] || (left[q] && pre[q]);
            if (v != z[q]) {
              z[q] = v;
              changed = true;
            }
          }
          if (!changed) return z;
        }
      }
      // <<A>>!(phi U psi) = greatest fixpoint Z = [!psi] & ([!phi] | Pre(Z))
      auto nleft = flip_row(left);
      auto nright = flip_row(right);
      std::vector<char> z(n, 1);
      for (;;) {
        auto pre = pre_force(m, coalition, z);
        bool changed = false;
        for (size_t q = 0; q < n; ++q) {
          char v = nright[q] && (nleft[q] || pre[q]);
          if (v != z[q]) {
            z[q] = v;
            changed = true;
          }
        }
        if (!changed) return z;
      }
    }
  }
  throw std::logic_error("atom_row: bad atom kind");
}

std::vector<char> fixpoint_label_rec(const cgm& m, const state_formula& f) {
  const size_t n = static_cast<size_t>(m.num_states());
  switch (f.op) {
    case state_op::tt: return std::vector<char>(n, 1);
    case state_op::prop: {
      int p = m.prop_id(f.name);
      if (p < 0) throw label_error("proposition '" + f.name + "' is not declared in the model");
      return m.valuation[static_cast<size_t>(p)];
    }
    case state_op::neg: return flip_row(fixpoint_label_rec(m, *f.lhs));
    case state_op::lor: {
      auto a = fixpoint_label_rec(m, *f.lhs);
      auto b = fixpoint_label_rec(m, *f.rhs);
      for (size_t q = 0; q < n; ++q) a[q] = a[q] || b[q];
      return a;
    }
    case state_op::coalition: {
      atom_list atoms = relative_atoms(*f.objective);
      if (atoms.size() != 1)
        throw std::invalid_argument("atl_fixpoint_label: objective '" +
                                    to_string(*f.objective) + "' has " +
                                    std::to_string(atoms.size()) + " relative atoms, need 1");
      atom_skeleton sk = compile_skeleton(*f.objective, atoms);
      bool on_true = sk.eval([](int) { return true; });
      bool on_false = sk.eval([](int) { return false; });
      auto coalition = agent_ids(m, f.agents);
      if (on_true && on_false) return std::vector<char>(n, 1);
      if (!on_true && !on_false) return std::vector<char>(n, 0);
      return atom_row(m, coalition, atoms[0], on_true);
    }
    default:
      throw std::invalid_argument("atl_fixpoint_label expects an abbreviation-free formula");
  }
}

}  // namespace

std::vector<char> atl_fixpoint_label(const cgm& m, const state_formula& f) {
  fragment_report rep = fragment_width(f);
  if (rep.width > 1)
    throw std::invalid_argument("atl_fixpoint_label requires fragment width <= 1, got " +
                                std::to_string(rep.width));
  return fixpoint_label_rec(m, f);
}

// ----------------------------------------------------------- status game

namespace {

bool eval_status(const atom_skeleton& sk, const truth_fn& t) {
  return sk.eval([&t](int atom) { return open_as_false(t.get(atom)); });
}

struct status_game {
  struct node {
    int state;
    truth_fn theta;
    int cp = -1;  // -1: Eloise's choice node, else Abelard's mid node
  };
  std::vector<node> nodes;
  std::vector<std::vector<int>> succ;
};

// Attractor on a small explicit subgame; kept local so the oracle shares no
// solver code with the Buchi engine.
std::vector<char> local_attractor(const std::vector<std::vector<int>>& succ,
                                  const std::vector<char>& eloise_owned,
                                  const std::vector<char>& target, bool for_eloise) {
  const size_t n = succ.size();
  std::vector<std::vector<int>> pred(n);
  std::vector<int> pending(n, 0);
  for (size_t u = 0; u < n; ++u) {
    pending[u] = static_cast<int>(succ[u].size());
    for (int v : succ[u]) pred[static_cast<size_t>(v)].push_back(static_cast<int>(u));
  }
  std::vector<char> in(n, 0);
  std::deque<int> queue;
  for (size_t v = 0; v < n; ++v)
    if (target[v]) {
      in[v] = 1;
      queue.push_back(static_cast<int>(v));
    }
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int p : pred[static_cast<size_t>(u)]) {
      size_t pv = static_cast<size_t>(p);
      if (in[pv]) continue;
      bool owner_moves = (eloise_owned[pv] != 0) == for_eloise;
      if (owner_moves || --pending[pv] == 0) {
        in[pv] = 1;
        queue.push_back(p);
      }
    }
  }
  return in;
}

}  // namespace

std::vector<char> status_game_row(const cgm& m, const std::vector<int>& coalition,
                                  const path_formula& phi, const label_table& labels) {
  atom_list atoms = relative_atoms(phi);
  atom_skeleton skeleton = compile_skeleton(phi, atoms);

  status_game g;
  std::map<std::pair<int, uint64_t>, int> choice_ids;

  std::function<int(int, const truth_fn&)> choice_node = [&](int q, const truth_fn& theta) {
    auto key = std::make_pair(q, theta.raw());
    auto it = choice_ids.find(key);
    if (it != choice_ids.end()) return it->second;
    int id = static_cast<int>(g.nodes.size());
    choice_ids.emplace(key, id);
    g.nodes.push_back({q, theta, -1});
    g.succ.emplace_back();
    return id;
  };

  std::vector<int> roots(static_cast<size_t>(m.num_states()));
  for (int q = 0; q < m.num_states(); ++q)
    roots[static_cast<size_t>(q)] = choice_node(q, initial_status(labels, atoms, q));

  // forward closure; mid nodes are appended after their choice node
  for (size_t i = 0; i < g.nodes.size(); ++i) {
    status_game::node cur = g.nodes[i];
    if (cur.cp == -1) {
      const auto cps = m.coalition_profiles(cur.state, coalition);
      for (size_t c = 0; c < cps.size(); ++c) {
        int mid = static_cast<int>(g.nodes.size());
        g.nodes.push_back({cur.state, cur.theta, static_cast<int>(c)});
        g.succ.emplace_back();
        g.succ[i].push_back(mid);
      }
    } else {
      const auto cps = m.coalition_profiles(cur.state, coalition);
      for (int s : m.successors_under(cur.state, coalition, cps[static_cast<size_t>(cur.cp)]))
        g.succ[i].push_back(choice_node(s, step_status(labels, atoms, cur.theta, s)));
    }
  }

  // strata by status, most determined first
  std::map<uint64_t, std::vector<int>> strata;
  for (size_t i = 0; i < g.nodes.size(); ++i) strata[g.nodes[i].theta.raw()].push_back(static_cast<int>(i));
  std::vector<uint64_t> order;
  for (const auto& [raw, ids] : strata) order.push_back(raw);
  std::sort(order.begin(), order.end(), [&](uint64_t a, uint64_t b) {
    int oa = g.nodes[static_cast<size_t>(strata[a][0])].theta.open_count();
    int ob = g.nodes[static_cast<size_t>(strata[b][0])].theta.open_count();
    return oa != ob ? oa < ob : a < b;
  });

  std::vector<char> value(g.nodes.size(), 0);
  std::vector<char> solved(g.nodes.size(), 0);

  for (uint64_t raw : order) {
    const std::vector<int>& ids = strata[raw];
    const truth_fn theta = g.nodes[static_cast<size_t>(ids[0])].theta;
    bool stay_wins = eval_status(skeleton, theta);

    // local arena: stratum nodes plus win/lose sinks
    const size_t k = ids.size();
    std::map<int, int> local_of;
    for (size_t i = 0; i < k; ++i) local_of[ids[i]] = static_cast<int>(i);
    const int win_sink = static_cast<int>(k), lose_sink = static_cast<int>(k) + 1;
    std::vector<std::vector<int>> succ(k + 2);
    std::vector<char> eloise_owned(k + 2, 0);
    succ[static_cast<size_t>(win_sink)] = {win_sink};
    succ[static_cast<size_t>(lose_sink)] = {lose_sink};
    for (size_t i = 0; i < k; ++i) {
      int id = ids[i];
      eloise_owned[i] = g.nodes[static_cast<size_t>(id)].cp == -1 ? 1 : 0;
      for (int s : g.succ[static_cast<size_t>(id)]) {
        auto it = local_of.find(s);
        if (it != local_of.end()) {
          succ[i].push_back(it->second);
        } else {
          if (!solved[static_cast<size_t>(s)])
            throw std::logic_error("status game: stratum order violated");
          succ[i].push_back(value[static_cast<size_t>(s)] ? win_sink : lose_sink);
        }
      }
    }

    std::vector<char> target(k + 2, 0);
    if (stay_wins) {
      // staying forever is already a win; Eloise only has to avoid losing
      // exits, so Abelard must attract to the lose sink
      target[static_cast<size_t>(lose_sink)] = 1;
      auto attr = local_attractor(succ, eloise_owned, target, false);
      for (size_t i = 0; i < k; ++i) {
        value[static_cast<size_t>(ids[i])] = attr[i] ? 0 : 1;
        solved[static_cast<size_t>(ids[i])] = 1;
      }
    } else {
      target[static_cast<size_t>(win_sink)] = 1;
      auto attr = local_attractor(succ, eloise_owned, target, true);
      for (size_t i = 0; i < k; ++i) {
        value[static_cast<size_t>(ids[i])] = attr[i] ? 1 : 0;
        solved[static_cast<size_t>(ids[i])] = 1;
      }
    }
  }

  std::vector<char> row(static_cast<size_t>(m.num_states()));
  for (int q = 0; q < m.num_states(); ++q)
    row[static_cast<size_t>(q)] = value[static_cast<size_t>(roots[static_cast<size_t>(q)])];
  return row;
}

bool status_game_check(const cgm& m, const std::vector<int>& coalition, const path_formula& phi,
                       const label_table& labels, int q) {
  return status_game_row(m, coalition, phi, labels)[static_cast<size_t>(q)] != 0;
}

// ------------------------------------------------- product cycle checking

namespace {

// Tarjan SCCs, iterative.
std::vector<int> scc_of(const std::vector<std::vector<int>>& succ) {
  const int n = static_cast<int>(succ.size());
  std::vector<int> comp(static_cast<size_t>(n), -1), low(static_cast<size_t>(n), 0),
      num(static_cast<size_t>(n), -1);
  std::vector<int> stack, call_node, call_edge;
  std::vector<char> on_stack(static_cast<size_t>(n), 0);
  int counter = 0, comps = 0;

  for (int root = 0; root < n; ++root) {
    if (num[static_cast<size_t>(root)] != -1) continue;
    call_node.push_back(root);
    call_edge.push_back(0);
    num[static_cast<size_t>(root)] = low[static_cast<size_t>(root)] = counter++;
    stack.push_back(root);
    on_stack[static_cast<size_t>(root)] = 1;
    while (!call_node.empty()) {
      int u = call_node.back();
      int& ei = call_edge.back();
      if (ei < static_cast<int>(succ[static_cast<size_t>(u)].size())) {
        int v = succ[static_cast<size_t>(u)][static_cast<size_t>(ei++)];
        if (num[static_cast<size_t>(v)] == -1) {
          num[static_cast<size_t>(v)] = low[static_cast<size_t>(v)] = counter++;
          stack.push_back(v);
          on_stack[static_cast<size_t>(v)] = 1;
          call_node.push_back(v);
          call_edge.push_back(0);
        } else if (on_stack[static_cast<size_t>(v)]) {
          low[static_cast<size_t>(u)] =
              std::min(low[static_cast<size_t>(u)], num[static_cast<size_t>(v)]);
        }
      } else {
        if (low[static_cast<size_t>(u)] == num[static_cast<size_t>(u)]) {
          for (;;) {
            int w = stack.back();
            stack.pop_back();
            on_stack[static_cast<size_t>(w)] = 0;
            comp[static_cast<size_t>(w)] = comps;
            if (w == u) break;
          }
          ++comps;
        }
        call_node.pop_back();
        call_edge.pop_back();
        if (!call_node.empty()) {
          int p = call_node.back();
          low[static_cast<size_t>(p)] =
              std::min(low[static_cast<size_t>(p)], low[static_cast<size_t>(u)]);
        }
      }
    }
  }
  return comp;
}

}  // namespace

bool all_paths_satisfy(const pruned_system& sys, const atom_list& atoms,
                       const atom_skeleton& skeleton, const label_table& labels) {
  struct pnode {
    int node;
    truth_fn theta;
  };
  std::vector<pnode> nodes;
  std::vector<std::vector<int>> succ;
  std::map<std::pair<int, uint64_t>, int> ids;

  auto intern = [&](int node, const truth_fn& theta) {
    auto key = std::make_pair(node, theta.raw());
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(nodes.size());
    ids.emplace(key, id);
    nodes.push_back({node, theta});
    succ.emplace_back();
    return id;
  };

  intern(sys.initial,
         initial_status(labels, atoms, sys.state_of[static_cast<size_t>(sys.initial)]));
  for (size_t i = 0; i < nodes.size(); ++i) {
    pnode cur = nodes[i];
    if (sys.succ[static_cast<size_t>(cur.node)].empty())
      throw std::invalid_argument("all_paths_satisfy: system is not serial");
    for (int s : sys.succ[static_cast<size_t>(cur.node)]) {
      truth_fn next =
          step_status(labels, atoms, cur.theta, sys.state_of[static_cast<size_t>(s)]);
      succ[i].push_back(intern(s, next));
    }
  }

  std::vector<int> comp = scc_of(succ);
  std::vector<int> comp_size(nodes.size(), 0);
  for (size_t i = 0; i < nodes.size(); ++i) ++comp_size[static_cast<size_t>(comp[i])];

  for (size_t i = 0; i < nodes.size(); ++i) {
    bool on_cycle = comp_size[static_cast<size_t>(comp[i])] > 1;
    if (!on_cycle)
      for (int s : succ[i])
        if (s == static_cast<int>(i)) on_cycle = true;
    if (on_cycle && !eval_status(skeleton, nodes[i].theta)) return false;
  }
  return true;
}

bool all_paths_satisfy(const pruned_system& sys, const path_formula& phi,
                       const label_table& labels) {
  atom_list atoms = relative_atoms(phi);
  atom_skeleton skeleton = compile_skeleton(phi, atoms);
  return all_paths_satisfy(sys, atoms, skeleton, labels);
}

bool positional_bruteforce(const cgm& m, const std::vector<int>& coalition,
                           const path_formula& phi, const label_table& labels, int q,
                           long long guard) {
  atom_list atoms = relative_atoms(phi);
  atom_skeleton skeleton = compile_skeleton(phi, atoms);

  long long count = 1;
  for (int a : coalition)
    for (int s = 0; s < m.num_states(); ++s) {
      count *= static_cast<long long>(m.available[static_cast<size_t>(a)][static_cast<size_t>(s)].size());
      if (count > guard)
        throw std::runtime_error("positional_bruteforce: strategy count exceeds guard of " +
                                 std::to_string(guard));
    }

  // odometer over (coalition agent, state) action picks
  std::vector<std::pair<int, int>> slots;
  for (int a : coalition)
    for (int s = 0; s < m.num_states(); ++s) slots.emplace_back(a, s);
  std::vector<size_t> idx(slots.size(), 0);

  for (;;) {
    pruned_system sys;
    sys.state_of.resize(static_cast<size_t>(m.num_states()));
    sys.succ.resize(static_cast<size_t>(m.num_states()));
    for (int s = 0; s < m.num_states(); ++s) {
      sys.state_of[static_cast<size_t>(s)] = s;
      std::vector<int> cp(coalition.size());
      for (size_t i = 0; i < slots.size(); ++i)
        if (slots[i].second == s) {
          size_t ci = 0;
          while (coalition[ci] != slots[i].first) ++ci;
          cp[ci] = m.available[static_cast<size_t>(slots[i].first)][static_cast<size_t>(s)][idx[i]];
        }
      sys.succ[static_cast<size_t>(s)] = m.successors_under(s, coalition, cp);
    }
    sys.initial = q;
    if (all_paths_satisfy(sys, atoms, skeleton, labels)) return true;

    size_t i = slots.size();
    bool wrapped = true;
    while (i > 0) {
      --i;
      const auto& acts =
          m.available[static_cast<size_t>(slots[i].first)][static_cast<size_t>(slots[i].second)];
      if (++idx[i] < acts.size()) {
        wrapped = false;
        break;
      }
      idx[i] = 0;
    }
    if (wrapped || slots.empty()) break;
  }
  return false;
}

}  // namespace atlplus
