#include "atlplus/bounded.hpp"

#include <array>
#include <map>
#include <memory>
#include <unordered_map>

#include "atlplus/arena.hpp"
#include "atlplus/labels.hpp"
#include "atlplus/truth.hpp"

namespace atlplus {

long long stable_timer(const cgm& m, const path_formula& phi) {
  return static_cast<long long>(m.num_states()) * relative_atoms(phi).size();
}

long long stable_timer_bound(const cgm& m, const state_formula& f) {
  long long best = 1;
  for (const auto& s : fragment_width(f).strategic)
    best = std::max(best, static_cast<long long>(m.num_states()) * s.atom_count);
  return best;
}

namespace {

struct key_hash {
  size_t operator()(const std::array<uint64_t, 3>& k) const {
    uint64_t h = 0xcbf29ce484222325ull;
    for (uint64_t w : k) {
      h ^= w;
      h *= 0x100000001b3ull;
    }
    return static_cast<size_t>(h);
  }
};

// One transition game shape: everything derivable from <<A>>Phi alone.
struct game_ctx {
  int id;
  std::vector<int> coalition;
  std::vector<int> opposing;
  atom_list atoms;
  atom_skeleton skeleton;
  std::vector<state_ref> fal_formulas;  // neg(lhs) per until atom, else null
};

// Fully extended timered configuration.
struct bconfig {
  player seeker;
  int state;
  truth_fn truth;
  int counter;
  long long gamma;
  round_flag round;
  position::config_phase phase;
  int atom = 0;
  adjust_stage stage = adjust_stage::offer_v_ver;
  int profile = 0;  // step_falsifier: index into coalition profiles at `state`
};

class engine {
public:
  engine(const cgm& m, long long gamma_cap, bounded_options opts)
      : m_(m), cap_(gamma_cap), opts_(opts) {}

  bool eval_state(player verifier, int q, const state_formula& f) {
    switch (f.op) {
      case state_op::tt: return verifier == player::eloise;
      case state_op::prop: {
        int p = m_.prop_id(f.name);
        if (p < 0)
          throw label_error("proposition '" + f.name + "' is not declared in the model");
        bool holds = m_.prop_true_at(p, q);
        return holds == (verifier == player::eloise);
      }
      case state_op::neg: return eval_state(opponent(verifier), q, *f.lhs);
      case state_op::lor: {
        if (verifier == player::eloise)
          return eval_state(verifier, q, *f.lhs) || eval_state(verifier, q, *f.rhs);
        return eval_state(verifier, q, *f.lhs) && eval_state(verifier, q, *f.rhs);
      }
      case state_op::coalition: {
        game_ctx& ctx = context_for(f);
        if (opts_.memoize) {
          auto key = std::make_tuple(ctx.id, verifier, q);
          auto it = state_memo_.find(key);
          if (it != state_memo_.end()) return it->second;
          bool r = eval_config(ctx, verifier, initial_config(ctx, verifier, q));
          state_memo_[key] = r;
          return r;
        }
        return eval_config(ctx, verifier, initial_config(ctx, verifier, q));
      }
      default:
        throw std::invalid_argument("bounded_check expects an abbreviation-free formula, got '" +
                                    to_string(f) + "'");
    }
  }

private:
  const cgm& m_;
  long long cap_;
  bounded_options opts_;

  std::map<std::string, std::unique_ptr<game_ctx>> ctxs_;
  std::map<std::tuple<int, player, int>, bool> state_memo_;
  // per transition game: (verifier, packed config) -> Eloise wins
  std::unordered_map<std::array<uint64_t, 3>, bool, key_hash> memo_;
  std::map<std::pair<int, int>, std::vector<std::vector<int>>> cp_cache_;

  game_ctx& context_for(const state_formula& f) {
    std::string key = to_string(f);
    auto it = ctxs_.find(key);
    if (it != ctxs_.end()) return *it->second;
    auto ctx = std::make_unique<game_ctx>();
    ctx->id = static_cast<int>(ctxs_.size());
    ctx->coalition = agent_ids(m_, f.agents);
    for (int a = 0; a < m_.num_agents(); ++a)
      if (std::find(ctx->coalition.begin(), ctx->coalition.end(), a) == ctx->coalition.end())
        ctx->opposing.push_back(a);
    ctx->atoms = relative_atoms(*f.objective);
    if (ctx->atoms.size() > truth_fn::max_atoms)
      throw std::invalid_argument("bounded_check: more than 32 relative atoms");
    ctx->skeleton = compile_skeleton(*f.objective, ctx->atoms);
    for (const auto& a : ctx->atoms.atoms)
      ctx->fal_formulas.push_back(
          a.kind == relative_atom::kind_t::until ? sf::neg(a.arg1) : nullptr);
    game_ctx& ref = *ctx;
    ctxs_.emplace(std::move(key), std::move(ctx));
    return ref;
  }

  const std::vector<std::vector<int>>& coalition_profiles(const game_ctx& ctx, int q,
                                                          bool opposing) {
    auto key = std::make_pair(ctx.id * 2 + (opposing ? 1 : 0), q);
    auto it = cp_cache_.find(key);
    if (it == cp_cache_.end())
      it = cp_cache_
               .emplace(key, m_.coalition_profiles(q, opposing ? ctx.opposing : ctx.coalition))
               .first;
    return it->second;
  }

  bconfig initial_config(const game_ctx& ctx, player verifier, int q) {
    bconfig c;
    c.seeker = verifier;  // the verifier opens as seeker
    c.state = q;
    c.truth = truth_fn::all_open(ctx.atoms.size());
    c.counter = ctx.atoms.size();
    c.gamma = cap_;
    c.round = round_flag::first;
    advance_adjust(ctx, c, 0);
    return c;
  }

  // Move c to the first live adjust stage at or after from_atom, else to
  // phase ii.
  void advance_adjust(const game_ctx& ctx, bconfig& c, int from_atom) {
    for (int j = from_atom; j < ctx.atoms.size(); ++j) {
      if (c.truth.get(j) != tv::open) continue;
      bool ok = false;
      switch (ctx.atoms[j].kind) {
        case relative_atom::kind_t::state: ok = c.round == round_flag::first; break;
        case relative_atom::kind_t::next: ok = c.round == round_flag::second; break;
        case relative_atom::kind_t::until: ok = true; break;
      }
      if (!ok) continue;
      c.phase = position::config_phase::adjust;
      c.atom = j;
      c.stage = adjust_stage::offer_v_ver;
      return;
    }
    c.phase = position::config_phase::decide_seeker;
    c.atom = 0;
    c.stage = adjust_stage::offer_v_ver;
  }

  std::array<uint64_t, 3> config_key(const game_ctx& ctx, player verifier, const bconfig& c) {
    uint64_t w = 0;
    auto push = [&w](uint64_t v, int bits) { w = (w << bits) | v; };
    push(static_cast<uint64_t>(ctx.id), 10);
    push(static_cast<uint64_t>(verifier), 1);
    push(static_cast<uint64_t>(c.seeker), 1);
    push(static_cast<uint64_t>(c.state), 14);
    push(static_cast<uint64_t>(c.counter), 6);
    push(static_cast<uint64_t>(c.round), 2);
    push(static_cast<uint64_t>(c.phase), 3);
    push(static_cast<uint64_t>(c.atom), 6);
    push(static_cast<uint64_t>(c.stage), 3);
    push(static_cast<uint64_t>(c.profile), 14);
    return {c.truth.raw(), static_cast<uint64_t>(c.gamma), w};
  }

  player stage_owner(player verifier, const bconfig& c) const {
    switch (c.phase) {
      case position::config_phase::decide_seeker: return c.seeker;
      case position::config_phase::decide_opponent: return opponent(c.seeker);
      case position::config_phase::step_verifier: return verifier;
      case position::config_phase::step_falsifier: return opponent(verifier);
      case position::config_phase::adjust:
        switch (c.stage) {
          case adjust_stage::offer_v_ver:
          case adjust_stage::respond_v_ver:
          case adjust_stage::offer_v_fal:
          case adjust_stage::respond_v_fal: return verifier;
          default: return opponent(verifier);
        }
    }
    return verifier;
  }

  // Eloise wins the Boolean game on the skeleton with truth values from T.
  bool eval_exit(const game_ctx& ctx, player verifier, const truth_fn& t, int node) {
    const auto& n = ctx.skeleton.nodes[static_cast<size_t>(node)];
    switch (n.op) {
      case atom_skeleton::node::op_t::atom: {
        player winner = open_as_false(t.get(n.atom)) ? verifier : opponent(verifier);
        return winner == player::eloise;
      }
      case atom_skeleton::node::op_t::neg:
        return eval_exit(ctx, opponent(verifier), t, n.child);
      case atom_skeleton::node::op_t::lor:
        if (verifier == player::eloise)
          return eval_exit(ctx, verifier, t, n.child) || eval_exit(ctx, verifier, t, n.child2);
        return eval_exit(ctx, verifier, t, n.child) && eval_exit(ctx, verifier, t, n.child2);
    }
    return false;
  }

  bool eval_boolean_exit(const game_ctx& ctx, player verifier, const truth_fn& t) {
    return eval_exit(ctx, verifier, t, ctx.skeleton.root);
  }

  bool eval_config(game_ctx& ctx, player verifier, bconfig c) {
    std::array<uint64_t, 3> key{};
    if (opts_.memoize) {
      key = config_key(ctx, verifier, c);
      auto it = memo_.find(key);
      if (it != memo_.end()) return it->second;
    }
    if (opts_.stats) ++opts_.stats->configs_visited;

    const player owner = stage_owner(verifier, c);
    bool result = owner != player::eloise;  // identity for AND/OR over moves
    bool decided = false;
    auto feed = [&](bool sub) {
      if (owner == player::eloise) {
        result = result || sub;
        if (result) decided = true;
      } else {
        result = result && sub;
        if (!result) decided = true;
      }
    };

    switch (c.phase) {
      case position::config_phase::adjust: eval_adjust(ctx, verifier, c, feed, decided); break;
      case position::config_phase::decide_seeker: {
        if (c.gamma > 0) {
          // continue seeking with a lowered timer
          if (opts_.policy == timer_policy::canonical_max) {
            bconfig n = c;
            n.gamma = c.gamma - 1;
            n.phase = position::config_phase::step_verifier;
            feed(eval_config(ctx, verifier, n));
          } else {
            for (long long gp = c.gamma - 1; gp >= 0 && !decided; --gp) {
              bconfig n = c;
              n.gamma = gp;
              n.phase = position::config_phase::step_verifier;
              feed(eval_config(ctx, verifier, n));
            }
          }
        }
        if (!decided) {
          if (c.counter == 0) {
            feed(eval_boolean_exit(ctx, verifier, c.truth));
          } else {
            bconfig n = c;
            n.phase = position::config_phase::decide_opponent;
            feed(eval_config(ctx, verifier, n));
          }
        }
        break;
      }
      case position::config_phase::decide_opponent: {
        if (opts_.policy == timer_policy::canonical_max) {
          bconfig n = c;
          n.seeker = opponent(c.seeker);
          n.counter = c.counter - 1;
          n.gamma = cap_ - 1;
          n.phase = position::config_phase::step_verifier;
          feed(eval_config(ctx, verifier, n));
        } else {
          for (long long gp = cap_ - 1; gp >= 0 && !decided; --gp) {
            bconfig n = c;
            n.seeker = opponent(c.seeker);
            n.counter = c.counter - 1;
            n.gamma = gp;
            n.phase = position::config_phase::step_verifier;
            feed(eval_config(ctx, verifier, n));
          }
        }
        if (!decided) feed(eval_boolean_exit(ctx, verifier, c.truth));
        break;
      }
      case position::config_phase::step_verifier: {
        const auto& cps = coalition_profiles(ctx, c.state, false);
        for (size_t i = 0; i < cps.size() && !decided; ++i) {
          bconfig n = c;
          n.phase = position::config_phase::step_falsifier;
          n.profile = static_cast<int>(i);
          feed(eval_config(ctx, verifier, n));
        }
        break;
      }
      case position::config_phase::step_falsifier: {
        const auto& cp = coalition_profiles(ctx, c.state, false)[static_cast<size_t>(c.profile)];
        for (const auto& op : coalition_profiles(ctx, c.state, true)) {
          if (decided) break;
          std::vector<int> full(static_cast<size_t>(m_.num_agents()));
          for (size_t i = 0; i < ctx.coalition.size(); ++i)
            full[static_cast<size_t>(ctx.coalition[i])] = cp[i];
          for (size_t i = 0; i < ctx.opposing.size(); ++i)
            full[static_cast<size_t>(ctx.opposing[i])] = op[i];
          bconfig n = c;
          n.state = m_.outcome(c.state, full);
          n.profile = 0;
          n.round = advance_round(c.round);
          advance_adjust(ctx, n, 0);
          feed(eval_config(ctx, verifier, n));
        }
        break;
      }
    }

    if (opts_.memoize) {
      memo_[key] = result;
      if (opts_.stats) opts_.stats->memo_entries = static_cast<long long>(memo_.size());
    }
    return result;
  }

  template <typename Feed>
  void eval_adjust(game_ctx& ctx, player verifier, const bconfig& c, Feed&& feed,
                   bool& decided) {
    const relative_atom& atom = ctx.atoms[c.atom];
    const state_formula& ver_target =
        atom.kind == relative_atom::kind_t::until ? *atom.arg2 : *atom.arg1;
    const bool is_until = atom.kind == relative_atom::kind_t::until;

    auto at_stage = [&](adjust_stage s) {
      bconfig n = c;
      n.stage = s;
      return n;
    };
    auto accept = [&](tv v) {
      bconfig n = c;
      n.truth = c.truth.set(c.atom, v);
      advance_adjust(ctx, n, c.atom + 1);
      return n;
    };
    auto skip = [&]() {
      bconfig n = c;
      advance_adjust(ctx, n, c.atom + 1);
      return n;
    };
    // a challenge continues the evaluation game on the claimed formula with
    // the claimant as verifier and an empty truth function
    auto challenge = [&](player claimant, const state_formula& claimed) {
      return eval_state(claimant, c.state, claimed);
    };

    switch (c.stage) {
      case adjust_stage::offer_v_ver:
        feed(eval_config(ctx, verifier, at_stage(adjust_stage::respond_vbar_ver)));
        if (!decided) feed(eval_config(ctx, verifier, at_stage(adjust_stage::offer_vbar_ver)));
        break;
      case adjust_stage::respond_vbar_ver:
        feed(eval_config(ctx, verifier, accept(tv::yes)));
        if (!decided) feed(challenge(verifier, ver_target));
        break;
      case adjust_stage::offer_vbar_ver:
        feed(eval_config(ctx, verifier, at_stage(adjust_stage::respond_v_ver)));
        if (!decided)
          feed(eval_config(ctx, verifier,
                           is_until ? at_stage(adjust_stage::offer_v_fal) : skip()));
        break;
      case adjust_stage::respond_v_ver:
        feed(eval_config(ctx, verifier, accept(tv::yes)));
        if (!decided) feed(challenge(opponent(verifier), ver_target));
        break;
      case adjust_stage::offer_v_fal:
        feed(eval_config(ctx, verifier, at_stage(adjust_stage::respond_vbar_fal)));
        if (!decided) feed(eval_config(ctx, verifier, at_stage(adjust_stage::offer_vbar_fal)));
        break;
      case adjust_stage::respond_vbar_fal:
        feed(eval_config(ctx, verifier, accept(tv::no)));
        if (!decided) feed(challenge(verifier, *ctx.fal_formulas[static_cast<size_t>(c.atom)]));
        break;
      case adjust_stage::offer_vbar_fal:
        feed(eval_config(ctx, verifier, at_stage(adjust_stage::respond_v_fal)));
        if (!decided) feed(eval_config(ctx, verifier, skip()));
        break;
      case adjust_stage::respond_v_fal:
        feed(eval_config(ctx, verifier, accept(tv::no)));
        if (!decided)
          feed(challenge(opponent(verifier), *ctx.fal_formulas[static_cast<size_t>(c.atom)]));
        break;
    }
  }
};

}  // namespace

bool bounded_check(const cgm& m, const state_formula& f, int state, long long timer_bound,
                   bounded_options opts) {
  if (timer_bound < 1) throw std::invalid_argument("bounded_check: timer bound must be >= 1");
  if (state < 0 || state >= m.num_states())
    throw std::invalid_argument("bounded_check: state out of range");
  engine e(m, timer_bound, opts);
  return e.eval_state(player::eloise, state, f);
}

std::vector<char> bounded_check_row(const cgm& m, const state_formula& f, long long timer_bound,
                                    bounded_options opts) {
  if (timer_bound < 1) throw std::invalid_argument("bounded_check: timer bound must be >= 1");
  engine e(m, timer_bound, opts);
  std::vector<char> row(static_cast<size_t>(m.num_states()));
  for (int q = 0; q < m.num_states(); ++q)
    row[static_cast<size_t>(q)] = e.eval_state(player::eloise, q, f) ? 1 : 0;
  return row;
}

}  // namespace atlplus
