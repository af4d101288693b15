#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "atlplus/cgm.hpp"
#include "atlplus/formula.hpp"
#include "atlplus/labels.hpp"
#include "atlplus/truth.hpp"

namespace atlplus {

enum class player : uint8_t { eloise, abelard };
inline player opponent(player p) { return p == player::eloise ? player::abelard : player::eloise; }
inline char player_char(player p) { return p == player::eloise ? 'E' : 'A'; }

enum class round_flag : uint8_t { first = 1, second = 2, later = 3 };
inline round_flag advance_round(round_flag r) {
  return r == round_flag::first ? round_flag::second : round_flag::later;
}

// Sub-stages of phase i, in rule order.  Verification offers fully precede
// falsification offers; fal stages exist only for Until atoms.
enum class adjust_stage : uint8_t {
  offer_v_ver, respond_vbar_ver, offer_vbar_ver, respond_v_ver,
  offer_v_fal, respond_vbar_fal, offer_vbar_fal, respond_v_fal
};

// One game position: a fully extended transition-game configuration, a
// location of the Boolean evaluation played at an exit, or an ending.
struct position {
  enum class kind_t : uint8_t { config, boolean, ending };
  enum class config_phase : uint8_t {
    adjust, decide_seeker, decide_opponent, step_verifier, step_falsifier
  };

  kind_t kind = kind_t::config;

  // config
  player seeker = player::eloise;
  int state = 0;
  truth_fn truth;
  int counter = 0;  // n, seeker turns left
  round_flag round = round_flag::first;
  config_phase phase = config_phase::adjust;
  int atom = 0;                                  // adjust
  adjust_stage stage = adjust_stage::offer_v_ver;  // adjust
  int profile = 0;  // step_falsifier: coalition profile index at `state`

  // boolean
  player verifier = player::eloise;
  int node = 0;  // skeleton node

  // ending
  player winner = player::eloise;

  std::array<uint64_t, 2> key() const;
};

struct arena_options {
  // Claims that lose on challenge stay legal by default; pruning them must
  // preserve winners (checked by tests).
  bool prune_losing_claims = false;
};

struct game_graph {
  std::vector<player> owner;
  std::vector<std::vector<int>> succ;
  std::vector<char> target;  // Buchi set F, Abelard's objective

  int size() const { return static_cast<int>(owner.size()); }
};

// Explicit position graph of one unbounded transition game for <<A>>Phi with
// Eloise as verifier, state-formula claims resolved against `labels`.
// Lifetime: holds references into the model; keep the cgm alive.
class transition_arena {
public:
  std::vector<position> positions;  // construction order; ids are indices
  std::vector<std::string> move_labels;  // per edge
  std::vector<std::pair<int, int>> edge_list;
  game_graph graph;
  std::vector<int> initial;  // model state -> initial position id

  const cgm* model = nullptr;
  std::vector<int> coalition;  // sorted agent ids
  atom_list atoms;
  atom_skeleton skeleton;
  label_table labels;
  arena_options options;

  transition_arena(const cgm& m, label_table lt) : model(&m), labels(std::move(lt)) {}

  int size() const { return static_cast<int>(positions.size()); }
  int distinct_truth_functions() const;

  // The rule-determined successors of a non-ending position (not interned;
  // mirrors exactly what the builder wired).
  std::vector<std::pair<std::string, position>> enumerate_moves(const position& pos) const;

  // Coalition profiles at a state, fixed enumeration order shared with the
  // step-phase move labels.
  const std::vector<std::vector<int>>& profiles_at(int state) const;
  const std::vector<std::vector<int>>& opposing_profiles_at(int state) const;
  std::vector<int> opposing_agents() const;

  void dump(std::ostream& os) const;

private:
  friend transition_arena build_transition_arena(const cgm&, const label_table&,
                                                 const std::vector<int>&, const path_formula&,
                                                 arena_options);
  mutable std::map<int, std::vector<std::vector<int>>> profile_cache_;
  mutable std::map<int, std::vector<std::vector<int>>> opposing_cache_;
};

// Exit resolution, the only code that reads open-as-false semantics.
player resolve_challenge_exit(player claimant, const label_table& labels, int state,
                              const state_formula& claimed);
player resolve_boolean_exit(player verifier, const atom_skeleton& sk, const truth_fn& truth);

transition_arena build_transition_arena(const cgm& m, const label_table& labels,
                                        const std::vector<int>& coalition,
                                        const path_formula& phi, arena_options opts = {});

// Reads the textual dump back as a bare game graph (debugging entry point
// for the solver).
game_graph read_game_dump(std::istream& in);

}  // namespace atlplus
