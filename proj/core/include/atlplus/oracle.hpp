#pragma once

#include <cstdint>
#include <vector>

#include "atlplus/cgm.hpp"
#include "atlplus/formula.hpp"
#include "atlplus/labels.hpp"
#include "atlplus/truth.hpp"

namespace atlplus {

// Deterministic semantic atom status along a path.  State atoms are decided
// at step 0, Next atoms at step 1, Until atoms monotonically whenever open:
// to true when the right argument holds, else to false when the left fails.
truth_fn initial_status(const label_table& labels, const atom_list& atoms, int q0);
truth_fn step_status(const label_table& labels, const atom_list& atoms, const truth_fn& cur,
                     int q);

// Finite-path truth of an abbreviation-free path formula: X needs a first
// transition, U a witness within the prefix, state formulas read at path[0].
bool eval_finite_path(const cgm& m, const std::vector<int>& path, const path_formula& phi,
                      const label_table& labels);

// prefix . cycle^omega; prefix contains the start state, cycle is nonempty.
struct lasso {
  std::vector<int> prefix;
  std::vector<int> cycle;
};

// Number of prefix lengths i >= 1 where finite-path truth differs between
// the length-(i-1) and length-i prefixes.  Exact: truth stabilizes within
// lgt(prefix) + (|At|+2) * |cycle| steps.
int tsn(const cgm& m, const lasso& l, const path_formula& phi, const label_table& labels);

// Classical fixpoint labelling; requires fragment_width(f) <= 1 and an
// abbreviation-free formula.  Independent of the game engines.
std::vector<char> atl_fixpoint_label(const cgm& m, const state_formula& f);

// Two-player game on (state, status) product nodes: Eloise picks coalition
// profiles, Abelard completes; Eloise wins a play iff the eventually-stable
// status satisfies Phi (open as false).  Solved by backward induction over
// the status lattice, most-determined strata first.
bool status_game_check(const cgm& m, const std::vector<int>& coalition, const path_formula& phi,
                       const label_table& labels, int q);
std::vector<char> status_game_row(const cgm& m, const std::vector<int>& coalition,
                                  const path_formula& phi, const label_table& labels);

inline constexpr long long positional_bruteforce_guard = 1'000'000;

// True iff some positional coalition strategy makes Phi hold on every
// resulting path, decided per strategy by the product-cycle stable-status
// test.  Throws when the strategy count exceeds `guard`.
bool positional_bruteforce(const cgm& m, const std::vector<int>& coalition,
                           const path_formula& phi, const label_table& labels, int q,
                           long long guard = positional_bruteforce_guard);

// A pruned serial transition system over nodes carrying a model state.
struct pruned_system {
  std::vector<int> state_of;
  std::vector<std::vector<int>> succ;
  int initial = 0;
};

// Every infinite path of the system satisfies Phi: every reachable node on a
// product cycle has a stable status satisfying the skeleton.
bool all_paths_satisfy(const pruned_system& sys, const atom_list& atoms,
                       const atom_skeleton& skeleton, const label_table& labels);
bool all_paths_satisfy(const pruned_system& sys, const path_formula& phi,
                       const label_table& labels);

}  // namespace atlplus
