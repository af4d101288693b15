#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "atlplus/arena.hpp"
#include "atlplus/buchi.hpp"
#include "atlplus/truth.hpp"

namespace atlplus {

enum class fallback_level { t_only, t_seeker_counter };
inline const char* fallback_name(fallback_level l) {
  return l == fallback_level::t_only ? "T-only" : "T-seeker-counter";
}

// Finite-memory coalition strategy.  Cells are truth functions with at least
// one open atom; cell 0 is the dedicated start cell (all open).  The machine
// folds observed states through `update` (saturating updates stay put) and
// plays `act` of the current cell and state.
struct transducer {
  std::vector<int> coalition;                         // agent ids
  std::vector<truth_fn> cells;                        // discovery order
  std::vector<std::pair<player, int>> cell_tags;      // (seeker, counter), fallback only
  bool tagged = false;
  std::map<std::pair<int, int>, int> update;          // (cell, state) -> cell
  std::map<std::pair<int, int>, std::vector<int>> act;  // (cell, state) -> profile
};

struct witness_report {
  transducer machine;
  bool verified = false;
  int memory_used = 0;        // distinct truth functions (t_only) or cells (fallback)
  long long memory_bound = 0;  // 3^k - 2^k
  fallback_level level = fallback_level::t_only;
};

// Projects Eloise's positional Buchi strategy at step-phase positions onto
// (truth function, state) pairs; on action clashes prefers the position with
// Eloise as seeker and the largest counter.  If the projection fails the
// independent verification, retries with memory cells (T, seeker, counter).
witness_report synthesize_transducer(const buchi_solution& sol, const transition_arena& arena,
                                     int from_state);

// Independent check: prunes the coalition's actions to the transducer's
// choices and requires every infinite path from q to satisfy Phi (product
// cycle stable-status test).  Throws on inadmissible actions.
bool verify_witness(const cgm& m, const std::vector<int>& coalition, const path_formula& phi,
                    const label_table& labels, const transducer& t, int q);

long long transducer_memory_bound(int atom_count);  // 3^k - 2^k

std::string dump_witness(const transition_arena& arena, const witness_report& w, int from_state);

}  // namespace atlplus
