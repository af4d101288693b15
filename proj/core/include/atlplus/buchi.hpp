#pragma once

#include <cstdint>
#include <vector>

#include "atlplus/arena.hpp"

namespace atlplus {

struct attractor_result {
  std::vector<char> in;
  std::vector<int> rank;  // BFS layer, 0 on the target, -1 outside
};

// Least set containing `target` and closed under "who has an edge in /
// the opponent has all edges in", restricted to `alive` when given.
attractor_result attractor(const game_graph& g, player who, const std::vector<char>& target,
                           const std::vector<char>* alive = nullptr);

struct buchi_solution {
  std::vector<player> winner;
  // chosen successor for positions owned by their winner, -1 elsewhere
  std::vector<int> strategy;
};

// Abelard wins a play iff F is visited infinitely often.  Classical
// repeated-attractor fixpoint; positional strategies for both players, rank
// ties broken by lowest successor id.
buchi_solution solve_buchi(const game_graph& g);

// Plays following the declared winner's positional strategy against lazily
// sampled positional opponents; returns the number of plays whose lasso
// contradicts the declared winner (0 expected).
int validate_solution(const game_graph& g, const buchi_solution& sol, uint64_t seed, int plays);

}  // namespace atlplus
