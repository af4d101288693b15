#include "atlplus/buchi.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <stdexcept>

namespace atlplus {

namespace {

std::vector<std::vector<int>> predecessors(const game_graph& g) {
  std::vector<std::vector<int>> pred(g.succ.size());
  for (size_t u = 0; u < g.succ.size(); ++u)
    for (int v : g.succ[u]) pred[static_cast<size_t>(v)].push_back(static_cast<int>(u));
  return pred;
}

}  // namespace

attractor_result attractor(const game_graph& g, player who, const std::vector<char>& target,
                           const std::vector<char>* alive) {
  const size_t n = g.succ.size();
  attractor_result res;
  res.in.assign(n, 0);
  res.rank.assign(n, -1);

  auto live = [&](size_t v) { return !alive || (*alive)[v]; };

  std::vector<int> pending(n, 0);  // live successors not yet attracted (opponent positions)
  for (size_t v = 0; v < n; ++v) {
    if (!live(v)) continue;
    for (int s : g.succ[v])
      if (live(static_cast<size_t>(s))) ++pending[v];
  }

  auto pred = predecessors(g);
  std::deque<int> queue;
  for (size_t v = 0; v < n; ++v)
    if (live(v) && target[v]) {
      res.in[v] = 1;
      res.rank[v] = 0;
      queue.push_back(static_cast<int>(v));
    }

  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int p : pred[static_cast<size_t>(u)]) {
      size_t pv = static_cast<size_t>(p);
      if (!live(pv) || res.in[pv]) continue;
      bool attract = g.owner[pv] == who || --pending[pv] == 0;
      if (attract) {
        res.in[pv] = 1;
        res.rank[pv] = res.rank[static_cast<size_t>(u)] + 1;
        queue.push_back(p);
      }
    }
  }
  return res;
}

buchi_solution solve_buchi(const game_graph& g) {
  const size_t n = g.succ.size();
  for (size_t v = 0; v < n; ++v)
    if (g.succ[v].empty())
      throw std::invalid_argument("solve_buchi: non-serial game graph (position " +
                                  std::to_string(v) + " has no successor)");

  buchi_solution sol;
  sol.winner.assign(n, player::abelard);
  sol.strategy.assign(n, -1);

  std::vector<char> alive(n, 1);
  std::vector<char> fcur(n, 0);
  for (size_t v = 0; v < n; ++v) fcur[v] = g.target[v];

  // pick the lowest-id successor satisfying `ok`
  auto choose = [&](size_t v, auto&& ok) {
    int best = -1;
    for (int s : g.succ[v])
      if (ok(static_cast<size_t>(s)) && (best == -1 || s < best)) best = s;
    return best;
  };

  for (;;) {
    attractor_result reach_f = attractor(g, player::abelard, fcur, &alive);

    std::vector<char> trap(n, 0);
    bool trap_empty = true;
    for (size_t v = 0; v < n; ++v)
      if (alive[v] && !reach_f.in[v]) {
        trap[v] = 1;
        trap_empty = false;
      }

    if (trap_empty) {
      // Abelard wins everything still alive: attract to F, then re-enter.
      for (size_t v = 0; v < n; ++v) {
        if (!alive[v]) continue;
        sol.winner[v] = player::abelard;
        if (g.owner[v] != player::abelard) continue;
        if (fcur[v])
          sol.strategy[v] = choose(v, [&](size_t s) { return alive[s] != 0; });
        else
          sol.strategy[v] = choose(v, [&](size_t s) {
            return alive[s] && reach_f.in[s] && reach_f.rank[s] < reach_f.rank[v];
          });
      }
      break;
    }

    attractor_result to_trap = attractor(g, player::eloise, trap, &alive);
    for (size_t v = 0; v < n; ++v) {
      if (!alive[v] || !to_trap.in[v]) continue;
      sol.winner[v] = player::eloise;
      if (g.owner[v] == player::eloise) {
        if (trap[v])
          sol.strategy[v] = choose(v, [&](size_t s) { return alive[s] && trap[s]; });
        else
          sol.strategy[v] = choose(v, [&](size_t s) {
            return alive[s] && to_trap.in[s] && to_trap.rank[s] < to_trap.rank[v];
          });
      }
      alive[v] = 0;
      fcur[v] = 0;
    }
  }
  return sol;
}

int validate_solution(const game_graph& g, const buchi_solution& sol, uint64_t seed, int plays) {
  const size_t n = g.succ.size();
  if (n == 0) return 0;
  std::mt19937_64 rng(seed);
  int failures = 0;

  for (int play = 0; play < plays; ++play) {
    size_t start = static_cast<size_t>(rng() % n);
    player w = sol.winner[start];

    // opponent plays a positional strategy sampled lazily per play
    std::vector<int> opp_choice(n, -1);
    std::vector<int> seen_at(n, -1);
    size_t cur = start;
    int step = 0;
    while (seen_at[cur] == -1) {
      seen_at[cur] = step++;
      size_t next;
      if (g.owner[cur] == w) {
        next = static_cast<size_t>(sol.strategy[cur]);
      } else {
        if (opp_choice[cur] == -1)
          opp_choice[cur] = g.succ[cur][rng() % g.succ[cur].size()];
        next = static_cast<size_t>(opp_choice[cur]);
      }
      cur = next;
    }

    // cycle = everything at or after the first visit of `cur`
    bool cycle_hits_f = false;
    {
      size_t v = cur;
      do {
        if (g.target[v]) cycle_hits_f = true;
        v = g.owner[v] == w ? static_cast<size_t>(sol.strategy[v])
                            : static_cast<size_t>(opp_choice[v]);
      } while (v != cur);
    }
    bool abelard_wins_play = cycle_hits_f;
    if ((w == player::abelard) != abelard_wins_play) ++failures;
  }
  return failures;
}

}  // namespace atlplus
