#pragma once

#include <cstdint>
#include <vector>

#include "atlplus/cgm.hpp"
#include "atlplus/formula.hpp"

namespace atlplus {

// canonical_max collapses the timer choices "some gamma' < gamma" to
// gamma-1 and "some gamma' < Gamma" to Gamma-1 (the maximal pick dominates);
// exhaustive branches over every legal value and exists for conformance
// testing on tiny instances.
enum class timer_policy { canonical_max, exhaustive };

struct bounded_stats {
  long long memo_entries = 0;
  long long configs_visited = 0;
};

struct bounded_options {
  timer_policy policy = timer_policy::canonical_max;
  bool memoize = true;
  bounded_stats* stats = nullptr;
};

// |St| * |At(Phi)|, the stable timer bound of one transition game.
long long stable_timer(const cgm& m, const path_formula& phi);

// max of stable_timer over every strategic subformula of f (1 when f has
// none); safe as the global bound for a nested check.
long long stable_timer_bound(const cgm& m, const state_formula& f);

// Eloise wins the timer_bound-bounded evaluation game on f at `state`.
// Nested strategic subformulas are played out as fresh transition games; no
// label table is involved.  f must be abbreviation-free.
bool bounded_check(const cgm& m, const state_formula& f, int state, long long timer_bound,
                   bounded_options opts = {});

// Same engine, all states at once with a shared memo table.
std::vector<char> bounded_check_row(const cgm& m, const state_formula& f, long long timer_bound,
                                    bounded_options opts = {});

}  // namespace atlplus
