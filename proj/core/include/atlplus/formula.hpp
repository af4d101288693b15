#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace atlplus {

class state_formula;
class path_formula;
using state_ref = std::shared_ptr<const state_formula>;
using path_ref = std::shared_ptr<const path_formula>;

// Surface connectives (land, implies, eventually, globally, release) survive
// parsing and are removed by expand_abbreviations; everything downstream of
// the parser assumes the kernel {tt, prop, neg, lor, coalition, lift, next,
// until}.
enum class state_op { tt, prop, neg, lor, land, implies, coalition };
enum class path_op { lift, neg, lor, land, implies, next, until, eventually, globally, release };

class state_formula {
public:
  state_op op;
  std::string name;                 // prop
  state_ref lhs, rhs;               // neg: lhs only
  std::vector<std::string> agents;  // coalition, sorted and deduplicated
  path_ref objective;               // coalition
};

class path_formula {
public:
  path_op op;
  state_ref sarg, sarg2;  // lift/next/eventually/globally: sarg; until/release: both
  path_ref lhs, rhs;      // neg: lhs only
};

namespace sf {
state_ref tt();
state_ref ff();  // shorthand for neg(tt)
state_ref prop(std::string name);
state_ref neg(state_ref f);
state_ref lor(state_ref a, state_ref b);
state_ref land(state_ref a, state_ref b);
state_ref implies(state_ref a, state_ref b);
state_ref coalition(std::vector<std::string> agents, path_ref objective);
}  // namespace sf

namespace pf {
path_ref lift(state_ref f);
path_ref neg(path_ref f);
path_ref lor(path_ref a, path_ref b);
path_ref land(path_ref a, path_ref b);
path_ref implies(path_ref a, path_ref b);
path_ref next(state_ref f);
path_ref until(state_ref a, state_ref b);
path_ref eventually(state_ref f);
path_ref globally(state_ref f);
path_ref release(state_ref a, state_ref b);
}  // namespace pf

bool struct_eq(const state_formula& a, const state_formula& b);
bool struct_eq(const path_formula& a, const path_formula& b);

// Minimal-parenthesis rendering; parse(to_string(f)) == f, and the rendered
// text doubles as the structural identity key.
std::string to_string(const state_formula& f);
std::string to_string(const path_formula& f);

int node_count(const state_formula& f);
int node_count(const path_formula& f);

class parse_error : public std::runtime_error {
public:
  parse_error(std::string msg, size_t position)
      : std::runtime_error(msg + " (at offset " + std::to_string(position) + ")"),
        position(position) {}
  size_t position;
};

// Surface grammar, precedence low to high: ->, |, &, !, U/R, then the unary
// prefixes X/F/G/<<...>> and atoms.  U/R are non-associative.
state_ref parse_formula(const std::string& text);

state_ref expand_abbreviations(const state_formula& f);
path_ref expand_abbreviations(const path_formula& f);

// ---- structural analysis (all of it assumes abbreviation-free input) ----

struct relative_atom {
  enum class kind_t { state, next, until };
  kind_t kind;
  state_ref arg1;  // state: the formula itself; next: the X argument; until: lhs
  state_ref arg2;  // until: rhs
  std::string key;

  bool temporal() const { return kind != kind_t::state; }
};

class atom_list {
public:
  std::vector<relative_atom> atoms;

  int size() const { return static_cast<int>(atoms.size()); }
  const relative_atom& operator[](int i) const { return atoms[static_cast<size_t>(i)]; }
  // -1 when the key is not an atom of this list.
  int index_of(const std::string& key) const;
};

// At(Phi) in document order of first occurrence (the fixed atom order used
// everywhere downstream).
atom_list relative_atoms(const path_formula& phi);

struct atom_polarity {
  bool positive = false;
  bool negative = false;
};

std::map<std::string, atom_polarity> atom_polarities(const path_formula& phi);

struct strategic_subformula {
  state_ref formula;  // the coalition formula itself
  int atom_count = 0;
  int temporal_atom_count = 0;
};

struct fragment_report {
  int width = 0;                                // max |At| over strategic subformulas
  std::vector<strategic_subformula> strategic;  // innermost-first, deduplicated
};

fragment_report fragment_width(const state_formula& f);

// Boolean skeleton of a path formula over its atom indices, used for ending
// evaluation and for checking a formula against a stable atom status.
class atom_skeleton {
public:
  struct node {
    enum class op_t { atom, neg, lor } op;
    int child = -1, child2 = -1;
    int atom = -1;
  };
  std::vector<node> nodes;
  int root = -1;

  bool eval(const std::function<bool(int)>& atom_value) const;
};

atom_skeleton compile_skeleton(const path_formula& phi, const atom_list& atoms);

}  // namespace atlplus
