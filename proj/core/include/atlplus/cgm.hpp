#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace atlplus {

class model_error : public std::runtime_error {
public:
  explicit model_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Explicit concurrent game model.  Names are kept for I/O; everything else
// works on dense ids in file order, which is the canonical iteration order
// downstream (arenas are reproducible because of it).
class cgm {
public:
  std::vector<std::string> agents;
  std::vector<std::string> states;
  std::vector<std::string> propositions;
  std::vector<std::string> actions;

  // available[agent][state]: sorted-by-id, nonempty action sets (d).
  std::vector<std::vector<std::vector<int>>> available;
  // transitions[state]: full action profile (one action id per agent, in
  // agent order) -> successor state.  Stored explicitly, no default rule.
  std::vector<std::map<std::vector<int>, int>> transitions;
  // valuation[prop][state] (v).
  std::vector<std::vector<char>> valuation;

  int num_agents() const { return static_cast<int>(agents.size()); }
  int num_states() const { return static_cast<int>(states.size()); }

  int agent_id(const std::string& name) const;
  int state_id(const std::string& name) const;
  int prop_id(const std::string& name) const;
  int action_id(const std::string& name) const;

  bool prop_true_at(int prop, int state) const {
    return valuation[static_cast<size_t>(prop)][static_cast<size_t>(state)] != 0;
  }

  // o(q, profile); throws model_error on an inadmissible profile.
  int outcome(int q, const std::vector<int>& profile) const;

  // All admissible full profiles at q, lexicographic in agent order.
  std::vector<std::vector<int>> full_profiles(int q) const;
  // action(A, q) for a coalition given as sorted agent ids.
  std::vector<std::vector<int>> coalition_profiles(int q, const std::vector<int>& coalition) const;
  // Successor states when the coalition plays `cp` and the opponents play
  // any completion.
  std::vector<int> successors_under(int q, const std::vector<int>& coalition,
                                    const std::vector<int>& cp) const;
  std::vector<int> successors(int q) const;

  std::string profile_str(const std::vector<int>& profile) const;

  // Checks every model invariant; throws model_error with the offending
  // element named (missing outcomes are all listed).
  void validate() const;
};

// Resolve agent names of a formula coalition against the model; returns
// sorted agent ids.  Unknown agents are a model_error (checked at use time).
std::vector<int> agent_ids(const cgm& m, const std::vector<std::string>& names);

cgm load_model(const std::string& json_text);
cgm load_model_file(const std::string& path);
std::string dump_model(const cgm& m);

struct coalition_move {
  std::vector<int> profile;     // one action per coalition agent
  std::vector<int> successors;  // reachable states over all opposing completions
};
std::vector<coalition_move> coalition_moves(const cgm& m, int q,
                                            const std::vector<int>& coalition);

// lgt(path) = path.size()-1 transitions, each witnessed by some profile.
bool is_finite_path(const cgm& m, const std::vector<int>& path);

namespace fixtures {
// The two bundled worked models plus synthetic families used by tests and
// benchmarks.
cgm mstar();
cgm m3();
const char* mstar_json();
const char* m3_json();
// Line of `length` states with a single agent that may advance or stay;
// "mid" holds halfway, "goal" at the end.
cgm chain(int length);
// Hub with two leaf states; visiting both requires remembering which leaf
// was already seen, so no positional strategy does it.
cgm memory_hub();
}  // namespace fixtures

}  // namespace atlplus
