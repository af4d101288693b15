#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "atlplus/cgm.hpp"
#include "atlplus/formula.hpp"

namespace atlplus {

class label_error : public std::runtime_error {
public:
  explicit label_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Per-state truth of state formulas: propositions come from the model
// valuation, strategic subformulas from rows registered by whichever engine
// labelled them (innermost first), Boolean structure is evaluated on the fly.
class label_table {
public:
  explicit label_table(const cgm& m) : m_(&m) {}

  void set_strategic(const std::string& key, std::vector<char> row);
  bool has_strategic(const std::string& key) const { return strategic_.count(key) != 0; }

  bool lookup(const state_formula& f, int state) const;

  const cgm& model() const { return *m_; }

private:
  const cgm* m_;
  std::map<std::string, std::vector<char>> strategic_;
};

}  // namespace atlplus
