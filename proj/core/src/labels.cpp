#include "atlplus/labels.hpp"

namespace atlplus {

void label_table::set_strategic(const std::string& key, std::vector<char> row) {
  if (row.size() != static_cast<size_t>(m_->num_states()))
    throw label_error("strategic label row for '" + key + "' has the wrong length");
  strategic_[key] = std::move(row);
}

bool label_table::lookup(const state_formula& f, int state) const {
  switch (f.op) {
    case state_op::tt: return true;
    case state_op::prop: {
      int p = m_->prop_id(f.name);
      if (p < 0)
        throw label_error("proposition '" + f.name + "' is not declared in the model");
      return m_->prop_true_at(p, state);
    }
    case state_op::neg: return !lookup(*f.lhs, state);
    case state_op::lor: return lookup(*f.lhs, state) || lookup(*f.rhs, state);
    case state_op::land: return lookup(*f.lhs, state) && lookup(*f.rhs, state);
    case state_op::implies: return !lookup(*f.lhs, state) || lookup(*f.rhs, state);
    case state_op::coalition: {
      auto it = strategic_.find(to_string(f));
      if (it == strategic_.end())
        throw label_error("label table incomplete: missing entry for '" + to_string(f) +
                          "' at state '" + m_->states[static_cast<size_t>(state)] + "'");
      return it->second[static_cast<size_t>(state)] != 0;
    }
  }
  throw label_error("label lookup: bad formula");
}

}  // namespace atlplus
