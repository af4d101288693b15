#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace atlplus {

// Three-valued truth status of one relative atom.
enum class tv : uint8_t { open = 0, yes = 1, no = 2 };

inline char tv_char(tv v) { return v == tv::open ? 'O' : (v == tv::yes ? 'T' : 'F'); }

// Open reads as false at game endings; this is the one place that rule lives.
inline bool open_as_false(tv v) { return v == tv::yes; }

// Truth function over a fixed atom list, 2 bits per atom.  Atoms are
// addressed by their index in the document-order atom list.
class truth_fn {
public:
  truth_fn() = default;
  static truth_fn all_open(int size) {
    if (size < 0 || size > max_atoms)
      throw std::invalid_argument("truth_fn: unsupported atom count " + std::to_string(size));
    truth_fn t;
    t.size_ = static_cast<uint8_t>(size);
    return t;
  }

  int size() const { return size_; }

  tv get(int i) const { return static_cast<tv>((bits_ >> (2 * i)) & 3u); }

  // Monotone update: only open atoms may be written.
  truth_fn set(int i, tv v) const {
    if (get(i) != tv::open)
      throw std::logic_error("truth_fn: atom " + std::to_string(i) + " is already determined");
    truth_fn t = *this;
    t.bits_ |= static_cast<uint64_t>(v) << (2 * i);
    return t;
  }

  int open_count() const {
    int n = 0;
    for (int i = 0; i < size_; ++i)
      if (get(i) == tv::open) ++n;
    return n;
  }
  bool fully_determined() const { return open_count() == 0; }

  std::string str() const {
    std::string s;
    s.reserve(size_);
    for (int i = 0; i < size_; ++i) s.push_back(tv_char(get(i)));
    return s;
  }

  friend bool operator==(const truth_fn& a, const truth_fn& b) {
    return a.size_ == b.size_ && a.bits_ == b.bits_;
  }
  friend bool operator!=(const truth_fn& a, const truth_fn& b) { return !(a == b); }
  friend bool operator<(const truth_fn& a, const truth_fn& b) {
    return a.bits_ != b.bits_ ? a.bits_ < b.bits_ : a.size_ < b.size_;
  }

  uint64_t raw() const { return bits_; }

  static constexpr int max_atoms = 32;

private:
  uint64_t bits_ = 0;
  uint8_t size_ = 0;
};

}  // namespace atlplus
