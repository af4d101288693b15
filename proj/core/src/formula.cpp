#include "atlplus/formula.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <sstream>

namespace atlplus {

namespace sf {

state_ref tt() {
  auto f = std::make_shared<state_formula>();
  f->op = state_op::tt;
  return f;
}
state_ref ff() { return neg(tt()); }
state_ref prop(std::string name) {
  auto f = std::make_shared<state_formula>();
  f->op = state_op::prop;
  f->name = std::move(name);
  return f;
}
static state_ref binary(state_op op, state_ref a, state_ref b) {
  auto f = std::make_shared<state_formula>();
  f->op = op;
  f->lhs = std::move(a);
  f->rhs = std::move(b);
  return f;
}
state_ref neg(state_ref f) { return binary(state_op::neg, std::move(f), nullptr); }
state_ref lor(state_ref a, state_ref b) { return binary(state_op::lor, std::move(a), std::move(b)); }
state_ref land(state_ref a, state_ref b) { return binary(state_op::land, std::move(a), std::move(b)); }
state_ref implies(state_ref a, state_ref b) {
  return binary(state_op::implies, std::move(a), std::move(b));
}
state_ref coalition(std::vector<std::string> agents, path_ref objective) {
  std::sort(agents.begin(), agents.end());
  agents.erase(std::unique(agents.begin(), agents.end()), agents.end());
  auto f = std::make_shared<state_formula>();
  f->op = state_op::coalition;
  f->agents = std::move(agents);
  f->objective = std::move(objective);
  return f;
}

}  // namespace sf

namespace pf {

path_ref lift(state_ref f) {
  auto p = std::make_shared<path_formula>();
  p->op = path_op::lift;
  p->sarg = std::move(f);
  return p;
}
static path_ref binary(path_op op, path_ref a, path_ref b) {
  auto p = std::make_shared<path_formula>();
  p->op = op;
  p->lhs = std::move(a);
  p->rhs = std::move(b);
  return p;
}
static path_ref temporal(path_op op, state_ref a, state_ref b) {
  auto p = std::make_shared<path_formula>();
  p->op = op;
  p->sarg = std::move(a);
  p->sarg2 = std::move(b);
  return p;
}
path_ref neg(path_ref f) { return binary(path_op::neg, std::move(f), nullptr); }
path_ref lor(path_ref a, path_ref b) { return binary(path_op::lor, std::move(a), std::move(b)); }
path_ref land(path_ref a, path_ref b) { return binary(path_op::land, std::move(a), std::move(b)); }
path_ref implies(path_ref a, path_ref b) {
  return binary(path_op::implies, std::move(a), std::move(b));
}
path_ref next(state_ref f) { return temporal(path_op::next, std::move(f), nullptr); }
path_ref until(state_ref a, state_ref b) {
  return temporal(path_op::until, std::move(a), std::move(b));
}
path_ref eventually(state_ref f) { return temporal(path_op::eventually, std::move(f), nullptr); }
path_ref globally(state_ref f) { return temporal(path_op::globally, std::move(f), nullptr); }
path_ref release(state_ref a, state_ref b) {
  return temporal(path_op::release, std::move(a), std::move(b));
}

}  // namespace pf

// ---------------------------------------------------------------- equality

bool struct_eq(const state_formula& a, const state_formula& b) {
  if (a.op != b.op) return false;
  switch (a.op) {
    case state_op::tt: return true;
    case state_op::prop: return a.name == b.name;
    case state_op::neg: return struct_eq(*a.lhs, *b.lhs);
    case state_op::lor:
    case state_op::land:
    case state_op::implies: return struct_eq(*a.lhs, *b.lhs) && struct_eq(*a.rhs, *b.rhs);
    case state_op::coalition:
      return a.agents == b.agents && struct_eq(*a.objective, *b.objective);
  }
  return false;
}

bool struct_eq(const path_formula& a, const path_formula& b) {
  if (a.op != b.op) return false;
  switch (a.op) {
    case path_op::lift: return struct_eq(*a.sarg, *b.sarg);
    case path_op::neg: return struct_eq(*a.lhs, *b.lhs);
    case path_op::lor:
    case path_op::land:
    case path_op::implies: return struct_eq(*a.lhs, *b.lhs) && struct_eq(*a.rhs, *b.rhs);
    case path_op::next:
    case path_op::eventually:
    case path_op::globally: return struct_eq(*a.sarg, *b.sarg);
    case path_op::until:
    case path_op::release: return struct_eq(*a.sarg, *b.sarg) && struct_eq(*a.sarg2, *b.sarg2);
  }
  return false;
}

// ---------------------------------------------------------------- printing
//
// Precedence levels: -> 1, | 2, & 3, ! 4, U/R 5, unary prefixes and atoms 6.

namespace {

void print_state(std::ostream& os, const state_formula& f, int min_level);
void print_path(std::ostream& os, const path_formula& f, int min_level);

template <typename F>
void wrap(std::ostream& os, int level, int min_level, F&& body) {
  if (level < min_level) {
    os << '(';
    body();
    os << ')';
  } else {
    body();
  }
}

void print_coalition_prefix(std::ostream& os, const std::vector<std::string>& agents) {
  os << "<<";
  for (size_t i = 0; i < agents.size(); ++i) {
    if (i) os << ',';
    os << agents[i];
  }
  os << ">> ";
}

void print_state(std::ostream& os, const state_formula& f, int min_level) {
  switch (f.op) {
    case state_op::tt: os << "true"; break;
    case state_op::prop: os << f.name; break;
    case state_op::neg:
      wrap(os, 4, min_level, [&] {
        os << '!';
        print_state(os, *f.lhs, 4);
      });
      break;
    case state_op::lor:
      wrap(os, 2, min_level, [&] {
        print_state(os, *f.lhs, 2);
        os << " | ";
        print_state(os, *f.rhs, 3);
      });
      break;
    case state_op::land:
      wrap(os, 3, min_level, [&] {
        print_state(os, *f.lhs, 3);
        os << " & ";
        print_state(os, *f.rhs, 4);
      });
      break;
    case state_op::implies:
      wrap(os, 1, min_level, [&] {
        print_state(os, *f.lhs, 2);
        os << " -> ";
        print_state(os, *f.rhs, 1);
      });
      break;
    case state_op::coalition:
      wrap(os, 6, min_level, [&] {
        print_coalition_prefix(os, f.agents);
        print_path(os, *f.objective, 6);
      });
      break;
  }
}

void print_path(std::ostream& os, const path_formula& f, int min_level) {
  switch (f.op) {
    case path_op::lift: print_state(os, *f.sarg, min_level); break;
    case path_op::neg:
      wrap(os, 4, min_level, [&] {
        os << '!';
        print_path(os, *f.lhs, 4);
      });
      break;
    case path_op::lor:
      wrap(os, 2, min_level, [&] {
        print_path(os, *f.lhs, 2);
        os << " | ";
        print_path(os, *f.rhs, 3);
      });
      break;
    case path_op::land:
      wrap(os, 3, min_level, [&] {
        print_path(os, *f.lhs, 3);
        os << " & ";
        print_path(os, *f.rhs, 4);
      });
      break;
    case path_op::implies:
      wrap(os, 1, min_level, [&] {
        print_path(os, *f.lhs, 2);
        os << " -> ";
        print_path(os, *f.rhs, 1);
      });
      break;
    case path_op::next:
      wrap(os, 6, min_level, [&] {
        os << "X ";
        print_state(os, *f.sarg, 6);
      });
      break;
    case path_op::eventually:
      wrap(os, 6, min_level, [&] {
        os << "F ";
        print_state(os, *f.sarg, 6);
      });
      break;
    case path_op::globally:
      wrap(os, 6, min_level, [&] {
        os << "G ";
        print_state(os, *f.sarg, 6);
      });
      break;
    case path_op::until:
      wrap(os, 5, min_level, [&] {
        print_state(os, *f.sarg, 6);
        os << " U ";
        print_state(os, *f.sarg2, 6);
      });
      break;
    case path_op::release:
      wrap(os, 5, min_level, [&] {
        print_state(os, *f.sarg, 6);
        os << " R ";
        print_state(os, *f.sarg2, 6);
      });
      break;
  }
}

}  // namespace

std::string to_string(const state_formula& f) {
  std::ostringstream os;
  print_state(os, f, 0);
  return os.str();
}

std::string to_string(const path_formula& f) {
  std::ostringstream os;
  print_path(os, f, 0);
  return os.str();
}

int node_count(const state_formula& f) {
  switch (f.op) {
    case state_op::tt:
    case state_op::prop: return 1;
    case state_op::neg: return 1 + node_count(*f.lhs);
    case state_op::lor:
    case state_op::land:
    case state_op::implies: return 1 + node_count(*f.lhs) + node_count(*f.rhs);
    case state_op::coalition: return 1 + node_count(*f.objective);
  }
  return 1;
}

int node_count(const path_formula& f) {
  switch (f.op) {
    case path_op::lift: return 1 + node_count(*f.sarg);
    case path_op::neg: return 1 + node_count(*f.lhs);
    case path_op::lor:
    case path_op::land:
    case path_op::implies: return 1 + node_count(*f.lhs) + node_count(*f.rhs);
    case path_op::next:
    case path_op::eventually:
    case path_op::globally: return 1 + node_count(*f.sarg);
    case path_op::until:
    case path_op::release: return 1 + node_count(*f.sarg) + node_count(*f.sarg2);
  }
  return 1;
}

// ----------------------------------------------------------------- parser

namespace {

enum class tok {
  end, lparen, rparen, bang, amp, pipe, arrow, comma,
  coal_open, coal_close, ident, kw_true, kw_false, kw_x, kw_f, kw_g, kw_u, kw_r
};

struct token {
  tok kind;
  std::string text;
  size_t pos;
};

std::vector<token> lex(const std::string& s) {
  std::vector<token> out;
  size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '(') { out.push_back({tok::lparen, "(", i++}); continue; }
    if (c == ')') { out.push_back({tok::rparen, ")", i++}); continue; }
    if (c == '!') { out.push_back({tok::bang, "!", i++}); continue; }
    if (c == '&') { out.push_back({tok::amp, "&", i++}); continue; }
    if (c == '|') { out.push_back({tok::pipe, "|", i++}); continue; }
    if (c == ',') { out.push_back({tok::comma, ",", i++}); continue; }
    if (c == '-') {
      if (i + 1 < s.size() && s[i + 1] == '>') {
        out.push_back({tok::arrow, "->", i});
        i += 2;
        continue;
      }
      throw parse_error("stray '-'", i);
    }
    if (c == '<') {
      if (i + 1 < s.size() && s[i + 1] == '<') {
        out.push_back({tok::coal_open, "<<", i});
        i += 2;
        continue;
      }
      throw parse_error("stray '<' (coalitions are written <<a1,a2>>)", i);
    }
    if (c == '>') {
      if (i + 1 < s.size() && s[i + 1] == '>') {
        out.push_back({tok::coal_close, ">>", i});
        i += 2;
        continue;
      }
      throw parse_error("stray '>' (coalitions are written <<a1,a2>>)", i);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
        ++j;
      std::string word = s.substr(i, j - i);
      tok k = tok::ident;
      if (word == "true") k = tok::kw_true;
      else if (word == "false") k = tok::kw_false;
      else if (word == "X") k = tok::kw_x;
      else if (word == "F") k = tok::kw_f;
      else if (word == "G") k = tok::kw_g;
      else if (word == "U") k = tok::kw_u;
      else if (word == "R") k = tok::kw_r;
      out.push_back({k, word, i});
      i = j;
      continue;
    }
    throw parse_error(std::string("unexpected character '") + c + "'", i);
  }
  out.push_back({tok::end, "", s.size()});
  return out;
}

// Parse into a mixed tree first, then sort nodes into state/path formulas so
// that shape violations carry a source position.
struct gnode {
  enum class k {
    tt, ff, prop, neg, lor, land, implies, next, until, release,
    eventually, globally, coalition
  };
  k kind;
  size_t pos = 0;
  std::string name;
  std::vector<std::string> agents;
  std::unique_ptr<gnode> a, b;
};
using gptr = std::unique_ptr<gnode>;

class parser {
public:
  explicit parser(const std::string& text) : toks_(lex(text)) {}

  gptr run() {
    gptr g = parse_implies();
    if (cur().kind != tok::end)
      throw parse_error("unexpected trailing input '" + cur().text + "'", cur().pos);
    return g;
  }

private:
  std::vector<token> toks_;
  size_t at_ = 0;

  const token& cur() const { return toks_[at_]; }
  token eat() { return toks_[at_++]; }
  bool accept(tok k) {
    if (cur().kind == k) {
      ++at_;
      return true;
    }
    return false;
  }
  void expect(tok k, const char* what) {
    if (!accept(k)) throw parse_error(std::string("expected ") + what, cur().pos);
  }

  gptr mk(gnode::k kind, size_t pos) {
    auto g = std::make_unique<gnode>();
    g->kind = kind;
    g->pos = pos;
    return g;
  }
  gptr mk1(gnode::k kind, size_t pos, gptr a) {
    auto g = mk(kind, pos);
    g->a = std::move(a);
    return g;
  }
  gptr mk2(gnode::k kind, size_t pos, gptr a, gptr b) {
    auto g = mk(kind, pos);
    g->a = std::move(a);
    g->b = std::move(b);
    return g;
  }

  gptr parse_implies() {
    gptr lhs = parse_or();
    if (cur().kind == tok::arrow) {
      size_t pos = eat().pos;
      return mk2(gnode::k::implies, pos, std::move(lhs), parse_implies());
    }
    return lhs;
  }

  gptr parse_or() {
    gptr lhs = parse_and();
    while (cur().kind == tok::pipe) {
      size_t pos = eat().pos;
      lhs = mk2(gnode::k::lor, pos, std::move(lhs), parse_and());
    }
    return lhs;
  }

  gptr parse_and() {
    gptr lhs = parse_not();
    while (cur().kind == tok::amp) {
      size_t pos = eat().pos;
      lhs = mk2(gnode::k::land, pos, std::move(lhs), parse_not());
    }
    return lhs;
  }

  gptr parse_not() {
    if (cur().kind == tok::bang) {
      size_t pos = eat().pos;
      return mk1(gnode::k::neg, pos, parse_not());
    }
    return parse_until();
  }

  gptr parse_until() {
    gptr lhs = parse_unary();
    if (cur().kind == tok::kw_u || cur().kind == tok::kw_r) {
      bool is_u = cur().kind == tok::kw_u;
      size_t pos = eat().pos;
      gptr rhs = parse_unary();
      if (cur().kind == tok::kw_u || cur().kind == tok::kw_r)
        throw parse_error("U/R are non-associative, parenthesize the chain", cur().pos);
      return mk2(is_u ? gnode::k::until : gnode::k::release, pos, std::move(lhs),
                 std::move(rhs));
    }
    return lhs;
  }

  gptr parse_unary() {
    const token& t = cur();
    switch (t.kind) {
      case tok::kw_x: return mk1(gnode::k::next, eat().pos, parse_unary());
      case tok::kw_f: return mk1(gnode::k::eventually, eat().pos, parse_unary());
      case tok::kw_g: return mk1(gnode::k::globally, eat().pos, parse_unary());
      case tok::coal_open: {
        size_t pos = eat().pos;
        std::vector<std::string> agents;
        if (cur().kind != tok::coal_close) {
          for (;;) {
            if (cur().kind != tok::ident)
              throw parse_error("expected agent name in coalition", cur().pos);
            agents.push_back(eat().text);
            if (!accept(tok::comma)) break;
          }
        }
        expect(tok::coal_close, "'>>'");
        auto g = mk1(gnode::k::coalition, pos, parse_unary());
        g->agents = std::move(agents);
        return g;
      }
      case tok::kw_true: return mk(gnode::k::tt, eat().pos);
      case tok::kw_false: return mk(gnode::k::ff, eat().pos);
      case tok::ident: {
        auto g = mk(gnode::k::prop, t.pos);
        g->name = eat().text;
        return g;
      }
      case tok::lparen: {
        eat();
        gptr g = parse_implies();
        expect(tok::rparen, "')'");
        return g;
      }
      default: throw parse_error("expected a formula, got '" + t.text + "'", t.pos);
    }
  }
};

state_ref to_state(const gnode& g);
path_ref to_path(const gnode& g);

state_ref to_state(const gnode& g) {
  switch (g.kind) {
    case gnode::k::tt: return sf::tt();
    case gnode::k::ff: return sf::ff();
    case gnode::k::prop: return sf::prop(g.name);
    case gnode::k::neg: return sf::neg(to_state(*g.a));
    case gnode::k::lor: return sf::lor(to_state(*g.a), to_state(*g.b));
    case gnode::k::land: return sf::land(to_state(*g.a), to_state(*g.b));
    case gnode::k::implies: return sf::implies(to_state(*g.a), to_state(*g.b));
    case gnode::k::coalition: return sf::coalition(g.agents, to_path(*g.a));
    default:
      throw parse_error(
          "ATL+ shape violation: temporal operator applied where a state formula is required",
          g.pos);
  }
}

path_ref to_path(const gnode& g) {
  switch (g.kind) {
    case gnode::k::tt:
    case gnode::k::ff:
    case gnode::k::prop:
    case gnode::k::coalition: return pf::lift(to_state(g));
    case gnode::k::neg: return pf::neg(to_path(*g.a));
    case gnode::k::lor: return pf::lor(to_path(*g.a), to_path(*g.b));
    case gnode::k::land: return pf::land(to_path(*g.a), to_path(*g.b));
    case gnode::k::implies: return pf::implies(to_path(*g.a), to_path(*g.b));
    case gnode::k::next: return pf::next(to_state(*g.a));
    case gnode::k::until: return pf::until(to_state(*g.a), to_state(*g.b));
    case gnode::k::release: return pf::release(to_state(*g.a), to_state(*g.b));
    case gnode::k::eventually: return pf::eventually(to_state(*g.a));
    case gnode::k::globally: return pf::globally(to_state(*g.a));
  }
  throw parse_error("unreachable", g.pos);
}

}  // namespace

state_ref parse_formula(const std::string& text) {
  parser p(text);
  return to_state(*p.run());
}

// --------------------------------------------------------------- expansion

state_ref expand_abbreviations(const state_formula& f) {
  switch (f.op) {
    case state_op::tt: return sf::tt();
    case state_op::prop: return sf::prop(f.name);
    case state_op::neg: return sf::neg(expand_abbreviations(*f.lhs));
    case state_op::lor:
      return sf::lor(expand_abbreviations(*f.lhs), expand_abbreviations(*f.rhs));
    case state_op::land:
      return sf::neg(sf::lor(sf::neg(expand_abbreviations(*f.lhs)),
                             sf::neg(expand_abbreviations(*f.rhs))));
    case state_op::implies:
      return sf::lor(sf::neg(expand_abbreviations(*f.lhs)), expand_abbreviations(*f.rhs));
    case state_op::coalition:
      return sf::coalition(f.agents, expand_abbreviations(*f.objective));
  }
  throw std::logic_error("expand_abbreviations: bad state op");
}

path_ref expand_abbreviations(const path_formula& f) {
  switch (f.op) {
    case path_op::lift: return pf::lift(expand_abbreviations(*f.sarg));
    case path_op::neg: return pf::neg(expand_abbreviations(*f.lhs));
    case path_op::lor:
      return pf::lor(expand_abbreviations(*f.lhs), expand_abbreviations(*f.rhs));
    case path_op::land:
      return pf::neg(pf::lor(pf::neg(expand_abbreviations(*f.lhs)),
                             pf::neg(expand_abbreviations(*f.rhs))));
    case path_op::implies:
      return pf::lor(pf::neg(expand_abbreviations(*f.lhs)), expand_abbreviations(*f.rhs));
    case path_op::next: return pf::next(expand_abbreviations(*f.sarg));
    case path_op::until:
      return pf::until(expand_abbreviations(*f.sarg), expand_abbreviations(*f.sarg2));
    case path_op::eventually: return pf::until(sf::tt(), expand_abbreviations(*f.sarg));
    case path_op::globally:
      return pf::neg(pf::until(sf::tt(), sf::neg(expand_abbreviations(*f.sarg))));
    case path_op::release:
      return pf::neg(pf::until(sf::neg(expand_abbreviations(*f.sarg)),
                               sf::neg(expand_abbreviations(*f.sarg2))));
  }
  throw std::logic_error("expand_abbreviations: bad path op");
}

// ------------------------------------------------------------------- atoms

namespace {

void require_kernel_path(const path_formula& f) {
  switch (f.op) {
    case path_op::land:
    case path_op::implies:
    case path_op::eventually:
    case path_op::globally:
    case path_op::release:
      throw std::invalid_argument("expected an abbreviation-free formula, found '" +
                                  to_string(f) + "'");
    default: break;
  }
}

class atom_collector {
public:
  atom_list out;

  void path(const path_formula& f) {
    require_kernel_path(f);
    switch (f.op) {
      case path_op::lift: state_in_path(*f.sarg); break;
      case path_op::neg: path(*f.lhs); break;
      case path_op::lor:
        path(*f.lhs);
        path(*f.rhs);
        break;
      case path_op::next: {
        relative_atom a;
        a.kind = relative_atom::kind_t::next;
        a.arg1 = f.sarg;
        a.key = to_string(f);
        add(std::move(a));
        break;
      }
      case path_op::until: {
        relative_atom a;
        a.kind = relative_atom::kind_t::until;
        a.arg1 = f.sarg;
        a.arg2 = f.sarg2;
        a.key = to_string(f);
        add(std::move(a));
        break;
      }
      default: break;
    }
  }

  // State formulas sitting in a path context contribute their propositions
  // and strategic subformulas as atoms; Boolean structure is transparent.
  void state_in_path(const state_formula& f) {
    switch (f.op) {
      case state_op::tt:
      case state_op::prop:
      case state_op::coalition: {
        relative_atom a;
        a.kind = relative_atom::kind_t::state;
        a.arg1 = std::make_shared<state_formula>(f);
        a.key = to_string(f);
        add(std::move(a));
        break;
      }
      case state_op::neg: state_in_path(*f.lhs); break;
      case state_op::lor:
        state_in_path(*f.lhs);
        state_in_path(*f.rhs);
        break;
      default:
        throw std::invalid_argument("expected an abbreviation-free formula, found '" +
                                    to_string(f) + "'");
    }
  }

private:
  std::map<std::string, int> seen_;

  void add(relative_atom a) {
    if (seen_.count(a.key)) return;
    seen_[a.key] = static_cast<int>(out.atoms.size());
    out.atoms.push_back(std::move(a));
  }
};

}  // namespace

int atom_list::index_of(const std::string& key) const {
  for (size_t i = 0; i < atoms.size(); ++i)
    if (atoms[i].key == key) return static_cast<int>(i);
  return -1;
}

atom_list relative_atoms(const path_formula& phi) {
  atom_collector c;
  c.path(phi);
  return std::move(c.out);
}

// ---------------------------------------------------------------- polarity

namespace {

void polarity_path(const path_formula& f, bool under_odd,
                   std::map<std::string, atom_polarity>& out);

void polarity_state_in_path(const state_formula& f, bool under_odd,
                            std::map<std::string, atom_polarity>& out) {
  switch (f.op) {
    case state_op::tt:
    case state_op::prop:
    case state_op::coalition: {
      auto& p = out[to_string(f)];
      (under_odd ? p.negative : p.positive) = true;
      break;
    }
    case state_op::neg: polarity_state_in_path(*f.lhs, !under_odd, out); break;
    case state_op::lor:
      polarity_state_in_path(*f.lhs, under_odd, out);
      polarity_state_in_path(*f.rhs, under_odd, out);
      break;
    default:
      throw std::invalid_argument("expected an abbreviation-free formula");
  }
}

void polarity_path(const path_formula& f, bool under_odd,
                   std::map<std::string, atom_polarity>& out) {
  require_kernel_path(f);
  switch (f.op) {
    case path_op::lift: polarity_state_in_path(*f.sarg, under_odd, out); break;
    case path_op::neg: polarity_path(*f.lhs, !under_odd, out); break;
    case path_op::lor:
      polarity_path(*f.lhs, under_odd, out);
      polarity_path(*f.rhs, under_odd, out);
      break;
    case path_op::next:
    case path_op::until: {
      auto& p = out[to_string(f)];
      (under_odd ? p.negative : p.positive) = true;
      break;
    }
    default: break;
  }
}

}  // namespace

std::map<std::string, atom_polarity> atom_polarities(const path_formula& phi) {
  std::map<std::string, atom_polarity> out;
  polarity_path(phi, false, out);
  return out;
}

// ---------------------------------------------------------------- fragment

namespace {

void strategic_in_state(const state_formula& f, std::vector<strategic_subformula>& out,
                        std::map<std::string, bool>& seen);

void strategic_in_path(const path_formula& f, std::vector<strategic_subformula>& out,
                       std::map<std::string, bool>& seen) {
  switch (f.op) {
    case path_op::lift: strategic_in_state(*f.sarg, out, seen); break;
    case path_op::neg: strategic_in_path(*f.lhs, out, seen); break;
    case path_op::lor:
    case path_op::land:
    case path_op::implies:
      strategic_in_path(*f.lhs, out, seen);
      strategic_in_path(*f.rhs, out, seen);
      break;
    case path_op::next:
    case path_op::eventually:
    case path_op::globally: strategic_in_state(*f.sarg, out, seen); break;
    case path_op::until:
    case path_op::release:
      strategic_in_state(*f.sarg, out, seen);
      strategic_in_state(*f.sarg2, out, seen);
      break;
  }
}

void strategic_in_state(const state_formula& f, std::vector<strategic_subformula>& out,
                        std::map<std::string, bool>& seen) {
  switch (f.op) {
    case state_op::tt:
    case state_op::prop: break;
    case state_op::neg: strategic_in_state(*f.lhs, out, seen); break;
    case state_op::lor:
    case state_op::land:
    case state_op::implies:
      strategic_in_state(*f.lhs, out, seen);
      strategic_in_state(*f.rhs, out, seen);
      break;
    case state_op::coalition: {
      strategic_in_path(*f.objective, out, seen);  // inner ones first
      std::string key = to_string(f);
      if (!seen.count(key)) {
        seen[key] = true;
        strategic_subformula s;
        s.formula = std::make_shared<state_formula>(f);
        atom_list at = relative_atoms(*f.objective);
        s.atom_count = at.size();
        for (const auto& a : at.atoms)
          if (a.temporal()) ++s.temporal_atom_count;
        out.push_back(std::move(s));
      }
      break;
    }
  }
}

}  // namespace

fragment_report fragment_width(const state_formula& f) {
  fragment_report rep;
  std::map<std::string, bool> seen;
  strategic_in_state(f, rep.strategic, seen);
  for (const auto& s : rep.strategic) rep.width = std::max(rep.width, s.atom_count);
  return rep;
}

// ---------------------------------------------------------------- skeleton

namespace {

int skeleton_state(const state_formula& f, const atom_list& atoms, atom_skeleton& sk);

int skeleton_path(const path_formula& f, const atom_list& atoms, atom_skeleton& sk) {
  require_kernel_path(f);
  atom_skeleton::node n;
  switch (f.op) {
    case path_op::lift: return skeleton_state(*f.sarg, atoms, sk);
    case path_op::neg:
      n.op = atom_skeleton::node::op_t::neg;
      n.child = skeleton_path(*f.lhs, atoms, sk);
      break;
    case path_op::lor:
      n.op = atom_skeleton::node::op_t::lor;
      n.child = skeleton_path(*f.lhs, atoms, sk);
      n.child2 = skeleton_path(*f.rhs, atoms, sk);
      break;
    case path_op::next:
    case path_op::until: {
      n.op = atom_skeleton::node::op_t::atom;
      n.atom = atoms.index_of(to_string(f));
      if (n.atom < 0)
        throw std::logic_error("skeleton: atom '" + to_string(f) + "' not in atom list");
      break;
    }
    default: throw std::logic_error("skeleton: unexpected op");
  }
  sk.nodes.push_back(n);
  return static_cast<int>(sk.nodes.size()) - 1;
}

int skeleton_state(const state_formula& f, const atom_list& atoms, atom_skeleton& sk) {
  atom_skeleton::node n;
  switch (f.op) {
    case state_op::tt:
    case state_op::prop:
    case state_op::coalition: {
      n.op = atom_skeleton::node::op_t::atom;
      n.atom = atoms.index_of(to_string(f));
      if (n.atom < 0)
        throw std::logic_error("skeleton: atom '" + to_string(f) + "' not in atom list");
      break;
    }
    case state_op::neg:
      n.op = atom_skeleton::node::op_t::neg;
      n.child = skeleton_state(*f.lhs, atoms, sk);
      break;
    case state_op::lor:
      n.op = atom_skeleton::node::op_t::lor;
      n.child = skeleton_state(*f.lhs, atoms, sk);
      n.child2 = skeleton_state(*f.rhs, atoms, sk);
      break;
    default: throw std::logic_error("skeleton: unexpected state op");
  }
  sk.nodes.push_back(n);
  return static_cast<int>(sk.nodes.size()) - 1;
}

}  // namespace

bool atom_skeleton::eval(const std::function<bool(int)>& atom_value) const {
  std::vector<char> val(nodes.size(), 0);
  for (size_t i = 0; i < nodes.size(); ++i) {
    const node& n = nodes[i];
    switch (n.op) {
      case node::op_t::atom: val[i] = atom_value(n.atom); break;
      case node::op_t::neg: val[i] = !val[static_cast<size_t>(n.child)]; break;
      case node::op_t::lor:
        val[i] = val[static_cast<size_t>(n.child)] || val[static_cast<size_t>(n.child2)];
        break;
    }
  }
  return val[static_cast<size_t>(root)];
}

atom_skeleton compile_skeleton(const path_formula& phi, const atom_list& atoms) {
  atom_skeleton sk;
  sk.root = skeleton_path(phi, atoms, sk);
  return sk;
}

}  // namespace atlplus
