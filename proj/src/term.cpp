#include "mmlcost/term.hpp"

#include <sstream>
#include <stdexcept>

namespace mmlcost {

namespace {

bool plain_atom_name(const std::string& name) {
  if (name.empty() || !(name[0] >= 'a' && name[0] <= 'z')) {
    return false;
  }
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_';
    if (!ok) {
      return false;
    }
  }
  return true;
}

std::string quote_atom(const std::string& name) {
  if (plain_atom_name(name) || name == "[]" || name == "!") {
    return name;
  }
  std::string out = "'";
  for (char c : name) {
    if (c == '\'' || c == '\\') {
      out += '\\';
    }
    out += c;
  }
  out += '\'';
  return out;
}

// Binary operators printed infix; everything else is functional notation.
bool infix_operator(const std::string& name) {
  static const std::vector<std::string> ops = {
      "is", "<",  ">",  ">=", "=<", "=:=", "=\\=", "=",
      "==", "\\==", "+", "-",  "*",  "/",   "//",   "mod", "^"};
  for (const auto& op : ops) {
    if (op == name) {
      return true;
    }
  }
  return false;
}

std::string numeric_to_string(const Term& t) {
  const BigInt& num = t.value.numerator();
  const BigInt& den = t.value.denominator();
  if (!t.is_float) {
    return num.str();
  }
  // Canonical minimal decimal: smallest k with den | 10^k.
  BigInt pow10 = 1;
  int k = 0;
  while (k <= 30 && pow10 % den != 0) {
    pow10 *= 10;
    ++k;
  }
  if (pow10 % den != 0) {
    // Non-terminating decimal (arithmetic result); double text is enough.
    std::ostringstream os;
    os << (num.convert_to<double>() / den.convert_to<double>());
    std::string s = os.str();
    if (s.find('.') == std::string::npos &&
        s.find('e') == std::string::npos) {
      s += ".0";
    }
    return s;
  }
  const BigInt scaled = num * (pow10 / den);
  const bool neg = scaled < 0;
  std::string raw = (neg ? BigInt(-scaled) : scaled).str();
  if (static_cast<int>(raw.size()) < k + 1) {
    raw.insert(0, k + 1 - raw.size(), '0');
  }
  if (k > 0) {
    raw.insert(raw.size() - k, ".");
  } else {
    raw += ".0";
  }
  return (neg ? "-" : "") + raw;
}

void term_to_stream(const TermPtr& t, std::ostream& os) {
  switch (t->kind) {
    case TermKind::variable:
      os << t->name;
      return;
    case TermKind::atom:
      os << quote_atom(t->name);
      return;
    case TermKind::numeric:
      os << numeric_to_string(*t);
      return;
    case TermKind::compound:
      if (t->name == "." && t->arity() == 2) {
        // Re-sugar list chains for output; parsing restores the same tree.
        os << '[';
        term_to_stream(t->args[0], os);
        TermPtr tail = t->args[1];
        while (tail->kind == TermKind::compound && tail->name == "." &&
               tail->arity() == 2) {
          os << ',';
          term_to_stream(tail->args[0], os);
          tail = tail->args[1];
        }
        if (!(tail->kind == TermKind::atom && tail->name == "[]")) {
          os << '|';
          term_to_stream(tail, os);
        }
        os << ']';
        return;
      }
      if (t->arity() == 2 && infix_operator(t->name)) {
        const bool lp = t->args[0]->kind == TermKind::compound &&
                        infix_operator(t->args[0]->name);
        const bool rp = t->args[1]->kind == TermKind::compound &&
                        infix_operator(t->args[1]->name);
        if (lp) os << '(';
        term_to_stream(t->args[0], os);
        if (lp) os << ')';
        os << ' ' << t->name << ' ';
        if (rp) os << '(';
        term_to_stream(t->args[1], os);
        if (rp) os << ')';
        return;
      }
      os << quote_atom(t->name) << '(';
      for (std::size_t i = 0; i < t->args.size(); ++i) {
        if (i > 0) {
          os << ',';
        }
        term_to_stream(t->args[i], os);
      }
      os << ')';
      return;
  }
}

}  // namespace

TermPtr make_variable(std::string name, bool anonymous) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::variable;
  t->name = std::move(name);
  t->anonymous = anonymous;
  return t;
}

TermPtr make_atom(std::string name) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::atom;
  t->name = std::move(name);
  return t;
}

TermPtr make_numeric(Rational value, bool is_float) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::numeric;
  t->value = std::move(value);
  t->is_float = is_float;
  return t;
}

TermPtr make_compound(std::string functor, std::vector<TermPtr> args) {
  if (args.empty()) {
    throw std::invalid_argument("make_compound: arity must be >= 1");
  }
  auto t = std::make_shared<Term>();
  t->kind = TermKind::compound;
  t->name = std::move(functor);
  t->args = std::move(args);
  return t;
}

bool is_callable(const Term& t) {
  return t.kind == TermKind::atom || t.kind == TermKind::compound;
}

int term_compare(const TermPtr& a, const TermPtr& b) {
  if (a->kind != b->kind) {
    return static_cast<int>(a->kind) < static_cast<int>(b->kind) ? -1 : 1;
  }
  switch (a->kind) {
    case TermKind::variable:
    case TermKind::atom:
      return a->name.compare(b->name);
    case TermKind::numeric:
      if (a->value != b->value) {
        return a->value < b->value ? -1 : 1;
      }
      if (a->is_float != b->is_float) {
        return a->is_float ? 1 : -1;
      }
      return 0;
    case TermKind::compound: {
      if (int c = a->name.compare(b->name)) {
        return c;
      }
      if (a->arity() != b->arity()) {
        return a->arity() < b->arity() ? -1 : 1;
      }
      for (std::size_t i = 0; i < a->args.size(); ++i) {
        if (int c = term_compare(a->args[i], b->args[i])) {
          return c;
        }
      }
      return 0;
    }
  }
  return 0;
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
  return term_compare(a, b) == 0;
}

std::string term_to_string(const TermPtr& t) {
  std::ostringstream os;
  term_to_stream(t, os);
  return os.str();
}

bool is_ground(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::variable:
      return false;
    case TermKind::atom:
    case TermKind::numeric:
      return true;
    case TermKind::compound:
      for (const auto& a : t->args) {
        if (!is_ground(a)) {
          return false;
        }
      }
      return true;
  }
  return true;
}

void collect_variables(const TermPtr& t, std::vector<std::string>& out) {
  switch (t->kind) {
    case TermKind::variable:
      out.push_back(t->name);
      return;
    case TermKind::compound:
      for (const auto& a : t->args) {
        collect_variables(a, out);
      }
      return;
    default:
      return;
  }
}

TermPtr walk(TermPtr t, const Subst& s) {
  while (t->kind == TermKind::variable) {
    auto it = s.find(t->name);
    if (it == s.end()) {
      return t;
    }
    t = it->second;
  }
  return t;
}

TermPtr apply_subst(const TermPtr& t, const Subst& s) {
  const TermPtr r = walk(t, s);
  if (r->kind != TermKind::compound) {
    return r;
  }
  std::vector<TermPtr> args;
  args.reserve(r->args.size());
  bool changed = false;
  for (const auto& a : r->args) {
    TermPtr na = apply_subst(a, s);
    changed = changed || na.get() != a.get();
    args.push_back(std::move(na));
  }
  if (!changed && r.get() == t.get()) {
    return t;
  }
  return make_compound(r->name, std::move(args));
}

bool unify(TermPtr a, TermPtr b, Subst& s) {
  a = walk(std::move(a), s);
  b = walk(std::move(b), s);
  if (a->kind == TermKind::variable) {
    if (b->kind == TermKind::variable && a->name == b->name) {
      return true;
    }
    s[a->name] = b;
    return true;
  }
  if (b->kind == TermKind::variable) {
    s[b->name] = a;
    return true;
  }
  if (a->kind != b->kind) {
    return false;
  }
  switch (a->kind) {
    case TermKind::atom:
      return a->name == b->name;
    case TermKind::numeric:
      return a->value == b->value && a->is_float == b->is_float;
    case TermKind::compound: {
      if (a->name != b->name || a->arity() != b->arity()) {
        return false;
      }
      for (std::size_t i = 0; i < a->args.size(); ++i) {
        if (!unify(a->args[i], b->args[i], s)) {
          return false;
        }
      }
      return true;
    }
    default:
      return false;
  }
}

TermPtr rename_variables(const TermPtr& t, const std::string& suffix) {
  switch (t->kind) {
    case TermKind::variable:
      return make_variable(t->name + suffix, t->anonymous);
    case TermKind::compound: {
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      for (const auto& a : t->args) {
        args.push_back(rename_variables(a, suffix));
      }
      return make_compound(t->name, std::move(args));
    }
    default:
      return t;
  }
}

bool Program::stochastic() const {
  for (const auto& c : clauses) {
    if (c.prob.has_value()) {
      return true;
    }
  }
  return false;
}

bool clause_equal(const Clause& a, const Clause& b) {
  if (a.reps != b.reps || a.prob.has_value() != b.prob.has_value()) {
    return false;
  }
  if (a.prob && *a.prob != *b.prob) {
    return false;
  }
  if (!term_equal(a.head, b.head) || a.body.size() != b.body.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.body.size(); ++i) {
    if (!term_equal(a.body[i], b.body[i])) {
      return false;
    }
  }
  return true;
}

bool program_equal(const Program& a, const Program& b) {
  if (a.role != b.role || a.clauses.size() != b.clauses.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.clauses.size(); ++i) {
    if (!clause_equal(a.clauses[i], b.clauses[i])) {
      return false;
    }
  }
  return true;
}

namespace {

bool term_equal_alpha(const TermPtr& a, const TermPtr& b,
                      std::map<std::string, std::string>& fwd,
                      std::map<std::string, std::string>& rev) {
  if (a->kind != b->kind) {
    return false;
  }
  if (a->kind == TermKind::variable) {
    auto f = fwd.find(a->name);
    auto r = rev.find(b->name);
    if (f == fwd.end() && r == rev.end()) {
      fwd[a->name] = b->name;
      rev[b->name] = a->name;
      return true;
    }
    return f != fwd.end() && r != rev.end() && f->second == b->name &&
           r->second == a->name;
  }
  if (a->kind == TermKind::compound) {
    if (a->name != b->name || a->arity() != b->arity()) {
      return false;
    }
    for (std::size_t i = 0; i < a->args.size(); ++i) {
      if (!term_equal_alpha(a->args[i], b->args[i], fwd, rev)) {
        return false;
      }
    }
    return true;
  }
  return term_compare(a, b) == 0;
}

bool clause_equal_alpha(const Clause& a, const Clause& b) {
  if (a.reps != b.reps || a.prob.has_value() != b.prob.has_value()) {
    return false;
  }
  if (a.prob && *a.prob != *b.prob) {
    return false;
  }
  if (a.body.size() != b.body.size()) {
    return false;
  }
  // Variable scope is the clause, so the bijection spans head and body.
  std::map<std::string, std::string> fwd, rev;
  if (!term_equal_alpha(a.head, b.head, fwd, rev)) {
    return false;
  }
  for (std::size_t i = 0; i < a.body.size(); ++i) {
    if (!term_equal_alpha(a.body[i], b.body[i], fwd, rev)) {
      return false;
    }
  }
  return true;
}

}  // namespace

bool program_equal_alpha(const Program& a, const Program& b) {
  if (a.role != b.role || a.clauses.size() != b.clauses.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.clauses.size(); ++i) {
    if (!clause_equal_alpha(a.clauses[i], b.clauses[i])) {
      return false;
    }
  }
  return true;
}

std::string clause_to_string(const Clause& c, Role role) {
  std::ostringstream os;
  if (role == Role::evidence) {
    if (c.reps != 1) {
      os << c.reps << " # ";
    }
    os << term_to_string(c.head) << '.';
    return os.str();
  }
  if (c.prob) {
    os << c.prob->numerator().str() << '/' << c.prob->denominator().str()
       << " :: ";
  }
  os << term_to_string(c.head);
  if (!c.body.empty()) {
    os << " :- ";
    for (std::size_t i = 0; i < c.body.size(); ++i) {
      if (i > 0) {
        os << ", ";
      }
      os << term_to_string(c.body[i]);
    }
  }
  os << '.';
  return os.str();
}

std::string program_to_string(const Program& p) {
  std::string out;
  for (const auto& c : p.clauses) {
    out += clause_to_string(c, p.role);
    out += '\n';
  }
  return out;
}

}  // namespace mmlcost
