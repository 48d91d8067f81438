#pragma once

#include "mmlcost/numcode.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mmlcost {

enum class TermKind { variable, atom, numeric, compound };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// Immutable term tree.  Lists are kept desugared as '.'(H, T) ending in the
// atom []; numbers keep their written form so 1 and 1.0 stay distinct.
struct Term {
  TermKind kind;
  std::string name;            // variable, atom, or functor name
  Rational value;              // numeric only
  bool is_float = false;       // numeric only: written with a decimal point
  bool anonymous = false;      // variable only: written as _
  std::vector<TermPtr> args;   // compound only, size >= 1

  std::size_t arity() const { return args.size(); }
};

TermPtr make_variable(std::string name, bool anonymous = false);
TermPtr make_atom(std::string name);
TermPtr make_numeric(Rational value, bool is_float);
TermPtr make_compound(std::string functor, std::vector<TermPtr> args);

bool is_callable(const Term& t);  // atom or compound

// Structural equality, variable names included.
bool term_equal(const TermPtr& a, const TermPtr& b);

// Total order over terms (kind, then name/value, then args); usable as a map
// key comparator and for canonical sorting.
int term_compare(const TermPtr& a, const TermPtr& b);

struct TermLess {
  bool operator()(const TermPtr& a, const TermPtr& b) const {
    return term_compare(a, b) < 0;
  }
};

// Canonical text form; parsing it back yields a structurally equal term.
std::string term_to_string(const TermPtr& t);

bool is_ground(const TermPtr& t);

// Appends variable names in left-to-right occurrence order (duplicates kept).
void collect_variables(const TermPtr& t, std::vector<std::string>& out);

// Variable bindings by name.  Bindings may chain through other variables.
using Subst = std::map<std::string, TermPtr>;

// Resolves a variable chain to its binding; returns t unchanged when free.
TermPtr walk(TermPtr t, const Subst& s);

// Applies the substitution throughout the tree.
TermPtr apply_subst(const TermPtr& t, const Subst& s);

// Robinson unification without occurs check; on success extends s in place,
// on failure s is left unspecified (callers must copy first).
bool unify(TermPtr a, TermPtr b, Subst& s);

// Appends `suffix` to every variable name in the tree.
TermPtr rename_variables(const TermPtr& t, const std::string& suffix);

enum class Role { program, evidence, knowledge_base };

struct Clause {
  TermPtr head;
  std::vector<TermPtr> body;          // empty for facts
  std::optional<Rational> prob;       // program / knowledge-base only
  std::uint64_t reps = 1;             // evidence only, merged repetitions

  bool is_fact() const { return body.empty(); }
};

struct Program {
  std::vector<Clause> clauses;        // source order preserved
  Role role = Role::program;

  bool stochastic() const;
};

bool clause_equal(const Clause& a, const Clause& b);
bool program_equal(const Program& a, const Program& b);

// Structural equality up to a consistent bijective renaming of variables.
bool program_equal_alpha(const Program& a, const Program& b);

std::string clause_to_string(const Clause& c, Role role);
std::string program_to_string(const Program& p);

}  // namespace mmlcost
