#pragma once

#include "mmlcost/signature.hpp"
#include "mmlcost/term.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mmlcost {

// Clause whose body repeats its own head with no argument reduction; solving
// it would loop before the depth limit does any good.
struct NonTerminatingRuleError {
  std::string clause;
};

// One resolution step of the unfolding, kept for the --debug tree dump.
// A node's probability is its step probability times its children's.
struct DerivationNode {
  TermPtr goal;        // selected atom with current bindings applied
  std::string label;   // clause text, builtin name, or "yes" at a leaf
  Rational step_prob{1};
  std::vector<std::unique_ptr<DerivationNode>> children;
};

// Answer substitution of the root goal.  The atom may keep free variables
// for instances the program does not constrain.
struct Answer {
  TermPtr atom;
  Rational raw;
};

struct PredicateDistribution {
  SymbolId predicate;
  std::vector<Answer> answers;  // merged by pattern, raw probabilities
  // Ground-atom view: ground answers directly, free positions expanded over
  // the observed constants when the signature has no function symbols.
  std::map<std::string, Rational> entries;
  Rational mass{0};    // normalization constant including expansion weight
  Rational pruned{0};  // probability mass abandoned at the depth limit
  bool truncated = false;  // entry expansion hit the instance cap
};

// Unfolds SSLD-trees from an open root goal per predicate.  Clause choices
// multiply by the normalized label; unlabeled program clauses count as a
// uniform choice within their group, unlabeled KB clauses as deterministic.
// Builtins are evaluated in place and do not consume depth.
class SsldSolver {
 public:
  // Inputs must be canonized and normalized.  Throws NonTerminatingRuleError.
  SsldSolver(const Program& prog, const Program& kb, const Signature& sig,
             std::size_t max_depth, bool record_trees = false);

  bool covered(const SymbolId& pred) const;

  // Root estimation, cached per predicate.
  const PredicateDistribution& distribution(const SymbolId& pred);

  // Raw probability the root answers assign to a ground atom: sum over
  // matching answers of raw times (1/n_funcs)^k, k counting the function
  // symbol occurrences the atom puts into free answer positions.
  Rational example_raw(const TermPtr& example);

  // example_raw divided by the predicate's mass; nullopt when mass is 0.
  std::optional<Rational> example_probability(const TermPtr& example);

  // Bits to name a ground atom by its first derivation from the open goal:
  // each resolution charges log2 of the number of clause heads unifying with
  // the goal as selected, and each variable the covering answer leaves free
  // charges log2 of the constant pool size.  nullopt when no derivation
  // within the depth limit produces the atom.
  std::optional<Bits> proof_cost(const TermPtr& example);

  const std::vector<std::string>& warnings() const { return warnings_; }
  const DerivationNode* tree(const SymbolId& pred) const;

 private:
  struct ClauseChoice {
    const Clause* clause;
    Rational prob;
  };
  struct SearchState;

  void unfold(SearchState& st, PredicateDistribution& dist,
              DerivationNode* node);
  bool pc_search(const TermPtr& root, const TermPtr& example,
                 std::vector<TermPtr> goals, Subst s, std::size_t depth,
                 double bits, double& out);
  bool eval_builtin(const TermPtr& goal, Subst& subst, bool& warned);
  std::optional<std::pair<Rational, bool>> eval_arith(const TermPtr& t,
                                                      const Subst& s);
  void warn(const std::string& message);
  TermPtr fresh_rename(const TermPtr& t);

  Program prog_, kb_;
  Signature sig_;
  std::size_t max_depth_;
  bool record_;
  std::map<SymbolId, std::vector<ClauseChoice>> table_;
  std::vector<TermPtr> constant_pool_;  // observed numerals, program + KB
  std::map<SymbolId, PredicateDistribution> cache_;
  std::map<SymbolId, std::unique_ptr<DerivationNode>> trees_;
  std::vector<std::string> warnings_;
  std::uint64_t fresh_counter_ = 0;
};

}  // namespace mmlcost
