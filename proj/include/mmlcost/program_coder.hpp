#pragma once

#include "mmlcost/numcode.hpp"
#include "mmlcost/signature.hpp"
#include "mmlcost/term.hpp"

#include <cstdint>

namespace mmlcost {

enum class RulesProbMode { zerobitslast, notlast, all };

struct CostCounts {
  std::size_t n_rules = 0;      // program clauses
  std::size_t n_preds = 0;      // program + KB predicates
  std::size_t n_funcs = 0;      // function symbols incl. evidence/KB
  std::uint64_t n_examples = 0; // evidence facts, repetitions included
};

// Two-part message cost of a program, split the way the report prints it.
// total is the exact sum of the eight component fields.
struct CostBreakdown {
  Bits total = 0;
  Bits rules = 0;    // code_length(n_rules)
  Bits lexicon = 0;  // signature cost
  Bits heads = 0;
  Bits bodies = 0;
  Bits vars = 0;
  Bits prob = 0;
  Bits examples = 0; // evidence cost, filled by the caller
  Bits kb = 0;       // rules+heads+bodies+vars of the KB, shared signature
  CostCounts counts;
};

// code_length(n_rules); a program must have at least one clause.
Bits cost_rules(std::size_t n_rules);

// Lexicon: arity maxima plus one count per arity class, 0..max inclusive.
// Codes coded_preds() and all function symbols.
Bits cost_signature(const Signature& sig);

// Argument-position term: 1 discriminator bit, then nothing for a variable,
// log2(n_funcs) plus the arguments for a function symbol.  Numerals cost
// only the discriminator bit unless numbers are switched on.
Bits cost_term(const TermPtr& t, std::size_t n_funcs, const AnalysisFlags& flags);

// n_rules * log2(n_pred_choice) plus the head argument terms.
Bits cost_heads(const Program& prog, std::size_t n_pred_choice,
                std::size_t n_funcs, const AnalysisFlags& flags);

// Per non-fact rule: code_length(1 + m) for m coded literals, then
// log2(n_pred_choice) plus argument terms per literal.  Facts cost 0.
// Predefined literals are skipped unless include_predefined is set.
Bits cost_bodies(const Program& prog, std::size_t n_pred_choice,
                 std::size_t n_funcs, const AnalysisFlags& flags);

// Sum over rules of log2(var_assignments(d, n_v)); ground rules cost 0.
Bits cost_vars(const Program& prog);

// Probability labels of a normalized stochastic program.  zerobitslast
// omits each group's last label and any label equal to 1; notlast omits
// each group's last label but adds one bit per group; all codes every
// label.  Non-stochastic programs cost 0.
Bits cost_probabilities(const Program& prog, RulesProbMode mode);

// Full first-part cost.  Inputs must be canonized and normalized.  The
// examples field is left 0 for the evidence coder to fill.  Pass empty
// programs for an absent KB or evidence.
CostBreakdown cost_program(const Program& prog, const Program& kb,
                           const Program& evidence, const AnalysisFlags& flags,
                           RulesProbMode mode = RulesProbMode::zerobitslast);

}  // namespace mmlcost
