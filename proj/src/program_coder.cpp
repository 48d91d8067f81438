#include "mmlcost/program_coder.hpp"

#include "mmlcost/builtins.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmlcost {

namespace {

// Arity histogram cost: code_length(1 + max) then code_length(1 + count)
// for every arity from 0 to max inclusive.
Bits arity_class_cost(const std::vector<SymbolId>& symbols) {
  std::size_t max_arity = 0;
  std::map<std::size_t, std::size_t> by_arity;
  for (const SymbolId& s : symbols) {
    if (s.second > max_arity) max_arity = s.second;
    ++by_arity[s.second];
  }
  Bits bits = code_length(static_cast<std::uint64_t>(1 + max_arity));
  for (std::size_t k = 0; k <= max_arity; ++k) {
    auto it = by_arity.find(k);
    std::size_t count = it == by_arity.end() ? 0 : it->second;
    bits += code_length(static_cast<std::uint64_t>(1 + count));
  }
  return bits;
}

bool skip_literal(const TermPtr& lit, const AnalysisFlags& flags) {
  return !flags.include_predefined && is_predefined(lit->name, lit->arity());
}

}  // namespace

Bits cost_rules(std::size_t n_rules) {
  if (n_rules == 0) throw std::invalid_argument("empty program has no rule cost");
  return code_length(static_cast<std::uint64_t>(n_rules));
}

Bits cost_signature(const Signature& sig) {
  return arity_class_cost(sig.coded_preds()) + arity_class_cost(sig.funcs);
}

Bits cost_term(const TermPtr& t, std::size_t n_funcs, const AnalysisFlags& flags) {
  Bits bits = 1.0;  // variable-or-function discriminator
  if (t->kind == TermKind::variable) return bits;
  if (t->kind == TermKind::numeric && !flags.include_numbers) return bits;
  bits += std::log2(static_cast<double>(n_funcs));
  for (const TermPtr& arg : t->args) bits += cost_term(arg, n_funcs, flags);
  return bits;
}

Bits cost_heads(const Program& prog, std::size_t n_pred_choice,
                std::size_t n_funcs, const AnalysisFlags& flags) {
  Bits bits = static_cast<double>(prog.clauses.size()) *
              std::log2(static_cast<double>(n_pred_choice));
  for (const Clause& c : prog.clauses)
    for (const TermPtr& arg : c.head->args)
      bits += cost_term(arg, n_funcs, flags);
  return bits;
}

Bits cost_bodies(const Program& prog, std::size_t n_pred_choice,
                 std::size_t n_funcs, const AnalysisFlags& flags) {
  Bits bits = 0;
  for (const Clause& c : prog.clauses) {
    if (c.is_fact()) continue;
    std::vector<TermPtr> coded;
    for (const TermPtr& lit : c.body)
      if (!skip_literal(lit, flags)) coded.push_back(lit);
    if (coded.empty()) continue;  // all literals predefined: nothing to send
    bits += code_length(static_cast<std::uint64_t>(1 + coded.size()));
    for (const TermPtr& lit : coded) {
      bits += std::log2(static_cast<double>(n_pred_choice));
      for (const TermPtr& arg : lit->args)
        bits += cost_term(arg, n_funcs, flags);
    }
  }
  return bits;
}

Bits cost_vars(const Program& prog) {
  Bits bits = 0;
  for (const Clause& c : prog.clauses) {
    auto [d, n_v] = count_variable_positions(c);
    if (d == 0) continue;
    bits += log2_bigint(var_assignments(d, n_v));
  }
  return bits;
}

Bits cost_probabilities(const Program& prog, RulesProbMode mode) {
  if (!prog.stochastic()) return 0;
  // Group indices per head predicate, clause order preserved.
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < prog.clauses.size(); ++i) {
    const Clause& c = prog.clauses[i];
    groups[c.head->name + "/" + std::to_string(c.head->arity())].push_back(i);
  }
  Bits bits = 0;
  for (const auto& [key, idx] : groups) {
    (void)key;
    for (std::size_t pos = 0; pos < idx.size(); ++pos) {
      const Clause& c = prog.clauses[idx[pos]];
      if (!c.prob) continue;
      bool last = pos + 1 == idx.size();
      switch (mode) {
        case RulesProbMode::zerobitslast:
          if (last || *c.prob == Rational(1)) continue;
          break;
        case RulesProbMode::notlast:
          if (last) continue;
          break;
        case RulesProbMode::all:
          break;
      }
      bits += rational_cost(*c.prob);
    }
    if (mode == RulesProbMode::notlast) bits += 1.0;
  }
  return bits;
}

CostBreakdown cost_program(const Program& prog, const Program& kb,
                           const Program& evidence, const AnalysisFlags& flags,
                           RulesProbMode mode) {
  Signature sig = extract_signature(prog, kb, evidence, flags);
  std::size_t n_p = sig.predicate_choices();
  std::size_t n_f = sig.function_choices();

  CostBreakdown out;
  out.counts.n_rules = prog.clauses.size();
  out.counts.n_preds = sig.program_preds.size() + sig.kb_preds.size();
  out.counts.n_funcs = n_f;
  for (const Clause& c : evidence.clauses) out.counts.n_examples += c.reps;

  out.rules = cost_rules(prog.clauses.size());
  out.lexicon = cost_signature(sig);
  out.heads = cost_heads(prog, n_p, n_f, flags);
  out.bodies = cost_bodies(prog, n_p, n_f, flags);
  out.vars = cost_vars(prog);
  out.prob = cost_probabilities(prog, mode);
  if (!kb.clauses.empty()) {
    out.kb = cost_rules(kb.clauses.size()) + cost_heads(kb, n_p, n_f, flags) +
             cost_bodies(kb, n_p, n_f, flags) + cost_vars(kb);
  }
  out.total = out.rules + out.lexicon + out.heads + out.bodies + out.vars +
              out.prob + out.examples + out.kb;
  return out;
}

}  // namespace mmlcost
