#include "mmlcost/evidence.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace mmlcost {

Bits cost_evidence(const std::vector<EvidenceItem>& examples) {
  if (examples.empty())
    throw std::invalid_argument("cost_evidence: empty evidence");
  BigInt total = 0;
  std::vector<std::uint64_t> reps;
  reps.reserve(examples.size());
  double surprisal = 0;
  for (const EvidenceItem& e : examples) {
    if (e.reps == 0)
      throw std::invalid_argument("cost_evidence: zero repetition count");
    if (e.probability <= Rational(0) || e.probability > Rational(1))
      throw std::invalid_argument("cost_evidence: probability outside (0,1]");
    total += e.reps;
    reps.push_back(e.reps);
    surprisal -= static_cast<double>(e.reps) * log2_rational(e.probability);
  }
  return code_length(total) + surprisal - log2_multinomial(reps);
}

Bits cost_evidence_mc(std::uint64_t q_size, std::uint64_t e_size) {
  if (e_size > q_size)
    throw std::invalid_argument("cost_evidence_mc: evidence exceeds model");
  return log2_bigint(binomial(q_size, e_size)) + 1.0;
}

PcEvidence cost_evidence_pc(const std::vector<EvidenceItem>& examples,
                            SsldSolver& solver) {
  PcEvidence result;
  for (const EvidenceItem& e : examples) {
    std::optional<Bits> bits = solver.proof_cost(e.atom);
    if (!bits) {
      result.uncovered.push_back(e.atom);
      continue;
    }
    result.bits += static_cast<double>(e.reps) * *bits;
  }
  return result;
}

Bits simplistic_theory_cost(const Program& prog, std::size_t n_preds,
                            std::size_t n_symbols) {
  std::set<std::string> names;
  std::size_t body_literals = 0;
  std::vector<std::size_t> arities;
  std::vector<std::string> vars;
  for (const Clause& c : prog.clauses) {
    collect_variables(c.head, vars);
    arities.push_back(c.head->arity());
    for (const TermPtr& lit : c.body) {
      collect_variables(lit, vars);
      arities.push_back(lit->arity());
      ++body_literals;
    }
  }
  names.insert(vars.begin(), vars.end());
  double v = static_cast<double>(names.size());
  double bits = std::log2(v + 1.0) + 1.0 +
                2.0 * static_cast<double>(prog.clauses.size()) +
                2.0 * static_cast<double>(body_literals);
  double vocab = v + static_cast<double>(n_symbols);
  for (std::size_t arity : arities) {
    if (n_preds > 0) bits += std::log2(static_cast<double>(n_preds));
    if (arity > 0 && vocab > 0)
      bits += static_cast<double>(arity) * std::log2(vocab);
  }
  return bits;
}

}  // namespace mmlcost
