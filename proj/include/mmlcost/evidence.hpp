#pragma once

#include "mmlcost/numcode.hpp"
#include "mmlcost/ssld.hpp"
#include "mmlcost/term.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mmlcost {

struct EvidenceItem {
  TermPtr atom;
  std::uint64_t reps = 1;
  Rational probability{1};
};

// Transmission cost of the evidence: length of the example count, plus the
// surprisal of each example weighted by its repetitions, minus the ordering
// credit log2(n! / prod reps_i!).  Probabilities must be in (0,1]; callers
// exclude uncovered examples beforehand.
Bits cost_evidence(const std::vector<EvidenceItem>& examples);

// Raised by the comparison pipelines when the derivable ground-atom set is
// unbounded (function symbols present) and a subset code cannot exist.
struct InfiniteModelError {
  std::string detail;
};

// Baseline subset code: log2 C(q_size, e_size) plus one bit telling whether
// the subset or its complement was sent.  Requires e_size <= q_size.
Bits cost_evidence_mc(std::uint64_t q_size, std::uint64_t e_size);

struct PcEvidence {
  Bits bits = 0;
  std::vector<TermPtr> uncovered;
};

// Baseline proof-path code: each example costs its first derivation from the
// open goal, charging log2 of the number of clause heads unifying with each
// selected atom plus log2(pool size) per variable the covering answer leaves
// free.  Repetitions multiply the per-example cost; underivable examples are
// reported back instead of being charged.
PcEvidence cost_evidence_pc(const std::vector<EvidenceItem>& examples,
                            SsldSolver& solver);

// Function-free baseline program code shared by the comparison pipelines:
// log2(v+1) for the count of distinct variable names v, one bit for the
// program, two bits per rule, two per body literal, and for every atom of
// arity n a further log2(n_preds) + n * log2(v + n_symbols).
Bits simplistic_theory_cost(const Program& prog, std::size_t n_preds,
                            std::size_t n_symbols);

}  // namespace mmlcost
