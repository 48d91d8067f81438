#pragma once

#include "mmlcost/evidence.hpp"
#include "mmlcost/normalizer.hpp"
#include "mmlcost/program_coder.hpp"
#include "mmlcost/signature.hpp"
#include "mmlcost/ssld.hpp"
#include "mmlcost/term.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mmlcost {

struct AnalysisOptions {
  AnalysisFlags flags;
  NormalizeMode normalize = NormalizeMode::on;
  RulesProbMode rulesprob = RulesProbMode::zerobitslast;
  double precision = 1e-5;
  std::size_t max_depth = 20;
  bool strict = false;        // escalate warnings to errors
  bool compare_ec = false;
  bool compare_mc = false;
  bool compare_pc = false;
  bool record_trees = false;  // keep derivation trees for the debug dump
};

// Evidence atom with probability 0 under the program; fatal in strict mode,
// otherwise the atom is left out of the evidence cost.
struct UncoveredExampleError {
  std::string atom;
};

// A warning promoted to an error under strict mode.
struct EscalatedWarningError {
  std::string message;
};

struct ExampleReport {
  TermPtr atom;
  std::uint64_t reps = 1;
  std::optional<Rational> probability;  // nullopt when uncovered
};

// One baseline coder's view of the same theory/evidence pair.  theory uses
// the flat scheme (predicate/symbol log-choices per atom); evidence is empty
// when the coder does not apply, with the reason in note.
struct ComparisonEntry {
  Bits theory = 0;
  std::optional<Bits> evidence;
  std::string note;
};

struct Analysis {
  AnalysisOptions options;
  CostBreakdown breakdown;
  Program program;  // normalized
  Program kb;       // normalized
  Program evidence;
  Signature sig;
  std::vector<ExampleReport> examples;
  bool partial = false;  // uncovered examples were left out of the cost
  std::vector<std::string> warnings;
  std::optional<ComparisonEntry> ec, mc, pc;
  std::shared_ptr<SsldSolver> solver;  // kept alive for the debug dump
};

// Full pipeline for one program/evidence pair against a merged KB: normalize
// both rule sources, extract the shared signature, estimate the example
// probabilities, and assemble the breakdown plus any requested baseline
// comparisons.  Inputs must already be parsed and canonized.  Throws the
// reader/normalizer/signature/solver error types plus the two above.
Analysis analyze(const Program& program, const Program& kb,
                 const Program& evidence, const AnalysisOptions& opts);

}  // namespace mmlcost
