#pragma once

#include "mmlcost/term.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace mmlcost {

using SymbolId = std::pair<std::string, std::size_t>;  // name, arity

struct AnalysisFlags {
  bool include_numbers = false;
  bool include_predefined = false;
};

// Symbol partitions of one analysis.  A symbol lives in exactly one
// partition; classification follows position (head/body literal level is a
// predicate, argument level a function symbol), with predefined names and
// numerals set apart by the flags.
struct Signature {
  std::vector<SymbolId> program_preds;    // first-occurrence order
  std::vector<SymbolId> kb_preds;
  std::vector<SymbolId> predefined_preds; // used builtins, kept when flagged
  std::vector<SymbolId> funcs;            // includes numerals when flagged
  AnalysisFlags flags;

  // Size of the predicate-choice alphabet used by head/body coding.
  std::size_t predicate_choices() const;
  // Size of the function-symbol alphabet used by term coding.
  std::size_t function_choices() const;
  // Predicates whose lexicon is transmitted (program + flagged builtins).
  std::vector<SymbolId> coded_preds() const;
};

struct SignatureError {
  std::string message;
};

// Collects and partitions the symbols of an analysis.  Throws
// DuplicateDefinitionError when a predicate is defined by clause heads in
// both the program and the KB.
Signature extract_signature(const Program& prog, const Program& kb,
                            const Program& evidence,
                            const AnalysisFlags& flags);

struct DuplicateDefinitionError {
  SymbolId symbol;
};

// d = variable occurrences in head and body, n_v = distinct variables.
// Anonymous variables are distinct by construction (unique names).
std::pair<std::uint64_t, std::uint64_t> count_variable_positions(
    const Clause& clause);

}  // namespace mmlcost
