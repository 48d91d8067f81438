#pragma once

#include "mmlcost/term.hpp"

#include <string>

namespace mmlcost {

struct SourceUnit {
  std::string text;
  std::string origin;  // file path or "stdin"
  Role role = Role::program;
};

enum class ReaderErrorKind {
  syntax,                 // malformed input, reserved mml_ names
  variables_in_evidence,  // evidence heads must be ground
  body_in_evidence,       // evidence clauses must be facts
  bad_repetition,         // n # fact with non-positive-integer n
  role_violation,         // :: in evidence or # elsewhere
  objective_in_evidence,  // :- goal inside an example file
};

struct ReaderError {
  ReaderErrorKind kind;
  std::string message;
  int line = 0;
  int column = 0;
  std::string origin;
};

// Parses one source unit.  Probability labels written as decimals are turned
// into exact rationals via rational_approx at `precision`; `n/m ::` labels
// are taken exactly.  Lists are desugared and objectives get the
// mml_objective dummy head here; user identifiers starting with mml_ are
// rejected.  Throws ReaderError.
Program parse(const SourceUnit& unit, double precision = 1e-5);

// Canonization transforms: splits `;` disjunctions (dividing any probability
// label uniformly over the paths), rewrites **/2 to ^/2, and merges duplicate
// evidence facts by summing repetitions.  Idempotent.
Program canonize(const Program& prog);

// parse followed by canonize.
Program read_program(const SourceUnit& unit, double precision = 1e-5);

}  // namespace mmlcost
