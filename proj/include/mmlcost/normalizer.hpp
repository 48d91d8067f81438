#pragma once

#include "mmlcost/term.hpp"

#include <string>

namespace mmlcost {

enum class NormalizeMode { on, off };

enum class NormalizationErrorKind {
  unsolvable,        // unlabeled clauses whose share cannot be deduced
  sum_differs_from_one,  // labeled sum != 1 with normalization off
};

struct NormalizationError {
  NormalizationErrorKind kind;
  std::string predicate;  // offending head predicate as name/arity
};

// Per-predicate probability normalization.  Non-stochastic programs pass
// through unchanged.  With mode=on: all-labeled groups are rescaled to sum
// exactly 1; unlabeled clauses share the missing (1 - S)/u when S < 1 (a
// fully unlabeled group becomes uniform); unlabeled with S >= 1 is an error.
// With mode=off any group whose labels do not sum to exactly 1 or that mixes
// in unlabeled clauses is an error.  All arithmetic is exact.
Program normalize(const Program& prog, NormalizeMode mode);

}  // namespace mmlcost
