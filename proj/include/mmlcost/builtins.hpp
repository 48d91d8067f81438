#pragma once

#include <cstddef>
#include <string>

namespace mmlcost {

// Predicates the solver evaluates directly.  Sender and receiver share them,
// so they stay out of the coded signature unless --predefined is on.
inline bool is_builtin_predicate(const std::string& name, std::size_t arity) {
  if (arity == 2) {
    return name == "is" || name == "=" || name == ">=" || name == ">" ||
           name == "<" || name == "=:=" || name == "=<" || name == "\\==" ||
           name == "==";
  }
  if (arity == 3) {
    return name == "functor";
  }
  if (arity == 1) {
    return name == "write" || name == "read";
  }
  if (arity == 0) {
    return name == "nl";
  }
  return false;
}

// Functors evaluable inside is/2 and the arithmetic comparisons.
inline bool is_arith_functor(const std::string& name, std::size_t arity) {
  if (arity == 2) {
    return name == "+" || name == "-" || name == "*" || name == "/" ||
           name == "//" || name == "mod" || name == "^" || name == "min" ||
           name == "max";
  }
  if (arity == 1) {
    return name == "-" || name == "+" || name == "abs";
  }
  return false;
}

// Directives accepted and ignored, output suppressed.
inline bool is_noop_builtin(const std::string& name, std::size_t arity) {
  if (arity == 0) {
    return name == "debug" || name == "nodebug" || name == "trace" ||
           name == "notrace" || name == "source" || name == "no_source" ||
           name == "halt" || name == "nl";
  }
  if (arity == 1) {
    return name == "spy" || name == "nospy" || name == "leash" ||
           name == "halt" || name == "write";
  }
  return false;
}

// Any predefined name in the coding sense.
inline bool is_predefined(const std::string& name, std::size_t arity) {
  return is_builtin_predicate(name, arity) || is_arith_functor(name, arity) ||
         is_noop_builtin(name, arity);
}

}  // namespace mmlcost
