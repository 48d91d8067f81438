#include "mmlcost/normalizer.hpp"

#include <map>
#include <utility>
#include <vector>

namespace mmlcost {

namespace {

std::string group_key(const Clause& c) {
  return c.head->name + "/" + std::to_string(c.head->arity());
}

}  // namespace

Program normalize(const Program& prog, NormalizeMode mode) {
  if (!prog.stochastic()) return prog;

  // Indices per head predicate, in clause order.
  std::map<std::string, std::vector<std::size_t>> groups;
  std::vector<std::string> order;
  for (std::size_t i = 0; i < prog.clauses.size(); ++i) {
    std::string key = group_key(prog.clauses[i]);
    auto [it, fresh] = groups.try_emplace(key);
    if (fresh) order.push_back(key);
    it->second.push_back(i);
  }

  Program out = prog;
  for (const std::string& key : order) {
    const std::vector<std::size_t>& idx = groups[key];
    Rational sum(0);
    std::size_t unlabeled = 0;
    for (std::size_t i : idx) {
      if (prog.clauses[i].prob) sum += *prog.clauses[i].prob;
      else ++unlabeled;
    }
    if (mode == NormalizeMode::off) {
      if (unlabeled > 0)
        throw NormalizationError{NormalizationErrorKind::unsolvable, key};
      if (sum != Rational(1))
        throw NormalizationError{NormalizationErrorKind::sum_differs_from_one, key};
      continue;
    }
    if (unlabeled == 0) {
      if (sum == Rational(1) || sum == Rational(0)) continue;
      for (std::size_t i : idx) out.clauses[i].prob = *prog.clauses[i].prob / sum;
    } else {
      // Covers the fully unlabeled group: S = 0 gives each clause 1/u.
      if (sum >= Rational(1))
        throw NormalizationError{NormalizationErrorKind::unsolvable, key};
      Rational share = (Rational(1) - sum) / Rational(BigInt(unlabeled));
      for (std::size_t i : idx)
        if (!prog.clauses[i].prob) out.clauses[i].prob = share;
    }
  }
  return out;
}

}  // namespace mmlcost
