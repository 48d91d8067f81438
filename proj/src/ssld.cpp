#include "mmlcost/ssld.hpp"

#include "mmlcost/builtins.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace mmlcost {

namespace {

SymbolId pred_of(const TermPtr& t) { return {t->name, t->arity()}; }

// Structural identity up to a bijective renaming of variables.
bool alpha_bijection(const TermPtr& a, const TermPtr& b,
                     std::map<std::string, std::string>& fwd,
                     std::map<std::string, std::string>& rev) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TermKind::variable: {
      auto f = fwd.find(a->name);
      auto r = rev.find(b->name);
      if (f == fwd.end() && r == rev.end()) {
        fwd[a->name] = b->name;
        rev[b->name] = a->name;
        return true;
      }
      return f != fwd.end() && r != rev.end() && f->second == b->name &&
             r->second == a->name;
    }
    case TermKind::numeric:
      return a->value == b->value && a->is_float == b->is_float;
    default:
      if (a->name != b->name || a->args.size() != b->args.size()) return false;
      for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!alpha_bijection(a->args[i], b->args[i], fwd, rev)) return false;
      return true;
  }
}

// The head repeated as a body literal over the head's own variables loops
// unconditionally; a fresh variable in the literal leaves room for other
// literals to reduce it, which the depth limit covers instead.
bool non_reducing(const Clause& c) {
  std::vector<std::string> head_vars;
  collect_variables(c.head, head_vars);
  std::set<std::string> head_set(head_vars.begin(), head_vars.end());
  for (const TermPtr& lit : c.body) {
    if (lit->name != c.head->name || lit->arity() != c.head->arity()) continue;
    std::map<std::string, std::string> fwd, rev;
    if (!alpha_bijection(c.head, lit, fwd, rev)) continue;
    std::vector<std::string> lit_vars;
    collect_variables(lit, lit_vars);
    if (std::all_of(lit_vars.begin(), lit_vars.end(),
                    [&](const std::string& v) { return head_set.count(v) > 0; }))
      return true;
  }
  return false;
}

std::uint64_t function_occurrences(const TermPtr& t, const AnalysisFlags& flags) {
  switch (t->kind) {
    case TermKind::variable:
      return 0;
    case TermKind::numeric:
      return flags.include_numbers ? 1 : 0;
    default: {
      std::uint64_t n = 1;
      for (const TermPtr& arg : t->args) n += function_occurrences(arg, flags);
      return n;
    }
  }
}

Rational rational_pow(const Rational& base, std::uint64_t e) {
  Rational acc(1);
  Rational b = base;
  while (e > 0) {
    if (e & 1) acc *= b;
    b *= b;
    e >>= 1;
  }
  return acc;
}

std::vector<std::string> distinct_variables(const TermPtr& t) {
  std::vector<std::string> all, out;
  collect_variables(t, all);
  std::set<std::string> seen;
  for (const std::string& v : all)
    if (seen.insert(v).second) out.push_back(v);
  return out;
}

void collect_numerals(const TermPtr& t, std::set<std::string>& seen,
                      std::vector<TermPtr>& pool) {
  if (t->kind == TermKind::numeric) {
    if (seen.insert(term_to_string(t)).second) pool.push_back(t);
    return;
  }
  for (const TermPtr& arg : t->args) collect_numerals(arg, seen, pool);
}

bool is_integer(const Rational& r) { return r.denominator() == 1; }

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;  // truncates toward zero
  if (a % b != 0 && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

}  // namespace

struct SsldSolver::SearchState {
  std::vector<TermPtr> goals;
  Subst subst;
  Rational prob{1};
  std::size_t depth = 0;
  TermPtr root;
};

SsldSolver::SsldSolver(const Program& prog, const Program& kb,
                       const Signature& sig, std::size_t max_depth,
                       bool record_trees)
    : prog_(prog),
      kb_(kb),
      sig_(sig),
      max_depth_(max_depth),
      record_(record_trees) {
  for (const Program* p : {&prog_, &kb_})
    for (const Clause& c : p->clauses)
      if (non_reducing(c))
        throw NonTerminatingRuleError{clause_to_string(c, p->role)};

  std::map<SymbolId, std::size_t> prog_group;
  for (const Clause& c : prog_.clauses) ++prog_group[pred_of(c.head)];
  for (const Clause& c : prog_.clauses) {
    Rational pr = c.prob
                      ? *c.prob
                      : Rational(1, BigInt(prog_group[pred_of(c.head)]));
    table_[pred_of(c.head)].push_back({&c, pr});
  }
  for (const Clause& c : kb_.clauses) {
    Rational pr = c.prob ? *c.prob : Rational(1);
    table_[pred_of(c.head)].push_back({&c, pr});
  }

  std::set<std::string> seen;
  for (const Program* p : {&prog_, &kb_})
    for (const Clause& c : p->clauses) {
      collect_numerals(c.head, seen, constant_pool_);
      for (const TermPtr& lit : c.body) collect_numerals(lit, seen, constant_pool_);
    }
}

bool SsldSolver::covered(const SymbolId& pred) const {
  return table_.count(pred) > 0;
}

void SsldSolver::warn(const std::string& message) {
  if (std::find(warnings_.begin(), warnings_.end(), message) == warnings_.end())
    warnings_.push_back(message);
}

TermPtr SsldSolver::fresh_rename(const TermPtr& t) {
  return rename_variables(t, "~" + std::to_string(fresh_counter_));
}

void SsldSolver::unfold(SearchState& st, PredicateDistribution& dist,
                        DerivationNode* node) {
  if (st.goals.empty()) {
    TermPtr atom = apply_subst(st.root, st.subst);
    dist.answers.push_back({atom, st.prob});
    if (node) {
      node->children.push_back(std::make_unique<DerivationNode>());
      DerivationNode& leaf = *node->children.back();
      leaf.goal = atom;
      leaf.label = "yes";
    }
    return;
  }

  TermPtr g = apply_subst(st.goals.front(), st.subst);
  std::vector<TermPtr> rest(st.goals.begin() + 1, st.goals.end());

  if (!is_callable(*g)) return;  // unbound or numeric goal: dead branch

  if (is_predefined(g->name, g->arity())) {
    Subst s2 = st.subst;
    bool warned = false;
    if (!eval_builtin(g, s2, warned)) return;
    DerivationNode* next_node = node;
    if (node) {
      node->children.push_back(std::make_unique<DerivationNode>());
      DerivationNode& step = *node->children.back();
      step.goal = g;
      step.label = "builtin";
      next_node = &step;
    }
    SearchState next{std::move(rest), std::move(s2), st.prob, st.depth, st.root};
    unfold(next, dist, next_node);
    return;
  }

  auto it = table_.find(pred_of(g));
  if (it == table_.end()) return;
  for (const ClauseChoice& choice : it->second) {
    ++fresh_counter_;
    Subst s2 = st.subst;
    TermPtr head = fresh_rename(choice.clause->head);
    if (!unify(g, head, s2)) continue;
    if (st.depth >= max_depth_) {
      dist.pruned += st.prob * choice.prob;
      continue;
    }
    std::vector<TermPtr> goals2;
    goals2.reserve(choice.clause->body.size() + rest.size());
    for (const TermPtr& b : choice.clause->body)
      goals2.push_back(fresh_rename(b));
    goals2.insert(goals2.end(), rest.begin(), rest.end());
    DerivationNode* child = node;
    if (node) {
      node->children.push_back(std::make_unique<DerivationNode>());
      DerivationNode& step = *node->children.back();
      step.goal = g;
      step.label = clause_to_string(*choice.clause, Role::program);
      step.step_prob = choice.prob;
      child = &step;
    }
    SearchState next{std::move(goals2), std::move(s2), st.prob * choice.prob,
                     st.depth + 1, st.root};
    unfold(next, dist, child);
  }
}

const PredicateDistribution& SsldSolver::distribution(const SymbolId& pred) {
  auto cached = cache_.find(pred);
  if (cached != cache_.end()) return cached->second;

  std::vector<TermPtr> args;
  for (std::size_t i = 0; i < pred.second; ++i)
    args.push_back(make_variable("Arg" + std::to_string(i + 1) + "~r"));
  TermPtr root = args.empty() ? make_atom(pred.first)
                              : make_compound(pred.first, std::move(args));

  DerivationNode* node = nullptr;
  if (record_) {
    auto root_node = std::make_unique<DerivationNode>();
    root_node->goal = root;
    root_node->label = "goal";
    node = root_node.get();
    trees_[pred] = std::move(root_node);
  }

  PredicateDistribution dist;
  dist.predicate = pred;
  SearchState st{{root}, {}, Rational(1), 0, root};
  unfold(st, dist, node);

  // Merge alpha-equivalent answer patterns.
  std::vector<Answer> merged;
  std::map<std::string, std::size_t> index;
  for (const Answer& a : dist.answers) {
    Subst canon;
    std::vector<std::string> vars = distinct_variables(a.atom);
    for (std::size_t i = 0; i < vars.size(); ++i)
      canon[vars[i]] = make_variable("_A" + std::to_string(i + 1));
    TermPtr atom = canon.empty() ? a.atom : apply_subst(a.atom, canon);
    std::string key = term_to_string(atom);
    auto [it, fresh] = index.try_emplace(key, merged.size());
    if (fresh) merged.push_back({atom, a.raw});
    else merged[it->second].raw += a.raw;
  }
  dist.answers = std::move(merged);

  // Mass and the ground-entry view.  With function symbols present a free
  // position carries unit weight overall; without them it expands over the
  // observed constants at full weight apiece.
  std::size_t n_f = sig_.function_choices();
  for (const Answer& a : dist.answers) {
    std::vector<std::string> vars = distinct_variables(a.atom);
    if (vars.empty()) {
      dist.mass += a.raw;
      auto [it, fresh] = dist.entries.try_emplace(term_to_string(a.atom), a.raw);
      if (!fresh) it->second += a.raw;
      continue;
    }
    if (n_f > 0) {
      dist.mass += a.raw;
      continue;
    }
    dist.mass +=
        a.raw * rational_pow(Rational(BigInt(constant_pool_.size())), vars.size());
    // Materialize the instances unless the cross product is degenerate.
    std::size_t count = 1;
    bool overflow = constant_pool_.empty();
    for (std::size_t i = 0; i < vars.size() && !overflow; ++i) {
      count *= constant_pool_.size();
      if (count > 100000) overflow = true;
    }
    if (overflow) {
      if (!constant_pool_.empty()) {
        dist.truncated = true;
        warn("free-variable expansion too large for " + pred.first + "/" +
             std::to_string(pred.second));
      }
      continue;
    }
    std::vector<std::size_t> pick(vars.size(), 0);
    for (;;) {
      Subst assign;
      for (std::size_t i = 0; i < vars.size(); ++i)
        assign[vars[i]] = constant_pool_[pick[i]];
      std::string key = term_to_string(apply_subst(a.atom, assign));
      auto [it, fresh] = dist.entries.try_emplace(key, a.raw);
      if (!fresh) it->second += a.raw;
      std::size_t i = 0;
      while (i < pick.size() && ++pick[i] == constant_pool_.size())
        pick[i++] = 0;
      if (i == pick.size()) break;
    }
  }

  if (dist.pruned > Rational(0) &&
      (dist.mass == Rational(0) || dist.pruned * 100 > dist.mass))
    warn("depth limit discarded over 1% of the derivation mass of " +
         pred.first + "/" + std::to_string(pred.second));

  return cache_.emplace(pred, std::move(dist)).first->second;
}

Rational SsldSolver::example_raw(const TermPtr& example) {
  const PredicateDistribution& dist = distribution(pred_of(example));
  std::size_t n_f = sig_.function_choices();
  Rational total(0);
  for (const Answer& a : dist.answers) {
    Subst s;
    if (!unify(example, a.atom, s)) continue;
    Rational mult(1);
    if (n_f > 0) {
      for (const auto& [name, bound] : s) {
        (void)name;
        std::uint64_t occ =
            function_occurrences(apply_subst(bound, s), sig_.flags);
        if (occ > 0) mult *= rational_pow(Rational(1, BigInt(n_f)), occ);
      }
    }
    total += a.raw * mult;
  }
  return total;
}

std::optional<Rational> SsldSolver::example_probability(const TermPtr& example) {
  Rational raw = example_raw(example);
  const PredicateDistribution& dist = distribution(pred_of(example));
  if (dist.mass == Rational(0)) return std::nullopt;
  return raw / dist.mass;
}

const DerivationNode* SsldSolver::tree(const SymbolId& pred) const {
  auto it = trees_.find(pred);
  return it == trees_.end() ? nullptr : it->second.get();
}

std::optional<Bits> SsldSolver::proof_cost(const TermPtr& example) {
  SymbolId pred = pred_of(example);
  std::vector<TermPtr> args;
  for (std::size_t i = 0; i < pred.second; ++i)
    args.push_back(make_variable("Arg" + std::to_string(i + 1) + "~q"));
  TermPtr root = args.empty() ? make_atom(pred.first)
                              : make_compound(pred.first, std::move(args));
  double out = 0;
  if (pc_search(root, example, {root}, {}, 0, 0.0, out)) return out;
  return std::nullopt;
}

bool SsldSolver::pc_search(const TermPtr& root, const TermPtr& example,
                           std::vector<TermPtr> goals, Subst s,
                           std::size_t depth, double bits, double& out) {
  if (goals.empty()) {
    TermPtr answer = apply_subst(root, s);
    Subst cover;
    if (!unify(answer, example, cover)) return false;
    std::size_t free = distinct_variables(answer).size();
    if (free > 0 && !constant_pool_.empty())
      bits += static_cast<double>(free) *
              std::log2(static_cast<double>(constant_pool_.size()));
    out = bits;
    return true;
  }

  TermPtr g = apply_subst(goals.front(), s);
  std::vector<TermPtr> rest(goals.begin() + 1, goals.end());

  if (!is_callable(*g)) return false;

  if (is_predefined(g->name, g->arity())) {
    Subst s2 = s;
    bool warned = false;
    if (!eval_builtin(g, s2, warned)) return false;
    return pc_search(root, example, std::move(rest), std::move(s2), depth,
                     bits, out);
  }

  if (depth >= max_depth_) return false;
  auto it = table_.find(pred_of(g));
  if (it == table_.end()) return false;

  // The charge at this step depends on how many heads unify with the goal as
  // selected, not on which of them the derivation ends up using.
  std::vector<const ClauseChoice*> matches;
  for (const ClauseChoice& choice : it->second) {
    ++fresh_counter_;
    Subst probe = s;
    if (unify(g, fresh_rename(choice.clause->head), probe))
      matches.push_back(&choice);
  }
  if (matches.empty()) return false;
  double charge = std::log2(static_cast<double>(matches.size()));

  for (const ClauseChoice* choice : matches) {
    ++fresh_counter_;
    Subst s2 = s;
    TermPtr head = fresh_rename(choice->clause->head);
    if (!unify(g, head, s2)) continue;
    std::vector<TermPtr> goals2;
    goals2.reserve(choice->clause->body.size() + rest.size());
    for (const TermPtr& b : choice->clause->body)
      goals2.push_back(fresh_rename(b));
    goals2.insert(goals2.end(), rest.begin(), rest.end());
    if (pc_search(root, example, std::move(goals2), std::move(s2), depth + 1,
                  bits + charge, out))
      return true;
  }
  return false;
}

bool SsldSolver::eval_builtin(const TermPtr& goal, Subst& s, bool& warned) {
  const std::string& n = goal->name;
  std::size_t a = goal->arity();

  auto arith_pair = [&](std::optional<std::pair<Rational, bool>>& lhs,
                        std::optional<std::pair<Rational, bool>>& rhs) {
    lhs = eval_arith(goal->args[0], s);
    rhs = eval_arith(goal->args[1], s);
    if (!lhs || !rhs) {
      if (!is_ground(apply_subst(goal, s))) {
        warn("comparison over unbound arguments: " +
             term_to_string(apply_subst(goal, s)));
        warned = true;
      }
      return false;
    }
    return true;
  };

  if (a == 2 && (n == "<" || n == ">" || n == ">=" || n == "=<" || n == "=:=")) {
    std::optional<std::pair<Rational, bool>> lhs, rhs;
    if (!arith_pair(lhs, rhs)) return false;
    const Rational &l = lhs->first, &r = rhs->first;
    if (n == "<") return l < r;
    if (n == ">") return l > r;
    if (n == ">=") return l >= r;
    if (n == "=<") return l <= r;
    return l == r;  // =:=
  }
  if (n == "is" && a == 2) {
    std::optional<std::pair<Rational, bool>> rhs = eval_arith(goal->args[1], s);
    if (!rhs) {
      if (!is_ground(apply_subst(goal->args[1], s))) {
        warn("unbound arithmetic in " + term_to_string(apply_subst(goal, s)));
        warned = true;
      }
      return false;
    }
    return unify(goal->args[0], make_numeric(rhs->first, rhs->second), s);
  }
  if (n == "=" && a == 2) return unify(goal->args[0], goal->args[1], s);
  if ((n == "==" || n == "\\==") && a == 2) {
    bool eq = term_equal(apply_subst(goal->args[0], s),
                         apply_subst(goal->args[1], s));
    return n == "==" ? eq : !eq;
  }
  if (n == "functor" && a == 3) {
    TermPtr t = apply_subst(goal->args[0], s);
    if (t->kind != TermKind::variable) {
      TermPtr f = t->kind == TermKind::numeric ? t : make_atom(t->name);
      TermPtr ar = make_numeric(Rational(BigInt(t->arity())), false);
      return unify(goal->args[1], f, s) && unify(goal->args[2], ar, s);
    }
    TermPtr f = apply_subst(goal->args[1], s);
    TermPtr ar = apply_subst(goal->args[2], s);
    if (ar->kind != TermKind::numeric || !is_integer(ar->value) ||
        ar->value < Rational(0))
      return false;
    if (ar->value == Rational(0)) {
      if (f->kind == TermKind::numeric || f->kind == TermKind::atom)
        return unify(goal->args[0], f, s);
      return false;
    }
    if (f->kind != TermKind::atom) return false;
    std::vector<TermPtr> args;
    BigInt k = ar->value.numerator();
    for (BigInt i = 0; i < k; ++i) {
      ++fresh_counter_;
      args.push_back(make_variable("_F" + std::to_string(fresh_counter_)));
    }
    return unify(goal->args[0], make_compound(f->name, std::move(args)), s);
  }
  if ((n == "write" && a == 1) || (n == "nl" && a == 0) ||
      (n == "read" && a == 1))
    return true;  // output suppressed, read is a no-op
  if (is_noop_builtin(n, a)) return true;
  return false;  // arithmetic functor misused as a goal
}

std::optional<std::pair<Rational, bool>> SsldSolver::eval_arith(
    const TermPtr& t0, const Subst& s) {
  TermPtr t = walk(t0, s);
  switch (t->kind) {
    case TermKind::numeric:
      return std::make_pair(t->value, t->is_float);
    case TermKind::variable:
    case TermKind::atom:
      return std::nullopt;
    case TermKind::compound:
      break;
  }
  if (!is_arith_functor(t->name, t->arity())) return std::nullopt;
  auto lhs = eval_arith(t->args[0], s);
  if (!lhs) return std::nullopt;
  if (t->arity() == 1) {
    if (t->name == "-") return std::make_pair(-lhs->first, lhs->second);
    if (t->name == "+") return lhs;
    return std::make_pair(lhs->first < Rational(0) ? -lhs->first : lhs->first,
                          lhs->second);  // abs
  }
  auto rhs = eval_arith(t->args[1], s);
  if (!rhs) return std::nullopt;
  const Rational &l = lhs->first, &r = rhs->first;
  bool fl = lhs->second || rhs->second;
  if (t->name == "+") return std::make_pair(l + r, fl);
  if (t->name == "-") return std::make_pair(l - r, fl);
  if (t->name == "*") return std::make_pair(l * r, fl);
  if (t->name == "/") {
    if (r == Rational(0)) return std::nullopt;
    Rational q = l / r;
    return std::make_pair(q, fl || q.denominator() != 1);
  }
  if (t->name == "//") {
    if (!is_integer(l) || !is_integer(r) || r == Rational(0)) return std::nullopt;
    return std::make_pair(Rational(l.numerator() / r.numerator()), false);
  }
  if (t->name == "mod") {
    if (!is_integer(l) || !is_integer(r) || r == Rational(0)) return std::nullopt;
    BigInt q = floor_div(l.numerator(), r.numerator());
    return std::make_pair(Rational(l.numerator() - r.numerator() * q), false);
  }
  if (t->name == "^") {
    if (!is_integer(r)) return std::nullopt;
    BigInt e = r.numerator();
    if (e > 4096 || e < -4096) return std::nullopt;
    bool neg = e < 0;
    if (neg) e = -e;
    Rational p = rational_pow(l, static_cast<std::uint64_t>(e));
    if (neg) {
      if (p == Rational(0)) return std::nullopt;
      p = Rational(1) / p;
    }
    return std::make_pair(p, fl || p.denominator() != 1);
  }
  if (t->name == "min") return l <= r ? lhs : rhs;
  if (t->name == "max") return l >= r ? lhs : rhs;
  return std::nullopt;
}

}  // namespace mmlcost
