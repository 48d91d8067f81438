#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mmlcost/normalizer.hpp"
#include "mmlcost/reader.hpp"
#include "mmlcost/ssld.hpp"

#include <boost/rational.hpp>

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

using namespace mmlcost;

namespace {

Program parse_program(const std::string& text, Role role = Role::program) {
  return read_program(SourceUnit{text, "<test>", role});
}

Program normalized(const std::string& text) {
  return normalize(parse_program(text), NormalizeMode::on);
}

Program empty_kb() { return Program{{}, Role::knowledge_base}; }
Program empty_ev() { return Program{{}, Role::evidence}; }

Rational rat(long n, long m = 1) { return Rational(BigInt(n), BigInt(m)); }

TermPtr num(long v) { return make_numeric(Rational(BigInt(v)), false); }

Signature sig_of(const Program& p, const Program& kb, const Program& ev,
                 bool numbers) {
  return extract_signature(p, kb, ev, AnalysisFlags{numbers, false});
}

const char* k_p4 =
    "0.3 :: p(X, Y) :- q(X), q(Y).\n"
    "0.3 :: p(X, Y) :- q(X).\n"
    "0.4 :: p(0, 1).\n"
    "0.25 :: q(0).\n"
    "0.25 :: q(1).\n"
    "0.5 :: q(2).\n";

const char* k_even =
    "0.5 :: even(0).\n"
    "0.5 :: even(s(s(X))) :- even(X).\n";

TermPtr nested_s(long depth) {
  TermPtr t = num(0);
  for (long i = 0; i < depth; ++i) t = make_compound("s", {t});
  return t;
}

}  // namespace

TEST_CASE("uniform-choice distribution over the product of two facts") {
  Program p = normalized("p(a).\n");
  SsldSolver solver(p, empty_kb(), sig_of(p, empty_kb(), empty_ev(), false), 20);
  const PredicateDistribution& d = solver.distribution({"p", 1});
  REQUIRE(d.answers.size() == 1);
  CHECK(d.answers[0].raw == rat(1));
  CHECK(d.mass == rat(1));
  CHECK(d.entries.at(term_to_string(make_compound("p", {make_atom("a")}))) ==
        rat(1));
}

TEST_CASE("distribution of the two-rule stochastic product program") {
  Program p = normalized(k_p4);
  SsldSolver solver(p, empty_kb(), sig_of(p, empty_kb(), empty_ev(), false), 20);
  const PredicateDistribution& d = solver.distribution({"p", 2});

  auto entry = [&](long i, long j) {
    auto it = d.entries.find(term_to_string(make_compound("p", {num(i), num(j)})));
    return it == d.entries.end() ? rat(0) : it->second;
  };
  CHECK(entry(0, 0) == rat(3, 32));
  CHECK(entry(0, 1) == rat(79, 160));  // 0.49375
  CHECK(entry(0, 2) == rat(9, 80));
  CHECK(entry(1, 0) == rat(3, 32));
  CHECK(entry(1, 1) == rat(3, 32));
  CHECK(entry(1, 2) == rat(9, 80));
  CHECK(entry(2, 0) == rat(3, 16));
  CHECK(entry(2, 1) == rat(3, 16));
  CHECK(entry(2, 2) == rat(9, 40));
  CHECK(d.mass == rat(8, 5));

  TermPtr e = make_compound("p", {num(0), num(1)});
  CHECK(solver.example_raw(e) == rat(79, 160));
  REQUIRE(solver.example_probability(e).has_value());
  CHECK(*solver.example_probability(e) == rat(79, 256));  // 0.30859375
}

TEST_CASE("entries of a distribution sum to its mass") {
  for (const char* text : {k_p4, k_even}) {
    Program p = normalized(text);
    SsldSolver solver(p, empty_kb(), sig_of(p, empty_kb(), empty_ev(), false), 20);
    const Clause& first = p.clauses.front();
    const PredicateDistribution& d =
        solver.distribution({first.head->name, first.head->arity()});
    Rational sum(0);
    for (const auto& [key, value] : d.entries) {
      (void)key;
      CHECK(value > Rational(0));
      sum += value;
    }
    CHECK(sum == d.mass);
  }
}

TEST_CASE("successor-sum example follows the free-variable correction") {
  Program p = normalized(
      "0.5 :: sum(0, W, W).\n"
      "0.5 :: sum(s(X), Y, s(Z)) :- sum(X, Y, Z).\n");
  Program ev = parse_program("sum(s(0), s(s(0)), s(s(s(0)))).\n", Role::evidence);
  Signature sig = sig_of(p, empty_kb(), ev, true);
  REQUIRE(sig.function_choices() == 2);  // 0/0 and s/1
  SsldSolver solver(p, empty_kb(), sig, 20);
  CHECK(solver.example_raw(ev.clauses[0].head) == rat(1, 32));
}

TEST_CASE("free head variable divides per carried function symbol") {
  Program p = normalized(
      "r(X, _) :- p(X).\n"
      "0.8 :: p(0).\n"
      "0.2 :: p(s(_)).\n");
  Program ev = parse_program("r(0, t(0, s(0))).\n", Role::evidence);
  Signature sig = sig_of(p, empty_kb(), ev, true);
  REQUIRE(sig.function_choices() == 3);  // 0/0, s/1, t/2
  SsldSolver solver(p, empty_kb(), sig, 20);
  CHECK(solver.example_raw(ev.clauses[0].head) == rat(4, 405));  // 0.8/81
  const PredicateDistribution& d = solver.distribution({"r", 2});
  CHECK(d.mass == rat(1));
}

TEST_CASE("recursive even program unfolds to halved entries") {
  Program p = normalized(k_even);
  SsldSolver solver(p, empty_kb(), sig_of(p, empty_kb(), empty_ev(), false), 20);
  const PredicateDistribution& d = solver.distribution({"even", 1});
  auto entry = [&](long depth) {
    auto it = d.entries.find(term_to_string(make_compound("even", {nested_s(depth)})));
    return it == d.entries.end() ? rat(0) : it->second;
  };
  CHECK(entry(0) == rat(1, 2));
  CHECK(entry(2) == rat(1, 4));
  CHECK(entry(4) == rat(1, 8));
  CHECK(d.mass == Rational(BigInt((1 << 20) - 1), BigInt(1 << 20)));
  CHECK(d.pruned == Rational(BigInt(1), BigInt(1 << 20)));
}

TEST_CASE("deeper unfolding never shrinks an entry") {
  Program p = normalized(k_even);
  Signature sig = sig_of(p, empty_kb(), empty_ev(), false);
  std::vector<std::size_t> depths{1, 2, 5, 20};
  std::map<std::string, Rational> prev;
  std::size_t prev_count = 0;
  for (std::size_t depth : depths) {
    SsldSolver solver(p, empty_kb(), sig, depth);
    const PredicateDistribution& d = solver.distribution({"even", 1});
    for (const auto& [key, value] : prev) {
      auto it = d.entries.find(key);
      REQUIRE(it != d.entries.end());
      CHECK(it->second >= value);
    }
    CHECK(d.entries.size() >= prev_count);
    prev = d.entries;
    prev_count = d.entries.size();
  }
}

TEST_CASE("shallow depth limit prunes mass and warns") {
  Program p = normalized(k_even);
  SsldSolver solver(p, empty_kb(), sig_of(p, empty_kb(), empty_ev(), false), 3);
  const PredicateDistribution& d = solver.distribution({"even", 1});
  CHECK(d.mass == rat(7, 8));
  CHECK(d.pruned == rat(1, 8));
  bool warned = false;
  for (const std::string& w : solver.warnings())
    if (w.find("depth limit") != std::string::npos) warned = true;
  CHECK(warned);
}

TEST_CASE("clause group order does not change example probabilities") {
  Program a = normalized(k_p4);
  Program b = normalized(
      "0.25 :: q(0).\n"
      "0.25 :: q(1).\n"
      "0.5 :: q(2).\n"
      "0.3 :: p(X, Y) :- q(X), q(Y).\n"
      "0.3 :: p(X, Y) :- q(X).\n"
      "0.4 :: p(0, 1).\n");
  SsldSolver sa(a, empty_kb(), sig_of(a, empty_kb(), empty_ev(), false), 20);
  SsldSolver sb(b, empty_kb(), sig_of(b, empty_kb(), empty_ev(), false), 20);
  for (long i = 0; i < 3; ++i)
    for (long j = 0; j < 3; ++j) {
      TermPtr e = make_compound("p", {num(i), num(j)});
      CHECK(sa.example_raw(e) == sb.example_raw(e));
    }
  CHECK(sa.distribution({"p", 2}).mass == sb.distribution({"p", 2}).mass);
}

TEST_CASE("unlabeled knowledge base clauses resolve deterministically") {
  Program prog = normalized(
      "reach(X, Y) :- linked(X, Y).\n"
      "reach(X, Y) :- linked(X, Z), reach(Z, Y).\n");
  Program kb = parse_program("linked(0, 1).\nlinked(1, 2).\n",
                             Role::knowledge_base);
  Signature sig = sig_of(prog, kb, empty_ev(), true);
  SsldSolver solver(prog, kb, sig, 20);
  // Unlabeled program group of two: 1/2 each; KB facts carry weight 1.
  CHECK(solver.example_raw(make_compound("reach", {num(0), num(1)})) ==
        rat(1, 2));
  CHECK(solver.example_raw(make_compound("reach", {num(0), num(2)})) ==
        rat(1, 4));
  CHECK(solver.covered({"reach", 2}));
  CHECK(solver.covered({"linked", 2}));
  CHECK_FALSE(solver.covered({"absent", 2}));
}

TEST_CASE("builtin arithmetic and comparisons") {
  struct Case {
    const char* text;
    const char* pred;
    Rational mass;
  };
  std::vector<Case> cases = {
      {"t(X) :- X is 2 + 2.\n", "t", rat(1)},
      {"u :- 3 > 1.\n", "u", rat(1)},
      {"v :- 1 > 3.\n", "v", rat(0)},
      {"h :- halt, write(ok), nl.\n", "h", rat(1)},
      {"m(X) :- X is 7 mod 3.\n", "m", rat(1)},
      {"n(X) :- X is -7 mod 3.\n", "n", rat(1)},
      {"d(X) :- X is 7 // 2.\n", "d", rat(1)},
      {"w(X) :- X is 2 ^ 10.\n", "w", rat(1)},
      {"e(X) :- X = s(0).\n", "e", rat(1)},
      {"k :- s(0) == s(0).\n", "k", rat(1)},
      {"k2 :- s(0) == s(1).\n", "k2", rat(0)},
      {"k3 :- s(0) \\== s(1).\n", "k3", rat(1)},
      {"f(A) :- functor(t(a, b), t, A).\n", "f", rat(1)},
  };
  for (const Case& c : cases) {
    CAPTURE(c.text);
    Program p = parse_program(c.text);
    std::size_t arity = p.clauses[0].head->arity();
    SsldSolver solver(p, empty_kb(), sig_of(p, empty_kb(), empty_ev(), false), 20);
    CHECK(solver.distribution({c.pred, arity}).mass == c.mass);
  }
}

TEST_CASE("arithmetic result values") {
  auto single_entry = [](const std::string& text) {
    Program p = parse_program(text);
    SsldSolver solver(p, Program{{}, Role::knowledge_base},
                      extract_signature(p, Program{{}, Role::knowledge_base},
                                        Program{{}, Role::evidence},
                                        AnalysisFlags{}),
                      20);
    const PredicateDistribution& d =
        solver.distribution({p.clauses[0].head->name, p.clauses[0].head->arity()});
    REQUIRE(d.entries.size() == 1);
    return d.entries.begin()->first;
  };
  CHECK(single_entry("t(X) :- X is 2 + 2.\n") == "t(4)");
  CHECK(single_entry("t(X) :- X is 7 mod 3.\n") == "t(1)");
  CHECK(single_entry("t(X) :- X is -7 mod 3.\n") == "t(2)");
  CHECK(single_entry("t(X) :- X is 7 // 2.\n") == "t(3)");
  CHECK(single_entry("t(X) :- X is 2 ^ 10.\n") == "t(1024)");
  CHECK(single_entry("t(X) :- X is 6 / 4.\n") == "t(1.5)");
  CHECK(single_entry("t(X) :- X is min(3, 5).\n") == "t(3)");
  CHECK(single_entry("t(X) :- X is abs(0 - 9).\n") == "t(9)");
}

TEST_CASE("comparison over an unbound variable fails the branch with a warning") {
  Program p = parse_program("w :- X > 0.\n");
  SsldSolver solver(p, empty_kb(), sig_of(p, empty_kb(), empty_ev(), false), 20);
  CHECK(solver.distribution({"w", 0}).mass == rat(0));
  bool warned = false;
  for (const std::string& w : solver.warnings())
    if (w.find("unbound") != std::string::npos) warned = true;
  CHECK(warned);
}

TEST_CASE("non-reducing recursion is rejected before solving") {
  CHECK_THROWS_AS(
      SsldSolver(parse_program("p(X) :- p(X).\n"), empty_kb(), Signature{}, 20),
      NonTerminatingRuleError);
  CHECK_THROWS_AS(
      SsldSolver(parse_program("p(X, Y) :- q(X), p(Y, X).\n"), empty_kb(),
                 Signature{}, 20),
      NonTerminatingRuleError);
  // A fresh variable in the recursive call leaves room for reduction.
  CHECK_NOTHROW(SsldSolver(parse_program("p(X) :- p(Y).\n"), empty_kb(),
                           Signature{}, 2));
  // Reduction through a binding literal is fine.
  CHECK_NOTHROW(SsldSolver(
      parse_program("reach(X, Y) :- linked(X, Z), reach(Z, Y).\n"), empty_kb(),
      Signature{}, 5));
}

TEST_CASE("derivation tree records the unfolding when asked") {
  Program p = normalized(k_even);
  SsldSolver solver(p, empty_kb(), sig_of(p, empty_kb(), empty_ev(), false), 4,
                    true);
  solver.distribution({"even", 1});
  const DerivationNode* root = solver.tree({"even", 1});
  REQUIRE(root != nullptr);
  CHECK(root->label == "goal");
  REQUIRE(root->children.size() == 2);  // both clauses unify with the root
  CHECK(root->children[0]->step_prob == rat(1, 2));
  CHECK(root->children[1]->step_prob == rat(1, 2));
  CHECK(solver.tree({"odd", 1}) == nullptr);
}

// Independent oracle: enumerate every ground instantiation of every clause
// over the observed constants and sum label products, bottom-up.
namespace {

void oracle_collect_numerals(const TermPtr& t, std::set<std::string>& seen,
                             std::vector<TermPtr>& pool) {
  if (t->kind == TermKind::numeric) {
    if (seen.insert(term_to_string(t)).second) pool.push_back(t);
    return;
  }
  for (const TermPtr& arg : t->args) oracle_collect_numerals(arg, seen, pool);
}

struct Oracle {
  const Program& prog;
  std::vector<TermPtr> pool;
  std::map<std::string, Rational> memo;

  explicit Oracle(const Program& p) : prog(p) {
    std::set<std::string> seen;
    for (const Clause& c : prog.clauses) {
      oracle_collect_numerals(c.head, seen, pool);
      for (const TermPtr& lit : c.body) oracle_collect_numerals(lit, seen, pool);
    }
  }

  Rational prob(const TermPtr& atom) {
    std::string key = term_to_string(atom);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    Rational total(0);
    for (const Clause& c : prog.clauses) {
      if (c.head->name != atom->name || c.head->arity() != atom->arity())
        continue;
      std::vector<std::string> all_vars, vars;
      collect_variables(c.head, all_vars);
      for (const TermPtr& lit : c.body) collect_variables(lit, all_vars);
      std::set<std::string> seen_vars;
      for (const std::string& v : all_vars)
        if (seen_vars.insert(v).second) vars.push_back(v);

      std::vector<std::size_t> pick(vars.size(), 0);
      for (;;) {
        Subst assign;
        for (std::size_t i = 0; i < vars.size(); ++i)
          assign[vars[i]] = pool[pick[i]];
        if (term_equal(apply_subst(c.head, assign), atom)) {
          Rational pr = *c.prob;
          for (const TermPtr& lit : c.body) {
            if (pr == Rational(0)) break;
            pr *= prob(apply_subst(lit, assign));
          }
          total += pr;
        }
        if (vars.empty()) break;
        std::size_t i = 0;
        while (i < pick.size() && ++pick[i] == pool.size()) pick[i++] = 0;
        if (i == pick.size()) break;
      }
    }
    memo[key] = total;
    return total;
  }
};

struct GeneratedPred {
  std::string name;
  std::size_t arity;
};

Program random_layered_program(std::mt19937& rng) {
  auto pick = [&](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };
  std::vector<TermPtr> constants = {num(0), num(1), num(2)};
  std::vector<std::string> var_names = {"V1", "V2", "V3"};

  Program prog;
  std::vector<GeneratedPred> lower;

  // Layer 0: ground facts.
  for (std::size_t pi = 0; pi < 2; ++pi) {
    GeneratedPred pred{"f" + std::to_string(pi), 1 + pick(2)};
    std::size_t n = 2 + pick(2);
    for (std::size_t ci = 0; ci < n; ++ci) {
      std::vector<TermPtr> args;
      for (std::size_t ai = 0; ai < pred.arity; ++ai)
        args.push_back(constants[pick(constants.size())]);
      prog.clauses.push_back(
          Clause{make_compound(pred.name, std::move(args)), {}, std::nullopt, 1});
    }
    lower.push_back(pred);
  }

  // Layers 1 and 2: rules over the layers below.
  std::vector<GeneratedPred> current = lower;
  for (std::size_t layer = 1; layer <= 2; ++layer) {
    std::vector<GeneratedPred> added;
    for (std::size_t pi = 0; pi < 1 + pick(2); ++pi) {
      GeneratedPred pred{"g" + std::to_string(layer) + std::to_string(pi),
                         1 + pick(2)};
      std::size_t n = 1 + pick(2);
      for (std::size_t ci = 0; ci < n; ++ci) {
        auto arg = [&]() -> TermPtr {
          return pick(2) == 0 ? make_variable(var_names[pick(var_names.size())])
                              : constants[pick(constants.size())];
        };
        std::vector<TermPtr> head_args;
        for (std::size_t ai = 0; ai < pred.arity; ++ai) head_args.push_back(arg());
        std::vector<TermPtr> body;
        std::size_t literals = 1 + pick(2);
        for (std::size_t li = 0; li < literals; ++li) {
          const GeneratedPred& callee = current[pick(current.size())];
          std::vector<TermPtr> body_args;
          for (std::size_t ai = 0; ai < callee.arity; ++ai)
            body_args.push_back(arg());
          body.push_back(make_compound(callee.name, std::move(body_args)));
        }
        prog.clauses.push_back(Clause{make_compound(pred.name, std::move(head_args)),
                                      std::move(body), std::nullopt, 1});
      }
      added.push_back(pred);
    }
    current.insert(current.end(), added.begin(), added.end());
  }

  // Label every group with exact probabilities summing to one.
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < prog.clauses.size(); ++i)
    groups[prog.clauses[i].head->name].push_back(i);
  for (const auto& [name, idx] : groups) {
    (void)name;
    if (idx.size() == 2 && pick(2) == 0) {
      prog.clauses[idx[0]].prob = rat(1, 4);
      prog.clauses[idx[1]].prob = rat(3, 4);
    } else {
      for (std::size_t i : idx)
        prog.clauses[i].prob = Rational(1, BigInt(idx.size()));
    }
  }
  return prog;
}

}  // namespace

TEST_CASE("root estimation matches the ground enumeration oracle") {
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 12; ++trial) {
    CAPTURE(trial);
    Program prog = random_layered_program(rng);
    Oracle oracle(prog);
    REQUIRE(!oracle.pool.empty());

    Signature sig = sig_of(prog, empty_kb(), empty_ev(), false);
    REQUIRE(sig.function_choices() == 0);
    SsldSolver solver(prog, empty_kb(), sig, 50);

    std::set<std::pair<std::string, std::size_t>> preds;
    for (const Clause& c : prog.clauses)
      preds.insert({c.head->name, c.head->arity()});

    for (const auto& [name, arity] : preds) {
      CAPTURE(name);
      const PredicateDistribution& d = solver.distribution({name, arity});
      // Every Herbrand atom of this predicate agrees exactly.
      std::vector<std::size_t> pick(arity, 0);
      Rational oracle_mass(0);
      for (;;) {
        std::vector<TermPtr> args;
        for (std::size_t i = 0; i < arity; ++i) args.push_back(oracle.pool[pick[i]]);
        TermPtr atom = make_compound(name, std::move(args));
        Rational expect = oracle.prob(atom);
        oracle_mass += expect;
        auto it = d.entries.find(term_to_string(atom));
        Rational got = it == d.entries.end() ? Rational(0) : it->second;
        CHECK(got == expect);
        CHECK(solver.example_raw(atom) == expect);
        std::size_t i = 0;
        while (i < pick.size() && ++pick[i] == oracle.pool.size()) pick[i++] = 0;
        if (i == pick.size()) break;
      }
      CHECK(d.mass == oracle_mass);
    }
  }
}
