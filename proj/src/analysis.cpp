#include "mmlcost/analysis.hpp"

#include "mmlcost/builtins.hpp"

#include <map>
#include <set>
#include <utility>

namespace mmlcost {

namespace {

SymbolId head_symbol(const TermPtr& t) {
  return SymbolId{t->name, t->arity()};
}

// Distinct predicates the evidence talks about, in first-appearance order.
std::vector<SymbolId> evidence_predicates(const Program& evidence) {
  std::vector<SymbolId> preds;
  for (const auto& c : evidence.clauses) {
    SymbolId id = head_symbol(c.head);
    bool seen = false;
    for (const auto& p : preds) {
      if (p == id) {
        seen = true;
        break;
      }
    }
    if (!seen) {
      preds.push_back(id);
    }
  }
  return preds;
}

Bits program_part(const CostBreakdown& b) {
  return b.rules + b.lexicon + b.heads + b.bodies + b.vars + b.prob;
}

}  // namespace

Analysis analyze(const Program& program, const Program& kb,
                 const Program& evidence, const AnalysisOptions& opts) {
  Analysis a;
  a.options = opts;
  a.program = normalize(program, opts.normalize);
  a.kb = normalize(kb, opts.normalize);
  a.evidence = evidence;
  a.sig = extract_signature(a.program, a.kb, evidence, opts.flags);
  a.solver = std::make_shared<SsldSolver>(a.program, a.kb, a.sig,
                                          opts.max_depth, opts.record_trees);

  std::vector<EvidenceItem> covered;
  std::vector<std::string> uncovered;
  for (const auto& c : a.evidence.clauses) {
    ExampleReport report;
    report.atom = c.head;
    report.reps = c.reps;
    auto p = a.solver->example_probability(c.head);
    if (p && *p > Rational{0}) {
      report.probability = *p;
      covered.push_back(EvidenceItem{c.head, c.reps, *p});
    } else {
      a.partial = true;
      uncovered.push_back(term_to_string(c.head));
      a.warnings.push_back("example " + uncovered.back() +
                           " is not covered by the program; left out of the "
                           "evidence cost");
    }
    a.examples.push_back(std::move(report));
  }

  a.breakdown =
      cost_program(a.program, a.kb, a.evidence, opts.flags, opts.rulesprob);
  if (!covered.empty()) {
    a.breakdown.examples = cost_evidence(covered);
  }
  a.breakdown.total = program_part(a.breakdown) + a.breakdown.examples +
                      a.breakdown.kb;

  for (const auto& w : a.solver->warnings()) {
    a.warnings.push_back(w);
  }
  if (opts.strict) {
    if (!uncovered.empty()) {
      throw UncoveredExampleError{uncovered.front()};
    }
    for (const auto& w : a.solver->warnings()) {
      if (w.find("unbound") != std::string::npos) {
        throw EscalatedWarningError{w};
      }
    }
  }

  if (opts.compare_ec || opts.compare_mc || opts.compare_pc) {
    // The flat theory coding counts every observed constant whether or not
    // the main run treats numerals as function symbols.
    AnalysisFlags pool_flags;
    pool_flags.include_numbers = true;
    pool_flags.include_predefined = false;
    Signature pool_sig = extract_signature(a.program, a.kb, evidence, pool_flags);
    const Bits flat_theory = simplistic_theory_cost(
        a.program, pool_sig.predicate_choices(), pool_sig.funcs.size());

    if (opts.compare_ec) {
      ComparisonEntry ec;
      ec.theory = program_part(a.breakdown);
      ec.evidence = a.breakdown.examples;
      a.ec = ec;
    }
    if (opts.compare_mc) {
      ComparisonEntry mc;
      mc.theory = flat_theory;
      AnalysisFlags bare_flags;
      bare_flags.include_numbers = false;
      bare_flags.include_predefined = false;
      Signature bare_sig =
          extract_signature(a.program, a.kb, evidence, bare_flags);
      if (!bare_sig.funcs.empty()) {
        mc.note = "model is infinite (function symbols present)";
      } else {
        std::uint64_t q = 0;
        bool truncated = false;
        for (const auto& pred : evidence_predicates(a.evidence)) {
          if (!a.solver->covered(pred)) {
            continue;
          }
          const PredicateDistribution& dist = a.solver->distribution(pred);
          truncated = truncated || dist.truncated;
          q += dist.entries.size();
        }
        if (truncated) {
          mc.note = "model is infinite (ground expansion overflowed)";
        } else {
          std::uint64_t e = 0;
          std::set<std::string> counted;
          for (const auto& c : a.evidence.clauses) {
            SymbolId pred = head_symbol(c.head);
            if (!a.solver->covered(pred)) {
              continue;
            }
            const auto& entries = a.solver->distribution(pred).entries;
            std::string key = term_to_string(c.head);
            if (entries.count(key) && counted.insert(key).second) {
              ++e;
            }
          }
          mc.evidence = cost_evidence_mc(q, e);
        }
      }
      a.mc = mc;
    }
    if (opts.compare_pc) {
      ComparisonEntry pc;
      pc.theory = flat_theory;
      std::vector<EvidenceItem> items;
      for (const auto& c : a.evidence.clauses) {
        items.push_back(EvidenceItem{c.head, c.reps, Rational{1}});
      }
      PcEvidence coded = cost_evidence_pc(items, *a.solver);
      pc.evidence = coded.bits;
      if (!coded.uncovered.empty()) {
        pc.note = "left out " + std::to_string(coded.uncovered.size()) +
                  " underivable example(s)";
      }
      a.pc = pc;
    }
  }
  return a;
}

}  // namespace mmlcost
