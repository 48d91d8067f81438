#include "mmlcost/format.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

namespace mmlcost {

namespace {

std::string fixed(Bits v, int digits) {
  if (std::fabs(v) < 1e-15) {
    v = 0;  // keep "-0.00000" out of the report
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double rational_double(const Rational& r) {
  return r.numerator().convert_to<double>() /
         r.denominator().convert_to<double>();
}

std::string symbol_list(const std::vector<SymbolId>& ids) {
  std::string out = "[";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) {
      out += ',';
    }
    out += ids[i].first + "/" + std::to_string(ids[i].second);
  }
  return out + "]";
}

Bits program_part(const CostBreakdown& b) {
  return b.rules + b.lexicon + b.heads + b.bodies + b.vars + b.prob;
}

void append_comparison(std::ostringstream& os, const char* tag,
                       const ComparisonEntry& e, int digits) {
  os << "        " << tag << ": theory " << fixed(e.theory, digits) << " bits";
  if (e.evidence) {
    os << ", evidence " << fixed(*e.evidence, digits) << " bits, total "
       << fixed(e.theory + *e.evidence, digits) << " bits";
    if (!e.note.empty()) {
      os << " (" << e.note << ")";
    }
  } else {
    os << ", evidence n/a (" << e.note << ")";
  }
  os << '\n';
}

void dump_tree(std::ostringstream& os, const DerivationNode& node, int depth,
               int digits) {
  os << "-- ";
  for (int i = 0; i < depth; ++i) {
    os << "    ";
  }
  os << term_to_string(node.goal);
  if (!node.label.empty()) {
    os << "  " << node.label;
  }
  os << " (prob:" << fixed(rational_double(node.step_prob), digits) << ")\n";
  for (const auto& child : node.children) {
    dump_tree(os, *child, depth + 1, digits);
  }
}

void append_debug(std::ostringstream& os, const Analysis& a, int digits) {
  const Signature& sig = a.sig;
  const std::size_t n_p = sig.predicate_choices();
  const std::size_t n_f = sig.function_choices();
  for (std::size_t i = 0; i < a.program.clauses.size(); ++i) {
    Program one;
    one.role = a.program.role;
    one.clauses.push_back(a.program.clauses[i]);
    const Bits h = cost_heads(one, n_p, n_f, a.options.flags);
    const Bits b = cost_bodies(one, n_p, n_f, a.options.flags);
    const Bits v = cost_vars(one);
    os << "-- #" << (i + 1) << " rule cost: Header:" << fixed(h, digits)
       << " Body:" << fixed(b, digits) << " Vars:" << fixed(v, digits)
       << '\n';
    Clause display = a.program.clauses[i];
    const std::optional<Rational> label = display.prob;
    display.prob.reset();
    os << "--    ";
    if (label) {
      os << fixed(rational_double(*label), digits) << " :: ";
    }
    os << clause_to_string(display, a.program.role) << '\n';
  }
  for (const auto& pred : sig.program_preds) {
    if (!a.solver->covered(pred)) {
      continue;
    }
    const PredicateDistribution& dist = a.solver->distribution(pred);
    os << "-- ssld " << pred.first << "/" << pred.second
       << ": mass=" << fixed(rational_double(dist.mass), digits)
       << " pruned=" << fixed(rational_double(dist.pruned), digits)
       << " answers=" << dist.answers.size() << '\n';
    if (const DerivationNode* tree = a.solver->tree(pred)) {
      for (const auto& child : tree->children) {
        dump_tree(os, *child, 1, digits);
      }
    } else {
      for (const auto& ans : dist.answers) {
        os << "--     " << term_to_string(ans.atom)
           << " (prob:" << fixed(rational_double(ans.raw), digits) << ")\n";
      }
    }
  }
  for (const auto& ex : a.examples) {
    os << "-- example " << term_to_string(ex.atom) << ": times=" << ex.reps;
    if (ex.probability) {
      os << " probability=" << fixed(rational_double(*ex.probability), digits);
    } else {
      os << " not covered";
    }
    os << '\n';
  }
}

}  // namespace

std::string tabled_header() {
  return ";name;Total;Program;CRule;CLexicon;NP;NF;CHeads;CBodies;CVars;"
         "CProb;CExamples;CKnowledgeBase;Predicates;FunctionSymbols;\n";
}

std::string format_tabled_row(const Analysis& a, const std::string& name,
                              int digits) {
  const CostBreakdown& b = a.breakdown;
  std::vector<SymbolId> preds = a.sig.program_preds;
  preds.insert(preds.end(), a.sig.kb_preds.begin(), a.sig.kb_preds.end());
  std::ostringstream os;
  os << ';' << name << ';' << fixed(b.total, digits) << ';'
     << fixed(program_part(b), digits) << ';' << fixed(b.rules, digits) << ';'
     << fixed(b.lexicon, digits) << ';' << b.counts.n_preds << ';'
     << b.counts.n_funcs << ';' << fixed(b.heads, digits) << ';'
     << fixed(b.bodies, digits) << ';' << fixed(b.vars, digits) << ';'
     << fixed(b.prob, digits) << ';' << fixed(b.examples, digits) << ';'
     << fixed(b.kb, digits) << ';' << symbol_list(preds) << ';'
     << symbol_list(a.sig.funcs) << ";\n";
  return os.str();
}

std::string format_plain(const Analysis& a, const std::string& name,
                         int digits, bool debug) {
  const CostBreakdown& b = a.breakdown;
  std::ostringstream os;
  if (debug) {
    append_debug(os, a, digits);
  }
  const std::vector<SymbolId> coded = a.sig.coded_preds();
  os << name << '\n';
  os << "  Total cost: " << fixed(b.total, digits) << " bits\n";
  os << "     Cost of program: " << fixed(program_part(b), digits)
     << " bits\n";
  os << "        Cost of " << b.counts.n_rules
     << " rules: " << fixed(b.rules, digits) << " bits\n";
  os << "        Cost of lexicon: " << fixed(b.lexicon, digits) << " bits\n";
  os << "             of  " << coded.size() << " predicates "
     << symbol_list(coded) << '\n';
  os << "             and " << a.sig.funcs.size() << " function symbols "
     << symbol_list(a.sig.funcs) << '\n';
  os << "        Cost of heads: " << fixed(b.heads, digits) << " bits\n";
  os << "        Cost of bodies: " << fixed(b.bodies, digits) << " bits\n";
  os << "        Cost of vars: " << fixed(b.vars, digits) << " bits\n";
  os << "        Cost of probabilities: " << fixed(b.prob, digits)
     << " bits\n";
  os << "     Cost of examples: " << fixed(b.examples, digits) << " bits\n";
  os << "     Cost of knowledge base: " << fixed(b.kb, digits) << " bits\n";
  if (a.ec || a.mc || a.pc) {
    os << "     Comparison codings:\n";
    if (a.ec) {
      append_comparison(os, "EC", *a.ec, digits);
    }
    if (a.mc) {
      append_comparison(os, "MC", *a.mc, digits);
    }
    if (a.pc) {
      append_comparison(os, "PC", *a.pc, digits);
    }
  }
  return os.str();
}

}  // namespace mmlcost
