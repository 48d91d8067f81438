#include "mmlcost/signature.hpp"

#include "mmlcost/builtins.hpp"

#include <set>

namespace mmlcost {

std::size_t Signature::predicate_choices() const {
  std::size_t n = program_preds.size() + kb_preds.size();
  if (flags.include_predefined) {
    n += predefined_preds.size();
  }
  return n;
}

std::size_t Signature::function_choices() const { return funcs.size(); }

std::vector<SymbolId> Signature::coded_preds() const {
  std::vector<SymbolId> out = program_preds;
  if (flags.include_predefined) {
    out.insert(out.end(), predefined_preds.begin(), predefined_preds.end());
  }
  return out;
}

namespace {

class Collector {
 public:
  Collector(const AnalysisFlags& flags, std::set<SymbolId> defined_in_prog,
            std::set<SymbolId> defined_in_kb)
      : flags_(flags),
        defined_in_prog_(std::move(defined_in_prog)),
        defined_in_kb_(std::move(defined_in_kb)) {
    sig_.flags = flags;
  }

  void literal(const TermPtr& t, bool from_kb) {
    const SymbolId id{t->name, t->kind == TermKind::compound ? t->arity() : 0};
    if (is_predefined(id.first, id.second)) {
      add(sig_.predefined_preds, seen_predefined_, id);
    } else if (defined_in_kb_.count(id)) {
      add(sig_.kb_preds, seen_kb_, id);
    } else if (defined_in_prog_.count(id)) {
      add(sig_.program_preds, seen_prog_, id);
    } else if (from_kb) {
      // Used but never defined: attributed to the side that mentions it.
      add(sig_.kb_preds, seen_kb_, id);
    } else {
      add(sig_.program_preds, seen_prog_, id);
    }
    if (t->kind == TermKind::compound) {
      for (const auto& a : t->args) {
        argument(a);
      }
    }
  }

  void argument(const TermPtr& t) {
    switch (t->kind) {
      case TermKind::variable:
        return;
      case TermKind::numeric:
        if (flags_.include_numbers) {
          add(sig_.funcs, seen_funcs_, {term_to_string(t), 0});
        }
        return;
      case TermKind::atom:
      case TermKind::compound: {
        const SymbolId id{t->name,
                          t->kind == TermKind::compound ? t->arity() : 0};
        if (is_predefined(id.first, id.second)) {
          // Predefined names stay predicates wherever they occur (the
          // arithmetic functors), never function symbols.
          add(sig_.predefined_preds, seen_predefined_, id);
        } else {
          add(sig_.funcs, seen_funcs_, id);
        }
        if (t->kind == TermKind::compound) {
          for (const auto& a : t->args) {
            argument(a);
          }
        }
        return;
      }
    }
  }

  Signature take() { return std::move(sig_); }

 private:
  static void add(std::vector<SymbolId>& order, std::set<SymbolId>& seen,
                  const SymbolId& id) {
    if (seen.insert(id).second) {
      order.push_back(id);
    }
  }

  AnalysisFlags flags_;
  std::set<SymbolId> defined_in_prog_;
  std::set<SymbolId> defined_in_kb_;
  Signature sig_;
  std::set<SymbolId> seen_prog_, seen_kb_, seen_predefined_, seen_funcs_;
};

std::set<SymbolId> head_definitions(const Program& p) {
  std::set<SymbolId> out;
  for (const auto& c : p.clauses) {
    out.insert({c.head->name,
                c.head->kind == TermKind::compound ? c.head->arity() : 0});
  }
  return out;
}

}  // namespace

Signature extract_signature(const Program& prog, const Program& kb,
                            const Program& evidence,
                            const AnalysisFlags& flags) {
  std::set<SymbolId> in_prog = head_definitions(prog);
  std::set<SymbolId> in_kb = head_definitions(kb);
  for (const auto& id : in_prog) {
    if (in_kb.count(id)) {
      throw DuplicateDefinitionError{id};
    }
  }

  Collector collector(flags, std::move(in_prog), std::move(in_kb));
  for (const auto& c : prog.clauses) {
    collector.literal(c.head, false);
    for (const auto& b : c.body) {
      collector.literal(b, false);
    }
  }
  for (const auto& c : kb.clauses) {
    collector.literal(c.head, true);
    for (const auto& b : c.body) {
      collector.literal(b, true);
    }
  }
  // Evidence only contributes function symbols; its predicates are the
  // program's own.
  for (const auto& c : evidence.clauses) {
    if (c.head->kind == TermKind::compound) {
      for (const auto& a : c.head->args) {
        collector.argument(a);
      }
    }
  }
  return collector.take();
}

std::pair<std::uint64_t, std::uint64_t> count_variable_positions(
    const Clause& clause) {
  std::vector<std::string> names;
  collect_variables(clause.head, names);
  for (const auto& b : clause.body) {
    collect_variables(b, names);
  }
  const std::uint64_t d = names.size();
  std::set<std::string> distinct(names.begin(), names.end());
  return {d, distinct.size()};
}

}  // namespace mmlcost
