#include "mmlcost/cli.hpp"

#include "mmlcost/analysis.hpp"
#include "mmlcost/format.hpp"
#include "mmlcost/reader.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace mmlcost {

namespace {

// Exit codes of the reporting contract.  3, 10, 11 and 13 are reserved by
// that contract for environments this build does not have.
enum ExitCode {
  exit_ok = 0,
  exit_unreadable_file = 1,
  exit_usage = 2,
  exit_vars_in_evidence = 4,
  exit_uncovered_example = 5,
  exit_body_in_evidence = 6,
  exit_bad_repetition = 7,
  exit_code_errors = 8,
  exit_unsolvable_normalization = 9,
  exit_role_violation = 12,
  exit_duplicate_definition = 14,
  exit_nonterminating_rule = 15,
  exit_sum_differs_from_one = 16,
  exit_incompatible_options = 17,
  exit_objective_in_evidence = 18,
};

const char k_help[] =
    R"( It determines the MML cost of a Prolog program
 Arguments:

   --examples=e1,e2...  Files with the examples as clauses
   --kb=kb1,kb2...      Files with the knowledge base
   --debug              Detailed evaluation process
   --warnings=off       With 'on', warnings issued while solving
                        also abort the execution of the tool
   --precision=0.00001  Maximum error allowed in operations
                        You can also use num. of digits (<=15)
   --dialect=cprolog    Dialect type: cprolog,iso,sicstus
   --predefined         Show the cost of predef predicates
   --numbers            Consider the numbers function symbols
   --normalize=on       Normalize to 1 the sum of probs with
                        same predicate ('off' to disable)
   --rulesprob=zerobitslast  Treatment done to probs of rules:
                        -zerobitslast: Only the relevant (def)
                        -notlast: The last rule prob is ignored
                        -all: All of them
   --compare=ec,mc,pc   Also report the baseline codings
   --tabled             Show summarized results
   --maxrecursion=20    Max SLD-resolution derivations
   [file1.pl..fileN.pl] At least one file with a prolog
                        program (-- for stdin)
)";

int usage_error(std::ostream& err, const std::string& message) {
  err << "error: " << message << "\n" << k_help;
  return exit_usage;
}

bool parse_precision(const std::string& text, double& precision, int& digits) {
  if (!text.empty() &&
      text.find_first_not_of("0123456789") == std::string::npos) {
    // digit-count form
    if (text.size() > 2) {
      return false;
    }
    const int d = std::stoi(text);
    if (d < 1 || d > 15) {
      return false;
    }
    digits = d;
    precision = std::pow(10.0, -d);
    return true;
  }
  double v = 0;
  try {
    std::size_t pos = 0;
    v = std::stod(text, &pos);
    if (pos != text.size()) {
      return false;
    }
  } catch (const std::exception&) {
    return false;
  }
  if (!(v >= 1e-15 && v <= 1e-1)) {
    return false;
  }
  precision = v;
  digits = static_cast<int>(std::lround(-std::log10(v)));
  digits = std::max(1, std::min(15, digits));
  return true;
}

std::string base_name(const std::string& path) {
  std::string name = path;
  const std::size_t slash = name.find_last_of('/');
  if (slash != std::string::npos) {
    name = name.substr(slash + 1);
  }
  if (name.size() > 3 && name.compare(name.size() - 3, 3, ".pl") == 0) {
    name = name.substr(0, name.size() - 3);
  }
  return name;
}

struct Source {
  std::string path;  // as given on the command line, or "stdin"
  Program prog;
};

int reader_exit_code(ReaderErrorKind kind) {
  switch (kind) {
    case ReaderErrorKind::variables_in_evidence:
      return exit_vars_in_evidence;
    case ReaderErrorKind::body_in_evidence:
      return exit_body_in_evidence;
    case ReaderErrorKind::bad_repetition:
      return exit_bad_repetition;
    case ReaderErrorKind::role_violation:
      return exit_role_violation;
    case ReaderErrorKind::objective_in_evidence:
      return exit_objective_in_evidence;
    case ReaderErrorKind::syntax:
      break;
  }
  return exit_code_errors;
}

class CliError {
 public:
  CliError(int code, std::string message)
      : code_(code), message_(std::move(message)) {}
  int report(std::ostream& err) const {
    err << "error: " << message_ << '\n';
    return code_;
  }

 private:
  int code_;
  std::string message_;
};

std::string slurp_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    throw CliError(exit_unreadable_file, "cannot read file '" + path + "'");
  }
  std::ostringstream os;
  os << f.rdbuf();
  if (f.bad()) {
    throw CliError(exit_unreadable_file, "cannot read file '" + path + "'");
  }
  return os.str();
}

Source load(const std::string& path, Role role, double precision) {
  SourceUnit unit;
  unit.text = slurp_file(path);
  unit.origin = path;
  unit.role = role;
  try {
    return Source{path, read_program(unit, precision)};
  } catch (const ReaderError& e) {
    throw CliError(reader_exit_code(e.kind),
                   e.origin + ":" + std::to_string(e.line) + ":" +
                       std::to_string(e.column) + ": " + e.message);
  }
}

int analysis_exit_code_run(const std::vector<Source>& programs,
                           const std::vector<Source>& evidences,
                           const std::vector<Source>& kbs,
                           const AnalysisOptions& opts, int digits,
                           bool tabled, bool debug, std::ostream& out,
                           std::ostream& err) {
  Program kb;
  kb.role = Role::knowledge_base;
  std::string kb_names_plain;
  std::string kb_names_tabled;
  for (const auto& k : kbs) {
    kb.clauses.insert(kb.clauses.end(), k.prog.clauses.begin(),
                      k.prog.clauses.end());
    kb_names_plain += " + " + k.path;
    kb_names_tabled += "+" + base_name(k.path);
  }

  std::ostringstream report;
  if (tabled) {
    report << tabled_header();
  }
  bool first = true;
  for (const auto& prog : programs) {
    // A missing evidence list still produces one report per program.
    const std::size_t n_pairs = evidences.empty() ? 1 : evidences.size();
    for (std::size_t j = 0; j < n_pairs; ++j) {
      const Source* ev = evidences.empty() ? nullptr : &evidences[j];
      Program empty_evidence;
      empty_evidence.role = Role::evidence;

      Analysis a;
      try {
        a = analyze(prog.prog, kb, ev ? ev->prog : empty_evidence, opts);
      } catch (const NormalizationError& e) {
        if (e.kind == NormalizationErrorKind::sum_differs_from_one) {
          throw CliError(exit_sum_differs_from_one,
                         "probabilities of " + e.predicate +
                             " do not sum to 1 and normalization is off");
        }
        throw CliError(exit_unsolvable_normalization,
                       "cannot normalize " + e.predicate +
                           ": labeled probabilities leave no share for the "
                           "unlabeled clauses");
      } catch (const DuplicateDefinitionError& e) {
        throw CliError(exit_duplicate_definition,
                       "predicate " + e.symbol.first + "/" +
                           std::to_string(e.symbol.second) +
                           " is defined in both the program and the "
                           "knowledge base");
      } catch (const SignatureError& e) {
        throw CliError(exit_code_errors, e.message);
      } catch (const NonTerminatingRuleError& e) {
        throw CliError(exit_nonterminating_rule,
                       "head repeated in the body without reduction: " +
                           e.clause);
      } catch (const UncoveredExampleError& e) {
        throw CliError(exit_uncovered_example,
                       "example " + e.atom +
                           " does not match any program or KB head");
      } catch (const EscalatedWarningError& e) {
        throw CliError(exit_code_errors, e.message);
      }

      for (const auto& w : a.warnings) {
        err << "%% " << w << '\n';
      }

      if (tabled) {
        std::string name = base_name(prog.path);
        if (ev) {
          name += "+" + base_name(ev->path);
        }
        name += kb_names_tabled;
        report << format_tabled_row(a, name, digits);
      } else {
        std::string name = prog.path;
        if (ev) {
          name += " + " + ev->path;
        }
        name += kb_names_plain;
        if (!first) {
          report << '\n';
        }
        report << format_plain(a, name, digits, debug);
      }
      first = false;
    }
  }
  out << report.str();
  return exit_ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in,
            std::ostream& out, std::ostream& err) {
  std::vector<std::string> argv;
  bool use_stdin = false;
  for (const auto& a : args) {
    if (a == "--") {
      use_stdin = true;
      continue;
    }
    argv.push_back(a);
  }

  CLI::App app{"It determines the MML cost of a Prolog program"};
  std::vector<std::string> example_files;
  std::vector<std::string> kb_files;
  std::vector<std::string> program_files;
  std::vector<std::string> compare;
  bool debug = false;
  bool tabled = false;
  bool predefined = false;
  bool numbers = false;
  std::string warnings = "off";
  std::string dialect;
  std::string normalize = "on";
  std::string rulesprob = "zerobitslast";
  std::string precision_text = "0.00001";
  std::uint64_t maxrecursion = 20;

  // Lists travel in one comma-separated value; never swallow the tokens
  // that follow, they are program files.
  app.add_option("--examples", example_files)
      ->delimiter(',')
      ->allow_extra_args(false);
  app.add_option("--kb", kb_files)->delimiter(',')->allow_extra_args(false);
  app.add_flag("--debug", debug);
  app.add_option("--warnings", warnings);
  app.add_option("--precision", precision_text);
  app.add_option("--dialect", dialect);
  app.add_flag("--predefined", predefined);
  app.add_flag("--numbers", numbers);
  app.add_option("--normalize", normalize);
  app.add_option("--rulesprob", rulesprob);
  app.add_option("--compare", compare)->delimiter(',')->allow_extra_args(false);
  app.add_flag("--tabled", tabled);
  app.add_option("--maxrecursion", maxrecursion);
  app.add_option("files", program_files);

  try {
    std::reverse(argv.begin(), argv.end());
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << k_help;
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    return usage_error(err, e.what());
  }

  if (warnings != "on" && warnings != "off") {
    return usage_error(err, "--warnings accepts on or off");
  }
  if (normalize != "on" && normalize != "off") {
    return usage_error(err, "--normalize accepts on or off");
  }
  if (rulesprob != "zerobitslast" && rulesprob != "notlast" &&
      rulesprob != "all") {
    return usage_error(err, "--rulesprob accepts zerobitslast, notlast or all");
  }
  if (!dialect.empty()) {
    if (dialect != "cprolog" && dialect != "iso" && dialect != "sicstus") {
      return usage_error(err, "--dialect accepts cprolog, iso or sicstus");
    }
    err << "%% option --dialect=" << dialect
        << " is accepted for compatibility and ignored\n";
  }
  double precision = 1e-5;
  int digits = 5;
  if (!parse_precision(precision_text, precision, digits)) {
    return usage_error(err, "--precision expects a value in [1e-15, 0.1] or "
                            "a digit count up to 15");
  }
  if (maxrecursion == 0) {
    return usage_error(err, "--maxrecursion expects a positive integer");
  }
  AnalysisOptions opts;
  opts.flags.include_numbers = numbers;
  opts.flags.include_predefined = predefined;
  opts.normalize = normalize == "on" ? NormalizeMode::on : NormalizeMode::off;
  opts.rulesprob = rulesprob == "zerobitslast" ? RulesProbMode::zerobitslast
                   : rulesprob == "notlast"    ? RulesProbMode::notlast
                                               : RulesProbMode::all;
  opts.precision = precision;
  opts.max_depth = maxrecursion;
  opts.strict = warnings == "on";
  opts.record_trees = debug;
  for (const auto& c : compare) {
    if (c == "ec") {
      opts.compare_ec = true;
    } else if (c == "mc") {
      opts.compare_mc = true;
    } else if (c == "pc") {
      opts.compare_pc = true;
    } else {
      return usage_error(err, "--compare accepts ec, mc or pc");
    }
  }
  if (opts.normalize == NormalizeMode::off &&
      opts.rulesprob == RulesProbMode::zerobitslast) {
    err << "error: incompatible options: --normalize=off needs "
           "--rulesprob=notlast or --rulesprob=all\n";
    return exit_incompatible_options;
  }
  if (program_files.empty() && !use_stdin) {
    return usage_error(err, "at least one program file is required");
  }

  try {
    std::vector<Source> programs;
    for (const auto& path : program_files) {
      programs.push_back(load(path, Role::program, precision));
    }
    if (use_stdin) {
      SourceUnit unit;
      std::ostringstream text;
      text << in.rdbuf();
      unit.text = text.str();
      unit.origin = "stdin";
      unit.role = Role::program;
      try {
        programs.push_back(Source{"stdin", read_program(unit, precision)});
      } catch (const ReaderError& e) {
        throw CliError(reader_exit_code(e.kind),
                       e.origin + ":" + std::to_string(e.line) + ":" +
                           std::to_string(e.column) + ": " + e.message);
      }
    }
    for (const auto& p : programs) {
      if (p.prog.clauses.empty()) {
        throw CliError(exit_code_errors,
                       p.path + ": program contains no clauses");
      }
    }
    std::vector<Source> evidences;
    for (const auto& path : example_files) {
      evidences.push_back(load(path, Role::evidence, precision));
    }
    std::vector<Source> kbs;
    for (const auto& path : kb_files) {
      kbs.push_back(load(path, Role::knowledge_base, precision));
    }
    return analysis_exit_code_run(programs, evidences, kbs, opts, digits,
                                  tabled, debug, out, err);
  } catch (const CliError& e) {
    return e.report(err);
  }
}

}  // namespace mmlcost
