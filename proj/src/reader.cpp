#include "mmlcost/reader.hpp"

#include "mmlcost/numcode.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace mmlcost {

namespace {

enum class Tok { atom, variable, integer, floating, punct, end_clause, eof };

struct Token {
  Tok kind = Tok::eof;
  std::string text;
  Rational value;  // numbers only
  bool quoted = false;
  int line = 1;
  int column = 1;
};

bool symbol_char(char c) {
  static const std::string set = "+-*/\\^<>=~:.?@#&";
  return set.find(c) != std::string::npos;
}

class Lexer {
 public:
  Lexer(const std::string& text, std::string origin)
      : text_(text), origin_(std::move(origin)) {}

  Token next() {
    skip_layout();
    Token t;
    t.line = line_;
    t.column = column_;
    if (pos_ >= text_.size()) {
      t.kind = Tok::eof;
      return t;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return number(t);
    }
    if (c == '_' || std::isupper(static_cast<unsigned char>(c))) {
      t.kind = Tok::variable;
      t.text = identifier();
      return t;
    }
    if (std::islower(static_cast<unsigned char>(c))) {
      t.kind = Tok::atom;
      t.text = identifier();
      return t;
    }
    if (c == '\'') {
      t.kind = Tok::atom;
      t.quoted = true;
      t.text = quoted_atom();
      return t;
    }
    if (c == '(' || c == ')' || c == '[' || c == ']' || c == ',' || c == '|' ||
        c == ';') {
      advance();
      t.kind = Tok::punct;
      t.text = std::string(1, c);
      return t;
    }
    if (c == '.' && end_of_clause_dot()) {
      advance();
      t.kind = Tok::end_clause;
      t.text = ".";
      return t;
    }
    if (symbol_char(c)) {
      t.kind = Tok::punct;
      while (pos_ < text_.size() && symbol_char(text_[pos_])) {
        t.text += text_[pos_];
        advance();
      }
      return t;
    }
    fail("unexpected character '" + std::string(1, c) + "'");
    return t;  // unreachable
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ReaderError{ReaderErrorKind::syntax, message, line_, column_,
                      origin_};
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_layout() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') {
          advance();
        }
      } else if (c == '/' && pos_ + 1 < text_.size() &&
                 text_[pos_ + 1] == '*') {
        advance();
        advance();
        while (pos_ + 1 < text_.size() &&
               !(text_[pos_] == '*' && text_[pos_ + 1] == '/')) {
          advance();
        }
        if (pos_ + 1 >= text_.size()) {
          fail("unterminated block comment");
        }
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  bool end_of_clause_dot() const {
    if (pos_ + 1 >= text_.size()) {
      return true;
    }
    const char n = text_[pos_ + 1];
    return std::isspace(static_cast<unsigned char>(n)) || n == '%';
  }

  std::string identifier() {
    std::string out;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
        out += c;
        advance();
      } else {
        break;
      }
    }
    return out;
  }

  std::string quoted_atom() {
    advance();  // opening quote
    std::string out;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\\' && pos_ + 1 < text_.size()) {
        advance();
        out += text_[pos_];
        advance();
      } else if (c == '\'') {
        advance();
        if (pos_ < text_.size() && text_[pos_] == '\'') {
          out += '\'';  // doubled quote
          advance();
        } else {
          return out;
        }
      } else {
        out += c;
        advance();
      }
    }
    fail("unterminated quoted atom");
    return out;  // unreachable
  }

  Token number(Token t) {
    std::string digits;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      digits += text_[pos_];
      advance();
    }
    bool is_float = false;
    std::string frac;
    if (pos_ + 1 < text_.size() && text_[pos_] == '.' &&
        std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      is_float = true;
      advance();
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        frac += text_[pos_];
        advance();
      }
    }
    long exponent = 0;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      bool neg = false;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) {
        neg = text_[look] == '-';
        ++look;
      }
      if (look < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[look]))) {
        while (pos_ < look) {
          advance();
        }
        std::string exp;
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          exp += text_[pos_];
          advance();
        }
        exponent = std::stol(exp) * (neg ? -1 : 1);
        is_float = true;
      }
    }
    // Strip leading zeros: cpp_int would read "025" as octal.
    std::string all = digits + frac;
    std::size_t first = all.find_first_not_of('0');
    BigInt num(first == std::string::npos ? "0" : all.substr(first));
    BigInt den = boost::multiprecision::pow(
        BigInt(10), static_cast<unsigned>(frac.size()));
    Rational value(num, den);
    if (exponent > 0) {
      value *= Rational(boost::multiprecision::pow(
                            BigInt(10), static_cast<unsigned>(exponent)),
                        1);
    } else if (exponent < 0) {
      value /= Rational(boost::multiprecision::pow(
                            BigInt(10), static_cast<unsigned>(-exponent)),
                        1);
    }
    t.kind = is_float ? Tok::floating : Tok::integer;
    t.value = value;
    t.text = digits;
    return t;
  }

  const std::string& text_;
  std::string origin_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

struct InfixOp {
  int prec;
  enum Assoc { xfx, yfx, xfy } assoc;
};

const std::map<std::string, InfixOp>& infix_table() {
  static const std::map<std::string, InfixOp> table = {
      {"is", {700, InfixOp::xfx}},  {"<", {700, InfixOp::xfx}},
      {">", {700, InfixOp::xfx}},   {">=", {700, InfixOp::xfx}},
      {"=<", {700, InfixOp::xfx}},  {"=:=", {700, InfixOp::xfx}},
      {"=\\=", {700, InfixOp::xfx}}, {"=", {700, InfixOp::xfx}},
      {"==", {700, InfixOp::xfx}},  {"\\==", {700, InfixOp::xfx}},
      {"+", {500, InfixOp::yfx}},   {"-", {500, InfixOp::yfx}},
      {"*", {400, InfixOp::yfx}},   {"/", {400, InfixOp::yfx}},
      {"//", {400, InfixOp::yfx}},  {"mod", {400, InfixOp::yfx}},
      {"^", {200, InfixOp::xfy}},   {"**", {200, InfixOp::xfy}},
  };
  return table;
}

class Parser {
 public:
  Parser(const SourceUnit& unit, double precision)
      : lexer_(unit.text, unit.origin),
        origin_(unit.origin),
        role_(unit.role),
        precision_(precision) {
    shift();
  }

  Program parse_unit() {
    Program prog;
    prog.role = role_;
    while (cur_.kind != Tok::eof) {
      prog.clauses.push_back(clause());
    }
    return prog;
  }

 private:
  void shift() {
    cur_ = lookahead_ ? *lookahead_ : lexer_.next();
    lookahead_.reset();
  }

  const Token& peek() {
    if (!lookahead_) {
      lookahead_ = lexer_.next();
    }
    return *lookahead_;
  }

  [[noreturn]] void fail(ReaderErrorKind kind, const std::string& message) {
    throw ReaderError{kind, message, cur_.line, cur_.column, origin_};
  }

  bool at_punct(const std::string& text) const {
    return cur_.kind == Tok::punct && cur_.text == text;
  }

  void expect_punct(const std::string& text) {
    if (!at_punct(text)) {
      fail(ReaderErrorKind::syntax, "expected '" + text + "'");
    }
    shift();
  }

  void check_name(const std::string& name) {
    if (name.rfind("mml_", 0) == 0) {
      fail(ReaderErrorKind::syntax,
           "identifiers starting with mml_ are reserved");
    }
  }

  std::string fresh_anonymous() {
    return "_" + std::to_string(++anon_counter_);
  }

  Clause clause() {
    Clause c;
    // Optional probability label / repetition count.
    if (cur_.kind == Tok::integer || cur_.kind == Tok::floating) {
      const Token number = cur_;
      const Token& after = peek();
      if (after.kind == Tok::punct && after.text == "::") {
        if (role_ == Role::evidence) {
          fail(ReaderErrorKind::role_violation,
               "probability labels are not allowed in example files");
        }
        shift();  // onto ::
        shift();  // past ::
        c.prob = label_from(number);
      } else if (after.kind == Tok::punct && after.text == "/") {
        // n/m :: label, exact rational.
        shift();  // onto /
        shift();  // past /
        if (cur_.kind != Tok::integer) {
          fail(ReaderErrorKind::syntax, "expected integer denominator");
        }
        const Token den = cur_;
        shift();
        if (!at_punct("::")) {
          fail(ReaderErrorKind::syntax, "expected '::' after rational label");
        }
        if (role_ == Role::evidence) {
          fail(ReaderErrorKind::role_violation,
               "probability labels are not allowed in example files");
        }
        shift();
        if (den.value.numerator() == 0) {
          fail(ReaderErrorKind::syntax, "zero denominator in label");
        }
        c.prob = number.value / den.value;
      } else if (after.kind == Tok::punct && after.text == "#") {
        if (role_ != Role::evidence) {
          fail(ReaderErrorKind::role_violation,
               "'#' repetitions are only allowed in example files");
        }
        if (number.kind != Tok::integer || number.value <= Rational(0)) {
          throw ReaderError{ReaderErrorKind::bad_repetition,
                            "repetition count must be a positive integer",
                            number.line, number.column, origin_};
        }
        shift();  // onto #
        shift();  // past #
        c.reps = number.value.numerator().convert_to<std::uint64_t>();
      } else {
        fail(ReaderErrorKind::syntax, "a clause cannot start with a number");
      }
    }

    if (at_punct(":-")) {
      // Objective: gets the dummy head.
      if (role_ == Role::evidence) {
        fail(ReaderErrorKind::objective_in_evidence,
             "objectives are not allowed in example files");
      }
      shift();
      c.head = make_atom("mml_objective");
      c.body = goal_list();
      end_clause();
      return c;
    }

    c.head = primary();
    if (!is_callable(*c.head)) {
      fail(ReaderErrorKind::syntax, "clause head must be an atom or compound");
    }
    if (at_punct(":-")) {
      if (role_ == Role::evidence) {
        fail(ReaderErrorKind::body_in_evidence,
             "example clauses cannot have bodies");
      }
      shift();
      c.body = goal_list();
    }
    end_clause();
    if (role_ == Role::evidence && !is_ground(c.head)) {
      throw ReaderError{ReaderErrorKind::variables_in_evidence,
                        "examples must be ground facts", cur_.line,
                        cur_.column, origin_};
    }
    return c;
  }

  void end_clause() {
    if (cur_.kind != Tok::end_clause) {
      fail(ReaderErrorKind::syntax, "expected '.' at end of clause");
    }
    shift();
  }

  Rational label_from(const Token& t) {
    if (t.kind == Tok::integer) {
      return t.value;
    }
    const double x = t.value.numerator().convert_to<double>() /
                     t.value.denominator().convert_to<double>();
    return rational_approx(x, precision_);
  }

  // Body goals, with `;` groups expanded later by canonize; the tree uses
  // ','/2 and ';'/2 compounds.
  std::vector<TermPtr> goal_list() {
    const TermPtr tree = goal_expr();
    return {tree};
  }

  TermPtr goal_expr() {
    TermPtr left = goal_conj();
    if (at_punct(";")) {
      shift();
      TermPtr right = goal_expr();
      return make_compound(";", {left, right});
    }
    return left;
  }

  TermPtr goal_conj() {
    TermPtr left = goal_atom();
    if (at_punct(",")) {
      shift();
      TermPtr right = goal_conj();
      return make_compound(",", {left, right});
    }
    return left;
  }

  TermPtr goal_atom() {
    if (at_punct("(")) {
      shift();
      TermPtr inner = goal_expr();
      expect_punct(")");
      return inner;
    }
    TermPtr t = expr(700);
    if (!is_callable(*t)) {
      fail(ReaderErrorKind::syntax, "body literal must be callable");
    }
    return t;
  }

  TermPtr expr(int max_prec) {
    TermPtr left = prefix_primary();
    for (;;) {
      std::string op;
      if (cur_.kind == Tok::punct || (cur_.kind == Tok::atom && !cur_.quoted)) {
        op = cur_.text;
      } else {
        break;
      }
      auto it = infix_table().find(op);
      if (it == infix_table().end() || it->second.prec > max_prec) {
        break;
      }
      shift();
      const int sub =
          it->second.assoc == InfixOp::xfy ? it->second.prec
                                           : it->second.prec - 1;
      TermPtr right = expr(sub);
      left = make_compound(op, {left, right});
    }
    return left;
  }

  TermPtr prefix_primary() {
    if (at_punct("-")) {
      shift();
      TermPtr operand = expr(200);
      if (operand->kind == TermKind::numeric) {
        return make_numeric(-operand->value, operand->is_float);
      }
      return make_compound("-", {operand});
    }
    return primary();
  }

  TermPtr primary() {
    switch (cur_.kind) {
      case Tok::variable: {
        std::string name = cur_.text;
        shift();
        if (name[0] == '_') {
          return make_variable(fresh_anonymous(), true);
        }
        check_name(name);
        return make_variable(name);
      }
      case Tok::integer:
      case Tok::floating: {
        const Rational v = cur_.value;
        const bool f = cur_.kind == Tok::floating;
        shift();
        return make_numeric(v, f);
      }
      case Tok::atom: {
        std::string name = cur_.text;
        check_name(name);
        shift();
        if (at_punct("(")) {
          shift();
          std::vector<TermPtr> args;
          args.push_back(expr(999));
          while (at_punct(",")) {
            shift();
            args.push_back(expr(999));
          }
          expect_punct(")");
          return make_compound(std::move(name), std::move(args));
        }
        return make_atom(std::move(name));
      }
      case Tok::punct:
        if (cur_.text == "(") {
          shift();
          TermPtr inner = expr(700);
          expect_punct(")");
          return inner;
        }
        if (cur_.text == "[") {
          return list();
        }
        fail(ReaderErrorKind::syntax, "unexpected '" + cur_.text + "'");
      default:
        fail(ReaderErrorKind::syntax, "unexpected end of input");
    }
  }

  TermPtr list() {
    shift();  // past [
    if (at_punct("]")) {
      shift();
      return make_atom("[]");
    }
    std::vector<TermPtr> items;
    items.push_back(expr(999));
    while (at_punct(",")) {
      shift();
      items.push_back(expr(999));
    }
    TermPtr tail = make_atom("[]");
    if (at_punct("|")) {
      shift();
      tail = expr(999);
    }
    expect_punct("]");
    for (auto it = items.rbegin(); it != items.rend(); ++it) {
      tail = make_compound(".", {*it, tail});
    }
    return tail;
  }

  Lexer lexer_;
  std::string origin_;
  Role role_;
  double precision_;
  Token cur_;
  std::optional<Token> lookahead_;
  int anon_counter_ = 0;
};

// Replaces **/2 by ^/2 throughout.
TermPtr rewrite_pow(const TermPtr& t) {
  if (t->kind != TermKind::compound) {
    return t;
  }
  std::vector<TermPtr> args;
  args.reserve(t->args.size());
  bool changed = false;
  for (const auto& a : t->args) {
    TermPtr na = rewrite_pow(a);
    changed = changed || na.get() != a.get();
    args.push_back(std::move(na));
  }
  if (t->name == "**" && t->arity() == 2) {
    return make_compound("^", std::move(args));
  }
  if (!changed) {
    return t;
  }
  return make_compound(t->name, std::move(args));
}

// Expands the ','/';' tree into the flat conjunction paths.
void expand_paths(const TermPtr& tree,
                  std::vector<std::vector<TermPtr>>& paths) {
  if (tree->kind == TermKind::compound && tree->arity() == 2 &&
      tree->name == ";") {
    std::vector<std::vector<TermPtr>> left, right;
    expand_paths(tree->args[0], left);
    expand_paths(tree->args[1], right);
    paths.insert(paths.end(), left.begin(), left.end());
    paths.insert(paths.end(), right.begin(), right.end());
    return;
  }
  if (tree->kind == TermKind::compound && tree->arity() == 2 &&
      tree->name == ",") {
    std::vector<std::vector<TermPtr>> left, right;
    expand_paths(tree->args[0], left);
    expand_paths(tree->args[1], right);
    paths.clear();
    for (const auto& l : left) {
      for (const auto& r : right) {
        std::vector<TermPtr> path = l;
        path.insert(path.end(), r.begin(), r.end());
        paths.push_back(std::move(path));
      }
    }
    return;
  }
  paths.push_back({tree});
}

}  // namespace

Program parse(const SourceUnit& unit, double precision) {
  Parser parser(unit, precision);
  return parser.parse_unit();
}

Program canonize(const Program& prog) {
  Program out;
  out.role = prog.role;
  for (const auto& c : prog.clauses) {
    if (c.body.empty()) {
      Clause fact = c;
      fact.head = rewrite_pow(fact.head);
      out.clauses.push_back(std::move(fact));
      continue;
    }
    // Bodies arrive either as a single ','/';' tree (fresh parse) or as an
    // already-flat literal list (canonized input).
    TermPtr tree = c.body.size() == 1
                       ? c.body[0]
                       : nullptr;
    std::vector<std::vector<TermPtr>> paths;
    if (tree) {
      expand_paths(tree, paths);
    } else {
      paths.push_back(c.body);
    }
    const Rational divisor(static_cast<int>(paths.size()));
    for (auto& path : paths) {
      Clause split;
      split.head = rewrite_pow(c.head);
      split.reps = c.reps;
      for (auto& lit : path) {
        split.body.push_back(rewrite_pow(lit));
      }
      if (c.prob) {
        split.prob = *c.prob / divisor;
      }
      out.clauses.push_back(std::move(split));
    }
  }
  if (out.role == Role::evidence) {
    // Merge duplicate facts, keeping first-occurrence order.
    std::map<std::string, std::size_t> index;
    std::vector<Clause> merged;
    for (auto& c : out.clauses) {
      const std::string key = term_to_string(c.head);
      auto it = index.find(key);
      if (it == index.end()) {
        index.emplace(key, merged.size());
        merged.push_back(std::move(c));
      } else {
        merged[it->second].reps += c.reps;
      }
    }
    out.clauses = std::move(merged);
  }
  return out;
}

Program read_program(const SourceUnit& unit, double precision) {
  Program program = parse(unit, precision);
  return canonize(program);
}

}  // namespace mmlcost
