#include "fames/parser.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace fames {

std::string ParseDiagnostic::str() const {
  std::ostringstream os;
  os << line << ":" << col << ": "
     << (severity == Severity::Error ? "error" : "warning") << ": " << message;
  return os.str();
}

std::string format_diagnostics(const std::vector<ParseDiagnostic>& ds,
                               const std::string& origin) {
  std::ostringstream os;
  for (const auto& d : ds) os << origin << ":" << d.str() << "\n";
  return os.str();
}

namespace {

// ---------------------------------------------------------------------------
// Lexer

struct Token {
  enum class T {
    Ident,
    Int,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    Dot,
    Slash,
    Amp,
    Pipe,
    Bang,
    Arrow,   // ->
    DArrow,  // <->
    EqEq,
    BangEq,
    End,
  };
  T t = T::End;
  std::string text;
  int line = 1;
  int col = 1;
};

struct ParseFail {
  ParseDiagnostic d;
};

[[noreturn]] void fail(int line, int col, const std::string& msg) {
  throw ParseFail{ParseDiagnostic{ParseDiagnostic::Severity::Error, line, col, msg}};
}

[[noreturn]] void fail(const Token& t, const std::string& msg) {
  fail(t.line, t.col, msg);
}

// Lexes one source line ('#' starts a comment).  Throws ParseFail.
std::vector<Token> lex_line(const std::string& s, int lineno) {
  std::vector<Token> out;
  size_t i = 0;
  auto push = [&](Token::T t, std::string text, int col) {
    out.push_back(Token{t, std::move(text), lineno, col});
  };
  while (i < s.size()) {
    char c = s[i];
    int col = static_cast<int>(i) + 1;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '#') break;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
        ++j;
      push(Token::T::Ident, s.substr(i, j - i), col);
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      push(Token::T::Int, s.substr(i, j - i), col);
      i = j;
      continue;
    }
    switch (c) {
      case '(':
        push(Token::T::LParen, "(", col);
        ++i;
        continue;
      case ')':
        push(Token::T::RParen, ")", col);
        ++i;
        continue;
      case '[':
        push(Token::T::LBracket, "[", col);
        ++i;
        continue;
      case ']':
        push(Token::T::RBracket, "]", col);
        ++i;
        continue;
      case ',':
        push(Token::T::Comma, ",", col);
        ++i;
        continue;
      case ';':
        push(Token::T::Semi, ";", col);
        ++i;
        continue;
      case ':':
        push(Token::T::Colon, ":", col);
        ++i;
        continue;
      case '.':
        push(Token::T::Dot, ".", col);
        ++i;
        continue;
      case '/':
        push(Token::T::Slash, "/", col);
        ++i;
        continue;
      case '&':
        push(Token::T::Amp, "&", col);
        ++i;
        continue;
      case '|':
        push(Token::T::Pipe, "|", col);
        ++i;
        continue;
      case '!':
        if (i + 1 < s.size() && s[i + 1] == '=') {
          push(Token::T::BangEq, "!=", col);
          i += 2;
        } else {
          push(Token::T::Bang, "!", col);
          ++i;
        }
        continue;
      case '-':
        if (i + 1 < s.size() && s[i + 1] == '>') {
          push(Token::T::Arrow, "->", col);
          i += 2;
          continue;
        }
        fail(lineno, col, "expected '->'");
      case '<':
        if (i + 2 < s.size() && s[i + 1] == '-' && s[i + 2] == '>') {
          push(Token::T::DArrow, "<->", col);
          i += 3;
          continue;
        }
        fail(lineno, col, "expected '<->'");
      case '=':
        if (i + 1 < s.size() && s[i + 1] == '=') {
          push(Token::T::EqEq, "==", col);
          i += 2;
          continue;
        }
        fail(lineno, col, "expected '==' (single '=' is not an operator)");
      default:
        fail(lineno, col, std::string("unexpected character '") + c + "'");
    }
  }
  int endcol = static_cast<int>(s.size()) + 1;
  out.push_back(Token{Token::T::End, "", lineno, endcol});
  return out;
}

const std::set<std::string>& reserved_words() {
  static const std::set<std::string> words = {
      "true",   "false",  "forall", "exists",    "K",          "O",
      "a",      "box",    "domain", "objects",   "rigid",      "fluent",
      "action", "sense",  "poss",   "ssa",       "init_true",  "init_known"};
  return words;
}

// ---------------------------------------------------------------------------
// Formula parsing

struct FormulaCtx {
  const Theory* th = nullptr;
  std::set<std::string> scope;       // bound variables
  std::set<std::string> allow_free;  // additionally permitted free variables
  bool allow_action_var = false;     // SSA right-hand sides
  bool allow_modal = true;           // queries only
  const char* section = "formula";   // for error messages
};

class FormulaParser {
 public:
  FormulaParser(const std::vector<Token>& toks, size_t pos, FormulaCtx ctx)
      : toks_(toks), pos_(pos), ctx_(std::move(ctx)) {}

  Formula parse() { return parse_iff(); }
  size_t position() const { return pos_; }
  const Token& peek() const { return toks_[pos_]; }

  void expect_end() {
    if (peek().t != Token::T::End)
      fail(peek(), "unexpected trailing input '" + peek().text + "'");
  }

  std::vector<ActionTerm> parse_plan_body(bool require_ground);
  std::vector<GroundAtom> parse_atom_list_body();

 private:
  const std::vector<Token>& toks_;
  size_t pos_;
  FormulaCtx ctx_;

  const Token& next() { return toks_[pos_++]; }
  bool accept(Token::T t) {
    if (peek().t == t) {
      ++pos_;
      return true;
    }
    return false;
  }
  const Token& expect(Token::T t, const std::string& what) {
    if (peek().t != t) fail(peek(), "expected " + what + ", found '" + show(peek()) + "'");
    return toks_[pos_++];
  }
  static std::string show(const Token& t) {
    return t.t == Token::T::End ? "end of input" : t.text;
  }

  bool in_scope(const std::string& v) const {
    return ctx_.scope.count(v) || ctx_.allow_free.count(v);
  }

  Formula parse_iff() {
    Formula l = parse_implies();
    while (accept(Token::T::DArrow)) l = Formula::iff(std::move(l), parse_implies());
    return l;
  }

  Formula parse_implies() {
    Formula l = parse_or();
    if (accept(Token::T::Arrow)) return Formula::implies(std::move(l), parse_implies());
    return l;
  }

  Formula parse_or() {
    Formula l = parse_and();
    if (peek().t != Token::T::Pipe) return l;
    std::vector<Formula> kids;
    kids.push_back(std::move(l));
    while (accept(Token::T::Pipe)) kids.push_back(parse_and());
    return Formula::disj(std::move(kids));
  }

  Formula parse_and() {
    Formula l = parse_unary();
    if (peek().t != Token::T::Amp) return l;
    std::vector<Formula> kids;
    kids.push_back(std::move(l));
    while (accept(Token::T::Amp)) kids.push_back(parse_unary());
    return Formula::conj(std::move(kids));
  }

  Formula parse_unary() {
    const Token& t = peek();
    if (t.t == Token::T::Bang) {
      ++pos_;
      return Formula::negate(parse_unary());
    }
    if (t.t == Token::T::LBracket) return parse_after();
    if (t.t == Token::T::Ident) {
      if (t.text == "forall" || t.text == "exists") return parse_quantifier();
      if (t.text == "K" || t.text == "O") return parse_epistemic();
      if (t.text == "box")
        fail(t, "the always operator is not a query construct; use bounded validity");
    }
    return parse_primary();
  }

  Formula parse_quantifier() {
    const Token& q = next();
    bool universal = q.text == "forall";
    const Token& v = expect(Token::T::Ident, "a variable name");
    if (reserved_words().count(v.text))
      fail(v, "'" + v.text + "' is reserved and cannot be a variable");
    if (ctx_.th && (ctx_.th->has_object(v.text) || ctx_.th->find_predicate(v.text) ||
                    ctx_.th->find_action(v.text)))
      fail(v, "quantified variable '" + v.text + "' shadows a declared name");
    if (ctx_.scope.count(v.text))
      fail(v, "variable '" + v.text + "' is already bound");
    accept(Token::T::Dot);  // canonical form has a dot; a parenthesized body may omit it
    ctx_.scope.insert(v.text);
    Formula body = parse_iff();
    ctx_.scope.erase(v.text);
    return universal ? Formula::forall(v.text, std::move(body))
                     : Formula::exists(v.text, std::move(body));
  }

  Formula parse_epistemic() {
    const Token& k = next();
    if (!ctx_.allow_modal)
      fail(k, std::string("knowledge operator not allowed in ") + ctx_.section);
    Formula body;
    if (accept(Token::T::LParen)) {
      body = parse_iff();
      expect(Token::T::RParen, "')'");
    } else {
      body = parse_iff();  // swallows the rest of the formula
    }
    return k.text == "K" ? Formula::knows(std::move(body))
                         : Formula::only_knows(std::move(body));
  }

  Formula parse_after() {
    const Token& open = peek();
    if (!ctx_.allow_modal)
      fail(open, std::string("action modality not allowed in ") + ctx_.section);
    ++pos_;  // [
    std::vector<ActionTerm> plan;
    if (peek().t != Token::T::RBracket) {
      plan.push_back(parse_action_term());
      while (accept(Token::T::Semi)) plan.push_back(parse_action_term());
    }
    expect(Token::T::RBracket, "']'");
    Formula body = parse_iff();
    return Formula::after_plan(std::move(plan), std::move(body));
  }

  // A comparison operand: an object/variable term, an action term, or the
  // action variable.
  struct Operand {
    enum class Kind { Term, Action, ActionVar } kind;
    Term term;
    ActionTerm action;
    Token tok;
  };

  Term parse_term_arg() {
    const Token& t = expect(Token::T::Ident, "an object or variable");
    if (t.text == "a" && ctx_.allow_action_var)
      fail(t, "the action variable cannot appear as a term argument");
    if (in_scope(t.text)) return Term::var(t.text);
    if (ctx_.th && ctx_.th->has_object(t.text)) return Term::object(t.text);
    if (ctx_.th && (ctx_.th->find_predicate(t.text) || ctx_.th->find_action(t.text)))
      fail(t, "'" + t.text + "' is not an object or variable");
    fail(t, "unknown object or variable '" + t.text + "'");
  }

  std::vector<Term> parse_arg_list() {
    std::vector<Term> args;
    expect(Token::T::LParen, "'('");
    if (peek().t != Token::T::RParen) {
      args.push_back(parse_term_arg());
      while (accept(Token::T::Comma)) args.push_back(parse_term_arg());
    }
    expect(Token::T::RParen, "')'");
    return args;
  }

  ActionTerm parse_action_term() {
    const Token& t = expect(Token::T::Ident, "an action name");
    const ActionDecl* d = ctx_.th ? ctx_.th->find_action(t.text) : nullptr;
    if (!d) fail(t, "unknown action '" + t.text + "'");
    ActionTerm a;
    a.action = t.text;
    if (peek().t == Token::T::LParen) a.args = parse_arg_list();
    if (static_cast<int>(a.args.size()) != d->arity)
      fail(t, "action '" + t.text + "' expects " + std::to_string(d->arity) +
                  " argument(s), got " + std::to_string(a.args.size()));
    return a;
  }

  Operand parse_operand() {
    const Token& t = expect(Token::T::Ident, "a term or action");
    if (t.text == "a" && ctx_.allow_action_var) {
      return Operand{Operand::Kind::ActionVar, {}, {}, t};
    }
    if (ctx_.th && ctx_.th->find_action(t.text)) {
      --pos_;
      ActionTerm a = parse_action_term();
      return Operand{Operand::Kind::Action, {}, std::move(a), t};
    }
    if (in_scope(t.text)) return Operand{Operand::Kind::Term, Term::var(t.text), {}, t};
    if (ctx_.th && ctx_.th->has_object(t.text))
      return Operand{Operand::Kind::Term, Term::object(t.text), {}, t};
    fail(t, "unknown symbol '" + t.text + "'");
  }

  Formula finish_equality(Operand l) {
    bool neg = peek().t == Token::T::BangEq;
    if (!accept(Token::T::EqEq) && !accept(Token::T::BangEq))
      fail(peek(), l.kind == Operand::Kind::Term
                       ? "expected '==' or '!=' after term '" + l.tok.text + "'"
                       : "expected '==' or '!=' after action term");
    Operand r = parse_operand();
    Formula eq;
    bool l_act = l.kind != Operand::Kind::Term;
    bool r_act = r.kind != Operand::Kind::Term;
    if (l_act != r_act) fail(l.tok, "cannot compare an object with an action");
    if (!l_act) {
      eq = Formula::term_eq(l.term, r.term);
    } else if (l.kind == Operand::Kind::ActionVar && r.kind == Operand::Kind::ActionVar) {
      fail(l.tok, "cannot compare the action variable with itself");
    } else if (l.kind == Operand::Kind::ActionVar) {
      eq = Formula::action_eq("a", r.action);
    } else if (r.kind == Operand::Kind::ActionVar) {
      eq = Formula::action_eq("a", l.action);
    } else {
      eq = Formula::action_eq(l.action, r.action);
    }
    return neg ? Formula::negate(std::move(eq)) : eq;
  }

  Formula parse_primary() {
    const Token& t = peek();
    if (t.t == Token::T::LParen) {
      ++pos_;
      Formula f = parse_iff();
      expect(Token::T::RParen, "')'");
      return f;
    }
    if (t.t != Token::T::Ident)
      fail(t, "expected a formula, found '" + show(t) + "'");
    if (t.text == "true") {
      ++pos_;
      return Formula::truth();
    }
    if (t.text == "false") {
      ++pos_;
      return Formula::falsity();
    }
    // Predicate atom?
    const PredicateDecl* p = ctx_.th ? ctx_.th->find_predicate(t.text) : nullptr;
    if (p) {
      ++pos_;
      std::vector<Term> args;
      if (peek().t == Token::T::LParen) args = parse_arg_list();
      if (static_cast<int>(args.size()) != p->arity)
        fail(t, "predicate '" + t.text + "' expects " + std::to_string(p->arity) +
                    " argument(s), got " + std::to_string(args.size()));
      return Formula::atom(t.text, std::move(args));
    }
    // Otherwise this must be an equality.
    return finish_equality(parse_operand());
  }
};

std::vector<ActionTerm> FormulaParser::parse_plan_body(bool require_ground) {
  std::vector<ActionTerm> plan;
  if (peek().t == Token::T::End) return plan;
  plan.push_back(parse_action_term());
  while (accept(Token::T::Semi)) plan.push_back(parse_action_term());
  if (require_ground)
    for (const auto& a : plan)
      if (!a.is_ground()) fail(toks_.front(), "plan step " + a.str() + " is not ground");
  return plan;
}

std::vector<GroundAtom> FormulaParser::parse_atom_list_body() {
  std::vector<GroundAtom> atoms;
  if (peek().t == Token::T::End) return atoms;
  while (true) {
    const Token& t = peek();
    Formula f = parse_primary();
    if (f.kind() != Formula::Kind::Atom) fail(t, "expected a ground atom");
    atoms.push_back(f.atom());
    if (accept(Token::T::Comma)) continue;
    break;
  }
  return atoms;
}

// ---------------------------------------------------------------------------
// Theory parsing (two passes: declarations first, then formulas, so that
// declaration order does not matter)

struct RawFormula {
  std::vector<Token> toks;
  size_t start = 0;  // index of the first formula token
  int line = 1;
};

struct RawSchema {  // sense/poss/ssa line
  std::string owner;
  std::vector<std::string> params;
  RawFormula body;
  Token name_tok;
};

struct TheoryBuilder {
  Theory th;
  std::vector<ParseDiagnostic> diags;

  std::optional<Token> domain_tok;
  std::optional<Token> objects_tok;
  std::optional<RawFormula> raw_init_true, raw_init_known;
  std::vector<RawSchema> raw_senses, raw_posses, raw_ssas;
  std::map<std::string, Token> decl_tokens;  // first declaration site per name

  void error(const Token& t, const std::string& msg) {
    diags.push_back(
        ParseDiagnostic{ParseDiagnostic::Severity::Error, t.line, t.col, msg});
  }

  bool declare_name(const Token& t, const std::string& what) {
    if (reserved_words().count(t.text)) {
      error(t, "'" + t.text + "' is a reserved word");
      return false;
    }
    auto it = decl_tokens.find(t.text);
    if (it != decl_tokens.end()) {
      error(t, what + " '" + t.text + "' conflicts with an earlier declaration at line " +
                   std::to_string(it->second.line));
      return false;
    }
    decl_tokens.emplace(t.text, t);
    return true;
  }
};

// Parses "name(p1, p2)" or bare "name"; returns (name token, params).
std::pair<Token, std::vector<std::string>> parse_params(const std::vector<Token>& toks,
                                                        size_t& i) {
  if (toks[i].t != Token::T::Ident) fail(toks[i], "expected a name");
  Token name = toks[i++];
  std::vector<std::string> params;
  if (toks[i].t == Token::T::LParen) {
    ++i;
    if (toks[i].t != Token::T::RParen) {
      while (true) {
        const Token& p = toks[i];
        if (p.t != Token::T::Ident) fail(p, "expected a parameter name");
        if (reserved_words().count(p.text))
          fail(p, "'" + p.text + "' is reserved and cannot be a parameter");
        for (const auto& q : params)
          if (q == p.text) fail(p, "duplicate parameter '" + p.text + "'");
        params.push_back(p.text);
        ++i;
        if (toks[i].t == Token::T::Comma) {
          ++i;
          continue;
        }
        break;
      }
    }
    if (toks[i].t != Token::T::RParen) fail(toks[i], "expected ')'");
    ++i;
  }
  return {name, params};
}

void parse_decl_line(TheoryBuilder& b, const std::vector<Token>& toks) {
  const Token& head = toks[0];
  size_t i = 1;
  auto expect_tok = [&](Token::T t, const std::string& what) -> const Token& {
    if (toks[i].t != t)
      fail(toks[i], "expected " + what + ", found '" +
                        (toks[i].t == Token::T::End ? "end of line" : toks[i].text) + "'");
    return toks[i++];
  };
  auto expect_eol = [&] {
    if (toks[i].t != Token::T::End)
      fail(toks[i], "unexpected trailing input '" + toks[i].text + "'");
  };
  const std::string& kw = head.text;

  if (kw == "domain") {
    const Token& name = expect_tok(Token::T::Ident, "a domain name");
    expect_eol();
    if (b.domain_tok) fail(head, "duplicate domain declaration");
    b.domain_tok = head;
    b.th.name = name.text;
    return;
  }
  if (kw == "objects") {
    expect_tok(Token::T::Colon, "':'");
    if (b.objects_tok) fail(head, "duplicate objects declaration");
    b.objects_tok = head;
    while (true) {
      const Token& o = expect_tok(Token::T::Ident, "an object name");
      if (b.declare_name(o, "object")) b.th.objects.push_back(o.text);
      if (toks[i].t == Token::T::Comma) {
        ++i;
        continue;
      }
      break;
    }
    expect_eol();
    return;
  }
  if (kw == "rigid" || kw == "fluent") {
    const Token& name = expect_tok(Token::T::Ident, "a predicate name");
    expect_tok(Token::T::Slash, "'/'");
    const Token& ar = expect_tok(Token::T::Int, "an arity");
    expect_eol();
    if (!b.declare_name(name, "predicate")) return;
    if (ar.text.size() > 1 || ar.text[0] > '8')
      fail(ar, "arity out of range (0..8)");
    b.th.predicates.push_back(
        PredicateDecl{name.text, ar.text[0] - '0', kw == "rigid"});
    return;
  }
  if (kw == "action") {
    auto [name, params] = parse_params(toks, i);
    expect_eol();
    if (!b.declare_name(name, "action")) return;
    ActionDecl d;
    d.name = name.text;
    d.arity = static_cast<int>(params.size());
    d.params = std::move(params);
    b.th.actions.push_back(std::move(d));
    return;
  }
  if (kw == "sense" || kw == "poss" || kw == "ssa") {
    auto [name, params] = parse_params(toks, i);
    expect_tok(Token::T::Colon, "':'");
    if (toks[i].t == Token::T::End) fail(toks[i], "expected a formula");
    RawSchema s;
    s.owner = name.text;
    s.params = std::move(params);
    s.name_tok = name;
    s.body = RawFormula{toks, i, head.line};
    (kw == "sense" ? b.raw_senses : kw == "poss" ? b.raw_posses : b.raw_ssas)
        .push_back(std::move(s));
    return;
  }
  if (kw == "init_true" || kw == "init_known") {
    expect_tok(Token::T::Colon, "':'");
    if (toks[i].t == Token::T::End) fail(toks[i], "expected a formula");
    auto& slot = kw == "init_true" ? b.raw_init_true : b.raw_init_known;
    if (slot) fail(head, "duplicate " + kw + " declaration");
    slot = RawFormula{toks, i, head.line};
    return;
  }
  fail(head, "unknown declaration '" + kw + "'");
}

Formula parse_schema_body(const TheoryBuilder& b, const RawFormula& raw,
                          const std::set<std::string>& scope, bool action_var,
                          const char* section) {
  FormulaCtx ctx;
  ctx.th = &b.th;
  ctx.scope = scope;
  ctx.allow_action_var = action_var;
  ctx.allow_modal = false;
  ctx.section = section;
  FormulaParser p(raw.toks, raw.start, std::move(ctx));
  Formula f = p.parse();
  p.expect_end();
  return f;
}

// Renames schema parameters to the canonical ones from the action/ssa decl.
// Two-phase so that permuted parameter lists do not collide.
Formula canonicalize_params(Formula f, const std::vector<std::string>& from,
                            const std::vector<std::string>& to) {
  for (size_t i = 0; i < from.size(); ++i)
    f = substitute(f, from[i], Term::var("__p" + std::to_string(i)));
  for (size_t i = 0; i < to.size(); ++i)
    f = substitute(f, "__p" + std::to_string(i), Term::var(to[i]));
  return f;
}

}  // namespace

TheoryParseResult parse_theory(const std::string& text) {
  TheoryBuilder b;
  b.th.init_true = Formula::truth();
  b.th.init_known = Formula::truth();

  // Pass 1: lex and classify declarations.
  std::vector<std::vector<Token>> lines;
  {
    std::istringstream in(text);
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
      ++no;
      try {
        auto toks = lex_line(line, no);
        if (toks.size() > 1) lines.push_back(std::move(toks));
      } catch (const ParseFail& f) {
        b.diags.push_back(f.d);
      }
    }
  }
  for (const auto& toks : lines) {
    try {
      if (toks[0].t != Token::T::Ident)
        fail(toks[0], "expected a declaration keyword");
      parse_decl_line(b, toks);
    } catch (const ParseFail& f) {
      b.diags.push_back(f.d);
    }
  }
  if (!b.domain_tok && b.diags.empty())
    b.diags.push_back(
        ParseDiagnostic{ParseDiagnostic::Severity::Error, 1, 1, "missing domain declaration"});

  // Pass 2: resolve schemas and initial formulas against the full symbol table.
  auto check_params = [&](const RawSchema& s) {
    for (const auto& p : s.params)
      if (b.decl_tokens.count(p))
        fail(s.name_tok, "parameter '" + p + "' shadows a declared name");
  };
  for (auto& a : b.th.actions) {
    for (const auto& p : a.params)
      if (b.decl_tokens.count(p)) {
        const Token& t = b.decl_tokens.at(a.name);
        b.diags.push_back(ParseDiagnostic{ParseDiagnostic::Severity::Error, t.line, t.col,
                                          "parameter '" + p + "' of action '" + a.name +
                                              "' shadows a declared name"});
      }
  }
  auto attach = [&](const RawSchema& s, bool is_sense) {
    try {
      check_params(s);
      ActionDecl* d = nullptr;
      for (auto& a : b.th.actions)
        if (a.name == s.owner) d = &a;
      if (!d) fail(s.name_tok, "unknown action '" + s.owner + "'");
      if (s.params.size() != static_cast<size_t>(d->arity))
        fail(s.name_tok, (is_sense ? std::string("sense") : std::string("poss")) +
                             " declaration for '" + s.owner + "' has " +
                             std::to_string(s.params.size()) + " parameter(s), expected " +
                             std::to_string(d->arity));
      auto& slot = is_sense ? d->sensing : d->precondition;
      if (slot)
        fail(s.name_tok, "duplicate " + std::string(is_sense ? "sense" : "poss") +
                             " declaration for '" + s.owner + "'");
      std::set<std::string> scope(s.params.begin(), s.params.end());
      Formula f = parse_schema_body(b, s.body, scope, false,
                                    is_sense ? "a sensing axiom" : "a precondition");
      slot = std::make_shared<Formula>(canonicalize_params(std::move(f), s.params, d->params));
    } catch (const ParseFail& f) {
      b.diags.push_back(f.d);
    }
  };
  for (const auto& s : b.raw_senses) attach(s, true);
  for (const auto& s : b.raw_posses) attach(s, false);

  for (const auto& s : b.raw_ssas) {
    try {
      check_params(s);
      const PredicateDecl* p = b.th.find_predicate(s.owner);
      if (!p) fail(s.name_tok, "unknown predicate '" + s.owner + "'");
      if (p->rigid)
        fail(s.name_tok, "successor state axiom for rigid predicate '" + s.owner + "'");
      if (s.params.size() != static_cast<size_t>(p->arity))
        fail(s.name_tok, "ssa for '" + s.owner + "' has " + std::to_string(s.params.size()) +
                             " parameter(s), expected " + std::to_string(p->arity));
      if (b.th.find_ssa(s.owner))
        fail(s.name_tok, "duplicate successor state axiom for '" + s.owner + "'");
      std::set<std::string> scope(s.params.begin(), s.params.end());
      Formula f = parse_schema_body(b, s.body, scope, true, "a successor state axiom");
      b.th.ssas.push_back(SsaDecl{s.owner, s.params, std::move(f)});
    } catch (const ParseFail& f) {
      b.diags.push_back(f.d);
    }
  }
  for (const auto& p : b.th.predicates) {
    if (!p.rigid && !b.th.find_ssa(p.name))
      b.diags.push_back(ParseDiagnostic{
          ParseDiagnostic::Severity::Error, b.decl_tokens.at(p.name).line,
          b.decl_tokens.at(p.name).col,
          "fluent '" + p.name + "' has no successor state axiom"});
  }

  auto parse_init = [&](const std::optional<RawFormula>& raw, Formula& slot,
                        const char* section) {
    if (!raw) return;
    try {
      slot = parse_schema_body(b, *raw, {}, false, section);
    } catch (const ParseFail& f) {
      b.diags.push_back(f.d);
    }
  };
  parse_init(b.raw_init_true, b.th.init_true, "init_true");
  parse_init(b.raw_init_known, b.th.init_known, "init_known");

  TheoryParseResult out;
  out.diagnostics = std::move(b.diags);
  bool has_error = false;
  for (const auto& d : out.diagnostics)
    if (d.severity == ParseDiagnostic::Severity::Error) has_error = true;
  if (!has_error) out.theory = std::move(b.th);
  return out;
}

TheoryParseResult parse_theory_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    TheoryParseResult r;
    r.diagnostics.push_back(ParseDiagnostic{ParseDiagnostic::Severity::Error, 1, 1,
                                            "cannot open '" + path + "'"});
    return r;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_theory(buf.str());
}

FormulaParseResult parse_formula(const std::string& text, const Theory& th,
                                 const std::set<std::string>& allow_free) {
  FormulaParseResult out;
  try {
    auto toks = lex_line(text, 1);
    FormulaCtx ctx;
    ctx.th = &th;
    ctx.allow_free = allow_free;
    ctx.allow_modal = true;
    FormulaParser p(toks, 0, std::move(ctx));
    Formula f = p.parse();
    p.expect_end();
    out.formula = std::move(f);
  } catch (const ParseFail& f) {
    out.diagnostics.push_back(f.d);
  }
  return out;
}

PlanParseResult parse_plan(const std::string& text, const Theory& th) {
  PlanParseResult out;
  try {
    auto toks = lex_line(text, 1);
    FormulaCtx ctx;
    ctx.th = &th;
    FormulaParser p(toks, 0, std::move(ctx));
    auto terms = p.parse_plan_body(true);
    p.expect_end();
    std::vector<ActionInstance> plan;
    for (const auto& t : terms) plan.push_back(t.instance());
    out.plan = std::move(plan);
  } catch (const ParseFail& f) {
    out.diagnostics.push_back(f.d);
  }
  return out;
}

AtomListParseResult parse_atom_list(const std::string& text, const Theory& th) {
  AtomListParseResult out;
  try {
    auto toks = lex_line(text, 1);
    FormulaCtx ctx;
    ctx.th = &th;
    FormulaParser p(toks, 0, std::move(ctx));
    auto atoms = p.parse_atom_list_body();
    p.expect_end();
    out.atoms = std::move(atoms);
  } catch (const ParseFail& f) {
    out.diagnostics.push_back(f.d);
  }
  return out;
}

}  // namespace fames
