#include "crashlens/parser.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

namespace crashlens {

ParseError::ParseError(ParseErrorKind kind, int line, int column, std::string const& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      kind(kind),
      line(line),
      column(column) {}

std::string to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::Syntax: return "syntax";
    case ParseErrorKind::ArityMismatch: return "arity-mismatch";
    case ParseErrorKind::DuplicatePatternCtor: return "duplicate-pattern-ctor";
    case ParseErrorKind::DuplicateDef: return "duplicate-def";
    case ParseErrorKind::UnboundName: return "unbound-name";
  }
  return "unknown";
}

namespace {

enum class Tok {
  Int,
  LowerIdent,
  UpperIdent,
  KwRec,
  KwMatch,
  KwErr,
  KwLet,
  KwCtor,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Pipe,
  Arrow,
  Equals,
  Slash,
  Semi,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t value = 0;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string const& source) : src_(source) { advance(); }

  Token const& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_trivia();
    current_.line = line_;
    current_.column = column_;
    if (pos_ >= src_.size()) {
      current_.kind = Tok::End;
      current_.text.clear();
      return;
    }
    char const c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) bump();
      current_.kind = Tok::Int;
      current_.text = src_.substr(start, pos_ - start);
      try {
        current_.value = std::stoll(current_.text);
      } catch (std::out_of_range const&) {
        throw ParseError(ParseErrorKind::Syntax, current_.line, current_.column,
                         "integer literal out of range");
      }
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        bump();
      }
      current_.text = src_.substr(start, pos_ - start);
      if (current_.text == "rec") {
        current_.kind = Tok::KwRec;
      } else if (current_.text == "match") {
        current_.kind = Tok::KwMatch;
      } else if (current_.text == "err") {
        current_.kind = Tok::KwErr;
      } else if (current_.text == "let") {
        current_.kind = Tok::KwLet;
      } else if (current_.text == "ctor") {
        current_.kind = Tok::KwCtor;
      } else if (std::isupper(static_cast<unsigned char>(current_.text[0]))) {
        current_.kind = Tok::UpperIdent;
      } else {
        current_.kind = Tok::LowerIdent;
      }
      return;
    }
    if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
      bump();
      bump();
      current_.kind = Tok::Arrow;
      current_.text = "->";
      return;
    }
    switch (c) {
      case '(': single(Tok::LParen); return;
      case ')': single(Tok::RParen); return;
      case '{': single(Tok::LBrace); return;
      case '}': single(Tok::RBrace); return;
      case ',': single(Tok::Comma); return;
      case '|': single(Tok::Pipe); return;
      case '=': single(Tok::Equals); return;
      case '/': single(Tok::Slash); return;
      case ';': single(Tok::Semi); return;
      default:
        throw ParseError(ParseErrorKind::Syntax, line_, column_,
                         std::string("unexpected character '") + c + "'");
    }
  }

  void single(Tok kind) {
    current_.kind = kind;
    current_.text = src_[pos_];
    bump();
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      char const c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        bump();
      } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  std::string const& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  Token current_;
};

class Parser {
 public:
  Parser(std::string const& source, Alphabet* shared_alphabet)
      : lexer_(source), alphabet_(shared_alphabet ? shared_alphabet : &own_alphabet_) {}

  Program parse_program() {
    Program program;
    while (true) {
      auto const& t = lexer_.peek();
      if (t.kind == Tok::End) break;
      if (t.kind == Tok::KwCtor) {
        parse_ctor_decl();
      } else if (t.kind == Tok::KwLet) {
        parse_let(program);
      } else {
        auto const at = t;
        scope_.clear();
        program.main = inline_defs(parse_expr(), program, at);
        expect(Tok::End, "end of input after main expression");
        break;
      }
    }
    program.alphabet = *alphabet_;
    return program;
  }

  ExprPtr parse_fragment() {
    open_ok_ = true;
    auto e = parse_expr();
    expect(Tok::End, "end of input");
    return e;
  }

 private:
  [[noreturn]] void fail(ParseErrorKind kind, Token const& at, std::string const& message) {
    throw ParseError(kind, at.line, at.column, message);
  }

  Token expect(Tok kind, std::string const& what) {
    auto const& t = lexer_.peek();
    if (t.kind != kind) {
      std::string got = t.kind == Tok::End ? " at end of input" : ", got '" + t.text + "'";
      fail(ParseErrorKind::Syntax, t, "expected " + what + got);
    }
    return lexer_.take();
  }

  void parse_ctor_decl() {
    lexer_.take();
    auto name = expect(Tok::UpperIdent, "constructor name");
    expect(Tok::Slash, "'/'");
    auto arity = expect(Tok::Int, "arity");
    expect(Tok::Semi, "';'");
    if (!alphabet_->record(name.text, static_cast<int>(arity.value))) {
      fail(ParseErrorKind::ArityMismatch, name,
           "constructor " + name.text + " declared with conflicting arity");
    }
  }

  void parse_let(Program& program) {
    lexer_.take();
    auto name = expect(Tok::LowerIdent, "definition name");
    auto const defined = [&](std::string const& n) {
      return std::any_of(program.defs.begin(), program.defs.end(),
                         [&](auto const& d) { return d.first == n; });
    };
    if (defined(name.text)) {
      fail(ParseErrorKind::DuplicateDef, name, "duplicate definition of " + name.text);
    }
    expect(Tok::Equals, "'='");
    scope_.clear();
    auto body = parse_expr();
    expect(Tok::Semi, "';'");
    program.defs.emplace_back(name.text, inline_defs(std::move(body), program, name));
    def_names_.push_back(name.text);
  }

  // Replaces free references to earlier definitions. Stored definition bodies
  // are closed, so plain substitution cannot capture.
  ExprPtr inline_defs(ExprPtr e, Program const& program, Token const& at) {
    for (auto it = program.defs.rbegin(); it != program.defs.rend(); ++it) {
      e = subst_value(e, it->first, it->second);
    }
    if (!open_ok_) {
      auto free = free_vars(e);
      if (!free.empty()) {
        fail(ParseErrorKind::UnboundName, at, "unbound name: " + *free.begin());
      }
    }
    return e;
  }

  ExprPtr parse_expr() {
    auto e = parse_atom();
    while (starts_atom(lexer_.peek().kind)) {
      e = mk_app(std::move(e), parse_atom());
    }
    return e;
  }

  static bool starts_atom(Tok kind) {
    switch (kind) {
      case Tok::Int:
      case Tok::LowerIdent:
      case Tok::UpperIdent:
      case Tok::KwErr:
      case Tok::LParen:
        return true;
      default:
        return false;
    }
  }

  ExprPtr parse_atom() {
    auto const& t = lexer_.peek();
    switch (t.kind) {
      case Tok::Int:
        return mk_int(lexer_.take().value);
      case Tok::KwErr:
        lexer_.take();
        return mk_err();
      case Tok::LowerIdent: {
        auto name = lexer_.take();
        if (!open_ok_ && std::find(scope_.begin(), scope_.end(), name.text) == scope_.end() &&
            !known_def(name.text)) {
          fail(ParseErrorKind::UnboundName, name, "unbound name: " + name.text);
        }
        return mk_var(name.text);
      }
      case Tok::UpperIdent:
        return parse_ctor_use();
      case Tok::LParen: {
        lexer_.take();
        auto e = parse_expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::KwRec:
        return parse_rec();
      case Tok::KwMatch:
        return parse_match();
      default:
        fail(ParseErrorKind::Syntax, t, "expected an expression" + (t.text.empty() ? std::string() : ", got '" + t.text + "'"));
    }
  }

  bool known_def(std::string const& name) const {
    return std::find(def_names_.begin(), def_names_.end(), name) != def_names_.end();
  }

  ExprPtr parse_ctor_use() {
    auto name = lexer_.take();
    std::vector<ExprPtr> args;
    if (lexer_.peek().kind == Tok::LParen) {
      lexer_.take();
      args.push_back(parse_expr());
      while (lexer_.peek().kind == Tok::Comma) {
        lexer_.take();
        args.push_back(parse_expr());
      }
      expect(Tok::RParen, "')'");
    }
    int const arity = static_cast<int>(args.size());
    if (!alphabet_->record(name.text, arity)) {
      fail(ParseErrorKind::ArityMismatch, name,
           "constructor " + name.text + " used with arity " + std::to_string(arity) +
               ", expected " + std::to_string(*alphabet_->arity_of(name.text)));
    }
    return mk_ctor(CtorName{name.text, arity}, std::move(args));
  }

  ExprPtr parse_rec() {
    lexer_.take();
    auto fn = expect(Tok::LowerIdent, "function name");
    expect(Tok::LParen, "'('");
    auto arg = expect(Tok::LowerIdent, "argument name");
    expect(Tok::RParen, "')'");
    expect(Tok::Arrow, "'->'");
    if (fn.text == arg.text) {
      fail(ParseErrorKind::Syntax, arg, "rec binders must be distinct");
    }
    scope_.push_back(fn.text);
    scope_.push_back(arg.text);
    auto body = parse_expr();
    scope_.resize(scope_.size() - 2);
    return mk_rec(fn.text, arg.text, std::move(body));
  }

  ExprPtr parse_match() {
    lexer_.take();
    auto scrutinee = parse_expr();
    expect(Tok::LBrace, "'{'");
    std::vector<Arm> arms;
    std::vector<Token> arm_names;
    if (lexer_.peek().kind != Tok::RBrace) {
      arms.push_back(parse_arm(arm_names));
      while (lexer_.peek().kind == Tok::Pipe) {
        lexer_.take();
        arms.push_back(parse_arm(arm_names));
      }
    }
    expect(Tok::RBrace, "'}'");
    return mk_match(std::move(scrutinee), std::move(arms));
  }

  Arm parse_arm(std::vector<Token>& arm_names) {
    auto name = expect(Tok::UpperIdent, "pattern constructor");
    for (auto const& seen : arm_names) {
      if (seen.text == name.text) {
        fail(ParseErrorKind::DuplicatePatternCtor, name,
             "constructor " + name.text + " matched twice");
      }
    }
    arm_names.push_back(name);
    std::vector<std::string> binders;
    if (lexer_.peek().kind == Tok::LParen) {
      lexer_.take();
      binders.push_back(expect(Tok::LowerIdent, "pattern binder").text);
      while (lexer_.peek().kind == Tok::Comma) {
        lexer_.take();
        auto b = expect(Tok::LowerIdent, "pattern binder");
        if (std::find(binders.begin(), binders.end(), b.text) != binders.end()) {
          fail(ParseErrorKind::Syntax, b, "pattern binders must be pairwise distinct");
        }
        binders.push_back(b.text);
      }
      expect(Tok::RParen, "')'");
    }
    int const arity = static_cast<int>(binders.size());
    if (!alphabet_->record(name.text, arity)) {
      fail(ParseErrorKind::ArityMismatch, name,
           "constructor " + name.text + " matched with arity " + std::to_string(arity) +
               ", expected " + std::to_string(*alphabet_->arity_of(name.text)));
    }
    expect(Tok::Arrow, "'->'");
    scope_.insert(scope_.end(), binders.begin(), binders.end());
    auto body = parse_expr();
    scope_.resize(scope_.size() - binders.size());
    return Arm{CtorName{name.text, arity}, std::move(binders), std::move(body)};
  }

  Lexer lexer_;
  Alphabet own_alphabet_;
  Alphabet* alphabet_;
  std::vector<std::string> scope_;
  std::vector<std::string> def_names_;
  bool open_ok_ = false;
};

}  // namespace

Program parse_program(std::string const& source) {
  Parser parser(source, nullptr);
  return parser.parse_program();
}

ExprPtr parse_expr_text(std::string const& source, Alphabet* alphabet) {
  Parser parser(source, alphabet);
  return parser.parse_fragment();
}

}  // namespace crashlens
