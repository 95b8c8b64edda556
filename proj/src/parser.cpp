#include "absgrid/parser.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace absgrid {

namespace {

struct Token {
  enum class Kind {
    Ident,     // lowercase-leading identifier
    Variable,  // uppercase or underscore leading
    Integer,
    Punct,  // ( ) { } , . :- # = != < <= > >= / ..
    End,
  };
  Kind kind = Kind::End;
  std::string text;
  long long value = 0;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_ws();
    tok_ = Token{};
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_.kind = Token::Kind::End;
      return;
    }
    char c = src_[pos_];
    if (std::isdigit((unsigned char)c) ||
        (c == '-' && pos_ + 1 < src_.size() &&
         std::isdigit((unsigned char)src_[pos_ + 1]))) {
      size_t start = pos_;
      if (c == '-') get();
      while (pos_ < src_.size() && std::isdigit((unsigned char)src_[pos_]))
        get();
      tok_.kind = Token::Kind::Integer;
      tok_.text = src_.substr(start, pos_ - start);
      tok_.value = std::stoll(tok_.text);
      return;
    }
    if (std::isalpha((unsigned char)c) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum((unsigned char)src_[pos_]) || src_[pos_] == '_'))
        get();
      tok_.text = src_.substr(start, pos_ - start);
      tok_.kind = (std::isupper((unsigned char)c) || c == '_')
                      ? Token::Kind::Variable
                      : Token::Kind::Ident;
      return;
    }
    auto two = src_.substr(pos_, 2);
    for (const char* p : {":-", "!=", "<=", ">=", ".."}) {
      if (two == p) {
        get();
        get();
        tok_.kind = Token::Kind::Punct;
        tok_.text = p;
        return;
      }
    }
    if (std::string("(){},.#=<>/").find(c) != std::string::npos) {
      get();
      tok_.kind = Token::Kind::Punct;
      tok_.text = std::string(1, c);
      return;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", line_,
                      col_);
  }

  void skip_ws() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') get();
      } else if (std::isspace((unsigned char)c)) {
        get();
      } else {
        break;
      }
    }
  }

  char get() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

class Parser {
 public:
  Parser(const std::string& text, const ParseOptions& opts)
      : lex_(text), opts_(opts) {}

  Program run() {
    while (lex_.peek().kind != Token::Kind::End) statement();
    if (opts_.require_sorts_resolved) validate_sorts(prog_);
    return std::move(prog_);
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    const Token& t = lex_.peek();
    throw SyntaxError(msg, t.line, t.col);
  }

  bool accept_punct(const std::string& p) {
    if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == p) {
      lex_.take();
      return true;
    }
    return false;
  }

  void expect_punct(const std::string& p) {
    if (!accept_punct(p)) fail("expected '" + p + "'");
  }

  void statement() {
    if (accept_punct("#")) {
      directive();
      return;
    }
    Rule r;
    if (accept_punct("{")) {
      r.choice = true;
      r.head = atom();
      expect_punct("}");
    } else if (!(lex_.peek().kind == Token::Kind::Punct &&
                 lex_.peek().text == ":-")) {
      r.head = atom();
    }
    if (accept_punct(":-")) {
      body(r);
    } else if (!r.head) {
      fail("expected a rule head or ':-'");
    }
    expect_punct(".");
    if (r.head && !r.choice && r.body_empty()) {
      if (!r.head->is_ground()) fail("facts must be ground");
      prog_.facts.push_back(*r.head);
    } else {
      if (r.choice && !r.head) fail("choice rule without head");
      prog_.rules.push_back(std::move(r));
    }
  }

  void directive() {
    Token name = lex_.take();
    if (name.kind != Token::Kind::Ident) fail("expected directive name");
    if (name.text == "sort") {
      Token sort = lex_.take();
      if (sort.kind != Token::Kind::Ident) fail("expected sort name");
      if (prog_.sort_decls.count(sort.text))
        throw SyntaxError("duplicate sort declaration: " + sort.text,
                          sort.line, sort.col);
      expect_punct("=");
      expect_punct("{");
      std::vector<Term> dom;
      if (!accept_punct("}")) {
        for (;;) {
          Term lo = const_term();
          if (accept_punct("..")) {
            Term hi = const_term();
            if (!lo.is_int || !hi.is_int) fail("range bounds must be integers");
            for (long long v = lo.int_val; v <= hi.int_val; ++v)
              dom.push_back(Term::num(v));
          } else {
            dom.push_back(lo);
          }
          if (accept_punct("}")) break;
          expect_punct(",");
        }
      }
      if (dom.empty()) fail("sort domain is empty");
      prog_.sort_decls[sort.text] = std::move(dom);
      expect_punct(".");
    } else if (name.text == "bind") {
      Token pred = lex_.take();
      if (pred.kind != Token::Kind::Ident) fail("expected predicate name");
      expect_punct("/");
      Token ar = lex_.take();
      if (ar.kind != Token::Kind::Integer) fail("expected arity");
      Token pos = lex_.take();
      if (pos.kind != Token::Kind::Integer) fail("expected argument position");
      if (pos.value < 1 || pos.value > ar.value)
        fail("argument position out of range");
      Token sort = lex_.take();
      if (sort.kind != Token::Kind::Ident) fail("expected sort name");
      prog_.sort_signature[{pred.text, (int)pos.value}] = sort.text;
      expect_punct(".");
    } else {
      fail("unknown directive #" + name.text);
    }
  }

  Term const_term() {
    Token t = lex_.take();
    if (t.kind == Token::Kind::Integer) return Term::num(t.value);
    if (t.kind == Token::Kind::Ident) return Term::sym(t.text);
    throw SyntaxError("expected a constant", t.line, t.col);
  }

  Term term() {
    Token t = lex_.take();
    if (t.kind == Token::Kind::Integer) return Term::num(t.value);
    if (t.kind == Token::Kind::Ident) return Term::sym(t.text);
    if (t.kind == Token::Kind::Variable) return Term::var(t.text);
    throw SyntaxError("expected a term", t.line, t.col);
  }

  Atom atom() {
    Token t = lex_.take();
    if (t.kind != Token::Kind::Ident)
      throw SyntaxError("expected a predicate name", t.line, t.col);
    Atom a;
    a.pred = t.text;
    if (accept_punct("(")) {
      for (;;) {
        a.args.push_back(term());
        if (accept_punct(")")) break;
        expect_punct(",");
      }
    }
    return a;
  }

  void body(Rule& r) {
    for (;;) {
      if (lex_.peek().kind == Token::Kind::Ident &&
          lex_.peek().text == "not") {
        lex_.take();
        r.body_neg.push_back(atom());
      } else if (lex_.peek().kind == Token::Kind::Variable ||
                 lex_.peek().kind == Token::Kind::Integer) {
        Term lhs = term();
        Token op = lex_.take();
        auto rel = builtin_from_string(op.text);
        if (op.kind != Token::Kind::Punct || !rel)
          throw SyntaxError("expected comparison operator", op.line, op.col);
        r.relations.push_back(make_builtin(*rel, lhs, term()));
      } else {
        // an identifier may start an atom or the lhs of a comparison on a
        // symbolic constant; disambiguate on the following token
        Atom a = atom();
        if (a.args.empty() && lex_.peek().kind == Token::Kind::Punct) {
          auto rel = builtin_from_string(lex_.peek().text);
          if (rel) {
            lex_.take();
            r.relations.push_back(
                make_builtin(*rel, Term::sym(a.pred), term()));
            if (accept_punct(",")) continue;
            break;
          }
        }
        r.body_pos.push_back(std::move(a));
      }
      if (!accept_punct(",")) break;
    }
  }

  Lexer lex_;
  ParseOptions opts_;
  Program prog_;
};

}  // namespace

Program parse_program(const std::string& text, const ParseOptions& opts) {
  return Parser(text, opts).run();
}

Program parse_file(const std::string& path, const ParseOptions& opts) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_program(os.str(), opts);
}

void validate_sorts(const Program& p) {
  for (const auto& [key, sort] : p.sort_signature) {
    if (!p.has_sort(sort))
      throw SyntaxError("unbound sort reference: " + sort + " (bound to " +
                            key.first + "/" + std::to_string(key.second) + ")",
                        0, 0);
  }
  for (const auto& f : p.facts) {
    for (size_t i = 0; i < f.args.size(); ++i) {
      auto sort = p.sort_at(f.pred, (int)i + 1);
      if (!sort) continue;
      const auto& dom = p.sort_decls.at(*sort);
      bool found = false;
      for (const auto& c : dom)
        if (c == f.args[i]) {
          found = true;
          break;
        }
      if (!found)
        throw SyntaxError("fact constant " + f.args[i].str() +
                              " outside sort " + *sort + " in " + f.str(),
                          0, 0);
    }
  }
}

}  // namespace absgrid
