#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// AST for the restricted ASP fragment: normal/choice rules, constraints,
// builtin comparison atoms, sort-declared finite domains.
namespace absgrid {

enum class BuiltinRel { Eq, Ne, Lt, Le, Gt, Ge };

const char* to_string(BuiltinRel r);
std::optional<BuiltinRel> builtin_from_string(const std::string& s);
BuiltinRel negate_rel(BuiltinRel r);

struct Term {
  enum class Kind { Constant, Variable };
  Kind kind = Kind::Constant;
  bool is_int = false;      // constants only
  long long int_val = 0;    // when is_int
  std::string text;         // symbol text or variable name

  static Term var(std::string name);
  static Term sym(std::string s);
  static Term num(long long v);

  bool is_var() const { return kind == Kind::Variable; }
  bool is_const() const { return kind == Kind::Constant; }

  bool operator==(const Term& o) const;
  bool operator!=(const Term& o) const { return !(*this == o); }
  bool operator<(const Term& o) const;  // ints < symbols < variables

  std::string str() const;
};

struct Atom {
  std::string pred;                    // empty for builtin atoms
  std::optional<BuiltinRel> builtin;   // set iff builtin comparison
  std::vector<Term> args;

  bool is_builtin() const { return builtin.has_value(); }
  bool is_ground() const;
  bool operator==(const Atom& o) const;
  bool operator!=(const Atom& o) const { return !(*this == o); }
  bool operator<(const Atom& o) const;

  std::string str() const;
};

Atom make_atom(std::string pred, std::vector<Term> args);
Atom make_builtin(BuiltinRel rel, Term lhs, Term rhs);

struct Rule {
  std::optional<Atom> head;    // nullopt => constraint
  bool choice = false;         // choice => head present
  std::vector<Atom> body_pos;  // positive non-builtin literals
  std::vector<Atom> body_neg;  // default-negated literals
  std::vector<Atom> relations; // builtin atoms

  bool is_constraint() const { return !head.has_value(); }
  bool body_empty() const {
    return body_pos.empty() && body_neg.empty() && relations.empty();
  }
  bool operator==(const Rule& o) const;
  std::string str() const;
};

// A program together with its sort structure. sort_signature maps
// (predicate, 1-based argument position) to a declared sort name.
struct Program {
  std::vector<Rule> rules;
  std::vector<Atom> facts;  // ground, non-choice
  std::map<std::string, std::vector<Term>> sort_decls;  // ordered domains
  std::map<std::pair<std::string, int>, std::string> sort_signature;

  std::optional<std::string> sort_at(const std::string& pred, int pos) const;
  bool has_sort(const std::string& name) const {
    return sort_decls.count(name) != 0;
  }
  // Unary predicate with the same name as a declared sort: its facts are
  // implicit (the whole domain) and are synthesized at grounding time.
  bool is_sort_predicate(const std::string& pred) const;

  std::string str() const;  // round-trip stable text form
};

// Concatenates rules/facts/declarations; duplicate sort declarations throw.
Program merge_programs(const Program& a, const Program& b);

struct SyntaxError : std::runtime_error {
  int line = 0, col = 0;
  SyntaxError(const std::string& msg, int line, int col);
};

// Builtin evaluation over ground terms. Order comparisons require two
// integers or two symbols with a supplied ordering (declaration order).
bool eval_builtin(BuiltinRel rel, const Term& lhs, const Term& rhs,
                  const std::map<std::string, int>* symbol_order = nullptr);

}  // namespace absgrid
