#include "absgrid/syntax.hpp"

#include <sstream>

namespace absgrid {

const char* to_string(BuiltinRel r) {
  switch (r) {
    case BuiltinRel::Eq: return "=";
    case BuiltinRel::Ne: return "!=";
    case BuiltinRel::Lt: return "<";
    case BuiltinRel::Le: return "<=";
    case BuiltinRel::Gt: return ">";
    case BuiltinRel::Ge: return ">=";
  }
  return "?";
}

std::optional<BuiltinRel> builtin_from_string(const std::string& s) {
  if (s == "=" || s == "==") return BuiltinRel::Eq;
  if (s == "!=") return BuiltinRel::Ne;
  if (s == "<") return BuiltinRel::Lt;
  if (s == "<=") return BuiltinRel::Le;
  if (s == ">") return BuiltinRel::Gt;
  if (s == ">=") return BuiltinRel::Ge;
  return std::nullopt;
}

BuiltinRel negate_rel(BuiltinRel r) {
  switch (r) {
    case BuiltinRel::Eq: return BuiltinRel::Ne;
    case BuiltinRel::Ne: return BuiltinRel::Eq;
    case BuiltinRel::Lt: return BuiltinRel::Ge;
    case BuiltinRel::Le: return BuiltinRel::Gt;
    case BuiltinRel::Gt: return BuiltinRel::Le;
    case BuiltinRel::Ge: return BuiltinRel::Lt;
  }
  return r;
}

Term Term::var(std::string name) {
  Term t;
  t.kind = Kind::Variable;
  t.text = std::move(name);
  return t;
}

Term Term::sym(std::string s) {
  Term t;
  t.kind = Kind::Constant;
  t.text = std::move(s);
  return t;
}

Term Term::num(long long v) {
  Term t;
  t.kind = Kind::Constant;
  t.is_int = true;
  t.int_val = v;
  return t;
}

bool Term::operator==(const Term& o) const {
  if (kind != o.kind) return false;
  if (kind == Kind::Variable) return text == o.text;
  if (is_int != o.is_int) return false;
  return is_int ? int_val == o.int_val : text == o.text;
}

bool Term::operator<(const Term& o) const {
  auto rank = [](const Term& t) {
    if (t.kind == Kind::Variable) return 2;
    return t.is_int ? 0 : 1;
  };
  if (rank(*this) != rank(o)) return rank(*this) < rank(o);
  if (kind == Kind::Constant && is_int) return int_val < o.int_val;
  return text < o.text;
}

std::string Term::str() const {
  if (kind == Kind::Variable) return text;
  if (is_int) return std::to_string(int_val);
  return text;
}

bool Atom::is_ground() const {
  for (const auto& t : args)
    if (t.is_var()) return false;
  return true;
}

bool Atom::operator==(const Atom& o) const {
  return pred == o.pred && builtin == o.builtin && args == o.args;
}

bool Atom::operator<(const Atom& o) const {
  if (pred != o.pred) return pred < o.pred;
  if (builtin != o.builtin) return builtin < o.builtin;
  return std::lexicographical_compare(args.begin(), args.end(),
                                      o.args.begin(), o.args.end());
}

std::string Atom::str() const {
  std::ostringstream os;
  if (is_builtin()) {
    os << args[0].str() << ' ' << to_string(*builtin) << ' ' << args[1].str();
    return os.str();
  }
  os << pred;
  if (!args.empty()) {
    os << '(';
    for (size_t i = 0; i < args.size(); ++i) {
      if (i) os << ',';
      os << args[i].str();
    }
    os << ')';
  }
  return os.str();
}

Atom make_atom(std::string pred, std::vector<Term> args) {
  Atom a;
  a.pred = std::move(pred);
  a.args = std::move(args);
  return a;
}

Atom make_builtin(BuiltinRel rel, Term lhs, Term rhs) {
  Atom a;
  a.builtin = rel;
  a.args = {std::move(lhs), std::move(rhs)};
  return a;
}

bool Rule::operator==(const Rule& o) const {
  return head == o.head && choice == o.choice && body_pos == o.body_pos &&
         body_neg == o.body_neg && relations == o.relations;
}

std::string Rule::str() const {
  std::ostringstream os;
  if (head) {
    if (choice) os << '{' << head->str() << '}';
    else os << head->str();
  }
  if (!body_empty() || is_constraint()) {
    os << (head ? " :- " : ":- ");
    bool first = true;
    auto emit = [&](const std::string& s) {
      if (!first) os << ", ";
      os << s;
      first = false;
    };
    for (const auto& a : body_pos) emit(a.str());
    for (const auto& a : body_neg) emit("not " + a.str());
    for (const auto& a : relations) emit(a.str());
  }
  os << '.';
  return os.str();
}

std::optional<std::string> Program::sort_at(const std::string& pred,
                                            int pos) const {
  auto it = sort_signature.find({pred, pos});
  if (it == sort_signature.end()) return std::nullopt;
  return it->second;
}

bool Program::is_sort_predicate(const std::string& pred) const {
  return has_sort(pred);
}

std::string Program::str() const {
  std::ostringstream os;
  for (const auto& [name, dom] : sort_decls) {
    os << "#sort " << name << " = {";
    for (size_t i = 0; i < dom.size(); ++i) {
      if (i) os << ',';
      os << dom[i].str();
    }
    os << "}.\n";
  }
  // group signature entries per predicate/arity
  std::map<std::pair<std::string, int>, std::vector<std::pair<int, std::string>>>
      by_pred;
  std::map<std::string, int> arity;
  for (const auto& r : rules) {
    auto note = [&](const Atom& a) {
      if (!a.is_builtin()) arity[a.pred] = (int)a.args.size();
    };
    if (r.head) note(*r.head);
    for (const auto& a : r.body_pos) note(a);
    for (const auto& a : r.body_neg) note(a);
  }
  for (const auto& a : facts) arity[a.pred] = (int)a.args.size();
  for (const auto& [key, sort] : sort_signature) {
    int ar = arity.count(key.first) ? arity[key.first] : key.second;
    by_pred[{key.first, ar}].push_back({key.second, sort});
  }
  for (const auto& [pa, entries] : by_pred)
    for (const auto& [pos, sort] : entries)
      os << "#bind " << pa.first << '/' << pa.second << ' ' << pos << ' '
         << sort << ".\n";
  for (const auto& a : facts) os << a.str() << ".\n";
  for (const auto& r : rules) os << r.str() << '\n';
  return os.str();
}

Program merge_programs(const Program& a, const Program& b) {
  Program out = a;
  for (const auto& [name, dom] : b.sort_decls) {
    if (out.sort_decls.count(name))
      throw SyntaxError("duplicate sort declaration: " + name, 0, 0);
    out.sort_decls[name] = dom;
  }
  for (const auto& [key, sort] : b.sort_signature) {
    auto it = out.sort_signature.find(key);
    if (it != out.sort_signature.end() && it->second != sort)
      throw SyntaxError("conflicting sort binding for " + key.first, 0, 0);
    out.sort_signature[key] = sort;
  }
  for (const auto& f : b.facts) out.facts.push_back(f);
  for (const auto& r : b.rules) out.rules.push_back(r);
  return out;
}

SyntaxError::SyntaxError(const std::string& msg, int line, int col)
    : std::runtime_error(msg + " (line " + std::to_string(line) + ", column " +
                         std::to_string(col) + ")"),
      line(line),
      col(col) {}

bool eval_builtin(BuiltinRel rel, const Term& lhs, const Term& rhs,
                  const std::map<std::string, int>* symbol_order) {
  if (lhs.is_var() || rhs.is_var())
    throw std::runtime_error("builtin evaluation on non-ground terms");
  if (rel == BuiltinRel::Eq) return lhs == rhs;
  if (rel == BuiltinRel::Ne) return !(lhs == rhs);
  long long a, b;
  if (lhs.is_int && rhs.is_int) {
    a = lhs.int_val;
    b = rhs.int_val;
  } else if (!lhs.is_int && !rhs.is_int && symbol_order) {
    auto ia = symbol_order->find(lhs.text);
    auto ib = symbol_order->find(rhs.text);
    if (ia == symbol_order->end() || ib == symbol_order->end())
      throw std::runtime_error("no declared order for symbols " + lhs.text +
                               ", " + rhs.text);
    a = ia->second;
    b = ib->second;
  } else {
    throw std::runtime_error("order comparison needs two integers or two "
                             "symbols of one ordered sort: " +
                             lhs.str() + " vs " + rhs.str());
  }
  switch (rel) {
    case BuiltinRel::Lt: return a < b;
    case BuiltinRel::Le: return a <= b;
    case BuiltinRel::Gt: return a > b;
    case BuiltinRel::Ge: return a >= b;
    default: return false;
  }
}

}  // namespace absgrid
