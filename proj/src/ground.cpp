#include "absgrid/ground.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace absgrid {

int AtomIndex::intern(const Atom& a) {
  std::string key = a.str();
  auto it = ids_.find(key);
  if (it != ids_.end()) return it->second;
  int id = (int)atoms_.size();
  atoms_.push_back(a);
  hidden_.push_back(false);
  ids_.emplace(std::move(key), id);
  return id;
}

int AtomIndex::lookup(const Atom& a) const {
  auto it = ids_.find(a.str());
  return it == ids_.end() ? -1 : it->second;
}

void AtomIndex::set_hidden(int id, bool h) { hidden_[id] = h; }

std::string GroundProgram::rule_str(const GroundRule& r) const {
  Rule out;
  if (r.head >= 0) {
    out.head = atoms.atom(r.head);
    out.choice = r.choice;
  }
  for (int id : r.body_pos) out.body_pos.push_back(atoms.atom(id));
  for (int id : r.body_neg) out.body_neg.push_back(atoms.atom(id));
  return out.str();
}

std::string GroundProgram::str() const {
  std::ostringstream os;
  for (const auto& r : rules) os << rule_str(r) << '\n';
  return os.str();
}

namespace {

struct VarInfo {
  std::string name;
  const std::vector<Term>* domain = nullptr;
  std::string sort;
};

// Figures out the unique sort of every variable in a rule from the
// signature; conflicting or missing bindings are errors.
std::vector<VarInfo> rule_vars(const Program& p, const Rule& r) {
  std::map<std::string, std::string> sort_of;
  auto scan = [&](const Atom& a) {
    if (a.is_builtin()) return;
    for (size_t i = 0; i < a.args.size(); ++i) {
      if (!a.args[i].is_var()) continue;
      std::optional<std::string> s;
      if (p.is_sort_predicate(a.pred) && a.args.size() == 1)
        s = a.pred;
      else
        s = p.sort_at(a.pred, (int)i + 1);
      if (!s) continue;
      auto it = sort_of.find(a.args[i].text);
      if (it != sort_of.end() && it->second != *s)
        throw GroundError("variable " + a.args[i].text +
                          " bound to two sorts (" + it->second + ", " + *s +
                          ") in rule: " + r.str());
      sort_of[a.args[i].text] = *s;
    }
  };
  for (const auto& a : r.body_pos) scan(a);
  for (const auto& a : r.body_neg) scan(a);
  if (r.head) scan(*r.head);

  // every variable anywhere in the rule must have a sort and occur in a
  // positive body atom
  std::set<std::string> seen, in_pos;
  auto collect = [&](const Atom& a) {
    for (const auto& t : a.args)
      if (t.is_var()) seen.insert(t.text);
  };
  if (r.head) collect(*r.head);
  for (const auto& a : r.body_pos) {
    collect(a);
    for (const auto& t : a.args)
      if (t.is_var()) in_pos.insert(t.text);
  }
  for (const auto& a : r.body_neg) collect(a);
  for (const auto& a : r.relations) collect(a);
  std::vector<VarInfo> vars;
  for (const auto& v : seen) {
    auto it = sort_of.find(v);
    if (it == sort_of.end() || !in_pos.count(v))
      throw GroundError("unbound variable " + v + " in rule: " + r.str());
    VarInfo info;
    info.name = v;
    info.sort = it->second;
    auto dit = p.sort_decls.find(it->second);
    if (dit == p.sort_decls.end())
      throw GroundError("sort " + it->second + " is not declared");
    if (dit->second.empty()) throw GroundError("sort domain empty: " + it->second);
    info.domain = &dit->second;
    vars.push_back(std::move(info));
  }
  return vars;
}

struct RuleEncoder {
  std::set<std::string> seen;
  bool insert(const GroundRule& r) {
    std::ostringstream os;
    os << r.head << '|' << r.choice << '|';
    for (int x : r.body_pos) os << x << ',';
    os << '|';
    for (int x : r.body_neg) os << x << ',';
    return seen.insert(os.str()).second;
  }
};

}  // namespace

GroundProgram ground(const Program& p) {
  validate_sorts(p);
  GroundProgram g;
  RuleEncoder dedupe;

  // symbol order per sort for order comparisons
  std::map<std::string, std::map<std::string, int>> sym_order;
  for (const auto& [name, dom] : p.sort_decls) {
    int i = 0;
    for (const auto& c : dom)
      if (!c.is_int) sym_order[name][c.text] = i++;
  }

  auto emit_fact = [&](const Atom& a, bool hidden) {
    GroundRule r;
    r.head = g.atoms.intern(a);
    if (hidden) g.atoms.set_hidden(r.head, true);
    if (dedupe.insert(r)) g.rules.push_back(r);
  };

  for (const auto& f : p.facts) emit_fact(f, false);

  // implicit sort-predicate facts for sorts referenced as unary predicates
  std::set<std::string> used_sort_preds;
  auto note_pred = [&](const Atom& a) {
    if (!a.is_builtin() && a.args.size() == 1 && p.is_sort_predicate(a.pred))
      used_sort_preds.insert(a.pred);
  };
  for (const auto& r : p.rules) {
    if (r.head) note_pred(*r.head);
    for (const auto& a : r.body_pos) note_pred(a);
    for (const auto& a : r.body_neg) note_pred(a);
  }
  for (const auto& s : used_sort_preds)
    for (const auto& c : p.sort_decls.at(s))
      emit_fact(make_atom(s, {c}), true);

  for (const auto& rule : p.rules) {
    auto vars = rule_vars(p, rule);
    size_t n = vars.size();
    std::vector<size_t> idx(n, 0);
    std::map<std::string, size_t> var_slot;
    for (size_t i = 0; i < n; ++i) var_slot[vars[i].name] = i;

    // evaluate a builtin as soon as both arguments are bound: find for each
    // relation the last variable slot it depends on
    struct RelCheck {
      const Atom* rel;
      size_t ready_at;  // max slot index, or SIZE_MAX when ground already
    };
    std::vector<RelCheck> checks;
    for (const auto& rel : rule.relations) {
      size_t ready = 0;
      bool any = false;
      for (const auto& t : rel.args)
        if (t.is_var()) {
          ready = std::max(ready, var_slot.at(t.text));
          any = true;
        }
      checks.push_back({&rel, any ? ready : 0});
    }

    auto subst_term = [&](const Term& t) -> const Term& {
      if (!t.is_var()) return t;
      size_t slot = var_slot.at(t.text);
      return (*vars[slot].domain)[idx[slot]];
    };
    auto eval_rel = [&](const Atom& rel) -> bool {
      const Term& a = subst_term(rel.args[0]);
      const Term& b = subst_term(rel.args[1]);
      const std::map<std::string, int>* order = nullptr;
      if (!a.is_int && !b.is_int) {
        // symbol comparison uses the declared order of the sort of either
        // variable argument
        for (const auto& t : rel.args)
          if (t.is_var()) {
            auto it = sym_order.find(vars[var_slot.at(t.text)].sort);
            if (it != sym_order.end()) order = &it->second;
            break;
          }
      }
      return eval_builtin(*rel.builtin, a, b, order);
    };

    auto subst_atom = [&](const Atom& a) {
      Atom out;
      out.pred = a.pred;
      out.args.reserve(a.args.size());
      for (const auto& t : a.args) out.args.push_back(subst_term(t));
      return out;
    };

    // odometer over variable domains with early builtin pruning
    size_t level = 0;
    bool done = n == 0;
    auto relations_ok_at = [&](size_t lvl) {
      for (const auto& c : checks)
        if (c.ready_at == lvl || (n == 0 && c.ready_at == 0))
          if (!eval_rel(*c.rel)) return false;
      return true;
    };
    auto emit_instance = [&]() {
      GroundRule gr;
      gr.choice = rule.choice;
      if (rule.head) gr.head = g.atoms.intern(subst_atom(*rule.head));
      for (const auto& a : rule.body_pos)
        gr.body_pos.push_back(g.atoms.intern(subst_atom(a)));
      for (const auto& a : rule.body_neg)
        gr.body_neg.push_back(g.atoms.intern(subst_atom(a)));
      if (dedupe.insert(gr)) g.rules.push_back(std::move(gr));
    };

    if (n == 0) {
      bool ok = true;
      for (const auto& c : checks)
        if (!eval_rel(*c.rel)) ok = false;
      if (ok) emit_instance();
      continue;
    }

    while (!done) {
      // descend, checking relations as they become ready
      bool pruned = false;
      while (level < n) {
        if (!relations_ok_at(level)) {
          pruned = true;
          break;
        }
        ++level;
      }
      if (!pruned && level == n) emit_instance();
      // advance odometer at the deepest bound level
      size_t bump = pruned ? level : n - 1;
      for (;;) {
        if (idx[bump] + 1 < vars[bump].domain->size()) {
          ++idx[bump];
          level = bump;
          break;
        }
        idx[bump] = 0;
        if (bump == 0) {
          done = true;
          break;
        }
        --bump;
      }
    }
  }
  return g;
}

Program ground_as_program(const GroundProgram& g) {
  Program p;
  for (const auto& r : g.rules) {
    if (r.head >= 0 && !r.choice && r.body_pos.empty() && r.body_neg.empty()) {
      p.facts.push_back(g.atoms.atom(r.head));
      continue;
    }
    Rule rule;
    if (r.head >= 0) {
      rule.head = g.atoms.atom(r.head);
      rule.choice = r.choice;
    }
    for (int id : r.body_pos) rule.body_pos.push_back(g.atoms.atom(id));
    for (int id : r.body_neg) rule.body_neg.push_back(g.atoms.atom(id));
    p.rules.push_back(std::move(rule));
  }
  return p;
}

}  // namespace absgrid
