#include "absgrid/solver.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

namespace absgrid {

namespace {

bool model_contains(const Model& m, int id) {
  return std::binary_search(m.begin(), m.end(), id);
}

Atom fresh_choice_atom(int rule_index) {
  return make_atom("_choice_" + std::to_string(rule_index), {});
}

}  // namespace

GroundProgram desugar_choices(const GroundProgram& g) {
  GroundProgram out;
  out.atoms = g.atoms;
  for (size_t k = 0; k < g.rules.size(); ++k) {
    const GroundRule& r = g.rules[k];
    if (!r.choice) {
      out.rules.push_back(r);
      continue;
    }
    int fresh = out.atoms.intern(fresh_choice_atom((int)k));
    out.atoms.set_hidden(fresh, true);
    GroundRule a = r, b;
    a.choice = false;
    a.body_neg.push_back(fresh);
    b.head = fresh;
    b.body_pos = r.body_pos;
    b.body_neg = r.body_neg;
    b.body_neg.push_back(r.head);
    out.rules.push_back(std::move(a));
    out.rules.push_back(std::move(b));
  }
  return out;
}

GroundProgram reduct(const GroundProgram& g, const Model& i) {
  GroundProgram d = desugar_choices(g);
  // determine fresh-atom values: a' <- B, not a holds iff B satisfied and a
  // false; evaluate in two passes since fresh atoms never occur in B
  std::vector<bool> truth(d.atoms.size(), false);
  for (int id : i)
    if (id < d.atoms.size()) truth[id] = true;
  for (size_t k = 0; k < g.rules.size(); ++k) {
    if (!g.rules[k].choice) continue;
    int fresh = d.atoms.lookup(fresh_choice_atom((int)k));
    const GroundRule& r = g.rules[k];
    bool body = true;
    for (int id : r.body_pos)
      if (!truth[id]) body = false;
    for (int id : r.body_neg)
      if (truth[id]) body = false;
    truth[fresh] = body && !truth[r.head];
  }
  GroundProgram out;
  out.atoms = d.atoms;
  for (const auto& r : d.rules) {
    bool sat = true;
    for (int id : r.body_pos)
      if (!truth[id]) sat = false;
    for (int id : r.body_neg)
      if (truth[id]) sat = false;
    if (!sat) continue;
    GroundRule kept;
    kept.head = r.head;
    kept.body_pos = r.body_pos;
    out.rules.push_back(std::move(kept));
  }
  return out;
}

LeastModelResult least_model(const GroundProgram& g) {
  LeastModelResult res;
  std::vector<bool> truth(g.atoms.size(), false);
  std::vector<int> remaining(g.rules.size());
  std::vector<std::vector<int>> watch(g.atoms.size());
  std::vector<int> queue;
  for (size_t k = 0; k < g.rules.size(); ++k) {
    const auto& r = g.rules[k];
    if (!r.body_neg.empty())
      throw std::runtime_error("least_model requires a negation-free program");
    remaining[k] = (int)r.body_pos.size();
    for (int id : r.body_pos) watch[id].push_back((int)k);
    if (remaining[k] == 0) {
      if (r.head < 0) {
        res.consistent = false;
      } else if (!truth[r.head]) {
        truth[r.head] = true;
        queue.push_back(r.head);
      }
    }
  }
  while (!queue.empty()) {
    int a = queue.back();
    queue.pop_back();
    for (int k : watch[a]) {
      if (--remaining[k] == 0) {
        int h = g.rules[k].head;
        if (h < 0) {
          res.consistent = false;
        } else if (!truth[h]) {
          truth[h] = true;
          queue.push_back(h);
        }
      }
    }
  }
  for (int id = 0; id < g.atoms.size(); ++id)
    if (truth[id]) res.atoms.push_back(id);
  return res;
}

bool is_answer_set(const GroundProgram& g, const Model& i) {
  GroundProgram d = desugar_choices(g);
  std::vector<bool> truth(d.atoms.size(), false);
  for (int id : i) {
    if (id >= g.atoms.size()) return false;
    truth[id] = true;
  }
  for (size_t k = 0; k < g.rules.size(); ++k) {
    if (!g.rules[k].choice) continue;
    int fresh = d.atoms.lookup(fresh_choice_atom((int)k));
    const GroundRule& r = g.rules[k];
    bool body = true;
    for (int id : r.body_pos)
      if (!truth[id]) body = false;
    for (int id : r.body_neg)
      if (truth[id]) body = false;
    truth[fresh] = body && !truth[r.head];
  }
  // model check + collect kept rules
  std::vector<const GroundRule*> kept;
  for (const auto& r : d.rules) {
    bool sat = true;
    for (int id : r.body_pos)
      if (!truth[id]) sat = false;
    for (int id : r.body_neg)
      if (truth[id]) sat = false;
    if (!sat) continue;
    if (r.head < 0) return false;        // violated constraint
    if (!truth[r.head]) return false;    // not a model
    kept.push_back(&r);
  }
  // least model of the kept rules' positive parts
  std::vector<bool> derived(d.atoms.size(), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto* r : kept) {
      if (derived[r->head]) continue;
      bool ok = true;
      for (int id : r->body_pos)
        if (!derived[id]) {
          ok = false;
          break;
        }
      if (ok) {
        derived[r->head] = true;
        changed = true;
      }
    }
  }
  for (int id = 0; id < d.atoms.size(); ++id)
    if (truth[id] != derived[id]) return false;
  return true;
}

namespace {

// DPLL search engine over a desugared ground program.
class StableSolver {
 public:
  explicit StableSolver(const GroundProgram& g)
      : prog_(desugar_choices(g)), npub_(g.atoms.size()) {
    n_ = prog_.atoms.size();
    val_.assign(n_, 0);
    support_.assign(n_, 0);
    occ_pos_.resize(n_);
    occ_neg_.resize(n_);
    nrules_ = prog_.rules.size();
    unknown_.resize(nrules_);
    nfalse_.resize(nrules_);
    for (size_t k = 0; k < nrules_; ++k) {
      const auto& r = prog_.rules[k];
      unknown_[k] = (int)(r.body_pos.size() + r.body_neg.size());
      nfalse_[k] = 0;
      for (int id : r.body_pos) occ_pos_[id].push_back((int)k);
      for (int id : r.body_neg) occ_neg_[id].push_back((int)k);
      if (r.head >= 0) ++support_[r.head];
    }
  }

  SolveResult enumerate(const SolveBudget& b) {
    begin(b);
    SolveResult res;
    search(
        [&](const Model& m) {
          res.models.push_back(m);
          return b.max_models > 0 && (long long)res.models.size() >= b.max_models;
        });
    res.exhausted = exhausted_;
    res.timed_out = timed_out_;
    res.decisions = decisions_;
    std::sort(res.models.begin(), res.models.end(),
              [](const Model& a, const Model& b) {
                if (a.size() != b.size()) return a.size() < b.size();
                return a < b;
              });
    return res;
  }

  MinimizeResult minimize(const SolveBudget& b) {
    begin(b);
    minimizing_ = true;
    min_mark_.assign(n_, false);
    for (int id : *b.minimize_atoms)
      if (id >= 0 && id < (int)npub_) min_mark_[id] = true;
    MinimizeResult res;
    search(
        [&](const Model& m) {
          if (!res.best || cost_ < res.best_cost) {
            res.best = m;
            res.best_cost = cost_;
            best_bound_ = cost_;
          }
          return res.best_cost == 0;  // cannot improve on zero
        });
    res.optimal = exhausted_ || (res.best && res.best_cost == 0);
    res.timed_out = timed_out_;
    return res;
  }

 private:
  void begin(const SolveBudget& b) {
    if (b.timeout_ms)
      deadline_ = std::chrono::steady_clock::now() +
                  std::chrono::milliseconds(*b.timeout_ms);
    else
      deadline_.reset();
  }

  bool deadline_hit() {
    if (!deadline_) return false;
    if (++tick_ % 2048 != 0) return false;
    return std::chrono::steady_clock::now() >= *deadline_;
  }

  // ---- assignment and propagation -------------------------------------

  bool assign(int a, int8_t v) {
    if (val_[a] == v) return true;
    if (val_[a] != 0) return false;
    val_[a] = v;
    trail_.push_back(a);
    if (minimizing_ && v == 1 && min_mark_[a]) ++cost_;
    if (v == 1) {
      for (int k : occ_pos_[a]) --unknown_[k];
      for (int k : occ_neg_[a]) {
        --unknown_[k];
        if (++nfalse_[k] == 1 && !drop_support(k)) return false;
      }
      if (support_[a] == 0) return false;
    } else {
      for (int k : occ_pos_[a]) {
        --unknown_[k];
        if (++nfalse_[k] == 1 && !drop_support(k)) return false;
      }
      for (int k : occ_neg_[a]) --unknown_[k];
    }
    // fire bodies completed by this literal turning true
    for (int k : (v == 1 ? occ_pos_[a] : occ_neg_[a]))
      if (!fire_if_complete(k)) return false;
    return true;
  }

  bool drop_support(int k) {
    int h = prog_.rules[k].head;
    if (h < 0) return true;
    if (--support_[h] == 0) {
      if (val_[h] == 1) return false;
      if (val_[h] == 0) pending_.push_back({h, 2});
    }
    return true;
  }

  bool fire_if_complete(int k) {
    if (unknown_[k] != 0 || nfalse_[k] != 0) return true;
    int h = prog_.rules[k].head;
    if (h < 0) return false;  // satisfied constraint body
    if (val_[h] == 2) return false;
    if (val_[h] == 0) pending_.push_back({h, 1});
    return true;
  }

  bool propagate() {
    while (!pending_.empty()) {
      auto [a, v] = pending_.back();
      pending_.pop_back();
      if (!assign(a, v)) {
        pending_.clear();
        return false;
      }
    }
    return true;
  }

  void unassign(int a) {
    int8_t v = val_[a];
    if (minimizing_ && v == 1 && min_mark_[a]) --cost_;
    if (v == 1) {
      for (int k : occ_pos_[a]) ++unknown_[k];
      for (int k : occ_neg_[a]) {
        ++unknown_[k];
        if (--nfalse_[k] == 0) {
          int h = prog_.rules[k].head;
          if (h >= 0) ++support_[h];
        }
      }
    } else {
      for (int k : occ_pos_[a]) {
        ++unknown_[k];
        if (--nfalse_[k] == 0) {
          int h = prog_.rules[k].head;
          if (h >= 0) ++support_[h];
        }
      }
      for (int k : occ_neg_[a]) ++unknown_[k];
    }
    val_[a] = 0;
    if (a < hint_) hint_ = a;
  }

  void undo_to(size_t mark) {
    while (trail_.size() > mark) {
      unassign(trail_.back());
      trail_.pop_back();
    }
  }

  // ---- search ----------------------------------------------------------

  int pick_branch() {
    while (hint_ < n_ && val_[hint_] != 0) ++hint_;
    return hint_ < n_ ? (int)hint_ : -1;
  }

  bool stable_leaf() const {
    // closure over kept rules (bodies true under the total assignment)
    std::vector<bool> derived(n_, false);
    std::vector<int> remaining(nrules_, -1);
    std::vector<std::vector<int>> watch(n_);
    std::vector<int> queue;
    for (size_t k = 0; k < nrules_; ++k) {
      if (unknown_[k] != 0 || nfalse_[k] != 0) continue;  // not kept
      const auto& r = prog_.rules[k];
      remaining[k] = (int)r.body_pos.size();
      for (int id : r.body_pos) watch[id].push_back((int)k);
      if (remaining[k] == 0 && !derived[r.head]) {
        derived[r.head] = true;
        queue.push_back(r.head);
      }
    }
    while (!queue.empty()) {
      int a = queue.back();
      queue.pop_back();
      for (int k : watch[a]) {
        if (--remaining[k] == 0) {
          int h = prog_.rules[k].head;
          if (!derived[h]) {
            derived[h] = true;
            queue.push_back(h);
          }
        }
      }
    }
    for (int i = 0; i < (int)n_; ++i)
      if ((val_[i] == 1) != derived[i]) return false;
    return true;
  }

  Model current_model() const {
    Model m;
    for (int i = 0; i < (int)npub_; ++i)
      if (val_[i] == 1 && !prog_.atoms.hidden(i)) m.push_back(i);
    return m;
  }

  // on_model returns true to stop the search
  template <typename F>
  void search(F on_model) {
    exhausted_ = false;
    timed_out_ = false;
    struct Decision {
      int atom;
      int8_t next;  // value to try on flip, 0 when both tried
      size_t mark;
    };
    std::vector<Decision> decisions;

    // root propagation: unsupported atoms false, facts fire
    bool ok = true;
    for (int a = 0; a < (int)n_; ++a)
      if (support_[a] == 0 && val_[a] == 0) pending_.push_back({a, 2});
    for (size_t k = 0; k < nrules_; ++k)
      if (!fire_if_complete((int)k)) ok = false;
    if (ok) ok = propagate();

    auto backtrack = [&]() -> bool {
      // returns false when the whole tree is finished
      while (!decisions.empty()) {
        auto& d = decisions.back();
        if (d.next != 0) {
          undo_to(d.mark);
          int8_t v = d.next;
          d.next = 0;
          if (assign(d.atom, v) && propagate()) return true;
          // conflict on the flipped branch: fall through to pop
          pending_.clear();
          continue;
        }
        undo_to(d.mark);
        decisions.pop_back();
      }
      return false;
    };

    if (!ok) {
      pending_.clear();
      bool alive = backtrack();
      if (!alive) {
        exhausted_ = true;
        return;
      }
    }

    for (;;) {
      if (deadline_hit()) {
        timed_out_ = true;
        return;
      }
      if (minimizing_ && bound_exceeded()) {
        if (!backtrack()) break;
        continue;
      }
      int a = pick_branch();
      if (a < 0) {
        // total assignment
        if (stable_leaf()) {
          if (on_model(current_model())) return;
        }
        if (!backtrack()) break;
        continue;
      }
      ++decisions_;
      decisions.push_back({a, 1, trail_.size()});
      if (!(assign(a, 2) && propagate())) {
        pending_.clear();
        if (!backtrack()) break;
      }
    }
    exhausted_ = true;
  }

  bool bound_exceeded() const {
    return best_bound_ >= 0 && cost_ >= best_bound_;
  }
  GroundProgram prog_;
  size_t npub_ = 0;
  size_t n_ = 0;
  size_t nrules_ = 0;
  std::vector<int8_t> val_;
  std::vector<int> support_;
  std::vector<int> unknown_, nfalse_;
  std::vector<std::vector<int>> occ_pos_, occ_neg_;
  std::vector<int> trail_;
  std::vector<std::pair<int, int8_t>> pending_;
  size_t hint_ = 0;
  bool minimizing_ = false;
  std::vector<bool> min_mark_;
  long long cost_ = 0;
  long long best_bound_ = -1;
  unsigned long long decisions_ = 0;
  unsigned long long tick_ = 0;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  bool exhausted_ = false;
  bool timed_out_ = false;
};

}  // namespace

SolveResult enumerate_answer_sets(const GroundProgram& g,
                                  const SolveBudget& b) {
  StableSolver s(g);
  return s.enumerate(b);
}

MinimizeResult solve_minimize(const GroundProgram& g, const SolveBudget& b) {
  if (!b.minimize_atoms)
    throw std::invalid_argument("solve_minimize requires minimize_atoms");
  StableSolver s(g);
  return s.minimize(b);
}

Model model_from_atoms(const GroundProgram& g,
                       const std::vector<Atom>& atoms) {
  Model m;
  for (const auto& a : atoms) {
    int id = g.atoms.lookup(a);
    if (id >= 0) m.push_back(id);
  }
  std::sort(m.begin(), m.end());
  m.erase(std::unique(m.begin(), m.end()), m.end());
  return m;
}

std::vector<Atom> atoms_of(const GroundProgram& g, const Model& m) {
  std::vector<Atom> out;
  for (int id : m) out.push_back(g.atoms.atom(id));
  return out;
}

std::string model_str(const GroundProgram& g, const Model& m) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int id : m) {
    if (!first) os << ' ';
    os << g.atoms.atom(id).str();
    first = false;
  }
  os << '}';
  return os.str();
}

}  // namespace absgrid
