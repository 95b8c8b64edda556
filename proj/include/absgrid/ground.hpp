#pragma once

#include <unordered_map>

#include "absgrid/syntax.hpp"

namespace absgrid {

// Dense bijection between ground atoms and integer ids. Atoms synthesized by
// the grounder (implicit sort-predicate facts) are flagged hidden and drop
// out of public interpretation views.
class AtomIndex {
 public:
  int intern(const Atom& a);
  int lookup(const Atom& a) const;  // -1 if absent
  const Atom& atom(int id) const { return atoms_[id]; }
  int size() const { return (int)atoms_.size(); }
  void set_hidden(int id, bool h);
  bool hidden(int id) const { return hidden_[id]; }

 private:
  std::vector<Atom> atoms_;
  std::vector<bool> hidden_;
  std::unordered_map<std::string, int> ids_;
};

struct GroundRule {
  int head = -1;  // -1 => constraint
  bool choice = false;
  std::vector<int> body_pos;
  std::vector<int> body_neg;

  bool operator==(const GroundRule& o) const {
    return head == o.head && choice == o.choice && body_pos == o.body_pos &&
           body_neg == o.body_neg;
  }
};

struct GroundProgram {
  std::vector<GroundRule> rules;
  AtomIndex atoms;

  std::string rule_str(const GroundRule& r) const;
  std::string str() const;
};

struct GroundError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Cartesian instantiation over declared sorts: every instance whose sorted
// arguments respect the domains is emitted; builtins over constants are
// evaluated and rules with false builtins dropped. Variables must be
// bindable to exactly one sort through the signature.
GroundProgram ground(const Program& p);

// Re-reads a ground program as a Program (facts + ground rules), used by the
// idempotence property and the spuriousness query plumbing.
Program ground_as_program(const GroundProgram& g);

}  // namespace absgrid
