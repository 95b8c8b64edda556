#pragma once

#include <set>

#include "absgrid/domain_map.hpp"
#include "absgrid/syntax.hpp"

namespace absgrid {

struct Diagnostic {
  enum class Severity { Warning, Error };
  Severity severity = Severity::Error;
  int rule_index = -1;
  std::string message;
};

// Mapping-independent fragment checks: at most one builtin relation per sort
// per rule, relation arguments of one sort, relation variables safe (occur
// in the positive body). Positive cycles between predicates only warn.
std::vector<Diagnostic> check_fragment(const Program& p);

bool has_errors(const std::vector<Diagnostic>& ds);

// Predicates occurring in rule heads; everything else is input data whose
// atoms act as guards under abstraction.
std::set<std::string> idb_predicates(const Program& p);

// Variable-to-sort assignment for a rule (consistent across positions).
std::map<std::string, std::string> rule_var_sorts(const Program& p,
                                                  const Rule& r);

struct AbstractionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A rule prepared for abstraction over the mapping's joint sorts: variables
// of those sorts shared between two derived (IDB) positive body atoms are
// standardized apart, introducing equality relations; relations over the
// joint sorts are bundled into one two-object joint relation.
struct NormalizedRule {
  Rule rule;  // standardized; `relations` holds only concrete relations
  std::map<std::string, std::string> var_sort;

  bool has_joint_rel = false;
  JointRelSpec tags;          // per joint sort
  // linked objects as per-sort variable (or constant) tuples; absent
  // components are empty optionals
  std::vector<std::optional<Term>> obj1, obj2;
};

NormalizedRule normalize_for_abstraction(const Program& p, const Rule& r,
                                         const std::vector<std::string>& sorts,
                                         const std::set<std::string>& idb);

}  // namespace absgrid
