#pragma once

#include "absgrid/syntax.hpp"

namespace absgrid {

// Multi-sort domain mapping m : D1 x ... x Dn -> D̂1 x ... x D̂n. Abstract
// elements are named constants; singleton components reuse the original
// constant so identity mappings read like the original program.
class DomainMapping {
 public:
  // clusters: list of (abstract component names per sort, member tuples).
  static DomainMapping from_clusters(
      std::vector<std::string> sorts,
      std::vector<std::vector<Term>> domains,
      const std::vector<std::pair<std::vector<Term>, std::vector<std::vector<Term>>>>&
          clusters);
  // independent per-sort clusterings crossed into a joint mapping
  static DomainMapping product(
      std::vector<std::string> sorts,
      std::vector<std::vector<Term>> domains,
      const std::vector<std::vector<std::vector<Term>>>& per_sort_clusters);
  static DomainMapping identity(std::vector<std::string> sorts,
                                std::vector<std::vector<Term>> domains);

  // Derives a deterministic component name from its extent: the constant
  // itself for singletons, else <first letter of sort><e1>_<e2>... with
  // contiguous integer runs collapsed to lo_hi.
  static Term component_name(const std::string& sort,
                             const std::vector<Term>& extent);

  const std::vector<std::string>& sorts() const { return sorts_; }
  size_t arity() const { return sorts_.size(); }
  int sort_index(const std::string& sort) const;  // -1 if absent
  const std::vector<Term>& domain(size_t sort_idx) const {
    return domains_[sort_idx];
  }

  const std::vector<Term>& map_tuple(const std::vector<Term>& orig) const;
  const std::vector<std::vector<Term>>& cluster(
      const std::vector<Term>& abs) const;
  const std::map<std::vector<Term>, std::vector<std::vector<Term>>>& clusters()
      const {
    return clusters_;
  }

  // Component view: abstract element of one sort with its original extent.
  const std::vector<Term>& component_extent(size_t sort_idx,
                                            const Term& comp) const;
  const std::map<Term, std::vector<Term>>& components(size_t sort_idx) const {
    return components_[sort_idx];
  }
  bool is_proper_cluster(size_t sort_idx, const Term& comp) const {
    return component_extent(sort_idx, comp).size() > 1;
  }
  // projection of a joint cluster to one sort
  std::vector<Term> cluster_projection(const std::vector<Term>& abs,
                                       size_t sort_idx) const;

  size_t original_size() const;
  size_t abstract_size() const { return clusters_.size(); }
  bool is_identity() const;

  // order index of an original constant within its sort (for builtins)
  int order_of(size_t sort_idx, const Term& value) const;

  std::string str() const;

 private:
  void finalize();  // validates partition/totality, derives components

  std::vector<std::string> sorts_;
  std::vector<std::vector<Term>> domains_;
  std::map<std::vector<Term>, std::vector<Term>> forward_;
  std::map<std::vector<Term>, std::vector<std::vector<Term>>> clusters_;
  std::vector<std::map<Term, std::vector<Term>>> components_;
  std::vector<std::map<Term, int>> order_;
};

struct MappingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class RelType { I, II, III };
const char* to_string(RelType t);
Term reltype_const(RelType t);  // i / ii / iii

// One optional builtin tag per sort; relations always link two objects.
struct JointRelSpec {
  std::vector<std::optional<BuiltinRel>> tags;  // aligned with mapping sorts
  bool any() const {
    for (const auto& t : tags)
      if (t) return true;
    return false;
  }
};

// An object of a joint relation: per sort either an abstract component, an
// original constant (from rel(X,c) forms), or absent.
struct RelObject {
  struct Comp {
    enum class Kind { Absent, Abstract, Const } kind = Kind::Absent;
    Term value;
  };
  std::vector<Comp> comps;  // aligned with mapping sorts

  static RelObject full(const std::vector<Term>& abstract_tuple);
  bool operator<(const RelObject& o) const;
  bool operator==(const RelObject& o) const;
  std::string str() const;
};

struct RelTypeAtom {
  std::vector<RelObject> args;  // k = 2 objects
  RelType type = RelType::I;
};

struct RelTypeSet {
  JointRelSpec rel;
  std::vector<RelTypeAtom> atoms;

  RelType type_of(const std::vector<RelObject>& args) const;
};

// Per-sort existential classification of one object pair.
RelType classify_pair(const DomainMapping& m, const JointRelSpec& rel,
                      const RelObject& lhs, const RelObject& rhs);

// Single-sort relation over the component elements of one sort.
RelTypeSet compute_rel_types(const DomainMapping& m, BuiltinRel rel,
                             const std::string& sort);

// Joint relation over all pairs of full abstract tuples (Appendix-style
// combination: joint I iff all components I, joint III iff some component
// III and none II, II otherwise).
RelTypeSet compute_joint_rel_types(const DomainMapping& m,
                                   const JointRelSpec& rel);

// Combination rule on per-sort types, exposed for the 9-combination check.
RelType combine_component_types(const std::vector<RelType>& comps);

// Lifts a ground atom through the mapping: argument positions of the
// mapping's sorts are grouped into joint objects (i-th occurrence of each
// sort pairs with the i-th of the others) and replaced jointly.
Atom lift_atom(const DomainMapping& m, const Atom& a, const Program& sig);

// All existential images of a ground atom; differs from lift_atom only for
// atoms whose objects cover a strict subset of the mapping's sorts.
std::vector<Atom> lift_atom_images(const DomainMapping& m, const Atom& a,
                                   const Program& sig);

}  // namespace absgrid
