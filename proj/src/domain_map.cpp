#include "absgrid/domain_map.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace absgrid {

namespace {

std::vector<std::vector<Term>> tuple_product(
    const std::vector<std::vector<Term>>& domains) {
  std::vector<std::vector<Term>> out{{}};
  for (const auto& dom : domains) {
    std::vector<std::vector<Term>> next;
    next.reserve(out.size() * dom.size());
    for (const auto& t : out)
      for (const auto& v : dom) {
        auto copy = t;
        copy.push_back(v);
        next.push_back(std::move(copy));
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace

Term DomainMapping::component_name(const std::string& sort,
                                   const std::vector<Term>& extent) {
  if (extent.empty()) throw MappingError("empty component extent");
  if (extent.size() == 1) return extent[0];
  std::string prefix = sort.empty() ? std::string("s") : sort.substr(0, 1);
  // collapse a contiguous integer run to lo_hi
  bool contiguous = extent[0].is_int;
  for (size_t i = 1; contiguous && i < extent.size(); ++i)
    if (!extent[i].is_int || extent[i].int_val != extent[i - 1].int_val + 1)
      contiguous = false;
  std::ostringstream os;
  os << prefix;
  if (contiguous) {
    os << extent.front().int_val << '_' << extent.back().int_val;
  } else {
    for (size_t i = 0; i < extent.size(); ++i) {
      if (i) os << '_';
      os << extent[i].str();
    }
  }
  return Term::sym(os.str());
}

DomainMapping DomainMapping::from_clusters(
    std::vector<std::string> sorts, std::vector<std::vector<Term>> domains,
    const std::vector<std::pair<std::vector<Term>, std::vector<std::vector<Term>>>>&
        clusters) {
  DomainMapping m;
  m.sorts_ = std::move(sorts);
  m.domains_ = std::move(domains);
  for (const auto& [name, members] : clusters) {
    if (name.size() != m.sorts_.size())
      throw MappingError("abstract tuple arity mismatch");
    auto& bucket = m.clusters_[name];
    for (const auto& tup : members) {
      if (tup.size() != m.sorts_.size())
        throw MappingError("original tuple arity mismatch");
      bucket.push_back(tup);
      auto [it, inserted] = m.forward_.emplace(tup, name);
      if (!inserted) throw MappingError("tuple mapped twice");
    }
    std::sort(bucket.begin(), bucket.end());
  }
  m.finalize();
  return m;
}

DomainMapping DomainMapping::product(
    std::vector<std::string> sorts, std::vector<std::vector<Term>> domains,
    const std::vector<std::vector<std::vector<Term>>>& per_sort_clusters) {
  if (per_sort_clusters.size() != sorts.size())
    throw MappingError("per-sort cluster count mismatch");
  // name each per-sort cluster, then cross
  std::vector<std::vector<std::pair<Term, std::vector<Term>>>> named(
      sorts.size());
  for (size_t s = 0; s < sorts.size(); ++s)
    for (const auto& cluster : per_sort_clusters[s])
      named[s].push_back({component_name(sorts[s], cluster), cluster});

  std::vector<std::pair<std::vector<Term>, std::vector<std::vector<Term>>>>
      clusters;
  std::vector<size_t> idx(sorts.size(), 0);
  for (;;) {
    std::vector<Term> name;
    std::vector<std::vector<Term>> extents;
    for (size_t s = 0; s < sorts.size(); ++s) {
      name.push_back(named[s][idx[s]].first);
      extents.push_back(named[s][idx[s]].second);
    }
    clusters.push_back({name, tuple_product(extents)});
    size_t s = sorts.size();
    while (s > 0) {
      --s;
      if (++idx[s] < named[s].size()) break;
      idx[s] = 0;
      if (s == 0) {
        return from_clusters(std::move(sorts), std::move(domains), clusters);
      }
    }
  }
}

DomainMapping DomainMapping::identity(std::vector<std::string> sorts,
                                      std::vector<std::vector<Term>> domains) {
  std::vector<std::vector<std::vector<Term>>> per_sort(sorts.size());
  for (size_t s = 0; s < sorts.size(); ++s)
    for (const auto& v : domains[s]) per_sort[s].push_back({v});
  return product(std::move(sorts), std::move(domains), per_sort);
}

void DomainMapping::finalize() {
  // totality over the full joint domain
  size_t expect = 1;
  for (const auto& d : domains_) {
    if (d.empty()) throw MappingError("empty sort domain");
    expect *= d.size();
  }
  if (forward_.size() != expect)
    throw MappingError("mapping is not total on the joint domain (" +
                       std::to_string(forward_.size()) + " of " +
                       std::to_string(expect) + " tuples mapped)");
  // derive component extents
  components_.assign(sorts_.size(), {});
  for (const auto& [abs, members] : clusters_) {
    for (size_t s = 0; s < sorts_.size(); ++s) {
      std::set<Term> vals;
      for (const auto& tup : members) vals.insert(tup[s]);
      auto& extent = components_[s][abs[s]];
      std::set<Term> merged(extent.begin(), extent.end());
      merged.insert(vals.begin(), vals.end());
      extent.assign(merged.begin(), merged.end());
    }
  }
  order_.assign(sorts_.size(), {});
  for (size_t s = 0; s < sorts_.size(); ++s) {
    int i = 0;
    for (const auto& v : domains_[s]) order_[s][v] = i++;
  }
  // keep component extents in declared domain order
  for (size_t s = 0; s < sorts_.size(); ++s)
    for (auto& [name, extent] : components_[s])
      std::sort(extent.begin(), extent.end(),
                [&](const Term& a, const Term& b) {
                  return order_[s].at(a) < order_[s].at(b);
                });
}

int DomainMapping::sort_index(const std::string& sort) const {
  for (size_t i = 0; i < sorts_.size(); ++i)
    if (sorts_[i] == sort) return (int)i;
  return -1;
}

const std::vector<Term>& DomainMapping::map_tuple(
    const std::vector<Term>& orig) const {
  auto it = forward_.find(orig);
  if (it == forward_.end()) {
    std::string t;
    for (const auto& v : orig) t += v.str() + " ";
    throw MappingError("tuple outside mapped domain: " + t);
  }
  return it->second;
}

const std::vector<std::vector<Term>>& DomainMapping::cluster(
    const std::vector<Term>& abs) const {
  auto it = clusters_.find(abs);
  if (it == clusters_.end()) throw MappingError("unknown abstract tuple");
  return it->second;
}

const std::vector<Term>& DomainMapping::component_extent(
    size_t sort_idx, const Term& comp) const {
  auto it = components_[sort_idx].find(comp);
  if (it == components_[sort_idx].end())
    throw MappingError("unknown abstract component " + comp.str());
  return it->second;
}

std::vector<Term> DomainMapping::cluster_projection(
    const std::vector<Term>& abs, size_t sort_idx) const {
  std::set<Term> vals;
  for (const auto& tup : cluster(abs)) vals.insert(tup[sort_idx]);
  return {vals.begin(), vals.end()};
}

size_t DomainMapping::original_size() const { return forward_.size(); }

bool DomainMapping::is_identity() const {
  return clusters_.size() == forward_.size();
}

int DomainMapping::order_of(size_t sort_idx, const Term& value) const {
  auto it = order_[sort_idx].find(value);
  if (it == order_[sort_idx].end())
    throw MappingError("value outside sort domain: " + value.str());
  return it->second;
}

std::string DomainMapping::str() const {
  std::ostringstream os;
  os << "mapping over";
  for (const auto& s : sorts_) os << ' ' << s;
  os << '\n';
  for (const auto& [abs, members] : clusters_) {
    os << "  (";
    for (size_t i = 0; i < abs.size(); ++i) {
      if (i) os << ',';
      os << abs[i].str();
    }
    os << ") <- {";
    for (size_t i = 0; i < members.size(); ++i) {
      if (i) os << ' ';
      os << '(';
      for (size_t j = 0; j < members[i].size(); ++j) {
        if (j) os << ',';
        os << members[i][j].str();
      }
      os << ')';
    }
    os << "}\n";
  }
  return os.str();
}

// ---- relation types ------------------------------------------------------

const char* to_string(RelType t) {
  switch (t) {
    case RelType::I: return "i";
    case RelType::II: return "ii";
    case RelType::III: return "iii";
  }
  return "?";
}

Term reltype_const(RelType t) { return Term::sym(to_string(t)); }

RelObject RelObject::full(const std::vector<Term>& abstract_tuple) {
  RelObject o;
  for (const auto& t : abstract_tuple)
    o.comps.push_back({Comp::Kind::Abstract, t});
  return o;
}

bool RelObject::operator<(const RelObject& o) const {
  if (comps.size() != o.comps.size()) return comps.size() < o.comps.size();
  for (size_t i = 0; i < comps.size(); ++i) {
    if (comps[i].kind != o.comps[i].kind) return comps[i].kind < o.comps[i].kind;
    if (comps[i].value != o.comps[i].value)
      return comps[i].value < o.comps[i].value;
  }
  return false;
}

bool RelObject::operator==(const RelObject& o) const {
  if (comps.size() != o.comps.size()) return false;
  for (size_t i = 0; i < comps.size(); ++i)
    if (comps[i].kind != o.comps[i].kind || !(comps[i].value == o.comps[i].value))
      return false;
  return true;
}

std::string RelObject::str() const {
  std::string s = "(";
  for (size_t i = 0; i < comps.size(); ++i) {
    if (i) s += ',';
    switch (comps[i].kind) {
      case Comp::Kind::Absent: s += '_'; break;
      default: s += comps[i].value.str();
    }
  }
  return s + ")";
}

namespace {

// original values an object offers for one sort
std::vector<Term> object_values(const DomainMapping& m, const RelObject& o,
                                size_t sort_idx) {
  const auto& c = o.comps[sort_idx];
  switch (c.kind) {
    case RelObject::Comp::Kind::Const:
      return {c.value};
    case RelObject::Comp::Kind::Abstract: {
      // a full object constrains values jointly; use the cluster projection
      bool full = true;
      for (const auto& cc : o.comps)
        if (cc.kind != RelObject::Comp::Kind::Abstract) full = false;
      if (full) {
        std::vector<Term> abs;
        for (const auto& cc : o.comps) abs.push_back(cc.value);
        if (m.clusters().count(abs)) return m.cluster_projection(abs, sort_idx);
      }
      return m.component_extent(sort_idx, c.value);
    }
    default:
      throw MappingError("relation touches a sort absent from the object");
  }
}

}  // namespace

RelType classify_pair(const DomainMapping& m, const JointRelSpec& rel,
                      const RelObject& lhs, const RelObject& rhs) {
  std::vector<RelType> comps;
  for (size_t s = 0; s < m.sorts().size(); ++s) {
    if (!rel.tags[s]) continue;
    auto lv = object_values(m, lhs, s);
    auto rv = object_values(m, rhs, s);
    bool holds = false, fails = false;
    for (const auto& a : lv) {
      int ia = m.order_of(s, a);
      for (const auto& b : rv) {
        int ib = m.order_of(s, b);
        bool v;
        switch (*rel.tags[s]) {
          case BuiltinRel::Eq: v = ia == ib; break;
          case BuiltinRel::Ne: v = ia != ib; break;
          case BuiltinRel::Lt: v = ia < ib; break;
          case BuiltinRel::Le: v = ia <= ib; break;
          case BuiltinRel::Gt: v = ia > ib; break;
          case BuiltinRel::Ge: v = ia >= ib; break;
          default: v = false;
        }
        (v ? holds : fails) = true;
        if (holds && fails) break;
      }
      if (holds && fails) break;
    }
    if (holds && fails) comps.push_back(RelType::III);
    else if (holds) comps.push_back(RelType::I);
    else comps.push_back(RelType::II);
  }
  return combine_component_types(comps);
}

RelType combine_component_types(const std::vector<RelType>& comps) {
  bool any_ii = false, any_iii = false;
  for (auto t : comps) {
    if (t == RelType::II) any_ii = true;
    if (t == RelType::III) any_iii = true;
  }
  if (!any_ii && !any_iii) return RelType::I;
  if (any_iii && !any_ii) return RelType::III;
  return RelType::II;
}

RelTypeSet compute_rel_types(const DomainMapping& m, BuiltinRel rel,
                             const std::string& sort) {
  int s = m.sort_index(sort);
  if (s < 0) throw MappingError("sort not in mapping: " + sort);
  JointRelSpec spec;
  spec.tags.assign(m.sorts().size(), std::nullopt);
  spec.tags[s] = rel;

  RelTypeSet set;
  set.rel = spec;
  std::vector<RelObject> objects;
  for (const auto& [name, extent] : m.components(s)) {
    RelObject o;
    o.comps.assign(m.sorts().size(), {});
    o.comps[s] = {RelObject::Comp::Kind::Abstract, name};
    objects.push_back(std::move(o));
  }
  for (const auto& a : objects)
    for (const auto& b : objects)
      set.atoms.push_back({{a, b}, classify_pair(m, spec, a, b)});
  return set;
}

RelTypeSet compute_joint_rel_types(const DomainMapping& m,
                                   const JointRelSpec& rel) {
  if (rel.tags.size() != m.sorts().size())
    throw MappingError("joint relation arity mismatch");
  RelTypeSet set;
  set.rel = rel;
  std::vector<RelObject> objects;
  for (const auto& [abs, members] : m.clusters())
    objects.push_back(RelObject::full(abs));
  for (const auto& a : objects)
    for (const auto& b : objects)
      set.atoms.push_back({{a, b}, classify_pair(m, rel, a, b)});
  return set;
}

RelType RelTypeSet::type_of(const std::vector<RelObject>& args) const {
  for (const auto& a : atoms)
    if (a.args == args) return a.type;
  throw MappingError("relation type not materialized for argument pair");
}

// ---- lifting ---------------------------------------------------------------

namespace {

// groups an atom's argument positions into joint objects: the i-th
// occurrence of each mapped sort joins object i
struct ObjectLayout {
  // per object: sort index -> arg position (or -1)
  std::vector<std::vector<int>> objects;
};

ObjectLayout object_layout(const DomainMapping& m, const Atom& a,
                           const Program& sig) {
  ObjectLayout layout;
  std::vector<int> count(m.sorts().size(), 0);
  for (size_t pos = 0; pos < a.args.size(); ++pos) {
    std::optional<std::string> sort;
    if (sig.is_sort_predicate(a.pred) && a.args.size() == 1)
      sort = a.pred;
    else
      sort = sig.sort_at(a.pred, (int)pos + 1);
    if (!sort) continue;
    int s = m.sort_index(*sort);
    if (s < 0) continue;
    int obj = count[s]++;
    while ((int)layout.objects.size() <= obj)
      layout.objects.push_back(std::vector<int>(m.sorts().size(), -1));
    layout.objects[obj][s] = (int)pos;
  }
  return layout;
}

}  // namespace

std::vector<Atom> lift_atom_images(const DomainMapping& m, const Atom& a,
                                   const Program& sig) {
  if (!a.is_ground()) throw MappingError("lift of a non-ground atom");
  auto layout = object_layout(m, a, sig);
  std::vector<Atom> images{a};
  for (const auto& obj : layout.objects) {
    bool full = true;
    for (int pos : obj)
      if (pos < 0) full = false;
    std::vector<Atom> next;
    if (full) {
      for (auto img : images) {
        std::vector<Term> orig;
        for (int pos : obj) orig.push_back(a.args[pos]);
        const auto& abs = m.map_tuple(orig);
        for (size_t s = 0; s < obj.size(); ++s) img.args[obj[s]] = abs[s];
        next.push_back(std::move(img));
      }
    } else {
      // partial object: every component containing the value is an image
      for (const auto& img : images) {
        std::vector<std::vector<Term>> choices;  // per present sort
        std::vector<int> positions;
        for (size_t s = 0; s < obj.size(); ++s) {
          if (obj[s] < 0) continue;
          positions.push_back(obj[s]);
          std::vector<Term> comps;
          for (const auto& [name, extent] : m.components(s)) {
            for (const auto& v : extent)
              if (v == a.args[obj[s]]) {
                comps.push_back(name);
                break;
              }
          }
          if (comps.empty())
            throw MappingError("argument outside declared sort: " +
                               a.args[obj[s]].str());
          choices.push_back(std::move(comps));
        }
        std::vector<size_t> idx(choices.size(), 0);
        for (;;) {
          Atom copy = img;
          for (size_t i = 0; i < positions.size(); ++i)
            copy.args[positions[i]] = choices[i][idx[i]];
          next.push_back(std::move(copy));
          size_t i = choices.size();
          bool done = false;
          while (i > 0) {
            --i;
            if (++idx[i] < choices[i].size()) break;
            idx[i] = 0;
            if (i == 0) done = true;
          }
          if (done) break;
        }
      }
    }
    images = std::move(next);
  }
  std::sort(images.begin(), images.end());
  images.erase(std::unique(images.begin(), images.end()), images.end());
  return images;
}

Atom lift_atom(const DomainMapping& m, const Atom& a, const Program& sig) {
  auto images = lift_atom_images(m, a, sig);
  if (images.size() != 1)
    throw MappingError("atom has no unique lifted image: " + a.str());
  return images[0];
}

}  // namespace absgrid
