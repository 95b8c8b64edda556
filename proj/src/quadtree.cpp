#include "absgrid/quadtree.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace absgrid {

bool Extent::operator<(const Extent& o) const {
  if (row_lo != o.row_lo) return row_lo < o.row_lo;
  if (col_lo != o.col_lo) return col_lo < o.col_lo;
  if (row_hi != o.row_hi) return row_hi < o.row_hi;
  return col_hi < o.col_hi;
}

std::string Extent::str() const {
  std::ostringstream os;
  os << "rows " << row_lo << ".." << row_hi << " cols " << col_lo << ".."
     << col_hi;
  return os.str();
}

namespace {

int int_log(int n, int b) {
  int k = 0, v = 1;
  while (v < n) {
    v *= b;
    ++k;
  }
  if (v != n) return -1;
  return k;
}

std::shared_ptr<const RegionNode> make_leaf(Extent e, int depth) {
  auto node = std::make_shared<RegionNode>();
  node->extent = e;
  node->depth = depth;
  return node;
}

std::vector<Extent> child_extents(const Extent& e, int b) {
  int side = e.side() / b;
  std::vector<Extent> out;
  for (int r = 0; r < b; ++r)
    for (int c = 0; c < b; ++c) {
      Extent ce;
      ce.row_lo = e.row_lo + r * side;
      ce.row_hi = ce.row_lo + side - 1;
      ce.col_lo = e.col_lo + c * side;
      ce.col_hi = ce.col_lo + side - 1;
      out.push_back(ce);
    }
  return out;
}

std::shared_ptr<const RegionNode> expand(const RegionNode& n, int b) {
  auto node = std::make_shared<RegionNode>();
  node->extent = n.extent;
  node->depth = n.depth;
  for (const auto& ce : child_extents(n.extent, b))
    node->children.push_back(make_leaf(ce, n.depth + 1));
  return node;
}

std::shared_ptr<const RegionNode> split_rec(
    const std::shared_ptr<const RegionNode>& node, const Extent& leaf, int b,
    bool& found) {
  if (node->leaf()) {
    if (node->extent == leaf) {
      if (leaf.singleton()) throw QuadTreeError("cannot split a singleton");
      found = true;
      return expand(*node, b);
    }
    return node;
  }
  if (!node->extent.contains(leaf.row_lo, leaf.col_lo)) return node;
  auto copy = std::make_shared<RegionNode>(*node);
  for (auto& child : copy->children) child = split_rec(child, leaf, b, found);
  return copy;
}

void collect_leaves(const RegionNode& n, std::vector<Extent>& out) {
  if (n.leaf()) {
    out.push_back(n.extent);
    return;
  }
  for (const auto& c : n.children) collect_leaves(*c, out);
}

}  // namespace

GridMapping GridMapping::initial(int n, int branching) {
  int k = int_log(n, branching);
  if (k < 1)
    throw QuadTreeError("grid side must be a positive power of the branching "
                        "factor, got n=" +
                        std::to_string(n));
  GridMapping g;
  g.n_ = n;
  g.b_ = branching;
  Extent whole{1, n, 1, n};
  g.root_ = expand(*make_leaf(whole, 0), branching);
  g.rebuild_leaves();
  return g;
}

GridMapping GridMapping::identity(int n, int branching) {
  GridMapping g = initial(n, branching);
  for (;;) {
    auto candidates = g.splittable_leaves();
    if (candidates.empty()) return g;
    for (const auto& leaf : candidates) g = g.split(leaf);
  }
}

void GridMapping::rebuild_leaves() {
  leaves_.clear();
  collect_leaves(*root_, leaves_);
  std::sort(leaves_.begin(), leaves_.end());
}

bool GridMapping::is_identity() const {
  return (int)leaves_.size() == n_ * n_;
}

const Extent* GridMapping::leaf_at(int row, int col) const {
  for (const auto& e : leaves_)
    if (e.contains(row, col)) return &e;
  return nullptr;
}

GridMapping GridMapping::split(const Extent& leaf) const {
  bool found = false;
  GridMapping g;
  g.n_ = n_;
  g.b_ = b_;
  g.root_ = split_rec(root_, leaf, b_, found);
  if (!found) throw QuadTreeError("not a leaf of this mapping: " + leaf.str());
  g.rebuild_leaves();
  return g;
}

std::vector<Extent> GridMapping::splittable_leaves() const {
  std::vector<Extent> out;
  for (const auto& e : leaves_)
    if (!e.singleton()) out.push_back(e);
  return out;
}

double GridMapping::cost(CostDenominator d) const {
  int ell = int_log(n_, b_) - 1;
  // region counts by level: r[i] = number of leaves of side b^i
  std::vector<long long> r(ell + 1, 0);
  for (const auto& e : leaves_) {
    int i = int_log(e.side(), b_);
    if (i < 0 || i > ell)
      throw QuadTreeError("leaf side outside cost levels: " + e.str());
    ++r[i];
  }
  double num = 0, den = 0;
  for (int i = 0; i <= ell; ++i) {
    num += (double)r[i] * (ell - i);
    double regions;
    if (b_ == 2 && d == CostDenominator::Literal)
      regions = (double)n_ * n_ * std::pow(2.0, -(double)i * i);
    else
      regions = (double)n_ * n_ / std::pow((double)b_, 2.0 * i);
    den += regions * (ell - i);
  }
  return den == 0 ? 0.0 : num / den;
}

DomainMapping GridMapping::to_domain_mapping(const std::string& row_sort,
                                             const std::string& col_sort) const {
  std::vector<Term> rows, cols;
  for (int i = 1; i <= n_; ++i) {
    rows.push_back(Term::num(i));
    cols.push_back(Term::num(i));
  }
  std::vector<std::pair<std::vector<Term>, std::vector<std::vector<Term>>>>
      clusters;
  for (const auto& e : leaves_) {
    std::vector<Term> row_ext, col_ext;
    for (int r = e.row_lo; r <= e.row_hi; ++r) row_ext.push_back(Term::num(r));
    for (int c = e.col_lo; c <= e.col_hi; ++c) col_ext.push_back(Term::num(c));
    std::vector<Term> name{DomainMapping::component_name(row_sort, row_ext),
                           DomainMapping::component_name(col_sort, col_ext)};
    std::vector<std::vector<Term>> members;
    for (const auto& r : row_ext)
      for (const auto& c : col_ext) members.push_back({r, c});
    clusters.push_back({std::move(name), std::move(members)});
  }
  return DomainMapping::from_clusters({row_sort, col_sort}, {rows, cols},
                                      clusters);
}

std::string GridMapping::serialize() const {
  std::ostringstream os;
  os << "gridmap n " << n_ << " branching " << b_ << '\n';
  for (const auto& e : leaves_) os << "region " << e.str() << '\n';
  return os.str();
}

GridMapping GridMapping::parse(const std::string& text) {
  std::istringstream in(text);
  std::string word;
  if (!(in >> word) || word != "gridmap")
    throw QuadTreeError("mapping text must start with 'gridmap'");
  int n = 0, b = 0;
  std::string key;
  in >> key >> n >> key >> b;
  if (n <= 0 || b <= 0) throw QuadTreeError("bad gridmap header");
  std::vector<Extent> leaves;
  while (in >> word) {
    if (word != "region") throw QuadTreeError("expected 'region'");
    Extent e;
    std::string rows_kw, cols_kw, range;
    in >> rows_kw >> range;
    auto parse_range = [](const std::string& s, int& lo, int& hi) {
      auto dots = s.find("..");
      if (dots == std::string::npos) throw QuadTreeError("bad range " + s);
      lo = std::stoi(s.substr(0, dots));
      hi = std::stoi(s.substr(dots + 2));
    };
    parse_range(range, e.row_lo, e.row_hi);
    in >> cols_kw >> range;
    parse_range(range, e.col_lo, e.col_hi);
    leaves.push_back(e);
  }
  // rebuild the tree by splitting from the initial mapping until all
  // requested leaves exist; validates that the list is a quad-tree partition
  GridMapping g = GridMapping::initial(n, b);
  std::sort(leaves.begin(), leaves.end());
  bool progress = true;
  while (progress) {
    progress = false;
    for (const auto& want : leaves) {
      const Extent* have = g.leaf_at(want.row_lo, want.col_lo);
      if (!have) throw QuadTreeError("region outside grid: " + want.str());
      if (*have == want) continue;
      if (have->side() <= want.side())
        throw QuadTreeError("regions do not form a quad-tree partition: " +
                            want.str());
      g = g.split(*have);
      progress = true;
    }
  }
  if (g.leaves().size() != leaves.size())
    throw QuadTreeError("region list does not tile the grid");
  for (size_t i = 0; i < leaves.size(); ++i)
    if (!(g.leaves()[i] == leaves[i]))
      throw QuadTreeError("region list does not tile the grid");
  return g;
}

}  // namespace absgrid
