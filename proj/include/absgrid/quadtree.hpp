#pragma once

#include <memory>

#include "absgrid/domain_map.hpp"

namespace absgrid {

// Inclusive 1-based cell ranges; rows count from the top, columns from the
// left.
struct Extent {
  int row_lo = 1, row_hi = 1;
  int col_lo = 1, col_hi = 1;

  int side() const { return row_hi - row_lo + 1; }
  bool singleton() const { return row_lo == row_hi && col_lo == col_hi; }
  bool contains(int row, int col) const {
    return row >= row_lo && row <= row_hi && col >= col_lo && col <= col_hi;
  }
  bool operator==(const Extent& o) const {
    return row_lo == o.row_lo && row_hi == o.row_hi && col_lo == o.col_lo &&
           col_hi == o.col_hi;
  }
  bool operator<(const Extent& o) const;
  std::string str() const;
};

struct RegionNode {
  Extent extent;
  int depth = 0;
  std::vector<std::shared_ptr<const RegionNode>> children;  // empty => leaf
  bool leaf() const { return children.empty(); }
};

enum class CostDenominator { Literal, PerLevelCount };

// Hierarchical b-ary (b^2 children) grid clustering. Immutable: split shares
// untouched subtrees.
class GridMapping {
 public:
  static GridMapping initial(int n, int branching = 2);
  static GridMapping identity(int n, int branching = 2);

  int n() const { return n_; }
  int branching() const { return b_; }
  const std::vector<Extent>& leaves() const { return leaves_; }
  bool is_identity() const;
  const Extent* leaf_at(int row, int col) const;

  // Splits the leaf with this extent into its b^2 children.
  GridMapping split(const Extent& leaf) const;
  std::vector<Extent> splittable_leaves() const;  // non-singletons

  // c(m) per the evaluation formula; the literal denominator uses the
  // n^2 2^{-i^2} term as printed, per-level-count uses the actual number of
  // size-b^i regions. b=3 always uses per-level-count.
  double cost(CostDenominator d = CostDenominator::Literal) const;

  DomainMapping to_domain_mapping(const std::string& row_sort = "row",
                                  const std::string& col_sort = "col") const;

  std::string serialize() const;
  static GridMapping parse(const std::string& text);

  const RegionNode& root() const { return *root_; }

 private:
  GridMapping() = default;
  void rebuild_leaves();

  int n_ = 0, b_ = 2;
  std::shared_ptr<const RegionNode> root_;
  std::vector<Extent> leaves_;  // sorted top-left first
};

struct QuadTreeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace absgrid
