#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bmospline/interval.hpp"

namespace bmospline {

// Identifies the support Q = [x_{m,j}, x_{m,j+k}] of one B-spline of order k
// at level m.  Q covers the k consecutive cells j, ..., j+k-1 of that level.
struct SupportIndex {
  int level = 0;
  int j = 0;
  friend bool operator==(const SupportIndex&, const SupportIndex&) = default;
};

// Nested hierarchy of strictly increasing knot vectors over a compact window.
// Level m+1 refines level m by splitting every cell into at least two and at
// most max_children pieces; within one level all cell lengths are comparable
// up to the factor lambda().  Immutable after construction.
//
// Builders produce binary refinements.  The validator accepts externally
// loaded hierarchies with up to 8 children per cell.
class MultilevelPartition {
 public:
  // Uniform level 0 with 2k+1 cells, midpoint splits thereafter.
  static MultilevelPartition build_dyadic(Interval window, int levels, int k);

  // Binary refinement with each new knot drawn uniformly from
  // [mid - jitter*len, mid + jitter*len] of its parent cell.  jitter = 0
  // reproduces build_dyadic exactly; jitter must stay below 0.25 so that
  // child/parent length ratios cannot leave the admissible range.
  // Bit-reproducible for a fixed seed: levels are refined in order and cells
  // left to right, one draw per split.
  static MultilevelPartition build_perturbed(Interval window, int levels, int k,
                                             double jitter, std::uint64_t seed);

  // Wrap externally produced knot vectors; runs the full validator.
  static MultilevelPartition from_levels(Interval window, int k,
                                         std::vector<std::vector<double>> levels);

  Interval window() const { return window_; }
  int k() const { return k_; }
  int max_level() const { return static_cast<int>(levels_.size()) - 1; }
  int num_levels() const { return static_cast<int>(levels_.size()); }
  double lambda() const { return lambda_; }

  std::span<const double> knots(int m) const;
  int cell_count(int m) const;
  Interval cell(int m, int j) const;
  // index of the cell containing x; the right window endpoint belongs to the
  // last cell
  int find_cell(int m, double x) const;

  int support_count(int m) const;  // cell_count(m) - k + 1
  std::vector<SupportIndex> supports(int m) const;
  Interval support_interval(SupportIndex q) const;
  int total_supports() const;

  // Extended neighborhood of the cell (m, j): the union of the 2k-1 cells
  // j-k+1, ..., j+k-1, clipped at the window.  The overload lets norm code
  // use an order different from the partition's spline order.
  Interval omega(int m, int j) const { return omega(m, j, k_); }
  Interval omega(int m, int j, int k) const;

  // Largest level with at most one knot strictly inside J, clamped to
  // [0, max_level()].  J must be a nondegenerate subinterval of the window.
  int interval_level(Interval J) const;

  // Checks, in order: window agreement, strict monotonicity, exact nesting,
  // child counts in [2, max_children], within-level comparability against
  // lambda(), child/parent ratio bounds implied by lambda and the observed
  // max child count, level-0 cell count, and cell-length underflow.  Throws
  // std::invalid_argument naming the violated condition.
  void validate(int max_children = 8) const;

 private:
  MultilevelPartition(Interval window, int k, double lambda,
                      std::vector<std::vector<double>> levels)
      : window_(window), k_(k), lambda_(lambda), levels_(std::move(levels)) {}

  static double recompute_lambda(const std::vector<std::vector<double>>& levels);

  Interval window_;
  int k_ = 2;
  double lambda_ = 1.0;
  std::vector<std::vector<double>> levels_;
};

// Index set of all supports across levels, organized as a forest: the
// identifying interval U of the support (m, j) is its first cell
// (x_{m,j}, x_{m,j+1}), and the parent of a node is the unique node one level
// up whose U contains it.  Nodes whose U falls in the trailing region not
// covered by coarser supports are extra roots (a finite-window effect).
//
// Synthetic instances (dyadic_tree) back the sequence-space experiments.
class NestedStructure {
 public:
  struct Node {
    int level = 0;
    int pos = 0;  // support index j for partition-derived structures
    Interval u;
    int parent = -1;           // flat index, -1 for roots
    std::vector<int> children;  // flat indices
  };

  static NestedStructure from_partition(const MultilevelPartition& p);
  // Full binary tree of the given depth over [0, 1]; 2^depth - 1 nodes.
  static NestedStructure dyadic_tree(int depth);

  int size() const { return static_cast<int>(nodes_.size()); }
  int level_count() const { return static_cast<int>(level_begin_.size()) - 1; }
  const Node& node(int i) const { return nodes_.at(static_cast<size_t>(i)); }
  std::pair<int, int> level_range(int m) const;
  int flat_index(int level, int pos) const;

  // Conditions on the truncated structure: each level's U-intervals tile a
  // contiguous prefix of the window, every non-root has exactly one parent,
  // within-level lengths are comparable, every node at a non-final level has
  // at least two children whose lengths sum to its own.
  void validate() const;

 private:
  std::vector<Node> nodes_;
  std::vector<int> level_begin_;  // size level_count()+1
};

// Coefficient vector aligned with the flat (level-major) node order of a
// structure.  The structure must outlive the sequence.
struct CoeffSequence {
  const NestedStructure* structure = nullptr;
  std::vector<double> values;
};

}  // namespace bmospline
