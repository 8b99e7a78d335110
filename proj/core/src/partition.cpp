#include "bmospline/partition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bmospline/rng.hpp"
#include "bmospline/util.hpp"

namespace bmospline {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// index i with knots[i] <= x < knots[i+1]; x == last knot maps to last cell
int locate_cell(std::span<const double> knots, double x) {
  if (x < knots.front() || x > knots.back()) return -1;
  if (x == knots.back()) return static_cast<int>(knots.size()) - 2;
  auto it = std::upper_bound(knots.begin(), knots.end(), x);
  return static_cast<int>(it - knots.begin()) - 1;
}

std::vector<double> split_level(const std::vector<double>& knots, double jitter, Rng* rng) {
  std::vector<double> next;
  next.reserve(knots.size() * 2 - 1);
  for (size_t i = 0; i + 1 < knots.size(); ++i) {
    const double a = knots[i], b = knots[i + 1];
    double t = 0.5 * (a + b);
    if (rng != nullptr && jitter > 0.0) {
      t += (2.0 * rng->uniform01() - 1.0) * jitter * (b - a);
    }
    next.push_back(a);
    next.push_back(t);
  }
  next.push_back(knots.back());
  return next;
}

}  // namespace

double MultilevelPartition::recompute_lambda(const std::vector<std::vector<double>>& levels) {
  double lambda = 1.0;
  for (const auto& knots : levels) {
    double lo = 0.0, hi = 0.0;
    for (size_t i = 0; i + 1 < knots.size(); ++i) {
      const double len = knots[i + 1] - knots[i];
      if (i == 0) {
        lo = hi = len;
      } else {
        lo = std::min(lo, len);
        hi = std::max(hi, len);
      }
    }
    if (lo > 0.0) lambda = std::max(lambda, hi / lo);
  }
  return lambda;
}

MultilevelPartition MultilevelPartition::build_dyadic(Interval window, int levels, int k) {
  return build_perturbed(window, levels, k, 0.0, 0);
}

MultilevelPartition MultilevelPartition::build_perturbed(Interval window, int levels, int k,
                                                         double jitter, std::uint64_t seed) {
  require(window.valid(), "partition: window must satisfy lo < hi");
  require(k >= 2 && k <= 4, "partition: spline order k must be in [2, 4]");
  require(levels >= 0, "partition: level count must be nonnegative");
  require(jitter >= 0.0 && jitter < 0.25,
          "partition: jitter must lie in [0, 0.25) to keep child/parent ratios admissible");

  const int n0 = 2 * k + 1;
  // guard against cells collapsing under the quadrature resolution
  const double finest = window.length() / n0 / std::ldexp(1.0, levels);
  require(finest > 1e-12 * std::max(1.0, window.length()),
          "partition: finest cell underflows the quadrature resolution; lower the level count");

  std::vector<std::vector<double>> lv;
  lv.reserve(static_cast<size_t>(levels) + 1);
  std::vector<double> base(static_cast<size_t>(n0) + 1);
  base.front() = window.lo;
  base.back() = window.hi;
  for (int i = 1; i < n0; ++i)
    base[static_cast<size_t>(i)] =
        window.lo + window.length() * (static_cast<double>(i) / n0);
  lv.push_back(std::move(base));

  Rng rng(seed);
  Rng* rp = (jitter > 0.0) ? &rng : nullptr;
  for (int m = 0; m < levels; ++m) lv.push_back(split_level(lv.back(), jitter, rp));

  const double lam = recompute_lambda(lv);  // before the move below
  MultilevelPartition p(window, k, lam, std::move(lv));
  p.validate();
  return p;
}

MultilevelPartition MultilevelPartition::from_levels(Interval window, int k,
                                                     std::vector<std::vector<double>> levels) {
  require(window.valid(), "partition: window must satisfy lo < hi");
  require(k >= 2 && k <= 4, "partition: spline order k must be in [2, 4]");
  require(!levels.empty(), "partition: need at least one level");
  const double lam = recompute_lambda(levels);
  MultilevelPartition p(window, k, lam, std::move(levels));
  p.validate();
  return p;
}

std::span<const double> MultilevelPartition::knots(int m) const {
  if (m < 0 || m > max_level()) throw std::out_of_range("partition: level out of range");
  return levels_[static_cast<size_t>(m)];
}

int MultilevelPartition::cell_count(int m) const {
  return static_cast<int>(knots(m).size()) - 1;
}

Interval MultilevelPartition::cell(int m, int j) const {
  auto kn = knots(m);
  if (j < 0 || j + 1 >= static_cast<int>(kn.size()))
    throw std::out_of_range("partition: cell index out of range");
  return {kn[static_cast<size_t>(j)], kn[static_cast<size_t>(j) + 1]};
}

int MultilevelPartition::find_cell(int m, double x) const {
  const int i = locate_cell(knots(m), x);
  if (i < 0) throw std::out_of_range("partition: point outside the window");
  return i;
}

int MultilevelPartition::support_count(int m) const {
  const int n = cell_count(m) - k_ + 1;
  return n > 0 ? n : 0;
}

std::vector<SupportIndex> MultilevelPartition::supports(int m) const {
  std::vector<SupportIndex> out;
  const int n = support_count(m);
  out.reserve(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) out.push_back({m, j});
  return out;
}

Interval MultilevelPartition::support_interval(SupportIndex q) const {
  auto kn = knots(q.level);
  if (q.j < 0 || q.j + k_ >= static_cast<int>(kn.size()))
    throw std::out_of_range("partition: support index out of range");
  return {kn[static_cast<size_t>(q.j)], kn[static_cast<size_t>(q.j + k_)]};
}

int MultilevelPartition::total_supports() const {
  int n = 0;
  for (int m = 0; m <= max_level(); ++m) n += support_count(m);
  return n;
}

Interval MultilevelPartition::omega(int m, int j, int k) const {
  auto kn = knots(m);
  const int cells = static_cast<int>(kn.size()) - 1;
  if (j < 0 || j >= cells) throw std::out_of_range("partition: cell index out of range");
  if (k < 1) throw std::invalid_argument("partition: omega order must be positive");
  const int lo = std::max(0, j + 1 - k);
  const int hi = std::min(cells, j + k);
  return {kn[static_cast<size_t>(lo)], kn[static_cast<size_t>(hi)]};
}

int MultilevelPartition::interval_level(Interval J) const {
  require(J.valid(), "interval_level: degenerate interval");
  require(window_.contains(J), "interval_level: interval must lie inside the window");
  for (int m = max_level(); m >= 1; --m) {
    auto kn = knots(m);
    auto lo = std::upper_bound(kn.begin(), kn.end(), J.lo);
    auto hi = std::lower_bound(kn.begin(), kn.end(), J.hi);
    const long interior = hi - lo;
    if (interior <= 1) return m;
  }
  return 0;
}

void MultilevelPartition::validate(int max_children) const {
  require(max_children >= 2 && max_children <= 8,
          "partition invalid [children]: checker accepts between 2 and 8 children per cell");
  require(!levels_.empty(), "partition invalid [levels]: no levels present");
  const double scale = std::max(1.0, window_.length());

  for (int m = 0; m <= max_level(); ++m) {
    const auto& kn = levels_[static_cast<size_t>(m)];
    require(kn.size() >= 2, "partition invalid [levels]: level with fewer than two knots");
    require(kn.front() == window_.lo && kn.back() == window_.hi,
            "partition invalid [window]: level " + std::to_string(m) +
                " does not span the declared window");
    for (size_t i = 0; i + 1 < kn.size(); ++i) {
      require(kn[i] < kn[i + 1],
              "partition invalid [monotone]: knots of level " + std::to_string(m) +
                  " are not strictly increasing");
      require(kn[i + 1] - kn[i] > 1e-12 * scale,
              "partition invalid [resolution]: cell underflows the quadrature resolution at level " +
                  std::to_string(m));
    }
  }

  require(cell_count(0) >= 2 * k_ + 1,
          "partition invalid [level0]: level 0 must have at least 2k+1 cells");

  // exact nesting plus child counts
  int observed_m0 = 2;
  for (int m = 0; m < max_level(); ++m) {
    const auto& coarse = levels_[static_cast<size_t>(m)];
    const auto& fine = levels_[static_cast<size_t>(m) + 1];
    size_t f = 0;
    std::vector<size_t> pos;  // position of each coarse knot inside fine
    pos.reserve(coarse.size());
    for (double x : coarse) {
      while (f < fine.size() && fine[f] < x) ++f;
      require(f < fine.size() && fine[f] == x,
              "partition invalid [nested]: level " + std::to_string(m + 1) +
                  " does not contain every knot of level " + std::to_string(m));
      pos.push_back(f);
    }
    for (size_t j = 0; j + 1 < pos.size(); ++j) {
      const int children = static_cast<int>(pos[j + 1] - pos[j]);
      require(children >= 2, "partition invalid [children]: a cell of level " +
                                 std::to_string(m) + " has fewer than two children");
      require(children <= max_children,
              "partition invalid [children]: a cell of level " + std::to_string(m) +
                  " has more than " + std::to_string(max_children) + " children");
      observed_m0 = std::max(observed_m0, children);
    }
  }

  // within-level comparability against the declared constant
  const double lam = lambda_;
  for (int m = 0; m <= max_level(); ++m) {
    const auto& kn = levels_[static_cast<size_t>(m)];
    double lo = kn[1] - kn[0], hi = lo;
    for (size_t i = 1; i + 1 < kn.size(); ++i) {
      const double len = kn[i + 1] - kn[i];
      lo = std::min(lo, len);
      hi = std::max(hi, len);
    }
    require(hi <= lam * lo * (1.0 + 1e-12),
            "partition invalid [lambda]: cell lengths of level " + std::to_string(m) +
                " exceed the declared comparability factor");
  }

  // child/parent length ratios against the bounds implied by lambda and the
  // observed branching; these follow from nesting + comparability, so a
  // violation indicates inconsistent input
  const double r = 1.0 / (observed_m0 * lam - lam + 1.0);
  const double rho = lam / (lam + 1.0);
  for (int m = 0; m < max_level(); ++m) {
    const auto& coarse = levels_[static_cast<size_t>(m)];
    const auto& fine = levels_[static_cast<size_t>(m) + 1];
    size_t f = 0;
    for (size_t j = 0; j + 1 < coarse.size(); ++j) {
      const double plen = coarse[j + 1] - coarse[j];
      while (fine[f] < coarse[j]) ++f;
      size_t g = f;
      while (fine[g] < coarse[j + 1]) {
        const double clen = fine[g + 1] - fine[g];
        const double ratio = clen / plen;
        require(ratio >= r * (1.0 - 1e-9) && ratio <= rho * (1.0 + 1e-9),
                "partition invalid [child-ratio]: child/parent length ratio escapes the "
                "admissible range at level " + std::to_string(m + 1));
        ++g;
      }
      f = g;
    }
  }
}

// ---------------------------------------------------------------------------
// NestedStructure

NestedStructure NestedStructure::from_partition(const MultilevelPartition& p) {
  NestedStructure ns;
  ns.level_begin_.push_back(0);
  for (int m = 0; m <= p.max_level(); ++m) {
    const int n = p.support_count(m);
    for (int j = 0; j < n; ++j) {
      Node nd;
      nd.level = m;
      nd.pos = j;
      nd.u = p.cell(m, j);
      ns.nodes_.push_back(std::move(nd));
    }
    ns.level_begin_.push_back(static_cast<int>(ns.nodes_.size()));
  }

  // parent = the support one level up whose first cell contains this U
  for (int m = 1; m <= p.max_level(); ++m) {
    auto [b, e] = ns.level_range(m);
    const auto kn = p.knots(m - 1);
    for (int i = b; i < e; ++i) {
      Node& nd = ns.nodes_[static_cast<size_t>(i)];
      const int cell = locate_cell(kn, nd.u.lo);
      if (cell >= 0 && cell < p.support_count(m - 1)) {
        const int pi = ns.flat_index(m - 1, cell);
        nd.parent = pi;
        ns.nodes_[static_cast<size_t>(pi)].children.push_back(i);
      } else {
        // extra root: U lies under the trailing cells that carry no support
        nd.parent = -1;
      }
    }
  }
  return ns;
}

NestedStructure NestedStructure::dyadic_tree(int depth) {
  if (depth < 1) throw std::invalid_argument("dyadic_tree: depth must be positive");
  NestedStructure ns;
  ns.level_begin_.push_back(0);
  for (int m = 0; m < depth; ++m) {
    const int n = 1 << m;
    const double len = 1.0 / n;
    for (int i = 0; i < n; ++i) {
      Node nd;
      nd.level = m;
      nd.pos = i;
      nd.u = {i * len, (i + 1) * len};
      if (m > 0) {
        const int pi = ns.level_begin_[static_cast<size_t>(m - 1)] + i / 2;
        nd.parent = pi;
      }
      ns.nodes_.push_back(std::move(nd));
    }
    ns.level_begin_.push_back(static_cast<int>(ns.nodes_.size()));
  }
  for (int i = 0; i < ns.size(); ++i) {
    const int pi = ns.nodes_[static_cast<size_t>(i)].parent;
    if (pi >= 0) ns.nodes_[static_cast<size_t>(pi)].children.push_back(i);
  }
  return ns;
}

std::pair<int, int> NestedStructure::level_range(int m) const {
  if (m < 0 || m >= level_count()) throw std::out_of_range("structure: level out of range");
  return {level_begin_[static_cast<size_t>(m)], level_begin_[static_cast<size_t>(m) + 1]};
}

int NestedStructure::flat_index(int level, int pos) const {
  auto [b, e] = level_range(level);
  const int i = b + pos;
  if (pos < 0 || i >= e) throw std::out_of_range("structure: node position out of range");
  return i;
}

void NestedStructure::validate() const {
  require(!nodes_.empty(), "structure invalid [empty]: no nodes");
  const double scale = nodes_.front().u.length();

  for (int m = 0; m < level_count(); ++m) {
    auto [b, e] = level_range(m);
    require(e > b, "structure invalid [levels]: empty level " + std::to_string(m));
    double lo = 0.0, hi = 0.0;
    for (int i = b; i < e; ++i) {
      const Node& nd = nodes_[static_cast<size_t>(i)];
      require(nd.u.valid(), "structure invalid [interval]: degenerate U interval");
      if (i > b) {
        const Node& prev = nodes_[static_cast<size_t>(i) - 1];
        require(std::abs(prev.u.hi - nd.u.lo) <= 1e-12 * std::max(1.0, scale),
                "structure invalid [cover]: level " + std::to_string(m) +
                    " U-intervals do not tile a contiguous prefix");
      }
      const double len = nd.u.length();
      if (i == b) {
        lo = hi = len;
      } else {
        lo = std::min(lo, len);
        hi = std::max(hi, len);
      }
    }
    require(hi <= 64.0 * lo,
            "structure invalid [comparable]: level " + std::to_string(m) +
                " U lengths are not comparable");
  }

  for (int i = 0; i < size(); ++i) {
    const Node& nd = nodes_[static_cast<size_t>(i)];
    if (nd.parent >= 0) {
      const Node& par = nodes_[static_cast<size_t>(nd.parent)];
      require(par.level == nd.level - 1 && par.u.contains(nd.u),
              "structure invalid [parent]: parent does not contain child");
    } else if (nd.level > 0) {
      // extra roots may appear only past the coarser level's covered prefix
      auto [pb, pe] = level_range(nd.level - 1);
      const double covered = nodes_[static_cast<size_t>(pe) - 1].u.hi;
      require(nd.u.lo >= covered - 1e-12 * std::max(1.0, scale),
              "structure invalid [parent]: uncovered node inside the covered prefix");
    }
    if (nd.level + 1 < level_count() && !nd.children.empty()) {
      require(static_cast<int>(nd.children.size()) >= 2,
              "structure invalid [children]: node with a single child");
      double sum = 0.0;
      for (int c : nd.children) sum += nodes_[static_cast<size_t>(c)].u.length();
      require(std::abs(sum - nd.u.length()) <= 1e-10 * std::max(1.0, scale),
              "structure invalid [children]: child U lengths do not sum to the parent's");
    }
    if (nd.level + 1 < level_count()) {
      require(!nd.children.empty(),
              "structure invalid [children]: interior node without children");
    }
  }
}

}  // namespace bmospline
