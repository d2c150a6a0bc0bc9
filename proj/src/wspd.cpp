#include "fmetric/wspd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <unordered_map>

#include "fmetric/cover_tree.hpp"
#include "fmetric/error.hpp"

namespace fmetric {

std::string_view to_string(WspdBackend backend) {
  return backend == WspdBackend::quadtree ? "quadtree" : "covertree";
}

WspdBackend parse_wspd_backend(std::string_view name) {
  if (name == "quadtree") return WspdBackend::quadtree;
  if (name == "covertree") return WspdBackend::covertree;
  throw InvalidArgument("unknown WSPD backend '" + std::string(name) + "'");
}

namespace {

void emit(std::vector<WspdPair>& out, std::vector<std::size_t> a, std::vector<std::size_t> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (b.front() < a.front()) std::swap(a, b);
  const std::size_t ra = a.front(), rb = b.front();
  out.push_back({std::move(a), std::move(b), ra, rb});
}

// Points at one location: pair the halves, then recurse into each half.
void split_coincident(std::vector<WspdPair>& out, std::span<const std::size_t> pts) {
  if (pts.size() < 2) return;
  const std::size_t half = pts.size() / 2;
  emit(out, {pts.begin(), pts.begin() + half}, {pts.begin() + half, pts.end()});
  split_coincident(out, pts.first(half));
  split_coincident(out, pts.subspan(half));
}

// ---------------------------------------------------------------------------
// Compressed quadtree over coordinates.

class QuadtreeWspd {
 public:
  QuadtreeWspd(const PointSet& points, double separation)
      : points_(points), dim_(points.dim()), separation_(separation) {
    if (dim_ > kQuadtreeMaxDim)
      throw InvalidArgument("quadtree decompositions support at most 64 dimensions");
    std::vector<double> lo(dim_, std::numeric_limits<double>::infinity());
    std::vector<double> hi(dim_, -std::numeric_limits<double>::infinity());
    std::vector<std::size_t> all(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      all[i] = i;
      const auto p = points.point(i);
      for (std::size_t k = 0; k < dim_; ++k) {
        lo[k] = std::min(lo[k], p[k]);
        hi[k] = std::max(hi[k], p[k]);
      }
    }
    double side = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) side = std::max(side, hi[k] - lo[k]);
    // Expanded so that no point sits on the outer boundary.
    side += 2e-9 * std::max(1.0, side);
    for (auto& x : lo) x -= 1e-9 * std::max(1.0, side);
    root_ = build(std::move(all), std::move(lo), side);
  }

  std::vector<WspdPair> decompose() {
    std::vector<WspdPair> out;
    decompose(root_, out);
    return out;
  }

 private:
  struct Node {
    std::vector<std::size_t> points;
    std::vector<double> box_lo, box_hi;  // tight bounding box of `points`
    double diameter_bound = 0.0;         // box diagonal
    std::vector<std::size_t> children;
  };

  std::size_t build(std::vector<std::size_t> pts, std::vector<double> corner, double side) {
    Node node;
    node.box_lo.assign(dim_, std::numeric_limits<double>::infinity());
    node.box_hi.assign(dim_, -std::numeric_limits<double>::infinity());
    for (std::size_t i : pts) {
      const auto p = points_.point(i);
      for (std::size_t k = 0; k < dim_; ++k) {
        node.box_lo[k] = std::min(node.box_lo[k], p[k]);
        node.box_hi[k] = std::max(node.box_hi[k], p[k]);
      }
    }
    double diag2 = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      const double e = node.box_hi[k] - node.box_lo[k];
      diag2 += e * e;
    }
    node.diameter_bound = std::sqrt(diag2);
    node.points = pts;
    const std::size_t id = nodes_.size();
    nodes_.push_back(std::move(node));
    if (pts.size() < 2 || diag2 == 0.0) return id;

    // Halve the cell until the points fall into more than one child.
    std::map<std::uint64_t, std::vector<std::size_t>> groups;
    while (true) {
      const double half = side / 2.0;
      bool resolvable = false;
      for (std::size_t k = 0; k < dim_; ++k) resolvable |= corner[k] + half != corner[k];
      if (!resolvable) {
        // Cell narrower than the coordinate spacing: cut at the widest extent.
        const Node& self = nodes_[id];
        std::size_t axis = 0;
        for (std::size_t k = 1; k < dim_; ++k)
          if (self.box_hi[k] - self.box_lo[k] > self.box_hi[axis] - self.box_lo[axis]) axis = k;
        groups.clear();
        for (std::size_t i : pts)
          groups[points_.point(i)[axis] == self.box_lo[axis] ? 0 : 1].push_back(i);
        break;
      }
      groups.clear();
      for (std::size_t i : pts) {
        const auto p = points_.point(i);
        std::uint64_t code = 0;
        for (std::size_t k = 0; k < dim_; ++k)
          if (p[k] >= corner[k] + half) code |= std::uint64_t{1} << k;
        groups[code].push_back(i);
      }
      if (groups.size() > 1) break;
      const std::uint64_t code = groups.begin()->first;
      for (std::size_t k = 0; k < dim_; ++k)
        if (code >> k & 1) corner[k] += half;
      side = half;
    }
    const double half = side / 2.0;
    std::vector<std::size_t> children;
    for (auto& [code, members] : groups) {
      std::vector<double> child_corner = corner;
      for (std::size_t k = 0; k < dim_; ++k)
        if (code >> k & 1) child_corner[k] += half;
      children.push_back(build(std::move(members), std::move(child_corner), half));
    }
    nodes_[id].children = std::move(children);
    return id;
  }

  double box_distance(const Node& u, const Node& v) const {
    double s = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      double gap = 0.0;
      if (u.box_hi[k] < v.box_lo[k]) gap = v.box_lo[k] - u.box_hi[k];
      else if (v.box_hi[k] < u.box_lo[k]) gap = u.box_lo[k] - v.box_hi[k];
      s += gap * gap;
    }
    return std::sqrt(s);
  }

  void decompose(std::size_t id, std::vector<WspdPair>& out) {
    const auto children = nodes_[id].children;
    if (children.empty()) {
      split_coincident(out, nodes_[id].points);
      return;
    }
    for (std::size_t c : children) decompose(c, out);
    for (std::size_t x = 0; x < children.size(); ++x)
      for (std::size_t y = x + 1; y < children.size(); ++y) pair(children[x], children[y], out);
  }

  void pair(std::size_t u, std::size_t v, std::vector<WspdPair>& out) {
    const Node& nu = nodes_[u];
    const Node& nv = nodes_[v];
    const double dmax = std::max(nu.diameter_bound, nv.diameter_bound);
    if (box_distance(nu, nv) >= separation_ * dmax) {
      emit(out, nu.points, nv.points);
      return;
    }
    // dmax > 0 here, so the larger node has children.
    if (nu.diameter_bound < nv.diameter_bound) std::swap(u, v);
    const auto children = nodes_[u].children;
    for (std::size_t c : children) pair(c, v, out);
  }

  const PointSet& points_;
  std::size_t dim_;
  double separation_;
  std::vector<Node> nodes_;
  std::size_t root_ = 0;
};

// ---------------------------------------------------------------------------
// Cover tree clusters. A cluster (u, s) is node u's point and duplicates plus
// the subtrees of its children from position s on.

class CoverTreeWspd {
 public:
  CoverTreeWspd(DistanceOracle& oracle, double separation)
      : oracle_(oracle), separation_(separation),
        tree_(oracle.size(), [this](std::size_t i, std::size_t j) { return distance(i, j); },
              kCoverTreeBase) {
    const auto& nodes = tree_.nodes();
    suffix_radius_.resize(nodes.size());
    for (std::size_t id = 0; id < nodes.size(); ++id) {
      const auto& ch = nodes[id].children;
      auto& r = suffix_radius_[id];
      r.assign(ch.size() + 1, 0.0);
      for (std::size_t s = ch.size(); s-- > 0;)
        r[s] = std::max(r[s + 1], nodes[ch[s]].parent_distance + nodes[ch[s]].radius);
    }
  }

  std::vector<WspdPair> decompose() {
    std::vector<WspdPair> out;
    decompose({tree_.root(), 0}, out);
    return out;
  }

  std::uint64_t queries() const noexcept { return queries_; }

 private:
  struct Cluster {
    std::size_t node;
    std::size_t start;
  };

  double distance(std::size_t i, std::size_t j) {
    if (i == j) return 0.0;
    const std::uint64_t key = std::uint64_t{std::min(i, j)} << 32 | std::max(i, j);
    const auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    ++queries_;
    const double d = oracle_.exact(i, j);
    memo_.emplace(key, d);
    return d;
  }

  double radius(const Cluster& c) const { return suffix_radius_[c.node][c.start]; }
  bool splittable(const Cluster& c) const {
    return c.start < tree_.node(c.node).children.size();
  }

  std::vector<std::size_t> members(const Cluster& c) const {
    const auto& node = tree_.node(c.node);
    std::vector<std::size_t> out{node.point};
    out.insert(out.end(), node.duplicates.begin(), node.duplicates.end());
    for (std::size_t s = c.start; s < node.children.size(); ++s) {
      const auto sub = tree_.subtree_points(node.children[s]);
      out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
  }

  void decompose(Cluster c, std::vector<WspdPair>& out) {
    if (!splittable(c)) {
      const auto& node = tree_.node(c.node);
      std::vector<std::size_t> pts{node.point};
      pts.insert(pts.end(), node.duplicates.begin(), node.duplicates.end());
      split_coincident(out, pts);
      return;
    }
    const Cluster rest{c.node, c.start + 1};
    const Cluster child{tree_.node(c.node).children[c.start], 0};
    decompose(rest, out);
    decompose(child, out);
    pair(rest, child, out);
  }

  void pair(Cluster x, Cluster y, std::vector<WspdPair>& out) {
    const double rx = radius(x), ry = radius(y);
    const double d = distance(tree_.node(x.node).point, tree_.node(y.node).point);
    // Cross distances are at least d - rx - ry; diameters at most 2r.
    if (d - rx - ry >= separation_ * 2.0 * std::max(rx, ry)) {
      emit(out, members(x), members(y));
      return;
    }
    if (rx < ry || !splittable(x)) std::swap(x, y);
    const Cluster rest{x.node, x.start + 1};
    const Cluster child{tree_.node(x.node).children[x.start], 0};
    pair(rest, y, out);
    pair(child, y, out);
  }

  DistanceOracle& oracle_;
  double separation_;
  std::unordered_map<std::uint64_t, double> memo_;
  std::uint64_t queries_ = 0;
  CoverTree tree_;
  std::vector<std::vector<double>> suffix_radius_;
};

}  // namespace

Wspd build_wspd(DistanceOracle& oracle, double separation, WspdBackend backend) {
  if (!(separation > 0.0) || !std::isfinite(separation))
    throw InvalidArgument("WSPD separation must be a positive finite number");
  Wspd result;
  result.n = oracle.size();
  result.separation = separation;
  result.backend = backend;
  if (result.n < 2) return result;

  if (backend == WspdBackend::quadtree) {
    result.pairs = QuadtreeWspd(oracle.points(), separation).decompose();
  } else {
    const std::string saved = oracle.phase();
    oracle.set_phase("covertree");
    CoverTreeWspd builder(oracle, separation);
    result.pairs = builder.decompose();
    result.backend_queries = builder.queries();
    oracle.set_phase(saved);
  }
  return result;
}

Spanner build_wspd_spanner(DistanceOracle& oracle, double eps, WspdBackend backend,
                           std::uint64_t* backend_queries) {
  if (!(eps > 0.0 && eps <= 1.0))
    throw InvalidArgument("WSPD spanner needs eps in (0, 1]");
  const Wspd wspd = build_wspd(oracle, 16.0 / eps, backend);

  Spanner result{oracle.size(), {}, eps, 0, "wspd_" + std::string(to_string(backend)), 0};
  const std::string saved = oracle.phase();
  oracle.set_phase("wspd-edges");
  result.edges.reserve(wspd.pairs.size());
  for (const auto& p : wspd.pairs)
    result.edges.push_back({p.rep_a, p.rep_b, oracle.exact(p.rep_a, p.rep_b)});
  oracle.set_phase(saved);

  result.queries_used = result.edges.size() + wspd.backend_queries;
  if (backend_queries) *backend_queries = wspd.backend_queries;
  return result;
}

void write_wspd(std::ostream& out, const Wspd& wspd) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", wspd.separation);
  out << wspd.n << ' ' << buf << ' ' << to_string(wspd.backend) << '\n';
  for (const auto& p : wspd.pairs)
    out << p.a.size() << ' ' << p.b.size() << ' ' << p.rep_a << ' ' << p.rep_b << '\n';
  if (!out) throw IoError("failed to write WSPD");
}

}  // namespace fmetric
