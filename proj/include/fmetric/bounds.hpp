#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

namespace fmetric {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Lower and upper bounds a(i,j) <= d(i,j) <= b(i,j) for every pair of an
/// n-point metric space, refined by the triangle inequality each time an
/// exact distance is revealed.
///
/// Invariants: a and b symmetric with zero diagonal, 0 <= a <= b, a never
/// decreases and b never increases. b is always the shortest-path metric of
/// the graph of revealed pairs (infinity between components).
///
/// Only the strict upper triangle is stored, row by row: the tail of row k
/// holds the pairs (k, l) for l > k.
class BoundMatrix {
 public:
  explicit BoundMatrix(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  double lower(std::size_t i, std::size_t j) const;
  double upper(std::size_t i, std::size_t j) const;
  bool known(std::size_t i, std::size_t j) const;
  std::size_t known_count() const noexcept { return known_count_; }

  /// Entries (k, l) for l = k+1 .. n-1.
  std::span<const double> lower_tail(std::size_t k) const;
  std::span<const double> upper_tail(std::size_t k) const;

  /// Changes whenever an entry of row k's tail changes.
  std::uint64_t row_stamp(std::size_t k) const { return stamp_[k]; }

  /// b/a, where x/0 = infinity for x > 0 and a == b gives 1.
  double ratio(std::size_t i, std::size_t j) const;
  static double ratio(double lower, double upper) noexcept {
    if (lower == upper) return 1.0;
    if (lower == 0.0) return kInfinity;
    return upper / lower;
  }
  /// ratio > 1 + eps, without the division.
  static bool violates(double lower, double upper, double eps) noexcept {
    return upper > (1.0 + eps) * lower;
  }

  /// Record d(i,j) = v and propagate. Upper bounds are refreshed first:
  ///   b(k,l) <- min(b(k,l), b(k,i) + v + b(j,l), b(k,j) + v + b(i,l)),
  /// then every lower bound takes the max of itself and the six
  /// triangle-inequality bounds through the new edge, using refreshed b:
  ///   v - b(k,i) - b(l,j),         v - b(k,j) - b(l,i),
  ///   a(j,l) - v - b(i,k),         a(i,l) - v - b(j,k),
  ///   a(j,k) - v - b(i,l),         a(i,k) - v - b(j,l).
  ///
  /// Throws InconsistentMetric if v lies outside [a(i,j), b(i,j)] by more
  /// than the tolerance. Re-revealing a known pair with its value is a no-op.
  void reveal(std::size_t i, std::size_t j, double v);

  /// Slack allowed when checking a revealed value against its bounds.
  static double tolerance(double v) noexcept { return 1e-9 * (v > 1.0 ? v : 1.0); }

  /// Rows of `a,b` entries separated by spaces; infinity printed as `inf`.
  void dump(std::ostream& out) const;

 private:
  // Offset of (min, max); throws on the diagonal or out of range.
  std::size_t at(std::size_t i, std::size_t j) const;
  void check(std::size_t i, std::size_t j) const;
  void gather(const std::vector<double>& tri, std::size_t i, double diag, double* out) const;

  std::size_t n_;
  std::vector<std::size_t> start_;  // offset of row k's tail
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<unsigned char> known_;
  std::size_t known_count_ = 0;
  std::vector<std::uint64_t> stamp_;
  std::uint64_t version_ = 0;
  std::vector<double> scratch_;
  std::vector<std::size_t> via_i_;
  std::vector<std::size_t> via_j_;
};

}  // namespace fmetric
