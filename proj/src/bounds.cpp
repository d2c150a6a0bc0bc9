#include "fmetric/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ostream>
#include <string>
#include <utility>

#include "fmetric/error.hpp"
#include "fmetric/metric.hpp"

namespace fmetric {

namespace {

// New lower bounds for one row tail: the six triangle-inequality candidates
// through the revealed edge, clamped to the upper bound. Kept branch-free so
// that it vectorizes. Only add, subtract, min and max are involved, so every
// clone computes identical values.
#if defined(__GNUC__) && defined(__x86_64__) && defined(__ELF__)
__attribute__((target_clones("avx2", "default")))
#endif
void relax_lower_row(const double* __restrict arow, const double* __restrict brow,
                     const double* __restrict bil, const double* __restrict bjl,
                     const double* __restrict ail, const double* __restrict ajl,
                     double* __restrict out, std::size_t m, double v, double bki, double bkj,
                     double aik, double ajk) {
  const double v_bki = v + bki;
  const double v_bkj = v + bkj;
  for (std::size_t t = 0; t < m; ++t) {
    double x = arow[t];
    double y = v - (bki + bjl[t]);
    x = x < y ? y : x;
    y = v - (bkj + bil[t]);
    x = x < y ? y : x;
    y = ajl[t] - v_bki;
    x = x < y ? y : x;
    y = ail[t] - v_bkj;
    x = x < y ? y : x;
    y = ajk - (v + bil[t]);
    x = x < y ? y : x;
    y = aik - (v + bjl[t]);
    x = x < y ? y : x;
    out[t] = brow[t] < x ? brow[t] : x;
  }
}

}  // namespace

BoundMatrix::BoundMatrix(std::size_t n) : n_(n) {
  if (n == 0) throw InvalidArgument("bound matrix needs n >= 1");
  const std::size_t pairs = n * (n - 1) / 2;
  start_.resize(n);
  for (std::size_t k = 0; k < n; ++k) start_[k] = triangle_index(n, k, k + 1);
  lower_.assign(pairs, 0.0);
  upper_.assign(pairs, kInfinity);
  known_.assign(pairs, 0);
  stamp_.assign(n, 0);
}

void BoundMatrix::check(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_)
    throw IndexOutOfRange("pair (" + std::to_string(i) + ", " + std::to_string(j) +
                          ") out of range for " + std::to_string(n_) + " points");
}

std::size_t BoundMatrix::at(std::size_t i, std::size_t j) const {
  check(i, j);
  if (i > j) std::swap(i, j);
  return start_[i] + (j - i - 1);
}

double BoundMatrix::lower(std::size_t i, std::size_t j) const {
  if (i == j) return check(i, j), 0.0;
  return lower_[at(i, j)];
}

double BoundMatrix::upper(std::size_t i, std::size_t j) const {
  if (i == j) return check(i, j), 0.0;
  return upper_[at(i, j)];
}

bool BoundMatrix::known(std::size_t i, std::size_t j) const {
  if (i == j) return check(i, j), false;
  return known_[at(i, j)] != 0;
}

std::span<const double> BoundMatrix::lower_tail(std::size_t k) const {
  check(k, k);
  return std::span<const double>(lower_).subspan(start_[k], n_ - k - 1);
}

std::span<const double> BoundMatrix::upper_tail(std::size_t k) const {
  check(k, k);
  return std::span<const double>(upper_).subspan(start_[k], n_ - k - 1);
}

double BoundMatrix::ratio(std::size_t i, std::size_t j) const {
  if (i == j) throw InvalidArgument("ratio is undefined on the diagonal");
  return ratio(lower(i, j), upper(i, j));
}

// Full row i of a triangle-stored matrix.
void BoundMatrix::gather(const std::vector<double>& tri, std::size_t i, double diag,
                         double* out) const {
  for (std::size_t l = 0; l < i; ++l) out[l] = tri[start_[l] + (i - l - 1)];
  out[i] = diag;
  std::copy_n(tri.data() + start_[i], n_ - i - 1, out + i + 1);
}

void BoundMatrix::reveal(std::size_t i, std::size_t j, double v) {
  if (i == j) throw InvalidArgument("cannot reveal a diagonal pair");
  const std::size_t ij = at(i, j);
  if (!(v >= 0.0) || !std::isfinite(v))
    throw InvalidArgument("revealed distance must be finite and non-negative");

  const double tol = tolerance(v);
  if (known_[ij]) {
    if (std::abs(lower_[ij] - v) <= tol) return;
    throw InconsistentMetric("pair (" + std::to_string(i) + ", " + std::to_string(j) +
                             ") re-revealed with a different distance");
  }
  if (v < lower_[ij] - tol || v > upper_[ij] + tol) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "distance %.17g for (%zu, %zu) outside bounds [%.17g, %.17g]",
                  v, i, j, lower_[ij], upper_[ij]);
    throw InconsistentMetric(buf);
  }

  const std::size_t n = n_;
  ++version_;
  scratch_.resize(11 * n + 4);
  double* const bi = scratch_.data();
  double* const bj = bi + n;
  double* const ai = bj + n;
  double* const aj = ai + n;
  // Suffix extrema over l >= index, one slot of padding at n.
  double* const min_bi = aj + n;
  double* const min_bj = min_bi + n + 1;
  double* const max_ai = min_bj + n + 1;
  double* const max_aj = max_ai + n + 1;
  double* const next = max_aj + n + 1;

  // Upper bounds. A path through the new edge can only shorten (k, l) if k is
  // strictly closer to i through the edge than directly (or the reverse) and
  // l the other way round, so only those index sets are visited. Sums are
  // formed as (x_k + y_l) + v, matching the full relaxation.
  gather(upper_, i, 0.0, bi);
  gather(upper_, j, 0.0, bj);
  via_i_.clear();
  via_j_.clear();
  for (std::size_t k = 0; k < n; ++k) {
    if (bi[k] + v < bj[k]) via_i_.push_back(k);       // k -> i -> j is shorter
    else if (bj[k] + v < bi[k]) via_j_.push_back(k);  // k -> j -> i is shorter
  }
  for (std::size_t p : via_i_) {
    for (std::size_t q : via_j_) {
      const std::size_t k = std::min(p, q);
      const std::size_t l = std::max(p, q);
      const double path = (bi[p] + bj[q]) + v;
      double& b = upper_[start_[k] + (l - k - 1)];
      if (path < b) {
        b = path;
        stamp_[k] = version_;
      }
    }
  }
  upper_[ij] = v;
  lower_[ij] = v;
  stamp_[std::min(i, j)] = version_;

  // Lower bounds, using the refreshed upper bounds.
  gather(upper_, i, 0.0, bi);
  gather(upper_, j, 0.0, bj);
  gather(lower_, i, 0.0, ai);
  gather(lower_, j, 0.0, aj);
  min_bi[n] = min_bj[n] = kInfinity;
  max_ai[n] = max_aj[n] = 0.0;
  for (std::size_t l = n; l-- > 0;) {
    min_bi[l] = std::min(min_bi[l + 1], bi[l]);
    min_bj[l] = std::min(min_bj[l + 1], bj[l]);
    max_ai[l] = std::max(max_ai[l + 1], ai[l]);
    max_aj[l] = std::max(max_aj[l + 1], aj[l]);
  }

  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double bki = bi[k];
    const double bkj = bj[k];
    const double aik = ai[k];
    const double ajk = aj[k];
    const double v_bki = v + bki;
    const double v_bkj = v + bkj;
    // Each of the six candidates is bounded by a row constant over the tail;
    // if none can be positive the row cannot change (lower bounds are >= 0).
    const std::size_t s = k + 1;
    if (v - (bki + min_bj[s]) <= 0.0 && v - (bkj + min_bi[s]) <= 0.0 &&
        max_aj[s] - v_bki <= 0.0 && max_ai[s] - v_bkj <= 0.0 &&
        ajk - (v + min_bi[s]) <= 0.0 && aik - (v + min_bj[s]) <= 0.0)
      continue;

    const std::size_t m = n - s;
    double* const arow = lower_.data() + start_[k];
    relax_lower_row(arow, upper_.data() + start_[k], bi + s, bj + s, ai + s, aj + s, next, m, v,
                    bki, bkj, aik, ajk);
    if (std::memcmp(next, arow, m * sizeof(double)) != 0) {
      std::copy_n(next, m, arow);
      stamp_[k] = version_;
    }
  }

  lower_[ij] = v;
  upper_[ij] = v;
  known_[ij] = 1;
  ++known_count_;
}

void BoundMatrix::dump(std::ostream& out) const {
  out << n_ << '\n';
  char buf[64];
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      const double a = lower(i, j);
      const double b = upper(i, j);
      if (b == kInfinity)
        std::snprintf(buf, sizeof buf, "%.17g,inf", a);
      else
        std::snprintf(buf, sizeof buf, "%.17g,%.17g", a, b);
      if (j) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace fmetric
