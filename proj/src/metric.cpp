#include "fmetric/metric.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "fmetric/error.hpp"
#include "fmetric/rng.hpp"

namespace fmetric {

std::string_view to_string(Generator g) {
  switch (g) {
    case Generator::uniform: return "uniform";
    case Generator::normal: return "normal";
    case Generator::clustered: return "clustered";
    case Generator::exp: return "exp";
  }
  return "?";
}

Generator parse_generator(std::string_view name) {
  if (name == "uniform") return Generator::uniform;
  if (name == "normal") return Generator::normal;
  if (name == "clustered") return Generator::clustered;
  if (name == "exp") return Generator::exp;
  throw InvalidArgument("unknown generator '" + std::string(name) + "'");
}

PointSet::PointSet(std::size_t dim, std::vector<double> coords, std::string label,
                   std::uint64_t seed)
    : dim_(dim), coords_(std::move(coords)), label_(std::move(label)), seed_(seed) {
  if (dim_ == 0) throw InvalidArgument("point dimension must be positive");
  if (coords_.empty()) throw InvalidArgument("point set must contain at least one point");
  if (coords_.size() % dim_ != 0)
    throw InvalidArgument("coordinate count is not a multiple of the dimension");
}

std::span<const double> PointSet::point(std::size_t i) const {
  if (i >= size()) throw IndexOutOfRange("point index " + std::to_string(i) + " out of range");
  return std::span<const double>(coords_).subspan(i * dim_, dim_);
}

double euclidean(std::span<const double> p, std::span<const double> q) {
  double sum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double d = p[k] - q[k];
    sum += d * d;
  }
  return std::sqrt(sum);
}

namespace {

void check_size(std::size_t dim, std::size_t n) {
  if (dim == 0) throw InvalidArgument("dim must be >= 1");
  if (n == 0) throw InvalidArgument("n must be >= 1");
}

}  // namespace

ClusteredSample generate_clustered(std::size_t dim, std::size_t n, std::uint64_t seed) {
  check_size(dim, n);
  Rng rng(seed);
  const std::size_t clusters = (n + kPointsPerCluster - 1) / kPointsPerCluster;
  std::vector<std::vector<double>> centers(clusters, std::vector<double>(dim));
  for (auto& c : centers)
    for (auto& x : c) x = rng.uniform(0.0, 10000.0);

  std::vector<double> coords(n * dim);
  std::vector<std::size_t> assignment(n);
  for (std::size_t i = 0; i < n; ++i) {
    assignment[i] = i / kPointsPerCluster;
    for (std::size_t k = 0; k < dim; ++k)
      coords[i * dim + k] = centers[assignment[i]][k] + rng.normal();
  }
  return {PointSet(dim, std::move(coords), "clustered", seed), std::move(centers),
          std::move(assignment)};
}

PointSet generate_pointset(Generator kind, std::size_t dim, std::size_t n, std::uint64_t seed) {
  check_size(dim, n);
  if (kind == Generator::clustered) return generate_clustered(dim, n, seed).points;

  Rng rng(seed);
  std::vector<double> coords(n * dim);
  for (auto& x : coords) {
    switch (kind) {
      case Generator::uniform: x = rng.uniform(); break;
      case Generator::normal: x = rng.normal(); break;
      case Generator::exp: x = std::exp2(rng.uniform(1.0, 25.0)); break;
      case Generator::clustered: break;
    }
  }
  return PointSet(dim, std::move(coords), std::string(to_string(kind)), seed);
}

void write_pointset(std::ostream& out, const PointSet& points) {
  out << points.dim() << ' ' << points.size() << '\n';
  char buf[40];
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto p = points.point(i);
    for (std::size_t k = 0; k < p.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", p[k]);
      if (k) out << ' ';
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("failed to write point set");
}

PointSet read_pointset(std::istream& in, std::string label) {
  long long dim = 0, n = 0;
  if (!(in >> dim >> n)) throw IoError("point set header must be `dim n`");
  if (dim <= 0 || n <= 0) throw IoError("point set header has non-positive dim or n");
  std::vector<double> coords(static_cast<std::size_t>(dim * n));
  std::string token;
  for (auto& x : coords) {
    if (!(in >> token)) throw IoError("point set truncated");
    char* end = nullptr;
    x = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0') throw IoError("bad coordinate '" + token + "'");
  }
  return PointSet(static_cast<std::size_t>(dim), std::move(coords), std::move(label));
}

std::uint64_t QueryLedger::exact_total() const {
  std::uint64_t t = 0;
  for (const auto& [phase, c] : exact_by_phase) t += c;
  return t;
}

std::uint64_t QueryLedger::query_point_total() const {
  std::uint64_t t = 0;
  for (const auto& [phase, c] : query_point_by_phase) t += c;
  return t;
}

DistanceOracle::DistanceOracle(std::shared_ptr<const PointSet> points, std::uint64_t approx_seed,
                               Metric metric)
    : points_(std::move(points)), approx_seed_(approx_seed), metric_(std::move(metric)) {
  if (!points_) throw InvalidArgument("oracle needs a point set");
}

void DistanceOracle::check_index(std::size_t i) const {
  if (i >= size())
    throw IndexOutOfRange("index " + std::to_string(i) + " out of range for " +
                          std::to_string(size()) + " points");
}

double DistanceOracle::exact(std::size_t i, std::size_t j) {
  check_index(i);
  check_index(j);
  if (i == j) return 0.0;
  ++exact_count_;
  ++ledger_.exact_by_phase[phase_];
  return metric_(points_->point(i), points_->point(j));
}

double DistanceOracle::query_point(std::span<const double> q, std::size_t i) {
  check_index(i);
  if (q.size() != points_->dim())
    throw InvalidArgument("query point has dimension " + std::to_string(q.size()) +
                          ", expected " + std::to_string(points_->dim()));
  ++query_point_count_;
  ++ledger_.query_point_by_phase[phase_];
  return metric_(q, points_->point(i));
}

double DistanceOracle::ground_truth(std::size_t i, std::size_t j) const {
  check_index(i);
  check_index(j);
  if (i == j) return 0.0;
  return metric_(points_->point(i), points_->point(j));
}

double DistanceOracle::ground_truth(std::span<const double> q, std::size_t i) const {
  check_index(i);
  return metric_(q, points_->point(i));
}

void DistanceOracle::materialize_approx() {
  const std::size_t n = size();
  approx_.resize(n * (n - 1) / 2);
  Rng rng(derive_seed(approx_seed_, "approx-table"));
  std::size_t t = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      approx_[t++] = rng.uniform(1.0, 2.0) * metric_(points_->point(i), points_->point(j));
}

double DistanceOracle::approx(std::size_t i, std::size_t j) {
  check_index(i);
  check_index(j);
  if (i == j) return 0.0;
  if (approx_.empty()) materialize_approx();
  if (i > j) std::swap(i, j);
  return approx_[triangle_index(size(), i, j)];
}

std::vector<double> DistanceOracle::approx_to_query(std::span<const double> q) const {
  if (q.size() != points_->dim()) throw InvalidArgument("query point dimension mismatch");
  std::uint64_t h = hash_name("approx-query");
  for (double x : q) h = mix_seed(h ^ std::bit_cast<std::uint64_t>(x));
  Rng rng(derive_seed(approx_seed_, h));
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i)
    out[i] = rng.uniform(1.0, 2.0) * metric_(q, points_->point(i));
  return out;
}

}  // namespace fmetric
