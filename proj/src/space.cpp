#include "seqdual/space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace seqdual {

namespace {

constexpr int kMaxPolytopeDim = 6;
constexpr long kMaxHullSubsets = 4'000'000;

double pnorm_value(const Vec& v, const PIndex& q) {
  if (q.is_inf()) return v.cwiseAbs().maxCoeff();
  const double p = q.value();
  if (p == 1.0) return v.cwiseAbs().sum();
  if (p == 2.0) return v.norm();
  const double m = v.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (int i = 0; i < v.size(); ++i) s += std::pow(std::abs(v[i]) / m, p);
  return m * std::pow(s, 1.0 / p);
}

// Norming functional of the plain ell_q norm. Result has ell_{q*} norm 1.
Vec pnorm_support(const Vec& v, const PIndex& q) {
  Vec g = Vec::Zero(v.size());
  const double n = pnorm_value(v, q);
  if (n == 0.0) return g;
  if (q.is_inf()) {
    int best = 0;
    v.cwiseAbs().maxCoeff(&best);
    g[best] = v[best] > 0 ? 1.0 : -1.0;
    return g;
  }
  const double p = q.value();
  if (p == 1.0) {
    for (int i = 0; i < v.size(); ++i) g[i] = (v[i] > 0) - (v[i] < 0);
    return g;
  }
  for (int i = 0; i < v.size(); ++i) {
    const double sign = (v[i] > 0) - (v[i] < 0);
    g[i] = sign * std::pow(std::abs(v[i]) / n, p - 1.0);
  }
  return g;
}

long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 0; i < k; ++i) {
    r = r * (n - i) / (i + 1);
    if (r > kMaxHullSubsets) return r;
  }
  return r;
}

}  // namespace

Space make_polytope_from_parts(int dim, std::vector<Vec> vertices,
                               std::vector<Vec> facets) {
  Space s(dim, NormKind::Polytope);
  s.vertices_ = std::move(vertices);
  s.facets_ = std::move(facets);
  return s;
}

Space Space::pnorm(int dim, PIndex q) {
  if (dim < 1) throw std::invalid_argument("space dimension must be >= 1");
  Space s(dim, NormKind::PNorm);
  s.q_ = q;
  return s;
}

Space Space::weighted_pnorm(int dim, PIndex q, const Vec& weights) {
  if (dim < 1) throw std::invalid_argument("space dimension must be >= 1");
  if (weights.size() != dim) {
    throw std::invalid_argument("weight vector length must equal dim");
  }
  if ((weights.array() <= 0.0).any() || !weights.allFinite()) {
    throw std::invalid_argument("weights must be positive finite reals");
  }
  Space s(dim, NormKind::WeightedPNorm);
  s.q_ = q;
  s.weights_ = weights;
  return s;
}

std::vector<Vec> polytope_facets(int dim, const std::vector<Vec>& vertices) {
  const int m = static_cast<int>(vertices.size());
  if (binom(m, dim) > kMaxHullSubsets) {
    throw std::invalid_argument(
        "polytope vertex count exceeds the exact facet-enumeration budget");
  }
  std::vector<Vec> facets;
  std::vector<int> idx(dim);
  for (int i = 0; i < dim; ++i) idx[i] = i;
  const double scale = [&] {
    double s = 0.0;
    for (const auto& v : vertices) s = std::max(s, v.cwiseAbs().maxCoeff());
    return s;
  }();
  while (true) {
    Mat A(dim, dim);
    for (int r = 0; r < dim; ++r) A.row(r) = vertices[idx[r]].transpose();
    Eigen::FullPivLU<Mat> lu(A);
    if (lu.isInvertible()) {
      const Vec a = lu.solve(Vec::Ones(dim));
      bool valid = true;
      for (const auto& v : vertices) {
        if (a.dot(v) > 1.0 + 1e-9) {
          valid = false;
          break;
        }
      }
      if (valid) {
        bool dup = false;
        for (const auto& f : facets) {
          if ((f - a).cwiseAbs().maxCoeff() <= 1e-8 * std::max(1.0, scale)) {
            dup = true;
            break;
          }
        }
        if (!dup) facets.push_back(a);
      }
    }
    int k = dim - 1;
    while (k >= 0 && idx[k] == m - dim + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int j = k + 1; j < dim; ++j) idx[j] = idx[j - 1] + 1;
  }
  if (facets.empty()) {
    throw std::invalid_argument("polytope has no facets; vertex set degenerate");
  }
  return facets;
}

Space Space::polytope(int dim, const std::vector<Vec>& raw) {
  if (dim < 1 || dim > kMaxPolytopeDim) {
    throw std::invalid_argument("polytope spaces support 1 <= dim <= 6");
  }
  if (raw.size() < 2) {
    throw std::invalid_argument("polytope needs at least one +- vertex pair");
  }
  for (const auto& v : raw) {
    if (v.size() != dim) {
      throw std::invalid_argument("polytope vertex has wrong dimension");
    }
    if (!v.allFinite()) {
      throw std::invalid_argument("polytope vertex has non-finite entries");
    }
  }
  // Symmetry: every vertex must have its negation in the list.
  for (const auto& v : raw) {
    bool found = false;
    for (const auto& w : raw) {
      if ((v + w).cwiseAbs().maxCoeff() <= 1e-12) {
        found = true;
        break;
      }
    }
    if (!found) {
      throw std::invalid_argument("polytope vertex set is not symmetric");
    }
  }
  // Deduplicate, keeping first appearances.
  std::vector<Vec> verts;
  for (const auto& v : raw) {
    bool dup = false;
    for (const auto& w : verts) {
      if ((v - w).cwiseAbs().maxCoeff() <= 1e-12) {
        dup = true;
        break;
      }
    }
    if (!dup) verts.push_back(v);
  }
  {
    Mat M(static_cast<int>(verts.size()), dim);
    for (size_t i = 0; i < verts.size(); ++i) M.row(static_cast<int>(i)) = verts[i];
    if (Eigen::FullPivLU<Mat>(M).rank() < dim) {
      throw std::invalid_argument("polytope vertices do not span the space");
    }
  }
  auto facets = polytope_facets(dim, verts);
  // Keep only genuine extreme points: a vertex whose active facet normals
  // span R^dim. This canonicalizes the list so dual().dual() round-trips.
  std::vector<Vec> extreme;
  for (const auto& v : verts) {
    std::vector<Vec> active;
    for (const auto& a : facets) {
      if (a.dot(v) >= 1.0 - 1e-9) active.push_back(a);
    }
    if (static_cast<int>(active.size()) < dim) continue;
    Mat A(static_cast<int>(active.size()), dim);
    for (size_t i = 0; i < active.size(); ++i) A.row(static_cast<int>(i)) = active[i];
    if (Eigen::FullPivLU<Mat>(A).rank() == dim) extreme.push_back(v);
  }
  if (extreme.empty()) {
    throw std::invalid_argument("polytope vertex set has no extreme points");
  }
  return make_polytope_from_parts(dim, std::move(extreme), std::move(facets));
}

const PIndex& Space::index() const {
  if (kind_ == NormKind::Polytope) {
    throw std::logic_error("polytope spaces carry no norm index");
  }
  return q_;
}

const Vec& Space::weights() const {
  if (kind_ != NormKind::WeightedPNorm) {
    throw std::logic_error("only weighted spaces carry weights");
  }
  return weights_;
}

const std::vector<Vec>& Space::vertices() const {
  if (kind_ != NormKind::Polytope) {
    throw std::logic_error("only polytope spaces carry vertices");
  }
  return vertices_;
}

double Space::norm(const Vec& v) const {
  if (v.size() != dim_) {
    throw std::invalid_argument("vector dimension mismatch: expected " +
                                std::to_string(dim_) + ", got " +
                                std::to_string(v.size()));
  }
  if (!v.allFinite()) {
    throw std::invalid_argument("vector has non-finite entries");
  }
  switch (kind_) {
    case NormKind::PNorm:
      return pnorm_value(v, q_);
    case NormKind::WeightedPNorm:
      return pnorm_value(weights_.cwiseProduct(v), q_);
    case NormKind::Polytope: {
      double best = 0.0;
      for (const auto& a : facets_) best = std::max(best, a.dot(v));
      return best;
    }
  }
  return 0.0;
}

Vec Space::support(const Vec& v) const {
  if (v.size() != dim_) {
    throw std::invalid_argument("vector dimension mismatch in support()");
  }
  switch (kind_) {
    case NormKind::PNorm:
      return pnorm_support(v, q_);
    case NormKind::WeightedPNorm:
      return weights_.cwiseProduct(pnorm_support(weights_.cwiseProduct(v), q_));
    case NormKind::Polytope: {
      if (norm(v) == 0.0) return Vec::Zero(dim_);
      size_t best = 0;
      double bestval = facets_[0].dot(v);
      for (size_t i = 1; i < facets_.size(); ++i) {
        const double val = facets_[i].dot(v);
        if (val > bestval) {
          bestval = val;
          best = i;
        }
      }
      return facets_[best];
    }
  }
  return Vec::Zero(dim_);
}

Space Space::dual() const {
  // A space built by dual() remembers its predual; dualizing again hands the
  // original back bitwise, which is the finite-dimensional identification
  // E'' = E made literal.
  if (predual_) return *predual_;
  Space d = [&] {
    switch (kind_) {
      case NormKind::PNorm:
        return pnorm(dim_, q_.conjugate());
      case NormKind::WeightedPNorm:
        return weighted_pnorm(dim_, q_.conjugate(), weights_.cwiseInverse());
      case NormKind::Polytope:
        // Polar swap: the dual ball's vertices are this ball's facet normals
        // and vice versa, so the dual norm is this ball's support function.
        return make_polytope_from_parts(dim_, facets_, vertices_);
    }
    throw std::logic_error("unreachable");
  }();
  Space self = *this;
  self.predual_.reset();  // remember one level only; depth never exceeds 2
  d.predual_ = std::make_shared<const Space>(std::move(self));
  return d;
}

std::optional<std::vector<Vec>> Space::extreme_points() const {
  if (kind_ == NormKind::Polytope) return vertices_;
  // Every 1-dimensional ball is the segment between its two unit points.
  if (dim_ == 1) {
    Vec e(1);
    e[0] = 1.0;
    const double n = norm(e);
    std::vector<Vec> pts(2, Vec::Zero(1));
    pts[0][0] = 1.0 / n;
    pts[1][0] = -1.0 / n;
    return pts;
  }
  const bool weighted = kind_ == NormKind::WeightedPNorm;
  if (q_.is_one()) {
    std::vector<Vec> pts;
    pts.reserve(2 * dim_);
    for (int i = 0; i < dim_; ++i) {
      for (const double s : {1.0, -1.0}) {
        Vec v = Vec::Zero(dim_);
        v[i] = weighted ? s / weights_[i] : s;
        pts.push_back(v);
      }
    }
    return pts;
  }
  if (q_.is_inf()) {
    std::vector<Vec> pts;
    pts.reserve(1u << dim_);
    for (unsigned mask = 0; mask < (1u << dim_); ++mask) {
      Vec v(dim_);
      for (int i = 0; i < dim_; ++i) {
        const double s = (mask >> i) & 1 ? -1.0 : 1.0;
        v[i] = weighted ? s / weights_[i] : s;
      }
      pts.push_back(v);
    }
    return pts;
  }
  return std::nullopt;
}

bool Space::same_geometry(const Space& other, double tol) const {
  if (dim_ != other.dim_ || kind_ != other.kind_) return false;
  switch (kind_) {
    case NormKind::PNorm:
      if (q_.is_inf() != other.q_.is_inf()) return false;
      return q_.is_inf() || std::abs(q_.value() - other.q_.value()) <= tol;
    case NormKind::WeightedPNorm:
      if (q_.is_inf() != other.q_.is_inf()) return false;
      if (!q_.is_inf() && std::abs(q_.value() - other.q_.value()) > tol) return false;
      return (weights_ - other.weights_).cwiseAbs().maxCoeff() <= tol;
    case NormKind::Polytope: {
      if (vertices_.size() != other.vertices_.size()) return false;
      for (const auto& v : vertices_) {
        bool found = false;
        for (const auto& w : other.vertices_) {
          if ((v - w).cwiseAbs().maxCoeff() <= tol) {
            found = true;
            break;
          }
        }
        if (!found) return false;
      }
      return true;
    }
  }
  return false;
}

nlohmann::json Space::to_json() const {
  nlohmann::json norm;
  switch (kind_) {
    case NormKind::PNorm:
      norm["p"] = q_.str();
      break;
    case NormKind::WeightedPNorm: {
      norm["p"] = q_.str();
      norm["weights"] = std::vector<double>(weights_.begin(), weights_.end());
      break;
    }
    case NormKind::Polytope: {
      auto arr = nlohmann::json::array();
      for (const auto& v : vertices_) {
        arr.push_back(std::vector<double>(v.begin(), v.end()));
      }
      norm["polytope"] = arr;
      break;
    }
  }
  return nlohmann::json{{"dim", dim_}, {"norm", norm}};
}

Space Space::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("norm")) {
    throw std::invalid_argument("space spec needs {\"dim\", \"norm\"}");
  }
  const int dim = j.at("dim").get<int>();
  const auto& norm = j.at("norm");
  if (norm.contains("polytope")) {
    std::vector<Vec> verts;
    for (const auto& row : norm.at("polytope")) {
      const auto vals = row.get<std::vector<double>>();
      verts.push_back(Eigen::Map<const Vec>(vals.data(), vals.size()));
    }
    return polytope(dim, verts);
  }
  if (!norm.contains("p")) {
    throw std::invalid_argument("space norm spec needs \"p\" or \"polytope\"");
  }
  const auto& pj = norm.at("p");
  const PIndex q = pj.is_string() ? PIndex::parse(pj.get<std::string>())
                                  : PIndex::finite(pj.get<double>());
  if (norm.contains("weights")) {
    const auto w = norm.at("weights").get<std::vector<double>>();
    return weighted_pnorm(dim, q, Eigen::Map<const Vec>(w.data(), w.size()));
  }
  return pnorm(dim, q);
}

std::string Space::str() const {
  switch (kind_) {
    case NormKind::PNorm:
      return "l" + q_.str() + "^" + std::to_string(dim_);
    case NormKind::WeightedPNorm:
      return "l" + q_.str() + "^" + std::to_string(dim_) + "(weighted)";
    case NormKind::Polytope:
      return "polytope^" + std::to_string(dim_) + "(" +
             std::to_string(vertices_.size()) + " vertices)";
  }
  return "?";
}

double pairing(const Vec& functional, const Vec& vector) {
  if (functional.size() != vector.size()) {
    throw std::invalid_argument("pairing dimension mismatch");
  }
  return functional.dot(vector);
}

}  // namespace seqdual
