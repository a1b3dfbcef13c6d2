#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "seqdual/index.hpp"

namespace seqdual {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class NormKind { PNorm, WeightedPNorm, Polytope };

// A finite-dimensional real Banach space (R^n, ||.||). Supported norms:
//   PNorm(q)            ell_q, q in [1, inf]
//   WeightedPNorm(q, w) ell_q of the coordinatewise product (w_i v_i), w_i > 0
//   Polytope(V)         gauge of conv(V) for a symmetric spanning vertex set
//
// Polytope spaces carry both a vertex list and a facet-normal list. Facets
// are computed once at construction by exact enumeration; the dimension is
// capped so this stays exact (dim <= 6, and the number of d-subsets of the
// vertex list must stay below an internal budget).
class Space {
 public:
  static Space pnorm(int dim, PIndex q);
  static Space weighted_pnorm(int dim, PIndex q, const Vec& weights);
  static Space polytope(int dim, const std::vector<Vec>& vertices);

  int dim() const { return dim_; }
  NormKind kind() const { return kind_; }
  const PIndex& index() const;        // PNorm / WeightedPNorm only
  const Vec& weights() const;         // WeightedPNorm only
  const std::vector<Vec>& vertices() const;  // Polytope only

  double norm(const Vec& v) const;

  // A norming functional for v: g in the dual unit sphere with <g, v> =
  // norm(v). Returns zero for v = 0. Ties are broken deterministically.
  Vec support(const Vec& v) const;

  // The dual space under the standard pairing <u, v> = sum u_i v_i.
  //   PNorm(q)            -> PNorm(q*)
  //   WeightedPNorm(q, w) -> WeightedPNorm(q*, 1/w)
  //   Polytope            -> polytope whose vertices are this ball's facet
  //                          normals (so its norm is this ball's support
  //                          function).
  // The result remembers its predual, so dual(dual(S)) returns S bitwise;
  // second-adjoint checks rely on that exactness.
  Space dual() const;

  // Extreme points of the unit ball when a finite description exists:
  // PNorm(1) gives +-e_i, PNorm(inf) gives sign vectors, every 1-dimensional
  // space gives its two unit points, polytopes give their vertices, weighted
  // variants rescale coordinatewise. Smooth balls return nullopt.
  std::optional<std::vector<Vec>> extreme_points() const;

  bool same_geometry(const Space& other, double tol = 1e-12) const;

  nlohmann::json to_json() const;
  static Space from_json(const nlohmann::json& j);
  std::string str() const;

 private:
  Space(int dim, NormKind kind) : dim_(dim), kind_(kind), q_(PIndex::inf()) {}

  int dim_;
  NormKind kind_;
  PIndex q_;
  Vec weights_;
  std::vector<Vec> vertices_;
  std::vector<Vec> facets_;
  std::shared_ptr<const Space> predual_;

  friend Space make_polytope_from_parts(int, std::vector<Vec>, std::vector<Vec>);
};

double pairing(const Vec& functional, const Vec& vector);

// Facet normals {a : <a, x> <= 1} of conv(vertices) for a symmetric spanning
// vertex set. Exposed for tests; Space::polytope calls it at construction.
std::vector<Vec> polytope_facets(int dim, const std::vector<Vec>& vertices);

}  // namespace seqdual
