#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "seqdual/dualize.hpp"

namespace seqdual {

using Mat = Eigen::MatrixXd;

// A linear operator between two finite-dimensional spaces, stored as a
// codomain.dim x domain.dim matrix acting on column vectors.
struct LinOp {
  Space domain;
  Space codomain;
  Mat matrix;

  LinOp(Space domain, Space codomain, Mat matrix);

  Vec apply(const Vec& v) const;

  nlohmann::json to_json() const;
  static LinOp from_json(const nlohmann::json& j);
};

// Transposed matrix between the dual spaces. Dual spaces remember their
// preduals, so adjoint(adjoint(T)) reproduces T bitwise.
LinOp adjoint(const LinOp& T);

// A after B; B.codomain must carry the same geometry as A.domain.
LinOp compose(const LinOp& A, const LinOp& B);

VecSeq apply_elementwise(const LinOp& T, const VecSeq& x);

// sup over the domain unit ball of the codomain norm of Tv.
NormCert operator_norm(const LinOp& T, const OptConfig& cfg);

// sup of the Y-class norm of (T x_j) over length-k sequences in the X-class
// unit ball. For linearly stable classes at X = Y this is the operator norm;
// in general it is the length-k prefix value of the summing norm, which is
// nondecreasing in k.
NormCert summing_norm(const ClassId& X, const ClassId& Y, const LinOp& T,
                      int k, const OptConfig& cfg,
                      const std::vector<Vec>& extra_inits = {});

// Two summing norms tied by an adjoint identity, with the asserted one-sided
// inequality and the equality verdict where the stronger hypotheses hold.
struct AdjointReport {
  double primal = 0.0;
  double adjoint_side = 0.0;
  double difference = 0.0;
  std::string direction;
  bool inequality_holds = false;
  bool equality_expected = false;
  bool equality_holds = false;
  double tolerance = 0.0;
  std::string hypotheses;

  nlohmann::json to_json() const;
};

// primal = summing_norm(X, Y, T, k), adjoint_side = summing_norm(Dual(Y),
// Dual(X), adjoint(T), k). Asserts adjoint_side <= primal + tol; equality is
// additionally expected (and checked) when Y is flagged reflexive. Requires
// dual-representable X and spherically complete Y.
AdjointReport adjoint_duality_report(const ClassId& X, const ClassId& Y,
                                     const LinOp& T, int k,
                                     const OptConfig& cfg, double tol = 1e-3);

// primal = summing_norm(Dual(Y), Dual(X), T, k), adjoint_side =
// summing_norm(X, Y, adjoint(T), k). Asserts adjoint_side <= primal + tol
// for spherically complete X and Y; with every space finite-dimensional the
// reflexivity hypotheses all hold, so equality is expected as well.
AdjointReport reverse_duality_report(const ClassId& X, const ClassId& Y,
                                     const LinOp& T, int k,
                                     const OptConfig& cfg, double tol = 1e-3);

// (summing_norm(X, Y, T, k), same with adjoint(adjoint(T))). The hypotheses
// mirror the adjoint reports: X dual-representable, Y spherically complete
// and reflexive, Dual(Y) dual-representable. Double dualization hands back
// the original spaces bitwise, so the two values coincide exactly.
std::pair<double, double> second_adjoint_check(const ClassId& X,
                                               const ClassId& Y,
                                               const LinOp& T, int k,
                                               const OptConfig& cfg);

// Norm-preserving embedding of F into PNorm(inf) of dimension = number of
// extreme points of the dual ball, one coordinate per extreme functional.
// Needs a space whose dual exposes its extreme points (PNorm(1), PNorm(inf),
// polytopes, dimension 1). Composing with it must not change summing norms
// into finitely injective codomain classes.
LinOp isometric_embedding_into_sup(const Space& F);

}  // namespace seqdual
