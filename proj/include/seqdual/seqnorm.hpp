#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "seqdual/optimize.hpp"
#include "seqdual/space.hpp"

namespace seqdual {

// ell_p norm of a scalar list, stable for large p via max-scaling.
double scalar_pnorm(const std::vector<double>& t, const PIndex& p);

// Hoelder coefficients norming t: sum c_j t_j = scalar_pnorm(t, p) with the
// conjugate-index norm of c equal to 1 (0 at t = 0).
std::vector<double> scalar_pnorm_coeffs(const std::vector<double>& t,
                                        const PIndex& p);

// A finite sequence (x_1, ..., x_k) of vectors in one space.
struct VecSeq {
  Space space;
  std::vector<Vec> vectors;

  VecSeq(Space s, std::vector<Vec> v);
  int length() const { return static_cast<int>(vectors.size()); }

  VecSeq prefix(int m) const;
  Vec flatten() const;
  static VecSeq unflatten(const Space& space, const Vec& flat, int length);

  nlohmann::json to_json() const;
  static VecSeq from_json(const nlohmann::json& j);
};

enum class ClassKind { Lp, LInf, C0, C0w, LpWeak, LpUnc, Cohen, Mid, Rad, RAD, Dual };

// Identifier of a sequence class over an unspecified space, e.g. lp:2,
// lpw:4/3, dual(lp:2). Finite indices only; dual nesting depth <= 2, and a
// dual class requires a spherically complete inner class.
class ClassId {
 public:
  static ClassId lp(PIndex p);
  static ClassId linf();
  static ClassId c0();
  static ClassId c0w();
  static ClassId lp_weak(PIndex p);
  static ClassId lp_unc(PIndex p);
  static ClassId cohen(PIndex p);
  static ClassId mid(PIndex p);
  static ClassId rad();
  static ClassId rad_sup();
  static ClassId dual_of(const ClassId& inner);

  ClassKind kind() const { return kind_; }
  const PIndex& p() const;
  const ClassId& inner() const;
  int dual_depth() const;

  std::string str() const;
  static ClassId parse(const std::string& text);

  friend bool operator==(const ClassId& a, const ClassId& b);
  friend bool operator!=(const ClassId& a, const ClassId& b) { return !(a == b); }

 private:
  ClassId(ClassKind kind, PIndex p) : kind_(kind), p_(p) {}

  ClassKind kind_;
  PIndex p_;
  std::shared_ptr<const ClassId> inner_;
};

// Static hypothesis metadata. Flags not established for a class default to
// false; hypothesis checks report exactly which flag is missing.
struct ClassFlags {
  bool spherically_complete = false;
  bool finitely_determined = false;
  bool finitely_dominated = false;
  bool finitely_injective = false;
  bool linearly_stable = false;
  bool c00_dense = false;
  bool reflexive = false;

  bool dual_representable() const {
    return linearly_stable && finitely_dominated && finitely_injective &&
           spherically_complete && c00_dense;
  }
};

ClassFlags flags(const ClassId& cls);

// Non-empty for classes whose finite-length norm coincides with another
// class's even though the infinite-sequence memberships differ.
std::string class_caveat(const ClassId& cls);

// Known isometric rewrites used to pick computation paths, e.g.
// dual(lp:p) -> lp:p*. Returns nullopt when no rewrite applies.
std::optional<ClassId> canonical_norm_equivalent(const ClassId& cls);

// Norm evaluation together with a norming functional sequence: a VecSeq g
// over the dual space with sum_j <g_j, x_j> = value. Drives analytic
// subgradients in every nested optimization.
struct NormEval {
  double value = 0.0;
  VecSeq support;
};

// Class norm of a finite sequence. Rejects Dual classes (those norms live in
// dualize; use norm_of there). extra_inits are optional warm starts for
// ascent-backed classes, flattened in the optimizer's variable layout.
NormCert class_norm(const ClassId& cls, const VecSeq& x, const OptConfig& cfg,
                    const std::vector<Vec>& extra_inits = {});
NormEval class_norm_with_support(const ClassId& cls, const VecSeq& x,
                                 const OptConfig& cfg,
                                 const std::vector<Vec>& extra_inits = {});

// Norms of (x_1..x_m) for m = 1..k. Ascent-backed classes warm-start each
// prefix from the previous witness, which keeps the list nondecreasing for
// finitely determined classes.
std::vector<double> prefix_norms(const ClassId& cls, const VecSeq& x,
                                 const OptConfig& cfg);

// Both sides of the coordinate identity ||v . e_j||_X = ||v||: the class
// norm of the length-k sequence with v in slot j, and the space norm of v.
std::pair<double, double> coordinate_axiom_check(const ClassId& cls,
                                                 const Space& space,
                                                 const Vec& v, int j, int k,
                                                 const OptConfig& cfg);

}  // namespace seqdual
