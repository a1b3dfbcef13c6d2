#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "seqdual/space.hpp"

namespace seqdual {

struct OptConfig {
  std::uint64_t seed = 2024;
  int restarts = 5;          // random restarts on top of structured inits
  int max_iter = 250;        // ascent iterations per restart
  double tol = 1e-8;         // relative convergence / truncation threshold
  int grid_resolution = 360; // points per angular dimension for brute force
  int mid_max_m = 64;        // cap for the mid-norm truncation length
  int rad_mc = 0;            // Monte Carlo sample count for long Rademacher
                             // sums; 0 means exact enumeration only
  bool audit = false;        // cross-check qualifying ascent runs against the
                             // grid oracle (observational, never alters values)

  OptConfig with_seed(std::uint64_t s) const {
    OptConfig c = *this;
    c.seed = s;
    return c;
  }
  // Budget for norm evaluations nested inside an outer optimization.
  OptConfig inner() const {
    OptConfig c = *this;
    c.restarts = std::max(2, restarts / 2);
    c.max_iter = std::max(60, max_iter / 3);
    c.audit = false;
    return c;
  }
  // Full budget with auditing off: constraint-norm and objective evaluations
  // nested inside an optimizer keep their accuracy but are not themselves
  // audit subjects.
  OptConfig no_audit() const {
    OptConfig c = *this;
    c.audit = false;
    return c;
  }
};

enum class CertMethod { Exact, VertexEnum, Ascent, BruteForce };
enum class BoundTag { Exact, LowerBound };

std::string to_string(CertMethod m);
std::string to_string(BoundTag b);

// Result of a norm or supremum computation. `witness` is the maximizing
// argument when one exists (flattened for sequence problems); closed-form
// arithmetic paths leave it empty. `bound` is Exact only for closed forms
// and full vertex enumerations; ascent and grid search certify lower bounds.
struct NormCert {
  double value = 0.0;
  Vec witness;
  CertMethod method = CertMethod::Exact;
  BoundTag bound = BoundTag::Exact;
  std::string note;
};

// Convex objective with an optional analytic subgradient. Without one the
// engine falls back to central finite differences.
struct ConvexObjective {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> subgrad;
};

// Constraint set {x : norm(x) <= 1} for the ascent engine. `lmo` (optional)
// returns argmax_{norm(y)<=1} <g, y>; when present the engine takes damped
// jumps toward it, which is still a normalized ascent but converges much
// faster than raw subgradient steps.
struct BallOracle {
  std::function<double(const Vec&)> norm;
  std::function<Vec(const Vec&)> lmo;
  // Subgradient of the constraint norm (a norming functional at x). Without
  // an lmo the engine ascends the ratio objective/norm, which needs this
  // direction; omitted, it falls back to finite differences on `norm`.
  std::function<Vec(const Vec&)> subgrad;
  std::vector<Vec> inits;
};

// Multi-start normalized ascent for max f over {norm <= 1}: each iterate is
// rescaled to the unit sphere, restarts run serially in a fixed order, and
// identical configs give bitwise-identical certificates.
NormCert ascend_on_ball(const ConvexObjective& objective, const BallOracle& ball,
                        int dim, const OptConfig& cfg);

// max f over the unit ball of `ball_space`. Enumerates extreme points
// exactly when the ball has them; otherwise runs ascend_on_ball.
NormCert maximize_over_ball(const ConvexObjective& objective,
                            const Space& ball_space, const OptConfig& cfg);

// Deterministic dense sampling of the unit sphere, dim <= 3. Lower bound
// of the supremum; `band` estimates the discretization error from adjacent
// sample differences.
struct GridResult {
  double value = 0.0;
  double band = 0.0;
  Vec witness;
};
GridResult grid_sup(const std::function<double(const Vec&)>& objective,
                    const std::function<double(const Vec&)>& norm_fn, int dim,
                    int resolution);
NormCert brute_force_sup(const std::function<double(const Vec&)>& objective,
                         const Space& ball_space, int resolution);

// Audit trail: when cfg.audit is set and the variable has dim <= 3, every
// ascent certificate is checked against grid_sup at cfg.grid_resolution.
struct AuditRecord {
  int dim = 0;
  double ascent_value = 0.0;
  double grid_value = 0.0;
  double band = 0.0;
  bool pass = false;
};
const std::vector<AuditRecord>& audit_log();
void clear_audit_log();

}  // namespace seqdual
