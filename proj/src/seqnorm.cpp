#include "seqdual/seqnorm.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "seqdual/errors.hpp"

namespace seqdual {

double scalar_pnorm(const std::vector<double>& t, const PIndex& p) {
  if (p.is_inf()) {
    double m = 0.0;
    for (double v : t) m = std::max(m, std::abs(v));
    return m;
  }
  const double q = p.value();
  double m = 0.0;
  for (double v : t) m = std::max(m, std::abs(v));
  if (m == 0.0) return 0.0;
  if (q == 1.0) {
    double s = 0.0;
    for (double v : t) s += std::abs(v);
    return s;
  }
  double s = 0.0;
  for (double v : t) s += std::pow(std::abs(v) / m, q);
  return m * std::pow(s, 1.0 / q);
}

std::vector<double> scalar_pnorm_coeffs(const std::vector<double>& t,
                                        const PIndex& p) {
  std::vector<double> c(t.size(), 0.0);
  const double n = scalar_pnorm(t, p);
  if (n == 0.0) return c;
  if (p.is_inf()) {
    size_t best = 0;
    for (size_t j = 1; j < t.size(); ++j) {
      if (std::abs(t[j]) > std::abs(t[best])) best = j;
    }
    c[best] = t[best] > 0 ? 1.0 : -1.0;
    return c;
  }
  const double q = p.value();
  for (size_t j = 0; j < t.size(); ++j) {
    const double sign = (t[j] > 0) - (t[j] < 0);
    c[j] = q == 1.0 ? sign : sign * std::pow(std::abs(t[j]) / n, q - 1.0);
  }
  return c;
}

namespace {

constexpr int kRadExactCap = 12;

double max_abs_coord(const VecSeq& x) {
  double s = 0.0;
  for (const auto& v : x.vectors) {
    if (v.size() > 0) s = std::max(s, v.cwiseAbs().maxCoeff());
  }
  return s;
}

VecSeq scaled_copy(const VecSeq& x, double factor) {
  std::vector<Vec> vs;
  vs.reserve(x.vectors.size());
  for (const auto& v : x.vectors) vs.push_back(v * factor);
  return VecSeq(x.space, std::move(vs));
}

struct ClassEval {
  double value = 0.0;
  std::vector<Vec> support;  // over the dual space
  CertMethod method = CertMethod::Exact;
  BoundTag bound = BoundTag::Exact;
  Vec witness;
  std::string note;
};

ClassEval eval_lp(const PIndex& p, const VecSeq& x) {
  const int k = x.length();
  std::vector<double> norms(k);
  for (int j = 0; j < k; ++j) norms[j] = x.space.norm(x.vectors[j]);
  ClassEval out;
  out.value = scalar_pnorm(norms, p);
  const auto c = scalar_pnorm_coeffs(norms, p);
  out.support.resize(k);
  for (int j = 0; j < k; ++j) {
    out.support[j] = c[j] * x.space.support(x.vectors[j]);
  }
  return out;
}

ClassEval eval_sup(const VecSeq& x) {
  const int k = x.length();
  ClassEval out;
  int best = 0;
  for (int j = 0; j < k; ++j) {
    const double n = x.space.norm(x.vectors[j]);
    if (n > out.value) {
      out.value = n;
      best = j;
    }
  }
  out.support.assign(k, Vec::Zero(x.space.dim()));
  out.support[best] = x.space.support(x.vectors[best]);
  return out;
}

bool is_two_space(const Space& s) {
  return (s.kind() == NormKind::PNorm || s.kind() == NormKind::WeightedPNorm) &&
         !s.index().is_inf() && s.index().value() == 2.0;
}

// A one-term sequence has the same norm as its vector under every class
// here: the defining suprema all reduce to sup over the dual ball of
// |<phi, x_1>|. Keeping this exact also keeps nested ball oracles cheap.
ClassEval eval_single(const VecSeq& x) {
  ClassEval out;
  out.value = x.space.norm(x.vectors[0]);
  out.support = {x.space.support(x.vectors[0])};
  out.witness = out.support[0];
  return out;
}

// sup over the dual ball of || (<phi, x_j>)_j ||_p, with the norming
// sequence derived from the maximizing phi.
ClassEval eval_weak(const PIndex& p, const VecSeq& x, const OptConfig& cfg,
                    const std::vector<Vec>& extra_inits) {
  const Space& E = x.space;
  const int k = x.length();
  const int n = E.dim();

  if (k == 1) return eval_single(x);

  // Scale canonicalization: evaluating at x/s and rescaling makes the value
  // positively homogeneous to rounding error even on the ascent path, which
  // outer ball-constrained optimizations rely on when they renormalize.
  const double s = max_abs_coord(x);
  if (s == 0.0) {
    ClassEval out;
    out.support.assign(k, Vec::Zero(n));
    out.witness = Vec::Zero(n);
    return out;
  }
  if (s != 1.0) {
    ClassEval out = eval_weak(p, scaled_copy(x, 1.0 / s), cfg, extra_inits);
    out.value *= s;
    return out;
  }

  ClassEval out;

  auto finish = [&](double value, const Vec& phi, CertMethod method,
                    BoundTag bound) {
    out.value = value;
    out.witness = phi;
    out.method = method;
    out.bound = bound;
    std::vector<double> t(k);
    for (int j = 0; j < k; ++j) t[j] = phi.dot(x.vectors[j]);
    const auto c = scalar_pnorm_coeffs(t, p);
    out.support.resize(k);
    for (int j = 0; j < k; ++j) out.support[j] = c[j] * phi;
  };

  if (!p.is_inf() && p.value() == 2.0 && is_two_space(E)) {
    // Hilbert geometry: the supremum is the largest singular value of the
    // matrix with rows (w_i x_j[i]).
    Vec w = E.kind() == NormKind::WeightedPNorm ? E.weights()
                                                : Vec::Ones(n);
    Mat M(k, n);
    for (int j = 0; j < k; ++j) {
      M.row(j) = w.cwiseProduct(x.vectors[j]).transpose();
    }
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeThinV);
    const double sigma = svd.singularValues()(0);
    const Vec phi = w.cwiseProduct(svd.matrixV().col(0));
    finish(sigma, phi, CertMethod::Exact, BoundTag::Exact);
    return out;
  }

  ConvexObjective obj;
  obj.value = [&x, &p, k](const Vec& phi) {
    std::vector<double> t(k);
    for (int j = 0; j < k; ++j) t[j] = phi.dot(x.vectors[j]);
    return scalar_pnorm(t, p);
  };
  obj.subgrad = [&x, &p, k, n](const Vec& phi) {
    std::vector<double> t(k);
    for (int j = 0; j < k; ++j) t[j] = phi.dot(x.vectors[j]);
    const auto c = scalar_pnorm_coeffs(t, p);
    Vec g = Vec::Zero(n);
    for (int j = 0; j < k; ++j) g += c[j] * x.vectors[j];
    return g;
  };

  const Space Edual = E.dual();
  if (const auto ext = Edual.extreme_points()) {
    double best = -1.0;
    Vec arg;
    for (const auto& v : *ext) {
      const double val = obj.value(v);
      if (val > best) {
        best = val;
        arg = v;
      }
    }
    finish(best, arg, CertMethod::VertexEnum, BoundTag::Exact);
    return out;
  }

  BallOracle ball;
  ball.norm = [&Edual](const Vec& v) { return Edual.norm(v); };
  ball.lmo = [&E](const Vec& g) { return E.support(g); };
  for (int j = 0; j < k; ++j) ball.inits.push_back(E.support(x.vectors[j]));
  for (const auto& v : extra_inits) {
    if (v.size() == n) ball.inits.push_back(v);
  }
  const NormCert cert = ascend_on_ball(obj, ball, n, cfg);
  finish(cert.value, cert.witness, CertMethod::Ascent, BoundTag::LowerBound);
  return out;
}

// Shared driver for the classes defined as a supremum over a ball of
// functional sequences: variable (phi_1..phi_m) over E', constraint given by
// a class norm over E', objective supplied by the caller.
NormCert seq_ball_ascend(const ConvexObjective& obj, const ClassId& ball_cls,
                         const Space& phi_space, int m, const OptConfig& cfg,
                         std::vector<Vec> inits) {
  BallOracle ball;
  // Constraint evaluations keep the full budget for witness feasibility but
  // are never audit subjects themselves.
  const OptConfig ball_cfg = cfg.no_audit();
  ball.norm = [&ball_cls, &phi_space, m, ball_cfg](const Vec& flat) {
    return class_norm(ball_cls, VecSeq::unflatten(phi_space, flat, m),
                      ball_cfg)
        .value;
  };
  // The norming functional sequence is a subgradient of the constraint norm;
  // the ratio ascent needs it to escape points where the objective gradient
  // is radial.
  ball.subgrad = [&ball_cls, &phi_space, m, ball_cfg](const Vec& flat) {
    return class_norm_with_support(
               ball_cls, VecSeq::unflatten(phi_space, flat, m), ball_cfg)
        .support.flatten();
  };
  ball.inits = std::move(inits);
  return ascend_on_ball(obj, ball, m * phi_space.dim(), cfg);
}

ClassEval eval_cohen(const PIndex& p, const VecSeq& x, const OptConfig& cfg,
                     const std::vector<Vec>& extra_inits) {
  const Space& E = x.space;
  const int k = x.length();
  const int n = E.dim();

  if (p.is_one()) {
    ClassEval out = eval_lp(PIndex::finite(1.0), x);
    return out;
  }
  if (n == 1) {
    ClassEval out = eval_lp(p, x);  // scalar collapse to ell_p
    return out;
  }
  if (k == 1) return eval_single(x);

  // Scale canonicalization keeps ascent-backed values consistently
  // homogeneous, so rescaled witnesses re-evaluate to unit norm.
  const double s = max_abs_coord(x);
  if (s == 0.0) {
    ClassEval out;
    out.support.assign(k, Vec::Zero(n));
    return out;
  }
  if (s != 1.0) {
    ClassEval out = eval_cohen(p, scaled_copy(x, 1.0 / s), cfg, extra_inits);
    out.value *= s;
    return out;
  }

  const Space Edual = E.dual();
  ConvexObjective obj;
  obj.value = [&x, &Edual, k, n](const Vec& flat) {
    double s = 0.0;
    for (int j = 0; j < k; ++j) {
      s += std::abs(flat.segment(j * n, n).dot(x.vectors[j]));
    }
    return s;
  };
  obj.subgrad = [&x, k, n](const Vec& flat) {
    Vec g(k * n);
    for (int j = 0; j < k; ++j) {
      const double t = flat.segment(j * n, n).dot(x.vectors[j]);
      const double sign = (t > 0) - (t < 0);
      g.segment(j * n, n) = sign * x.vectors[j];
    }
    return g;
  };

  std::vector<Vec> inits;
  {
    // Greedy: norming functional in every slot, and each slot alone.
    Vec all(k * n);
    for (int j = 0; j < k; ++j) {
      all.segment(j * n, n) = E.support(x.vectors[j]);
    }
    inits.push_back(all);
    for (int j = 0; j < k; ++j) {
      Vec one = Vec::Zero(k * n);
      one.segment(j * n, n) = E.support(x.vectors[j]);
      inits.push_back(one);
    }
  }
  for (const auto& v : extra_inits) {
    if (v.size() == k * n) inits.push_back(v);
  }

  const ClassId ball_cls = ClassId::lp_weak(p.conjugate());
  const NormCert cert =
      seq_ball_ascend(obj, ball_cls, Edual, k, cfg, std::move(inits));

  ClassEval out;
  out.value = cert.value;
  out.witness = cert.witness;
  out.method = CertMethod::Ascent;
  out.bound = BoundTag::LowerBound;
  out.support.resize(k);
  for (int j = 0; j < k; ++j) {
    const Vec phi = cert.witness.segment(j * n, n);
    const double t = phi.dot(x.vectors[j]);
    const double sign = (t > 0) - (t < 0);
    out.support[j] = sign * phi;
  }
  return out;
}

ClassEval eval_mid(const PIndex& p, const VecSeq& x, const OptConfig& cfg,
                   const std::vector<Vec>& extra_inits) {
  const Space& E = x.space;
  const int k = x.length();
  const int n = E.dim();

  if (n == 1) return eval_lp(p, x);  // scalar collapse to ell_p
  if (k == 1) return eval_single(x);

  const double s = max_abs_coord(x);
  if (s == 0.0) {
    ClassEval out;
    out.support.assign(k, Vec::Zero(n));
    return out;
  }
  if (s != 1.0) {
    ClassEval out = eval_mid(p, scaled_copy(x, 1.0 / s), cfg, extra_inits);
    out.value *= s;
    return out;
  }

  const Space Edual = E.dual();
  const double q = p.value();
  const ClassId ball_cls = ClassId::lp_weak(p);

  double value = 0.0;
  Vec witness;
  int m_final = 0;
  double last_increment = 0.0;

  int m = std::max(1, k);
  Vec warm;
  while (true) {
    ConvexObjective obj;
    obj.value = [&x, q, k, n, m](const Vec& flat) {
      double acc = 0.0;
      double peak = 0.0;
      std::vector<double> ts;
      ts.reserve(static_cast<size_t>(m) * k);
      for (int r = 0; r < m; ++r) {
        for (int j = 0; j < k; ++j) {
          const double t = std::abs(flat.segment(r * n, n).dot(x.vectors[j]));
          ts.push_back(t);
          peak = std::max(peak, t);
        }
      }
      if (peak == 0.0) return 0.0;
      for (double t : ts) acc += std::pow(t / peak, q);
      return peak * std::pow(acc, 1.0 / q);
    };
    obj.subgrad = [&x, q, k, n, m, &obj](const Vec& flat) {
      const double N = obj.value(flat);
      Vec g = Vec::Zero(m * n);
      if (N == 0.0) return g;
      for (int r = 0; r < m; ++r) {
        for (int j = 0; j < k; ++j) {
          const double t = flat.segment(r * n, n).dot(x.vectors[j]);
          const double sign = (t > 0) - (t < 0);
          const double c = sign * std::pow(std::abs(t) / N, q - 1.0);
          g.segment(r * n, n) += c * x.vectors[j];
        }
      }
      return g;
    };

    std::vector<Vec> inits;
    {
      Vec diag = Vec::Zero(m * n);
      for (int r = 0; r < std::min(m, k); ++r) {
        diag.segment(r * n, n) = E.support(x.vectors[r]);
      }
      inits.push_back(diag);
    }
    if (warm.size() > 0) {
      Vec padded = Vec::Zero(m * n);
      padded.head(std::min<int>(warm.size(), m * n)) =
          warm.head(std::min<int>(warm.size(), m * n));
      inits.push_back(padded);
    }
    for (const auto& v : extra_inits) {
      Vec padded = Vec::Zero(m * n);
      padded.head(std::min<int>(v.size(), m * n)) =
          v.head(std::min<int>(v.size(), m * n));
      inits.push_back(padded);
    }

    const NormCert cert =
        seq_ball_ascend(obj, ball_cls, Edual, m, cfg, std::move(inits));
    last_increment =
        value > 0.0 ? std::max(0.0, cert.value - value) / value : 1.0;
    if (cert.value > value) {
      value = cert.value;
      witness = cert.witness;
      m_final = m;
    }
    warm = cert.witness;
    if (m >= cfg.mid_max_m) break;
    if (value > 0.0 && last_increment < cfg.tol) break;
    m = std::min(2 * m, cfg.mid_max_m);
  }

  ClassEval out;
  out.value = value;
  out.witness = witness;
  out.method = CertMethod::Ascent;
  out.bound = BoundTag::LowerBound;
  out.note = "m=" + std::to_string(m_final) +
             " last_rel_increment=" + std::to_string(last_increment);
  out.support.assign(k, Vec::Zero(n));
  if (value > 0.0 && witness.size() > 0) {
    const int m_w = static_cast<int>(witness.size()) / n;
    for (int j = 0; j < k; ++j) {
      for (int r = 0; r < m_w; ++r) {
        const double t = witness.segment(r * n, n).dot(x.vectors[j]);
        const double sign = (t > 0) - (t < 0);
        const double c = sign * std::pow(std::abs(t) / value, q - 1.0);
        out.support[j] += c * witness.segment(r * n, n);
      }
    }
  }
  return out;
}

// Exact sign-average (2^-k sum over sign patterns of ||sum e_j x_j||^2)^(1/2),
// with the derivative accumulated in the same sweep.
ClassEval rad_exact(const VecSeq& x) {
  const int k = x.length();
  const int n = x.space.dim();
  const std::uint64_t total = 1ull << k;
  double acc = 0.0;
  std::vector<Vec> grad(k, Vec::Zero(n));
  Vec sum(n);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    sum.setZero();
    for (int j = 0; j < k; ++j) {
      if ((mask >> j) & 1) {
        sum -= x.vectors[j];
      } else {
        sum += x.vectors[j];
      }
    }
    const double norm = x.space.norm(sum);
    acc += norm * norm;
    if (norm > 0.0) {
      const Vec sigma = x.space.support(sum);
      for (int j = 0; j < k; ++j) {
        const double eps = ((mask >> j) & 1) ? -1.0 : 1.0;
        grad[j] += (norm * eps) * sigma;
      }
    }
  }
  ClassEval out;
  out.value = std::sqrt(acc / static_cast<double>(total));
  out.support.assign(k, Vec::Zero(n));
  if (out.value > 0.0) {
    for (int j = 0; j < k; ++j) {
      out.support[j] = grad[j] / (static_cast<double>(total) * out.value);
    }
  }
  return out;
}

ClassEval rad_monte_carlo(const VecSeq& x, const OptConfig& cfg) {
  const int k = x.length();
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> coin(0, 1);
  double acc = 0.0;
  Vec sum(x.space.dim());
  for (int s = 0; s < cfg.rad_mc; ++s) {
    sum.setZero();
    for (int j = 0; j < k; ++j) {
      sum += (coin(rng) ? 1.0 : -1.0) * x.vectors[j];
    }
    const double norm = x.space.norm(sum);
    acc += norm * norm;
  }
  ClassEval out;
  out.value = std::sqrt(acc / cfg.rad_mc);
  out.support.assign(k, Vec::Zero(x.space.dim()));
  out.method = CertMethod::BruteForce;
  out.bound = BoundTag::LowerBound;
  out.note = "monte-carlo estimate (" + std::to_string(cfg.rad_mc) +
             " samples); not a certified bound";
  return out;
}

ClassEval eval_rad(const VecSeq& x, const OptConfig& cfg) {
  if (x.length() <= kRadExactCap) return rad_exact(x);
  if (cfg.rad_mc > 0) return rad_monte_carlo(x, cfg);
  throw std::invalid_argument(
      "rad with length > 12 needs the Monte Carlo estimator (rad_mc > 0)");
}

ClassEval eval_rad_sup(const VecSeq& x, const OptConfig& cfg) {
  ClassEval best;
  int best_m = 0;
  for (int m = 1; m <= x.length(); ++m) {
    ClassEval e = eval_rad(x.prefix(m), cfg);
    if (e.value > best.value) {
      best = std::move(e);
      best_m = m;
    }
  }
  best.support.resize(x.length(), Vec::Zero(x.space.dim()));
  best.note = "attained at prefix m=" + std::to_string(best_m);
  return best;
}

ClassEval dispatch(const ClassId& cls, const VecSeq& x, const OptConfig& cfg,
                   const std::vector<Vec>& extra_inits) {
  switch (cls.kind()) {
    case ClassKind::Lp:
      return eval_lp(cls.p(), x);
    case ClassKind::LInf:
    case ClassKind::C0:
    case ClassKind::C0w:
      return eval_sup(x);
    case ClassKind::LpWeak:
    case ClassKind::LpUnc:
      return eval_weak(cls.p(), x, cfg, extra_inits);
    case ClassKind::Cohen:
      return eval_cohen(cls.p(), x, cfg, extra_inits);
    case ClassKind::Mid:
      return eval_mid(cls.p(), x, cfg, extra_inits);
    case ClassKind::Rad:
      return eval_rad(x, cfg);
    case ClassKind::RAD:
      return eval_rad_sup(x, cfg);
    case ClassKind::Dual:
      throw std::invalid_argument(
          "class_norm does not evaluate dual classes; use norm_of/dual_norm");
  }
  throw std::logic_error("unreachable");
}

}  // namespace

VecSeq::VecSeq(Space s, std::vector<Vec> v) : space(std::move(s)), vectors(std::move(v)) {
  if (vectors.empty()) {
    throw std::invalid_argument("sequence must contain at least one vector");
  }
  for (const auto& vec : vectors) {
    if (vec.size() != space.dim()) {
      throw std::invalid_argument("sequence vector dimension mismatch");
    }
    if (!vec.allFinite()) {
      throw std::invalid_argument("sequence vector has non-finite entries");
    }
  }
}

VecSeq VecSeq::prefix(int m) const {
  if (m < 1 || m > length()) throw std::invalid_argument("bad prefix length");
  return VecSeq(space, std::vector<Vec>(vectors.begin(), vectors.begin() + m));
}

Vec VecSeq::flatten() const {
  const int n = space.dim();
  Vec flat(length() * n);
  for (int j = 0; j < length(); ++j) flat.segment(j * n, n) = vectors[j];
  return flat;
}

VecSeq VecSeq::unflatten(const Space& space, const Vec& flat, int length) {
  const int n = space.dim();
  if (flat.size() != length * n) {
    throw std::invalid_argument("flattened sequence has wrong size");
  }
  std::vector<Vec> vs(length);
  for (int j = 0; j < length; ++j) vs[j] = flat.segment(j * n, n);
  return VecSeq(space, std::move(vs));
}

nlohmann::json VecSeq::to_json() const {
  auto arr = nlohmann::json::array();
  for (const auto& v : vectors) {
    arr.push_back(std::vector<double>(v.begin(), v.end()));
  }
  return nlohmann::json{{"space", space.to_json()}, {"vectors", arr}};
}

VecSeq VecSeq::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("space") || !j.contains("vectors")) {
    throw std::invalid_argument("sequence spec needs {\"space\", \"vectors\"}");
  }
  const Space space = Space::from_json(j.at("space"));
  std::vector<Vec> vs;
  for (const auto& row : j.at("vectors")) {
    const auto vals = row.get<std::vector<double>>();
    vs.push_back(Eigen::Map<const Vec>(vals.data(), vals.size()));
  }
  return VecSeq(space, std::move(vs));
}

namespace {
PIndex require_finite(PIndex p, const char* cls) {
  if (p.is_inf()) {
    throw std::invalid_argument(std::string(cls) +
                                " requires a finite index p in [1, inf)");
  }
  return p;
}
}  // namespace

ClassId ClassId::lp(PIndex p) { return ClassId(ClassKind::Lp, require_finite(p, "lp")); }
ClassId ClassId::linf() { return ClassId(ClassKind::LInf, PIndex::inf()); }
ClassId ClassId::c0() { return ClassId(ClassKind::C0, PIndex::inf()); }
ClassId ClassId::c0w() { return ClassId(ClassKind::C0w, PIndex::inf()); }
ClassId ClassId::lp_weak(PIndex p) {
  return ClassId(ClassKind::LpWeak, require_finite(p, "lpw"));
}
ClassId ClassId::lp_unc(PIndex p) {
  return ClassId(ClassKind::LpUnc, require_finite(p, "lpu"));
}
ClassId ClassId::cohen(PIndex p) {
  return ClassId(ClassKind::Cohen, require_finite(p, "cohen"));
}
ClassId ClassId::mid(PIndex p) {
  return ClassId(ClassKind::Mid, require_finite(p, "mid"));
}
ClassId ClassId::rad() { return ClassId(ClassKind::Rad, PIndex::inf()); }
ClassId ClassId::rad_sup() { return ClassId(ClassKind::RAD, PIndex::inf()); }

ClassId ClassId::dual_of(const ClassId& inner) {
  if (!flags(inner).spherically_complete) {
    throw HypothesisError("dual class requires a spherically complete inner "
                          "class; '" +
                          inner.str() + "' is not flagged spherically complete");
  }
  if (inner.dual_depth() >= 2) {
    throw std::invalid_argument("dual nesting depth is capped at 2");
  }
  ClassId c(ClassKind::Dual, PIndex::inf());
  c.inner_ = std::make_shared<const ClassId>(inner);
  return c;
}

const PIndex& ClassId::p() const {
  switch (kind_) {
    case ClassKind::Lp:
    case ClassKind::LpWeak:
    case ClassKind::LpUnc:
    case ClassKind::Cohen:
    case ClassKind::Mid:
      return p_;
    default:
      throw std::logic_error("class '" + str() + "' carries no index");
  }
}

const ClassId& ClassId::inner() const {
  if (kind_ != ClassKind::Dual) {
    throw std::logic_error("inner() on a non-dual class");
  }
  return *inner_;
}

int ClassId::dual_depth() const {
  return kind_ == ClassKind::Dual ? 1 + inner_->dual_depth() : 0;
}

std::string ClassId::str() const {
  switch (kind_) {
    case ClassKind::Lp: return "lp:" + p_.str();
    case ClassKind::LInf: return "linf";
    case ClassKind::C0: return "c0";
    case ClassKind::C0w: return "c0w";
    case ClassKind::LpWeak: return "lpw:" + p_.str();
    case ClassKind::LpUnc: return "lpu:" + p_.str();
    case ClassKind::Cohen: return "cohen:" + p_.str();
    case ClassKind::Mid: return "mid:" + p_.str();
    case ClassKind::Rad: return "rad";
    case ClassKind::RAD: return "RAD";
    case ClassKind::Dual: return "dual(" + inner_->str() + ")";
  }
  return "?";
}

ClassId ClassId::parse(const std::string& text) {
  if (text.size() > 6 && text.rfind("dual(", 0) == 0 && text.back() == ')') {
    return dual_of(parse(text.substr(5, text.size() - 6)));
  }
  if (text == "linf") return linf();
  if (text == "c0") return c0();
  if (text == "c0w") return c0w();
  if (text == "rad") return rad();
  if (text == "RAD") return rad_sup();
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string head = text.substr(0, colon);
    const PIndex p = PIndex::parse(text.substr(colon + 1));
    if (head == "lp") return lp(p);
    if (head == "lpw") return lp_weak(p);
    if (head == "lpu") return lp_unc(p);
    if (head == "cohen") return cohen(p);
    if (head == "mid") return mid(p);
  }
  throw ParseError("unknown sequence class '" + text + "'");
}

bool operator==(const ClassId& a, const ClassId& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.kind_ == ClassKind::Dual) return *a.inner_ == *b.inner_;
  switch (a.kind_) {
    case ClassKind::Lp:
    case ClassKind::LpWeak:
    case ClassKind::LpUnc:
    case ClassKind::Cohen:
    case ClassKind::Mid:
      return a.p_ == b.p_;
    default:
      return true;
  }
}

namespace {

// Rewrites justified by isometric class identities; used both for picking
// closed-form computation paths and for metadata inheritance.
std::optional<ClassId> rewrite_dual_once(const ClassId& cls,
                                         bool finite_length_only) {
  if (cls.kind() != ClassKind::Dual) return std::nullopt;
  const ClassId& in = cls.inner();
  switch (in.kind()) {
    case ClassKind::Lp:
      return in.p().is_one() ? ClassId::linf() : ClassId::lp(in.p().conjugate());
    case ClassKind::LInf:
      return ClassId::lp(PIndex::finite(1.0));
    case ClassKind::LpWeak:
      if (in.p().is_one()) return std::nullopt;
      return ClassId::cohen(in.p().conjugate());
    case ClassKind::C0:
    case ClassKind::C0w:
      // At finite length the c0/c0w ball is the linf ball.
      if (finite_length_only) return ClassId::lp(PIndex::finite(1.0));
      return std::nullopt;
    case ClassKind::LpUnc:
      // At finite length the lpu ball is the lpw ball.
      if (finite_length_only && !in.p().is_one()) {
        return ClassId::cohen(in.p().conjugate());
      }
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

std::optional<ClassId> rewrite_dual(const ClassId& cls, bool finite_length_only) {
  if (cls.kind() != ClassKind::Dual) return std::nullopt;
  ClassId inner = cls.inner();
  if (const auto r = rewrite_dual(inner, finite_length_only)) inner = *r;
  const ClassId rebuilt = ClassId::dual_of(inner);
  return rewrite_dual_once(rebuilt, finite_length_only);
}

}  // namespace

std::optional<ClassId> canonical_norm_equivalent(const ClassId& cls) {
  return rewrite_dual(cls, /*finite_length_only=*/true);
}

ClassFlags flags(const ClassId& cls) {
  if (cls.kind() == ClassKind::Dual) {
    if (const auto eq = rewrite_dual(cls, /*finite_length_only=*/false)) {
      return flags(*eq);
    }
    ClassFlags f;
    f.spherically_complete = true;
    f.finitely_determined = true;
    f.linearly_stable = flags(cls.inner()).linearly_stable;
    return f;
  }
  ClassFlags f;
  f.linearly_stable = true;
  switch (cls.kind()) {
    case ClassKind::Lp:
      f.spherically_complete = true;
      f.finitely_determined = true;
      f.finitely_dominated = true;
      f.finitely_injective = true;
      f.c00_dense = true;
      f.reflexive = true;
      break;
    case ClassKind::LInf:
      f.spherically_complete = true;
      f.finitely_determined = true;
      f.finitely_injective = true;
      f.reflexive = true;
      break;
    case ClassKind::C0:
      f.spherically_complete = true;
      f.finitely_dominated = true;
      f.finitely_injective = true;
      f.c00_dense = true;
      break;
    case ClassKind::C0w:
      f.spherically_complete = true;
      break;
    case ClassKind::LpWeak:
      f.spherically_complete = true;
      f.finitely_determined = true;
      f.finitely_injective = true;
      break;
    case ClassKind::LpUnc:
      f.spherically_complete = true;
      f.finitely_dominated = true;
      f.finitely_injective = true;
      f.c00_dense = true;
      break;
    case ClassKind::Cohen:
    case ClassKind::Mid:
      f.spherically_complete = true;
      f.finitely_determined = true;
      break;
    case ClassKind::Rad:
      f.finitely_dominated = true;
      break;
    case ClassKind::RAD:
      f.finitely_determined = true;
      break;
    case ClassKind::Dual:
      break;
  }
  return f;
}

std::string class_caveat(const ClassId& cls) {
  switch (cls.kind()) {
    case ClassKind::LpUnc:
      return "finite-length norm coincides with lpw:" + cls.p().str() +
             "; the classes differ on infinite sequences";
    case ClassKind::C0:
    case ClassKind::C0w:
      return "finite-length norm coincides with linf; the classes differ on "
             "infinite sequences";
    case ClassKind::Dual: {
      // A dual class inherits finite-length-only status from its inner
      // class, but the coincident norm is the rewritten dual, not the inner
      // class's own lookalike.
      if (class_caveat(cls.inner()).empty()) return "";
      if (const auto eq = canonical_norm_equivalent(cls)) {
        return "finite-length norm coincides with " + eq->str() +
               "; the classes differ on infinite sequences";
      }
      return "finite-length norm only; the defining ball differs on "
             "infinite sequences";
    }
    default:
      return "";
  }
}

NormCert class_norm(const ClassId& cls, const VecSeq& x, const OptConfig& cfg,
                    const std::vector<Vec>& extra_inits) {
  const ClassEval e = dispatch(cls, x, cfg, extra_inits);
  NormCert cert;
  cert.value = e.value;
  cert.witness = e.witness;
  cert.method = e.method;
  cert.bound = e.bound;
  cert.note = e.note;
  const std::string caveat = class_caveat(cls);
  if (!caveat.empty()) {
    cert.note = cert.note.empty() ? caveat : cert.note + "; " + caveat;
  }
  return cert;
}

NormEval class_norm_with_support(const ClassId& cls, const VecSeq& x,
                                 const OptConfig& cfg,
                                 const std::vector<Vec>& extra_inits) {
  ClassEval e = dispatch(cls, x, cfg, extra_inits);
  return NormEval{e.value, VecSeq(x.space.dual(), std::move(e.support))};
}

std::vector<double> prefix_norms(const ClassId& cls, const VecSeq& x,
                                 const OptConfig& cfg) {
  std::vector<double> out;
  out.reserve(x.length());
  std::vector<Vec> warm;
  for (int m = 1; m <= x.length(); ++m) {
    const NormCert cert = class_norm(cls, x.prefix(m), cfg, warm);
    out.push_back(cert.value);
    warm.clear();
    if (cert.witness.size() > 0) warm.push_back(cert.witness);
  }
  return out;
}

std::pair<double, double> coordinate_axiom_check(const ClassId& cls,
                                                 const Space& space,
                                                 const Vec& v, int j, int k,
                                                 const OptConfig& cfg) {
  if (k < 1 || j < 1 || j > k) {
    throw std::invalid_argument("coordinate_axiom_check needs 1 <= j <= k");
  }
  std::vector<Vec> vs(k, Vec::Zero(space.dim()));
  vs[j - 1] = v;
  const VecSeq seq(space, std::move(vs));
  return {class_norm(cls, seq, cfg).value, space.norm(v)};
}

}  // namespace seqdual
