#include "seqdual/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

#include "seqdual/errors.hpp"
#include "seqdual/manifest.hpp"

namespace seqdual {

namespace {

// Trial inputs derive from (seed, suite name, trial index) alone, so trials
// are order-independent and a rerun reproduces the report byte for byte.
std::uint64_t mix(std::uint64_t seed, const std::string& name, int trial) {
  std::uint64_t h = 1469598103934665603ull ^ seed;
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ull;
  }
  h ^= 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(trial);
  h *= 1099511628211ull;
  h ^= h >> 29;
  return h;
}

int pick(std::mt19937_64& rng, const std::vector<int>& pool) {
  return pool[static_cast<std::size_t>(rng() % pool.size())];
}

double pick_p(std::mt19937_64& rng, bool allow_one) {
  static const double with_one[] = {1.0, 4.0 / 3.0, 2.0, 4.0};
  static const double above_one[] = {4.0 / 3.0, 2.0, 4.0};
  return allow_one ? with_one[rng() % 4] : above_one[rng() % 3];
}

enum class SpaceBias { CheapBall, Any };

Space random_polytope(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Vec> verts;
  // Perturbed cross-polytope vertices keep the list spanning; one extra
  // symmetric pair roughens the ball.
  for (int i = 0; i < dim; ++i) {
    Vec v = Vec::Zero(dim);
    v[i] = 1.0;
    for (int c = 0; c < dim; ++c) v[c] += 0.25 * g(rng);
    verts.push_back(v);
    verts.push_back(-v);
  }
  Vec extra(dim);
  for (int c = 0; c < dim; ++c) extra[c] = g(rng);
  if (extra.norm() > 1e-6) {
    extra /= extra.norm();
    verts.push_back(extra);
    verts.push_back(-extra);
  }
  return Space::polytope(dim, verts);
}

Space random_space(std::mt19937_64& rng, int dim, SpaceBias bias) {
  if (dim == 1) return Space::pnorm(1, PIndex::finite(2.0));
  const int kinds = bias == SpaceBias::Any ? 7 : 5;
  switch (rng() % kinds) {
    case 0:
      return Space::pnorm(dim, PIndex::finite(1.0));
    case 1:
      return Space::pnorm(dim, PIndex::finite(2.0));
    case 2:
      return Space::pnorm(dim, PIndex::inf());
    case 3: {
      std::uniform_real_distribution<double> u(0.5, 2.0);
      Vec w(dim);
      for (int i = 0; i < dim; ++i) w[i] = u(rng);
      const int c = static_cast<int>(rng() % 3);
      const PIndex q = c == 0   ? PIndex::finite(1.0)
                       : c == 1 ? PIndex::finite(2.0)
                                : PIndex::inf();
      return Space::weighted_pnorm(dim, q, w);
    }
    case 4:
      return random_polytope(rng, dim);
    case 5:
      return Space::pnorm(dim, PIndex::finite(rng() % 2 ? 4.0 : 4.0 / 3.0));
    default:
      return Space::pnorm(dim, PIndex::finite(3.0));
  }
}

VecSeq random_seq(std::mt19937_64& rng, const Space& E, int k,
                  double scale = 1.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Vec> vs(k, Vec(E.dim()));
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < E.dim(); ++i) vs[j][i] = scale * g(rng);
  }
  return VecSeq(E, std::move(vs));
}

VecSeq zero_seq(const Space& E, int k) {
  return VecSeq(E, std::vector<Vec>(k, Vec::Zero(E.dim())));
}

LinOp random_operator(std::mt19937_64& rng, Space dom, Space cod) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat M(cod.dim(), dom.dim());
  for (int i = 0; i < M.rows(); ++i) {
    for (int j = 0; j < M.cols(); ++j) M(i, j) = g(rng);
  }
  return LinOp(std::move(dom), std::move(cod), std::move(M));
}

ClassId nth_class(int which, const PIndex& p) {
  switch (which) {
    case 0:
      return ClassId::lp(p);
    case 1:
      return ClassId::linf();
    case 2:
      return ClassId::c0();
    case 3:
      return ClassId::c0w();
    case 4:
      return ClassId::lp_weak(p);
    case 5:
      return ClassId::lp_unc(p);
    case 6:
      return ClassId::cohen(p);
    case 7:
      return ClassId::mid(p);
    case 8:
      return ClassId::rad();
    default:
      return ClassId::rad_sup();
  }
}

bool heavy_class(const ClassId& cls) {
  return cls.kind() == ClassKind::Cohen || cls.kind() == ClassKind::Mid ||
         cls.kind() == ClassKind::LpWeak || cls.kind() == ClassKind::LpUnc;
}

struct Ctx {
  const SuiteSpec& spec;
  SuiteReport& rep;
  double tol_exact;
  double tol_ascent;
  int counter = 0;

  OptConfig trial_cfg(std::uint64_t h) const {
    return spec.opt.with_seed(h ^ 0x517cc1b727220a95ull);
  }

  void add(std::string desc, double lhs, double rhs, double margin, bool pass,
           nlohmann::json detail) {
    TrialRecord r;
    r.index = counter++;
    r.description = std::move(desc);
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = margin;
    r.pass = pass;
    r.detail = canonical_json_dump(detail);
    rep.pass = rep.pass && pass;
    rep.records.push_back(std::move(r));
  }
};

nlohmann::json base_detail(const ClassId& cls, const Space& E,
                           const VecSeq& x) {
  return nlohmann::json{{"class", cls.str()},
                        {"space", E.to_json()},
                        {"sequence", x.to_json()}};
}

// ---------------------------------------------------------------- axioms

void suite_axioms(Ctx& c) {
  for (int which = 0; which < 10; ++which) {
    for (int t = 0; t < c.spec.trials; ++t) {
      const std::string sub = c.spec.name + "/" + std::to_string(which);
      const std::uint64_t h = mix(c.spec.seed, sub, t);
      std::mt19937_64 rng(h);
      const PIndex p = PIndex::finite(pick_p(rng, which != 7));
      const ClassId cls = nth_class(which, p);
      int dim = pick(rng, c.spec.dims);
      int k = pick(rng, c.spec.lengths);
      if (cls.kind() == ClassKind::Mid) {
        dim = std::min(dim, 2);
        k = std::min(k, 2);
      }
      const Space E = random_space(rng, dim, SpaceBias::CheapBall);
      const VecSeq x = random_seq(rng, E, k);
      const OptConfig cfg = c.trial_cfg(h);

      const NormCert cert = class_norm(cls, x, cfg);
      double lower = 0.0;
      for (const Vec& v : x.vectors) lower = std::max(lower, E.norm(v));
      const bool exact = cert.method == CertMethod::Exact ||
                         cert.method == CertMethod::VertexEnum;
      const double tol = exact ? c.tol_exact : c.tol_ascent;
      const double margin = cert.value - lower;
      nlohmann::json detail = base_detail(cls, E, x);
      detail["method"] = to_string(cert.method);
      if (margin < -tol) detail["value"] = cert.value;
      c.add(cls.str() + " norm dominates coordinate norms over " + E.str(),
            cert.value, lower, margin, margin >= -tol, detail);

      std::normal_distribution<double> g(0.0, 1.0);
      Vec v(dim);
      for (int i = 0; i < dim; ++i) v[i] = g(rng);
      const int slot = 1 + static_cast<int>(rng() % k);
      const auto [lhs, rhs] = coordinate_axiom_check(cls, E, v, slot, k, cfg);
      const double margin2 = std::abs(lhs - rhs);
      nlohmann::json detail2 = base_detail(cls, E, x);
      detail2["coordinate"] = slot;
      c.add(cls.str() + " single-coordinate norm equals the vector norm",
            lhs, rhs, margin2, margin2 <= tol, detail2);
    }
  }
}

// -------------------------------------------------------------- lemma-2.2

const std::vector<int> kSphericallyComplete = {0, 1, 2, 3, 4, 5, 6, 7};

void suite_lemma22(Ctx& c) {
  for (int idx : kSphericallyComplete) {
    for (int t = 0; t < c.spec.trials; ++t) {
      const std::string sub = c.spec.name + "/" + std::to_string(idx);
      const std::uint64_t h = mix(c.spec.seed, sub, t);
      std::mt19937_64 rng(h);
      const PIndex p = PIndex::finite(pick_p(rng, idx == 0 || idx == 6));
      const ClassId cls = nth_class(idx, p);
      const int dim = heavy_class(cls) && cls.kind() != ClassKind::LpWeak &&
                              cls.kind() != ClassKind::LpUnc
                          ? 1
                          : pick(rng, c.spec.dims);
      const int k = pick(rng, c.spec.lengths);
      const Space E = random_space(rng, dim, SpaceBias::CheapBall);
      const VecSeq x = t == 0 ? zero_seq(E, k) : random_seq(rng, E, k);
      const OptConfig cfg = c.trial_cfg(h);

      const auto [plain, absolute] =
          sup_equality_check(DualNormProblem(cls, E, x), cfg);
      const double margin =
          std::abs(plain - absolute) / std::max(1.0, std::abs(absolute));
      nlohmann::json detail = base_detail(cls, E, x);
      if (margin > c.tol_ascent) {
        detail["plain"] = plain;
        detail["absolute"] = absolute;
      }
      c.add("plain sup equals absolute sup for " + cls.str() + " over " +
                E.str() + (t == 0 ? " (zero sequence)" : ""),
            plain, absolute, margin, margin <= c.tol_ascent, detail);
    }
  }
}

// -------------------------------------------------------- proposition-2.5

void suite_prop25(Ctx& c) {
  for (int t = 0; t < c.spec.trials; ++t) {
    const std::uint64_t h = mix(c.spec.seed, c.spec.name, t);
    std::mt19937_64 rng(h);
    const int idx = kSphericallyComplete[rng() % kSphericallyComplete.size()];
    const PIndex p = PIndex::finite(pick_p(rng, idx == 0 || idx == 6));
    const ClassId inner = nth_class(idx, p);
    const ClassId dcls = ClassId::dual_of(inner);
    const int dim = heavy_class(inner) ? 1 : pick(rng, c.spec.dims);
    const int k = std::max(2, pick(rng, c.spec.lengths));
    const Space E = random_space(rng, dim, SpaceBias::CheapBall);
    const VecSeq x = random_seq(rng, E, k);
    const OptConfig cfg = c.trial_cfg(h);

    const std::vector<double> pm = prefix_norms_of(dcls, x, cfg);
    const double scale = std::max(1.0, pm.back());
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < pm.size(); ++i) {
      worst = std::min(worst, pm[i + 1] - pm[i]);
    }
    nlohmann::json detail = base_detail(dcls, E, x);
    detail["prefixes"] = pm;
    c.add(dcls.str() + " prefix norms are nondecreasing over " + E.str(),
          pm.back(), pm.front(), worst,
          worst >= -c.tol_ascent * scale, detail);

    std::vector<Vec> flipped = x.vectors;
    for (Vec& v : flipped) {
      if (rng() % 2) v = -v;
    }
    const double full = pm.back();
    const double signed_norm =
        norm_of(dcls, VecSeq(E, flipped), cfg).value;
    const double margin2 = std::abs(signed_norm - full) / scale;
    c.add(dcls.str() + " norm is invariant under coordinate sign flips",
          signed_norm, full, margin2, margin2 <= c.tol_ascent, detail);
  }
}

// -------------------------------------------------------- dual-identities

void suite_dual_identities(Ctx& c) {
  struct Identity {
    ClassId inner;
    ClassId closed;
    std::string label;
  };
  for (int t = 0; t < c.spec.trials; ++t) {
    const std::uint64_t h = mix(c.spec.seed, c.spec.name, t);
    std::mt19937_64 rng(h);
    const int kind = static_cast<int>(rng() % 6);
    const auto make = [&]() -> Identity {
      switch (kind) {
        case 0: {
          const PIndex p = PIndex::finite(pick_p(rng, true));
          const ClassId rhs = p.is_one() ? ClassId::linf()
                                         : ClassId::lp(p.conjugate());
          return {ClassId::lp(p), rhs, "dual(lp) is lp of conjugate index"};
        }
        case 1:
          return {ClassId::linf(), ClassId::lp(PIndex::finite(1.0)),
                  "dual(linf) is lp:1"};
        case 2: {
          const PIndex p = PIndex::finite(pick_p(rng, false));
          return {ClassId::lp_weak(p), ClassId::cohen(p.conjugate()),
                  "dual(lpw) is cohen of conjugate index"};
        }
        case 3:
          return {ClassId::c0(), ClassId::lp(PIndex::finite(1.0)),
                  "dual(c0) is lp:1 at finite length"};
        case 4:
          return {ClassId::c0w(), ClassId::lp(PIndex::finite(1.0)),
                  "dual(c0w) is lp:1 at finite length"};
        default: {
          const PIndex p = PIndex::finite(pick_p(rng, false));
          return {ClassId::lp_unc(p), ClassId::cohen(p.conjugate()),
                  "dual(lpu) is cohen of conjugate index at finite length"};
        }
      }
    };
    const Identity id = make();
    const int dim = pick(rng, c.spec.dims);
    const int k = pick(rng, c.spec.lengths);
    const Space E = random_space(rng, dim, SpaceBias::CheapBall);
    const VecSeq x = random_seq(rng, E, k);
    const OptConfig cfg = c.trial_cfg(h);

    const NormEval closed = class_norm_with_support(id.closed, x, cfg);
    const NormCert forced =
        dual_norm(DualNormProblem(id.inner, E, x), cfg,
                  MethodChoice::ForceAscent, {closed.support.flatten()});
    const double margin =
        std::abs(closed.value - forced.value) / std::max(1.0, closed.value);
    nlohmann::json detail = base_detail(id.inner, E, x);
    detail["closed_class"] = id.closed.str();
    if (margin > c.tol_ascent) {
      detail["closed"] = closed.value;
      detail["forced_ascent"] = forced.value;
    }
    c.add(id.label + " on " + E.str(), closed.value, forced.value, margin,
          margin <= c.tol_ascent, detail);
  }
}

// ---------------------------------------------------------- theorem-2.8c

void suite_functional_representation(Ctx& c) {
  for (int t = 0; t < c.spec.trials; ++t) {
    const std::uint64_t h = mix(c.spec.seed, c.spec.name, t);
    std::mt19937_64 rng(h);
    const int which = static_cast<int>(rng() % 3);
    const ClassId inner =
        which == 0   ? ClassId::lp(PIndex::finite(1.0))
        : which == 1 ? ClassId::lp(PIndex::finite(pick_p(rng, false)))
                     : ClassId::lp_unc(PIndex::finite(pick_p(rng, false)));
    const int dim = pick(rng, c.spec.dims);
    const int k = pick(rng, c.spec.lengths);
    const Space E = random_space(rng, dim, SpaceBias::CheapBall);
    const VecSeq phis = random_seq(rng, E.dual(), k);
    const OptConfig cfg = c.trial_cfg(h);

    const auto [opnorm, dualnorm] =
        functional_norm_as_dual_element(inner, E, k, phis, cfg);
    const double margin =
        std::abs(opnorm - dualnorm) / std::max(1.0, dualnorm);
    nlohmann::json detail{{"inner", inner.str()},
                          {"space", E.to_json()},
                          {"functionals", phis.to_json()}};
    c.add("operator norm on the " + inner.str() +
              " ball equals the dual class norm over " + E.str(),
          opnorm, dualnorm, margin, margin <= c.tol_ascent, detail);

    const auto f = [&phis](const VecSeq& x) {
      return pairing_apply(phis, x);
    };
    const VecSeq back = coordinate_functionals(f, E, k);
    double rebuild = 0.0;
    for (int j = 0; j < k; ++j) {
      rebuild = std::max(
          rebuild, (back.vectors[j] - phis.vectors[j]).cwiseAbs().maxCoeff());
    }
    const VecSeq probe = random_seq(rng, E, k);
    const double fv = f(probe);
    const double gv = pairing_apply(back, probe);
    const double margin2 =
        std::max(rebuild, std::abs(fv - gv) / std::max(1.0, std::abs(fv)));
    c.add("coordinate functionals rebuild the functional over " + E.str(),
          fv, gv, margin2, margin2 <= c.tol_exact, detail);
  }
}

// -------------------------------------------------------- proposition-3.1

void suite_bidual(Ctx& c) {
  for (int t = 0; t < c.spec.trials; ++t) {
    const std::uint64_t h = mix(c.spec.seed, c.spec.name, t);
    std::mt19937_64 rng(h);
    const int idx = kSphericallyComplete[rng() % kSphericallyComplete.size()];
    const PIndex p = PIndex::finite(pick_p(rng, idx == 0 || idx == 6));
    const ClassId inner = nth_class(idx, p);
    const int dim = heavy_class(inner) ? 1 : pick(rng, c.spec.dims);
    const int k = pick(rng, c.spec.lengths);
    const Space E = random_space(rng, dim, SpaceBias::CheapBall);
    const VecSeq x = random_seq(rng, E, k);
    const OptConfig cfg = c.trial_cfg(h);

    const auto [nx, nb] = bidual_gap(inner, x, cfg);
    const double scale = std::max(1.0, nx);
    nlohmann::json detail = base_detail(inner, E, x);
    detail["norm"] = nx;
    detail["bidual_norm"] = nb;
    c.add("bidual norm never exceeds the " + inner.str() + " norm over " +
              E.str(),
          nb, nx, (nx - nb) / scale, nb <= nx + c.tol_ascent * scale, detail);
    if (inner.kind() == ClassKind::Lp) {
      const double margin = std::abs(nx - nb) / scale;
      c.add("bidual norm equals the " + inner.str() + " norm over " + E.str(),
            nb, nx, margin, margin <= c.tol_ascent, detail);
    }
  }
}

// ------------------------------------------------- theorem-3.5 / -3.6

void duality_suite(Ctx& c, bool reverse) {
  for (int t = 0; t < c.spec.trials; ++t) {
    const std::uint64_t h = mix(c.spec.seed, c.spec.name, t);
    std::mt19937_64 rng(h);
    const double p = pick_p(rng, false);
    const double q = pick_p(rng, false);
    // Theorem hypotheses: the adjoint identity needs a dual-representable
    // domain class, which lp-weak is not; the reverse identity only needs
    // spherical completeness, so lp-weak joins there.
    const int families = reverse ? 3 : 2;
    const int which = static_cast<int>(rng() % families);
    const ClassId X = which == 0   ? ClassId::lp(PIndex::finite(p))
                      : which == 1 ? ClassId::lp_unc(PIndex::finite(p))
                                   : ClassId::lp_weak(PIndex::finite(p));
    const ClassId Y = ClassId::lp(PIndex::finite(q));
    const int n = std::min(2, pick(rng, c.spec.dims));
    const int m = std::min(2, pick(rng, c.spec.dims));
    const int k = std::min(2, pick(rng, c.spec.lengths));
    const Space E = random_space(rng, n, SpaceBias::CheapBall);
    const Space F = random_space(rng, m, SpaceBias::CheapBall);
    LinOp T = random_operator(rng, E, F);
    if (t == 0) T.matrix.setZero();
    const OptConfig cfg = c.trial_cfg(h);
    const double tol_eff = c.tol_ascent * (1.0 + T.matrix.norm());

    const AdjointReport rep =
        reverse ? reverse_duality_report(X, Y, T, k, cfg, tol_eff)
                : adjoint_duality_report(X, Y, T, k, cfg, tol_eff);
    nlohmann::json detail{{"x", X.str()},
                          {"y", Y.str()},
                          {"operator", T.to_json()},
                          {"k", k},
                          {"report", rep.to_json()}};
    const std::string head =
        (reverse ? std::string("reverse adjoint identity, ")
                 : std::string("adjoint identity, ")) +
        X.str() + " -> " + Y.str() + ", k=" + std::to_string(k);
    c.add(head + ": " + rep.direction, rep.primal, rep.adjoint_side,
          rep.difference, rep.inequality_holds, detail);
    if (rep.equality_expected) {
      c.add(head + ": two-sided equality", rep.primal, rep.adjoint_side,
            std::abs(rep.difference), rep.equality_holds, detail);
    }
  }
}

void suite_adjoint_duality(Ctx& c) { duality_suite(c, false); }
void suite_reverse_duality(Ctx& c) { duality_suite(c, true); }

// -------------------------------------------------------- corollary-3.10

void suite_second_adjoint(Ctx& c) {
  for (int t = 0; t < c.spec.trials; ++t) {
    const std::uint64_t h = mix(c.spec.seed, c.spec.name, t);
    std::mt19937_64 rng(h);
    const double p = pick_p(rng, false);
    const double q = pick_p(rng, false);
    const int which = static_cast<int>(rng() % 3);
    const ClassId X = which == 0   ? ClassId::lp(PIndex::finite(p))
                      : which == 1 ? ClassId::lp_unc(PIndex::finite(p))
                                   : ClassId::c0();
    const ClassId Y = ClassId::lp(PIndex::finite(q));
    const int n = pick(rng, c.spec.dims);
    const int m = pick(rng, c.spec.dims);
    const bool polytopes = t % 3 == 2 && n > 1 && m > 1;
    const Space E = polytopes ? random_polytope(rng, n)
                              : random_space(rng, n, SpaceBias::CheapBall);
    const Space F = polytopes ? random_polytope(rng, m)
                              : random_space(rng, m, SpaceBias::CheapBall);
    LinOp T = random_operator(rng, E, F);
    if (t % 5 == 1) T.matrix.setZero();
    const int k = std::min(2, pick(rng, c.spec.lengths));
    const OptConfig cfg = c.trial_cfg(h);

    const auto [a, e] = second_adjoint_check(X, Y, T, k, cfg);
    const double margin = std::abs(a - e);
    nlohmann::json detail{{"x", X.str()},
                          {"y", Y.str()},
                          {"operator", T.to_json()},
                          {"k", k},
                          {"polytope_spaces", polytopes}};
    c.add("second adjoint keeps the summing norm, " + X.str() + " -> " +
              Y.str() + (polytopes ? " (polytope spaces)" : ""),
          a, e, margin, margin <= c.tol_exact, detail);
  }
}

// -------------------------------------------------------- operator-ideal

Space enum_space(std::mt19937_64& rng, int dim) {
  if (dim == 1) return Space::pnorm(1, PIndex::finite(2.0));
  switch (rng() % 3) {
    case 0:
      return Space::pnorm(dim, PIndex::finite(1.0));
    case 1:
      return Space::pnorm(dim, PIndex::inf());
    default:
      return random_polytope(rng, dim);
  }
}

void suite_operator_ideal(Ctx& c) {
  for (int t = 0; t < c.spec.trials; ++t) {
    const std::uint64_t h = mix(c.spec.seed, c.spec.name, t);
    std::mt19937_64 rng(h);
    const int check = t % 4;
    const OptConfig cfg = c.trial_cfg(h);
    const PIndex p2 = PIndex::finite(2.0);

    if (check == 0) {
      // Monotone growth in the sequence length, with each step warm-started
      // from the previous witness zero-padded.
      const ClassId X = rng() % 2 ? ClassId::lp_weak(p2) : ClassId::lp_unc(p2);
      const ClassId Y = ClassId::lp(p2);
      const int n = std::min(2, pick(rng, c.spec.dims));
      const int m = std::min(2, pick(rng, c.spec.dims));
      const Space E = random_space(rng, n, SpaceBias::CheapBall);
      const Space F = random_space(rng, m, SpaceBias::CheapBall);
      const LinOp T = random_operator(rng, E, F);
      std::vector<double> values;
      std::vector<Vec> warm;
      double worst = 0.0;
      for (int k = 1; k <= 3; ++k) {
        const NormCert s = summing_norm(X, Y, T, k, cfg, warm);
        if (!values.empty()) {
          worst = std::min(worst, s.value - values.back());
        }
        values.push_back(s.value);
        warm.clear();
        if (s.witness.size() == static_cast<long>(k) * n) {
          Vec padded = Vec::Zero((k + 1) * n);
          padded.head(k * n) = s.witness;
          warm.push_back(std::move(padded));
        }
      }
      const double scale = std::max(1.0, values.back());
      nlohmann::json detail{{"x", X.str()},
                            {"y", Y.str()},
                            {"operator", T.to_json()},
                            {"values", values}};
      c.add("summing norm is nondecreasing in k, " + X.str() + " -> " +
                Y.str(),
            values.back(), values.front(), worst,
            worst >= -c.tol_ascent * scale, detail);
    } else if (check == 1) {
      // Ideal property: composition with bounded factors.
      const ClassId X = ClassId::lp_weak(p2);
      const ClassId Y = ClassId::lp(p2);
      const int n = std::min(2, pick(rng, c.spec.dims));
      const Space H = enum_space(rng, n);
      const Space E = enum_space(rng, n);
      const Space F = enum_space(rng, n);
      const Space G = enum_space(rng, n);
      const LinOp B = random_operator(rng, H, E);
      const LinOp T = random_operator(rng, E, F);
      const LinOp A = random_operator(rng, F, G);
      const int k = std::min(2, pick(rng, c.spec.lengths));
      const double na = operator_norm(A, cfg).value;
      const double nb = operator_norm(B, cfg).value;
      const double st = summing_norm(X, Y, T, k, cfg).value;
      const double lhs =
          summing_norm(X, Y, compose(A, compose(T, B)), k, cfg).value;
      const double rhs = na * st * nb;
      nlohmann::json detail{{"x", X.str()},
                            {"y", Y.str()},
                            {"a", A.to_json()},
                            {"t", T.to_json()},
                            {"b", B.to_json()},
                            {"k", k}};
      c.add("ideal property: composition bounded by factor norms",
            lhs, rhs, rhs - lhs,
            lhs <= rhs + c.tol_ascent * (1.0 + rhs), detail);
    } else if (check == 2) {
      // Adjoint isometry for the plain operator norm.
      const int n = pick(rng, c.spec.dims);
      const int m = pick(rng, c.spec.dims);
      const Space E = enum_space(rng, n);
      const Space F = enum_space(rng, m);
      const LinOp T = random_operator(rng, E, F);
      const double nt = operator_norm(T, cfg).value;
      const double nta = operator_norm(adjoint(T), cfg).value;
      const double margin = std::abs(nt - nta) / std::max(1.0, nt);
      nlohmann::json detail{{"operator", T.to_json()}};
      c.add("adjoint preserves the operator norm", nt, nta, margin,
            margin <= 1e-6, detail);
    } else {
      // Embedding the codomain into a sup-norm space keeps the summing norm
      // for finitely injective codomain classes.
      const ClassId X = ClassId::lp(p2);
      const ClassId Y = rng() % 2 ? ClassId::lp(p2) : ClassId::lp_weak(p2);
      const int n = std::min(2, pick(rng, c.spec.dims));
      const int m = std::min(2, pick(rng, c.spec.dims));
      const Space E = random_space(rng, n, SpaceBias::CheapBall);
      const Space F = enum_space(rng, m);
      const LinOp T = random_operator(rng, E, F);
      const LinOp J = isometric_embedding_into_sup(F);
      const int k = std::min(2, pick(rng, c.spec.lengths));
      const double plain = summing_norm(X, Y, T, k, cfg).value;
      const double embedded = summing_norm(X, Y, compose(J, T), k, cfg).value;
      const double margin =
          std::abs(plain - embedded) / std::max(1.0, plain);
      nlohmann::json detail{{"x", X.str()},
                            {"y", Y.str()},
                            {"operator", T.to_json()},
                            {"embedding_rows", J.matrix.rows()},
                            {"k", k}};
      c.add("summing norm into " + Y.str() +
                " survives an isometric sup-space embedding",
            plain, embedded, margin, margin <= c.tol_ascent, detail);
    }
  }
}

// ---------------------------------------------------------- known-values

void suite_known_values(Ctx& c) {
  const std::uint64_t h = mix(c.spec.seed, c.spec.name, 0);
  std::mt19937_64 rng(h);
  const OptConfig cfg = c.trial_cfg(h);
  const double r2 = std::sqrt(2.0);

  const Space l22 = Space::pnorm(2, PIndex::finite(2.0));
  const Space scalar = Space::pnorm(1, PIndex::finite(2.0));

  {
    Vec v(2);
    v << 3.0, 4.0;
    const double got = l22.norm(v);
    c.add("euclidean norm of (3,4)", got, 5.0, std::abs(got - 5.0),
          std::abs(got - 5.0) <= c.tol_exact, {{"vector", {3.0, 4.0}}});
  }
  {
    std::vector<Vec> verts;
    Vec e1 = Vec::Zero(2), e2 = Vec::Zero(2);
    e1[0] = 1.0;
    e2[1] = 1.0;
    verts = {e1, -e1, e2, -e2};
    const Space cross = Space::polytope(2, verts);
    Vec v(2);
    v << 1.0, 1.0;
    const double got = cross.norm(v);
    c.add("cross-polytope gauge of (1,1)", got, 2.0, std::abs(got - 2.0),
          std::abs(got - 2.0) <= c.tol_exact, {{"vector", {1.0, 1.0}}});
  }
  {
    Vec v(2);
    v << 0.7, -1.3;
    const double got = Space::pnorm(2, PIndex::finite(4.0)).dual().norm(v);
    const double want = Space::pnorm(2, PIndex::finite(4.0 / 3.0)).norm(v);
    c.add("dual of the 4-norm is the 4/3-norm", got, want,
          std::abs(got - want), std::abs(got - want) <= c.tol_exact,
          {{"vector", {0.7, -1.3}}});
  }
  {
    std::vector<Vec> vs(3, Vec(1));
    vs[0][0] = 1.0;
    vs[1][0] = 2.0;
    vs[2][0] = 3.0;
    const VecSeq x(scalar, vs);
    const double got =
        norm_of(ClassId::dual_of(ClassId::linf()), x, cfg).value;
    c.add("dual(linf) norm of scalars (1,2,3)", got, 6.0,
          std::abs(got - 6.0), std::abs(got - 6.0) <= c.tol_exact,
          {{"sequence", {1.0, 2.0, 3.0}}});
    const std::vector<double> pm =
        prefix_norms_of(ClassId::lp(PIndex::finite(1.0)), x, cfg);
    const bool ok = std::abs(pm[0] - 1.0) <= c.tol_exact &&
                    std::abs(pm[1] - 3.0) <= c.tol_exact &&
                    std::abs(pm[2] - 6.0) <= c.tol_exact;
    c.add("lp:1 prefixes of (1,2,3) are (1,3,6)", pm[2], 6.0,
          std::abs(pm[2] - 6.0), ok, {{"prefixes", pm}});
  }
  {
    std::vector<Vec> vs(2, Vec(1));
    vs[0][0] = 2.0;
    vs[1][0] = 1.0;
    const std::vector<double> pm =
        prefix_norms_of(ClassId::linf(), VecSeq(scalar, vs), cfg);
    const bool ok = std::abs(pm[0] - 2.0) <= c.tol_exact &&
                    std::abs(pm[1] - 2.0) <= c.tol_exact;
    c.add("linf prefixes of (2,1) are (2,2)", pm[1], 2.0,
          std::abs(pm[1] - 2.0), ok, {{"prefixes", pm}});
  }

  std::vector<Vec> basis(2, Vec::Zero(2));
  basis[0][0] = 1.0;
  basis[1][1] = 1.0;
  const VecSeq e12(l22, basis);
  {
    const double got = class_norm(ClassId::lp(PIndex::finite(2.0)), e12, cfg)
                           .value;
    c.add("lp:2 norm of (e1,e2)", got, r2, std::abs(got - r2),
          std::abs(got - r2) <= c.tol_exact, {});
  }
  {
    const double got =
        class_norm(ClassId::lp_weak(PIndex::finite(2.0)), e12, cfg).value;
    c.add("lpw:2 norm of (e1,e2) is 1", got, 1.0, std::abs(got - 1.0),
          std::abs(got - 1.0) <= c.tol_exact, {});
  }
  {
    const double got = class_norm(ClassId::rad(), e12, cfg).value;
    c.add("rademacher average of (e1,e2)", got, r2, std::abs(got - r2),
          std::abs(got - r2) <= c.tol_exact, {});
  }
  {
    const double got = class_norm(ClassId::mid(PIndex::finite(2.0)), e12,
                                  cfg)
                           .value;
    c.add("mid:2 norm of (e1,e2) over euclidean space", got, r2,
          std::abs(got - r2), std::abs(got - r2) <= c.tol_ascent, {});
  }
  {
    const VecSeq x = random_seq(rng, l22, 3);
    const double got =
        class_norm(ClassId::cohen(PIndex::finite(1.0)), x, cfg).value;
    double want = 0.0;
    for (const Vec& v : x.vectors) want += l22.norm(v);
    c.add("cohen:1 norm collapses to the sum of norms", got, want,
          std::abs(got - want), std::abs(got - want) <= c.tol_exact,
          {{"sequence", x.to_json()}});
  }
  {
    Mat I = Mat::Identity(2, 2);
    const LinOp id(l22, l22, I);
    const double got =
        summing_norm(ClassId::lp_weak(PIndex::finite(2.0)),
                     ClassId::lp(PIndex::finite(2.0)), id, 2, cfg)
            .value;
    c.add("weak-to-strong summing norm of the euclidean identity at k=2",
          got, r2, std::abs(got - r2), std::abs(got - r2) <= c.tol_ascent,
          {{"k", 2}});
    const double opn = operator_norm(id, cfg).value;
    c.add("operator norm of the identity", opn, 1.0, std::abs(opn - 1.0),
          std::abs(opn - 1.0) <= c.tol_exact, {});
  }
  {
    std::vector<Vec> vs(2, Vec(1));
    vs[0][0] = 1.0;
    vs[1][0] = 1.0;
    const VecSeq ones(scalar, vs);
    const double got = class_norm(ClassId::rad_sup(), ones, cfg).value;
    c.add("running rademacher sup of scalar (1,1)", got, r2,
          std::abs(got - r2), std::abs(got - r2) <= c.tol_exact, {});
  }
}

// ---------------------------------------------------- oracle-consistency

void suite_oracle_consistency(Ctx& c) {
  clear_audit_log();
  OptConfig base = c.spec.opt;
  base.audit = true;

  for (int t = 0; t < c.spec.trials; ++t) {
    const std::uint64_t h = mix(c.spec.seed, c.spec.name, t);
    std::mt19937_64 rng(h);
    const OptConfig cfg =
        base.with_seed(h ^ 0x517cc1b727220a95ull);
    const int kind = t % 3;
    if (kind == 0) {
      // Weak-norm ascent over a smooth dual ball, variable dim <= 3.
      const int dim = 2 + static_cast<int>(rng() % 2);
      const Space E = Space::pnorm(dim, PIndex::finite(3.0));
      const VecSeq x = random_seq(rng, E, 2);
      class_norm(ClassId::lp_weak(PIndex::finite(4.0 / 3.0)), x, cfg);
    } else if (kind == 1) {
      // Forced-ascent dual norm over scalars, sequence variable dim <= 3.
      const Space E = Space::pnorm(1, PIndex::finite(2.0));
      const int k = 2 + static_cast<int>(rng() % 2);
      const VecSeq x = random_seq(rng, E, k);
      dual_norm(DualNormProblem(ClassId::lp(PIndex::finite(2.0)), E, x), cfg,
                MethodChoice::ForceAscent);
    } else {
      // Operator norm ascent over a smooth domain ball.
      const int dim = 2 + static_cast<int>(rng() % 2);
      const Space E = Space::pnorm(dim, PIndex::finite(3.0));
      const Space F = Space::pnorm(2, PIndex::finite(2.0));
      operator_norm(random_operator(rng, E, F), cfg);
    }
  }

  const auto& log = audit_log();
  for (const AuditRecord& r : log) {
    nlohmann::json detail{{"dim", r.dim}, {"band", r.band}};
    c.add("ascent value within the grid oracle band (dim " +
              std::to_string(r.dim) + ")",
          r.ascent_value, r.grid_value, r.ascent_value - r.grid_value, r.pass,
          detail);
  }
  c.add("audit log populated", static_cast<double>(log.size()), 1.0,
        static_cast<double>(log.size()), !log.empty(),
        {{"records", log.size()}});
}

// -------------------------------------------------------------- registry

struct SuiteDef {
  const char* name;
  int default_trials;
  std::vector<const char*> covers;
  void (*run)(Ctx&);
};

const std::vector<SuiteDef>& registry() {
  static const std::vector<SuiteDef> defs = {
      {"axioms", 50, {"axiom-i", "axiom-ii"}, &suite_axioms},
      {"lemma-2.2", 50, {"lemma-2.2"}, &suite_lemma22},
      {"proposition-2.5", 30, {"proposition-2.5"}, &suite_prop25},
      {"dual-identities",
       50,
       {"example-2.6", "example-2.10"},
       &suite_dual_identities},
      {"theorem-2.8c",
       30,
       {"theorem-2.8a", "theorem-2.8b", "theorem-2.8c"},
       &suite_functional_representation},
      {"proposition-3.1", 50, {"proposition-3.1"}, &suite_bidual},
      {"theorem-3.5", 20, {"theorem-3.5"}, &suite_adjoint_duality},
      {"theorem-3.6", 20, {"theorem-3.6"}, &suite_reverse_duality},
      {"corollary-3.10", 20, {"corollary-3.10"}, &suite_second_adjoint},
      {"operator-ideal", 16, {"lemma-3.9"}, &suite_operator_ideal},
      {"known-values", 1, {"example-2.6"}, &suite_known_values},
      {"oracle-consistency",
       9,
       {"ascent-grid-consistency"},
       &suite_oracle_consistency},
  };
  return defs;
}

const SuiteDef* find_suite(const std::string& name) {
  for (const SuiteDef& d : registry()) {
    if (name == d.name) return &d;
  }
  return nullptr;
}

}  // namespace

bool has_suite(const std::string& name) {
  return find_suite(name) != nullptr;
}

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const SuiteDef& d : registry()) out.emplace_back(d.name);
  return out;
}

std::vector<std::string> suite_covers(const std::string& name) {
  const SuiteDef* def = find_suite(name);
  if (!def) throw std::invalid_argument("unknown suite '" + name + "'");
  return {def->covers.begin(), def->covers.end()};
}

std::vector<std::string> required_result_tags() {
  return {"axiom-i",        "axiom-ii",      "lemma-2.2",
          "proposition-2.5", "example-2.6",   "theorem-2.8a",
          "theorem-2.8b",    "theorem-2.8c",  "example-2.10",
          "proposition-3.1", "theorem-3.5",   "theorem-3.6",
          "lemma-3.9",       "corollary-3.10"};
}

SuiteReport run_suite(const SuiteSpec& spec) {
  const SuiteDef* def = find_suite(spec.name);
  if (!def) throw std::invalid_argument("unknown suite '" + spec.name + "'");
  SuiteSpec eff = spec;
  if (eff.trials <= 0) eff.trials = def->default_trials;
  if (eff.dims.empty() || eff.lengths.empty()) {
    throw std::invalid_argument("suite spec needs dims and lengths");
  }
  for (int d : eff.dims) {
    if (d < 1 || (eff.opt.audit && d > 3)) {
      throw std::invalid_argument(
          "suite dims must be >= 1, and <= 3 when the grid audit is on");
    }
  }
  for (int k : eff.lengths) {
    if (k < 1 || (eff.opt.audit && k > 4)) {
      throw std::invalid_argument(
          "suite lengths must be >= 1, and <= 4 when the grid audit is on");
    }
  }

  SuiteReport rep;
  rep.suite = eff.name;
  rep.seed = eff.seed;
  rep.pass = true;
  Ctx ctx{eff, rep,
          eff.tolerances.count("exact") ? eff.tolerances.at("exact") : 1e-9,
          eff.tolerances.count("ascent") ? eff.tolerances.at("ascent") : 1e-3};
  def->run(ctx);
  rep.trials = static_cast<int>(rep.records.size());
  return rep;
}

nlohmann::json SuiteReport::to_json() const {
  nlohmann::json recs = nlohmann::json::array();
  for (const TrialRecord& r : records) {
    nlohmann::json rec{{"index", r.index},
                       {"description", r.description},
                       {"lhs", r.lhs},
                       {"rhs", r.rhs},
                       {"margin", r.margin},
                       {"pass", r.pass}};
    if (!r.detail.empty()) rec["detail"] = nlohmann::json::parse(r.detail);
    recs.push_back(std::move(rec));
  }
  return nlohmann::json{{"suite", suite},
                        {"seed", seed},
                        {"trials", trials},
                        {"pass", pass},
                        {"records", std::move(recs)}};
}

std::string SuiteReport::summary() const {
  std::ostringstream out;
  int passed = 0;
  for (const TrialRecord& r : records) passed += r.pass ? 1 : 0;
  out << "suite " << suite << ": seed=" << seed << " checks=" << records.size()
      << " " << (pass ? "PASS" : "FAIL") << "\n";
  for (const TrialRecord& r : records) {
    if (r.pass) continue;
    out << "  [FAIL] check " << r.index << ": " << r.description
        << " (lhs=" << r.lhs << ", rhs=" << r.rhs << ", margin=" << r.margin
        << ")\n"
        << "         detail: " << r.detail << "\n";
  }
  out << "  " << passed << "/" << records.size() << " checks passed\n";
  return out.str();
}

}  // namespace seqdual
