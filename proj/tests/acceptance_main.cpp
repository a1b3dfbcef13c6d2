// Acceptance gate: ten go/no-go checks run at desk scale (dimensions <= 3,
// sequence lengths <= 4) with the optimizer oracles enabled. Each criterion
// prints exactly one [PASS]/[FAIL] line; the process exits nonzero when any
// line fails. Tolerances are pinned here, not read from configuration.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "seqdual/manifest.hpp"
#include "seqdual/verify.hpp"

using namespace seqdual;

namespace {

constexpr double kTolExact = 1e-9;
constexpr double kTolAscent = 1e-3;

int g_failures = 0;

void report(int id, bool pass, const std::string& text) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", id,
              text.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

// Every computation in criteria 1-8 runs under this config so qualifying
// ascents land in the audit log that criterion 9 scans.
OptConfig audited_config() {
  OptConfig cfg;
  cfg.audit = true;
  cfg.grid_resolution = 360;
  return cfg;
}

Space random_pnorm_space(std::mt19937_64& rng, int max_dim = 3) {
  std::uniform_int_distribution<int> dim_pick(1, max_dim);
  std::uniform_int_distribution<int> p_pick(0, 3);
  const int dim = dim_pick(rng);
  switch (p_pick(rng)) {
    case 0: return Space::pnorm(dim, PIndex::finite(1.0));
    case 1: return Space::pnorm(dim, PIndex::finite(2.0));
    case 2: return Space::pnorm(dim, PIndex::finite(3.0));
    default: return Space::pnorm(dim, PIndex::inf());
  }
}

VecSeq random_seq(std::mt19937_64& rng, const Space& s, int k) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Vec> vs;
  for (int j = 0; j < k; ++j) {
    Vec v(s.dim());
    for (int i = 0; i < s.dim(); ++i) v[i] = g(rng);
    vs.push_back(v);
  }
  return VecSeq(s, vs);
}

LinOp random_unit_operator(std::mt19937_64& rng, const Space& dom,
                           const Space& cod) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(cod.dim(), dom.dim());
  double frob = 0.0;
  do {
    for (int i = 0; i < m.rows(); ++i) {
      for (int j = 0; j < m.cols(); ++j) m(i, j) = g(rng);
    }
    frob = m.norm();
  } while (!(frob > 1e-6));
  // Unit Frobenius scale keeps every summing norm O(1), so the absolute
  // tolerances below are meaningful across draws.
  return LinOp(dom, cod, m / frob);
}

SuiteSpec suite_spec(const std::string& name, int trials, std::uint64_t seed,
                     const OptConfig& opt) {
  SuiteSpec s;
  s.name = name;
  s.trials = trials;
  s.seed = seed;
  s.opt = opt;
  s.tolerances["exact"] = kTolExact;
  s.tolerances["ascent"] = kTolAscent;
  return s;
}

std::string failure_digest(const SuiteReport& rep) {
  for (const TrialRecord& r : rep.records) {
    if (!r.pass) {
      return "first failure: trial " + std::to_string(r.index) + " '" +
             r.description + "' margin " + std::to_string(r.margin);
    }
  }
  return "all records passed";
}

// ----------------------------------------------------------- criterion 1

void criterion_axioms() {
  const auto t0 = std::chrono::steady_clock::now();
  const SuiteReport rep =
      run_suite(suite_spec("axioms", 50, 2024, audited_config()));
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "class-norm axioms on 50 instances x 10 classes (%d checks, "
                "tol %.0e exact / %.0e ascent, %.1fs, budget 60s)",
                static_cast<int>(rep.records.size()), kTolExact, kTolAscent,
                secs);
  const bool pass = rep.pass && secs < 60.0;
  report(1, pass,
         std::string(buf) + (rep.pass ? "" : "; " + failure_digest(rep)));
}

// ----------------------------------------------------------- criterion 2

void criterion_dual_identities() {
  struct Family {
    std::string label;
    std::vector<PIndex> ps;
    ClassId (*make)(const PIndex&);
  };
  const std::vector<Family> families = {
      {"dual(lp:p) vs lp:p*",
       {PIndex::finite(4.0 / 3.0), PIndex::finite(2.0), PIndex::finite(4.0)},
       [](const PIndex& p) { return ClassId::lp(p); }},
      {"dual(lp:1) vs linf",
       {PIndex::finite(1.0)},
       [](const PIndex& p) { return ClassId::lp(p); }},
      {"dual(linf) vs lp:1",
       {PIndex::inf()},
       [](const PIndex&) { return ClassId::linf(); }},
      // p = 1 has no rewritten partner for the weak class, so the family
      // runs over the remaining indices.
      {"dual(lpw:p) vs cohen:p*",
       {PIndex::finite(4.0 / 3.0), PIndex::finite(2.0), PIndex::finite(4.0)},
       [](const PIndex& p) { return ClassId::lp_weak(p); }},
  };
  const OptConfig cfg = audited_config();
  int checked = 0;
  double worst = 0.0;
  std::string worst_label;
  bool pass = true;
  for (size_t f = 0; f < families.size(); ++f) {
    std::mt19937_64 rng(520000 + 97 * f);
    std::uniform_int_distribution<int> k_pick(1, 3);
    for (int t = 0; t < 50; ++t) {
      const PIndex p = families[f].ps[t % families[f].ps.size()];
      const ClassId inner = families[f].make(p);
      const Space E = random_pnorm_space(rng);
      const VecSeq x = random_seq(rng, E, k_pick(rng));
      const OptConfig trial_cfg = cfg.with_seed(900000 + 1000 * f + t);

      const NormEval closed =
          norm_of_with_support(ClassId::dual_of(inner), x, trial_cfg);
      const DualNormProblem prob(inner, E, x);
      const NormCert forced =
          dual_norm(prob, trial_cfg, MethodChoice::ForceAscent,
                    {closed.support.flatten()});
      const double rel = std::abs(forced.value - closed.value) /
                         std::max(1.0, std::abs(closed.value));
      ++checked;
      if (rel > worst) {
        worst = rel;
        worst_label = families[f].label;
      }
      if (rel > kTolAscent) pass = false;
    }
  }
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "closed vs forced-ascent dual norms, 4 families x 50 "
                "instances (%d checks, worst rel. gap %.2e in '%s', tol %.0e)",
                checked, worst, worst_label.c_str(), kTolAscent);
  report(2, pass, buf);
}

// ----------------------------------------------------------- criterion 3

void criterion_sign_invariant_sups() {
  const SuiteReport rep =
      run_suite(suite_spec("lemma-2.2", 50, 2024, audited_config()));
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "plain vs absolute pairing suprema on 50 instances per "
                "sign-invariant class (%d checks, tol %.0e)",
                static_cast<int>(rep.records.size()), kTolAscent);
  report(3, rep.pass,
         std::string(buf) + (rep.pass ? "" : "; " + failure_digest(rep)));
}

// ----------------------------------------------------------- criterion 4

void criterion_functional_representation() {
  const SuiteReport rep =
      run_suite(suite_spec("theorem-2.8c", 30, 2024, audited_config()));
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "functional-vs-sequence norm pairs (tol %.0e) and coordinate "
                "reconstruction (tol %.0e) on 30 instances (%d checks)",
                kTolAscent, kTolExact, static_cast<int>(rep.records.size()));
  report(4, rep.pass,
         std::string(buf) + (rep.pass ? "" : "; " + failure_digest(rep)));
}

// ----------------------------------------------------------- criterion 5

void criterion_bidual() {
  const SuiteReport rep =
      run_suite(suite_spec("proposition-3.1", 30, 2024, audited_config()));
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "bidual norm one-sided bound everywhere and equality for "
                "strong classes, 30 instances (%d checks, tol %.0e)",
                static_cast<int>(rep.records.size()), kTolAscent);
  report(5, rep.pass,
         std::string(buf) + (rep.pass ? "" : "; " + failure_digest(rep)));
}

// ----------------------------------------------------------- criterion 6

void criterion_adjoint_duality() {
  struct Pair {
    std::string label;
    ClassId (*make_x)(const PIndex&);
    bool has_adjoint_direction;  // X must be dual-representable for it
  };
  const std::vector<Pair> pairs = {
      {"(lp:p, lp:q)", [](const PIndex& p) { return ClassId::lp(p); }, true},
      {"(lpu:p, lp:q)", [](const PIndex& p) { return ClassId::lp_unc(p); },
       true},
      {"(lpw:p, lp:q)", [](const PIndex& p) { return ClassId::lp_weak(p); },
       false},
  };
  const std::vector<PIndex> indices = {PIndex::finite(4.0 / 3.0),
                                       PIndex::finite(2.0),
                                       PIndex::finite(4.0)};
  OptConfig cfg = audited_config();
  cfg.restarts = 6;
  cfg.max_iter = 300;

  int checked = 0;
  double worst_margin = 0.0;
  double worst_equality = 0.0;
  bool pass = true;
  for (size_t pi = 0; pi < pairs.size(); ++pi) {
    std::mt19937_64 rng(610000 + 131 * pi);
    std::uniform_int_distribution<int> dim_pick(1, 2);
    std::uniform_int_distribution<int> k_pick(1, 2);
    for (int t = 0; t < 20; ++t) {
      const ClassId X = pairs[pi].make_x(indices[t % indices.size()]);
      const ClassId Y = ClassId::lp(indices[(t / 3) % indices.size()]);
      const Space dom = Space::pnorm(dim_pick(rng), PIndex::finite(2.0));
      const Space cod = random_pnorm_space(rng, 2);
      const LinOp T = random_unit_operator(rng, dom, cod);
      const int k = k_pick(rng);
      const OptConfig trial_cfg = cfg.with_seed(910000 + 1000 * pi + t);

      std::vector<AdjointReport> reps;
      if (pairs[pi].has_adjoint_direction) {
        reps.push_back(
            adjoint_duality_report(X, Y, T, k, trial_cfg, kTolAscent));
      }
      reps.push_back(reverse_duality_report(X, Y, T, k, trial_cfg, kTolAscent));
      for (const AdjointReport& rep : reps) {
        ++checked;
        if (!rep.inequality_holds) pass = false;
        worst_margin = std::min(worst_margin, rep.difference);
        if (rep.equality_expected) {
          if (!rep.equality_holds) pass = false;
          worst_equality = std::max(worst_equality, std::abs(rep.difference));
        }
      }
    }
  }
  char buf[300];
  std::snprintf(buf, sizeof(buf),
                "summing-norm adjoint identities on 20 unit operators per "
                "class pair (%d reports, worst margin %.2e >= -%.0e, worst "
                "equality gap %.2e <= %.0e)",
                checked, worst_margin, kTolAscent, worst_equality, kTolAscent);
  report(6, pass, buf);
}

// ----------------------------------------------------------- criterion 7

void criterion_second_adjoint() {
  const SuiteReport rep =
      run_suite(suite_spec("corollary-3.10", 20, 2024, audited_config()));
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "second-adjoint summing norms reproduce the primal exactly on "
                "20 instances incl. polytope spaces (%d checks, tol %.0e)",
                static_cast<int>(rep.records.size()), kTolExact);
  report(7, rep.pass,
         std::string(buf) + (rep.pass ? "" : "; " + failure_digest(rep)));
}

// ----------------------------------------------------------- criterion 8

void criterion_known_values() {
  const OptConfig cfg = audited_config();
  const Space l22 = Space::pnorm(2, PIndex::finite(2.0));
  const LinOp id(l22, l22, Mat::Identity(2, 2));
  const double summed =
      summing_norm(ClassId::lp_weak(PIndex::finite(2.0)),
                   ClassId::lp(PIndex::finite(2.0)), id, 2, cfg)
          .value;
  const double sqrt2 = std::sqrt(2.0);
  const double gap_sqrt2 = std::abs(summed - sqrt2);

  double worst_cohen = 0.0;
  std::mt19937_64 rng(88);
  for (int t = 0; t < 10; ++t) {
    const Space E = random_pnorm_space(rng);
    std::uniform_int_distribution<int> k_pick(1, 4);
    const VecSeq x = random_seq(rng, E, k_pick(rng));
    const double cohen =
        class_norm(ClassId::cohen(PIndex::finite(1.0)), x, cfg).value;
    const double strong =
        class_norm(ClassId::lp(PIndex::finite(1.0)), x, cfg).value;
    worst_cohen = std::max(worst_cohen, std::abs(cohen - strong));
  }
  const bool pass = gap_sqrt2 <= kTolAscent && worst_cohen <= kTolExact;
  char buf[300];
  std::snprintf(buf, sizeof(buf),
                "weak-to-strong summing norm of the euclidean identity at k=2 "
                "is sqrt(2) (gap %.2e <= %.0e) and the index-1 strong/Cohen "
                "norms collapse (gap %.2e <= %.0e)",
                gap_sqrt2, kTolAscent, worst_cohen, kTolExact);
  report(8, pass, buf);
}

// ----------------------------------------------------------- criterion 9

void criterion_grid_cross_validation() {
  const auto& log = audit_log();
  int failures = 0;
  for (const AuditRecord& rec : log) {
    if (!rec.pass) ++failures;
  }
  const bool pass = !log.empty() && failures == 0;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "%d ascent runs with variable dimension <= 3 cross-checked "
                "against the resolution-360 grid oracle, %d outside the "
                "discretization band",
                static_cast<int>(log.size()), failures);
  report(9, pass, buf);
}

// ----------------------------------------------------------- criterion 10

void criterion_determinism() {
  OptConfig quiet;  // audit off: determinism runs are not audit subjects
  int compared = 0;
  std::string mismatch;
  for (const std::string& name : suite_names()) {
    const SuiteSpec spec = suite_spec(name, 3, 4242, quiet);
    const std::string a = canonical_json_dump(run_suite(spec).to_json());
    const std::string b = canonical_json_dump(run_suite(spec).to_json());
    ++compared;
    if (a != b && mismatch.empty()) mismatch = name;
  }
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "re-running all %d suites with a fixed seed reproduces the "
                "JSON reports byte for byte%s%s",
                compared, mismatch.empty() ? "" : "; first mismatch: ",
                mismatch.c_str());
  report(10, mismatch.empty(), buf);
}

}  // namespace

int main() {
  clear_audit_log();
  struct Step {
    int id;
    void (*run)();
  };
  const std::vector<Step> steps = {
      {1, criterion_axioms},
      {2, criterion_dual_identities},
      {3, criterion_sign_invariant_sups},
      {4, criterion_functional_representation},
      {5, criterion_bidual},
      {6, criterion_adjoint_duality},
      {7, criterion_second_adjoint},
      {8, criterion_known_values},
      {9, criterion_grid_cross_validation},
      {10, criterion_determinism},
  };
  for (const Step& step : steps) {
    try {
      step.run();
    } catch (const std::exception& e) {
      report(step.id, false, std::string("exception: ") + e.what());
    }
  }
  if (g_failures == 0) {
    std::printf("acceptance: all 10 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criteria failed\n", g_failures);
  return 1;
}
