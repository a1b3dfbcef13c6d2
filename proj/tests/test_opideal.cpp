#include <doctest.h>

#include <cmath>
#include <random>

#include "seqdual/errors.hpp"
#include "seqdual/opideal.hpp"

using namespace seqdual;

namespace {

Space euclid2() { return Space::pnorm(2, PIndex::finite(2.0)); }

Mat mat2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

LinOp identity2() { return LinOp(euclid2(), euclid2(), Mat::Identity(2, 2)); }

LinOp random_op(std::mt19937_64& rng, const Space& dom, const Space& cod) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(cod.dim(), dom.dim());
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) m(i, j) = g(rng);
  }
  return LinOp(dom, cod, m);
}

const OptConfig kCfg{};
const ClassId kLp2 = ClassId::lp(PIndex::finite(2.0));
const ClassId kLpw2 = ClassId::lp_weak(PIndex::finite(2.0));

}  // namespace

TEST_CASE("operators validate their matrix shape") {
  CHECK_THROWS_AS(LinOp(euclid2(), euclid2(), Mat::Identity(3, 2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(LinOp(euclid2(), Space::pnorm(3, PIndex::finite(1.0)),
                        Mat::Identity(2, 2)),
                  std::invalid_argument);
  const LinOp id = identity2();
  CHECK(id.apply(Vec::Ones(2)).sum() == doctest::Approx(2.0));
}

TEST_CASE("adjoint transposes and double adjoint restores bitwise") {
  const LinOp T(euclid2(), Space::pnorm(2, PIndex::finite(4.0)),
                mat2(1, 2, 3, 4));
  const LinOp Ta = adjoint(T);
  CHECK(Ta.matrix(0, 1) == 3.0);
  CHECK(Ta.domain.same_geometry(T.codomain.dual()));
  const LinOp Taa = adjoint(Ta);
  CHECK((Taa.matrix - T.matrix).norm() == 0.0);
  CHECK(Taa.domain.same_geometry(T.domain));
  // The double dual space is the original object, not a lookalike.
  CHECK(Taa.domain.norm(Vec::Ones(2)) == T.domain.norm(Vec::Ones(2)));
}

TEST_CASE("composition multiplies matrices and checks the interface") {
  const LinOp A(euclid2(), euclid2(), mat2(1, 1, 0, 1));
  const LinOp B(euclid2(), euclid2(), mat2(2, 0, 0, 2));
  const LinOp AB = compose(A, B);
  CHECK(AB.matrix(0, 0) == 2.0);
  CHECK(AB.matrix(0, 1) == 2.0);
  const LinOp C(Space::pnorm(3, PIndex::finite(2.0)), euclid2(),
                Mat::Identity(2, 3));
  CHECK_THROWS_AS(compose(C, B), std::invalid_argument);
}

TEST_CASE("operator norm of the identity and a diagonal stretch") {
  CHECK(operator_norm(identity2(), kCfg).value ==
        doctest::Approx(1.0).epsilon(1e-7));
  const LinOp D(euclid2(), euclid2(), mat2(2, 0, 0, 1));
  CHECK(operator_norm(D, kCfg).value == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("weak-to-strong summing norm of the euclidean identity") {
  const NormCert cert = summing_norm(kLpw2, kLp2, identity2(), 2, kCfg);
  CHECK(cert.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
  // The witness re-evaluation pins the value to the claimed feasible point.
  CHECK(cert.witness.size() == 4);
}

TEST_CASE("matching strong classes reduce summing to the operator norm") {
  std::mt19937_64 rng(41);
  const LinOp T = random_op(rng, euclid2(), euclid2());
  const double summing = summing_norm(kLp2, kLp2, T, 3, kCfg).value;
  const double opn = operator_norm(T, kCfg).value;
  CHECK(summing == doctest::Approx(opn).epsilon(1e-3));
}

TEST_CASE("summing norms vanish on the zero operator and grow with k") {
  const LinOp zero(euclid2(), euclid2(), Mat::Zero(2, 2));
  CHECK(summing_norm(kLpw2, kLp2, zero, 2, kCfg).value == 0.0);

  std::mt19937_64 rng(42);
  const LinOp T = random_op(rng, euclid2(), euclid2());
  double prev = 0.0;
  for (int k = 1; k <= 3; ++k) {
    const double val = summing_norm(kLpw2, kLp2, T, k, kCfg).value;
    CHECK(val >= prev - 1e-6);
    prev = val;
  }
}

TEST_CASE("summing norms are an ideal under composition") {
  std::mt19937_64 rng(43);
  const Space l1 = Space::pnorm(2, PIndex::finite(1.0));
  const LinOp A = random_op(rng, euclid2(), euclid2());
  const LinOp T = random_op(rng, l1, euclid2());
  const LinOp B = random_op(rng, euclid2(), l1);
  const double whole =
      summing_norm(kLpw2, kLp2, compose(A, compose(T, B)), 2, kCfg).value;
  const double factored = operator_norm(A, kCfg).value *
                          summing_norm(kLpw2, kLp2, T, 2, kCfg).value *
                          operator_norm(B, kCfg).value;
  CHECK(whole <= factored + 1e-3 * (1.0 + factored));
}

TEST_CASE("adjoint report certifies the duality inequality") {
  std::mt19937_64 rng(44);
  const LinOp T = random_op(rng, euclid2(), euclid2());
  const AdjointReport rep = adjoint_duality_report(kLp2, kLp2, T, 2, kCfg);
  CHECK(rep.inequality_holds);
  CHECK(rep.equality_expected);
  CHECK(rep.equality_holds);
  CHECK(rep.adjoint_side <= rep.primal + rep.tolerance);
  CHECK(rep.difference == doctest::Approx(rep.primal - rep.adjoint_side));
  CHECK(!rep.direction.empty());
  CHECK(!rep.hypotheses.empty());
}

TEST_CASE("reverse report covers the dual-to-primal direction") {
  std::mt19937_64 rng(45);
  const LinOp T = random_op(rng, euclid2(), euclid2());
  const AdjointReport rep = reverse_duality_report(kLpw2, kLp2, T, 2, kCfg);
  CHECK(rep.inequality_holds);
  CHECK(rep.equality_expected);
  CHECK(rep.equality_holds);
}

TEST_CASE("adjoint reports reject classes missing their hypotheses") {
  const LinOp id = identity2();
  CHECK_THROWS_AS(adjoint_duality_report(kLpw2, kLp2, id, 2, kCfg),
                  HypothesisError);
  CHECK_THROWS_AS(adjoint_duality_report(kLp2, ClassId::rad(), id, 2, kCfg),
                  HypothesisError);
}

TEST_CASE("second adjoint reproduces the summing norm exactly") {
  std::mt19937_64 rng(46);
  const Space dom = Space::pnorm(2, PIndex::finite(1.0));
  const LinOp T = random_op(rng, dom, euclid2());
  const auto [a, e] = second_adjoint_check(kLp2, kLp2, T, 2, kCfg);
  CHECK(a == e);
}

TEST_CASE("adjoints preserve the operator norm") {
  std::mt19937_64 rng(47);
  // Polyhedral spaces enumerate both norms exactly, so the isometry is
  // bitwise up to vertex evaluation order.
  const Space l1 = Space::pnorm(2, PIndex::finite(1.0));
  const Space linf = Space::pnorm(2, PIndex::inf());
  const LinOp T = random_op(rng, l1, linf);
  const double primal = operator_norm(T, kCfg).value;
  const double dual_side = operator_norm(adjoint(T), kCfg).value;
  CHECK(primal == doctest::Approx(dual_side).epsilon(1e-9));
}

TEST_CASE("embedding into the sup space preserves norms and summing values") {
  const Space l1 = Space::pnorm(2, PIndex::finite(1.0));
  const LinOp J = isometric_embedding_into_sup(l1);
  CHECK(J.codomain.kind() == NormKind::PNorm);
  CHECK(J.codomain.index().is_inf());
  std::mt19937_64 rng(48);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    Vec v(2);
    v << g(rng), g(rng);
    CHECK(J.codomain.norm(J.apply(v)) ==
          doctest::Approx(l1.norm(v)).epsilon(1e-10));
  }
  const LinOp T = random_op(rng, euclid2(), l1);
  const double before = summing_norm(kLpw2, kLp2, T, 2, kCfg).value;
  const double after = summing_norm(kLpw2, kLp2, compose(J, T), 2, kCfg).value;
  CHECK(before == doctest::Approx(after).epsilon(1e-3));

  CHECK_THROWS_AS(isometric_embedding_into_sup(euclid2()),
                  std::invalid_argument);
}

TEST_CASE("operator json round trip keeps spaces and entries") {
  const LinOp T(euclid2(), Space::pnorm(2, PIndex::finite(4.0)),
                mat2(1, -2, 0.5, 3));
  const LinOp back = LinOp::from_json(T.to_json());
  CHECK((back.matrix - T.matrix).norm() == 0.0);
  CHECK(back.domain.same_geometry(T.domain));
  CHECK(back.codomain.same_geometry(T.codomain));
}
