#include <catch_amalgamated.hpp>

#include <interact/basicc.hpp>

#include "fixtures.hpp"

using namespace interact;
using namespace fixtures;
using Catch::Matchers::WithinAbs;

TEST_CASE("identity expectation", "[basicc]") {
  auto I = identity_m2();
  BasicConstruction bc = build_basic(expectation_V(I));
  CHECK(bc.m() == 4);
  CHECK((bc.e() - Mat::Identity(4, 4)).norm() <= 1e-12);
  CHECK(bc.dimK() == 4);
  CHECK(bc.space().gap == std::numeric_limits<double>::infinity());
  // lambda is the left regular representation in orthonormal coordinates
  std::mt19937_64 rng(30);
  Element a = Element::random(m2(), rng), b = Element::random(m2(), rng);
  Vec lb = bc.lambda(a) * bc.space()(b);
  CHECK((lb - bc.space()(a * b)).norm() <= 1e-12 * (1 + lb.norm()));
}

TEST_CASE("flip expectations", "[basicc]") {
  auto F = flip();
  // oracle: Gram of <a,b> = tau(E_H(a* b)) over the basis (1,0), (0,1) with
  // tau = trace / 2 is [[0,0],[0,1]]; its range is the second coordinate
  Mat G(2, 2);
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) {
      Element ab = adjoint(Element::basis(c2(), k)) * Element::basis(c2(), l);
      Element e = flip_H()(flip_V()(ab));
      G(k, l) = (e.block(0)(0, 0) + e.block(1)(0, 0)) / 2.0;
    }
  CHECK((G - real2(0, 0, 0, 1)).norm() == 0.0);

  BasicConstruction bh = build_basic(expectation_H(F));
  REQUIRE(bh.m() == 1);
  CHECK(std::abs(bh.e()(0, 0) - 1.0) <= 1e-12);
  CHECK(bh.dimK() == 1);
  Element a = diag(c2(), {cplx(2, 1), cplx(-3, 0.5)});
  CHECK(std::abs(bh.lambda(a)(0, 0) - cplx(-3, 0.5)) <= 1e-12);

  BasicConstruction bv = build_basic(expectation_V(F));
  REQUIRE(bv.m() == 1);
  CHECK(std::abs(bv.lambda(a)(0, 0) - cplx(2, 1)) <= 1e-12);
  CHECK(bv.dimK() == 1);
}

TEST_CASE("express_in_spanning", "[basicc]") {
  auto F2 = amplified_interaction(flip(), 2);
  BasicConstruction bc = build_basic(expectation_H(F2));
  const int n = F2.algebra().dim();
  auto rebuild = [&](const Mat& c) {
    Mat k = Mat::Zero(bc.m(), bc.m());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) k += c(i, j) * bc.lambda_basis(i) * bc.e() * bc.lambda_basis(j);
    return k;
  };
  for (int i : {0, 3, 5})
    for (int j : {1, 6}) {
      Mat k = bc.lambda_basis(i) * bc.e() * bc.lambda_basis(j);
      auto p = bc.express_in_spanning(k);
      CHECK(p.residual <= 1e-12);
      CHECK((rebuild(p.c) - k).norm() <= 1e-12);
    }
  // e itself, as lambda(1) e lambda(1)
  auto pe = bc.express_in_spanning(bc.e());
  CHECK((rebuild(pe.c) - bc.e()).norm() <= 1e-12);

  std::mt19937_64 rng(31);
  Mat junk = detail::random_matrix(bc.m(), bc.m(), rng);
  if (bc.K_residual(junk) > 1e-6) CHECK_THROWS_AS(bc.express_in_spanning(junk), NumericalError);

  // flip: K_H is C and k = 1 has a presentation
  BasicConstruction bh = build_basic(expectation_H(flip()));
  Mat one = Mat::Identity(1, 1);
  auto p1 = bh.express_in_spanning(one);
  CHECK(p1.residual <= 1e-12);
}

TEST_CASE("basic construction invariants", "[basicc]") {
  for (const auto& I : {flip(), identity_m2(), amplified_interaction(flip(), 2),
                        from_endo_transfer(swap_c2(), swap_c2())}) {
    for (const auto& E : {expectation_V(I), expectation_H(I)}) {
      BasicConstruction bc = build_basic(E);
      auto r = check_basic(bc);
      CHECK(r.projection <= 1e-9);
      CHECK(r.jones <= 1e-9);
      CHECK(r.norm <= 1e-9);
      CHECK(r.commute <= 1e-9);
      CHECK(r.closure <= 1e-9);
      CHECK(r.contains_e <= 1e-9);
      CHECK(r.homomorphism <= 1e-9);
      CHECK(bc.well_defined_residual() <= 1e-9);
    }
  }
}

TEST_CASE("amplified flip basic construction dimensions", "[basicc]") {
  // E_H(a) = (a2, a2) on M2 + M2: the GNS space is M2 with left multiplication
  auto F2 = amplified_interaction(flip(), 2);
  BasicConstruction bc = build_basic(expectation_H(F2));
  CHECK(bc.m() == 4);
  CHECK(bc.dimK() == 4);
  CHECK((bc.e() - Mat::Identity(4, 4)).norm() <= 1e-12);
}

TEST_CASE("non-expectations are refused", "[basicc]") {
  CondExp bad{LinMap(c2(), real2(0, 1, 1, 0)), Subspace::whole(c2())};
  CHECK_THROWS_AS(build_basic(bad), NumericalError);
}
