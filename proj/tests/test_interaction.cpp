#include <catch_amalgamated.hpp>

#include "fixtures.hpp"

using namespace interact;
using namespace fixtures;

namespace {

double map_distance(const LinMap& a, const LinMap& b) { return (a.matrix() - b.matrix()).norm(); }

}  // namespace

TEST_CASE("identity pair is an interaction with zero residuals", "[interaction]") {
  auto rep = verify_interaction(LinMap::identity(m2()), LinMap::identity(m2()));
  CHECK(rep.pass);
  for (const auto& [k, r] : rep.residuals) {
    INFO(k);
    CHECK(r == 0.0);
  }
}

TEST_CASE("flip pair passes", "[interaction]") {
  // oracle: V(H(V(a))) = V(a1,a1)... evaluated by hand on coordinates
  auto V = [](cplx, cplx a2) { return std::pair<cplx, cplx>{a2, a2}; };
  auto H = [](cplx a1, cplx) { return std::pair<cplx, cplx>{a1, a1}; };
  for (auto [a1, a2] : {std::pair<cplx, cplx>{1, 0}, {0, 1}, {2.0, cplx(0, 3)}}) {
    auto [v1, v2] = V(a1, a2);
    auto [h1, h2] = H(v1, v2);
    auto [w1, w2] = V(h1, h2);
    CHECK(w1 == v1);
    CHECK(w2 == v2);
    Element got = flip_V()(flip_H()(flip_V()(diag(c2(), {a1, a2}))));
    CHECK(frobenius_norm(got - diag(c2(), {w1, w2})) == 0.0);
  }
  auto rep = verify_interaction(flip_V(), flip_H());
  CHECK(rep.pass);
  CHECK(rep.residuals.at("3.1.iv") <= 1e-15);
  CHECK(rep.residuals.at("3.1.v") <= 1e-15);
  CHECK(rep.choi_min_V >= -1e-9);
  CHECK(rep.choi_min_H >= -1e-9);
}

TEST_CASE("transpose pair fails multiplicativity with witness (e12, e21)", "[interaction]") {
  auto rep = verify_interaction(transpose_m2(), transpose_m2());
  CHECK_FALSE(rep.pass);
  CHECK(rep.first_failure(Tolerance{}) == "3.1.iv");
  CHECK(rep.residuals.at("3.1.i") <= 1e-9);
  CHECK(rep.residuals.at("3.1.ii") == 0.0);
  REQUIRE(rep.witnesses.count("3.1.iv"));
  const auto& w = rep.witnesses.at("3.1.iv");
  CHECK(w.text == "x=e12, y=e21");
  // oracle: (xy)^T versus x^T y^T for x = e12, y = e21
  Element x = Element::matrix_unit(m2(), 0, 0, 1), y = Element::matrix_unit(m2(), 0, 1, 0);
  Mat lhs = (x.block(0) * y.block(0)).transpose();
  Mat rhs = x.block(0).transpose() * y.block(0).transpose();
  CHECK((lhs - rhs).norm() > 1.0);
  CHECK(frobenius_norm(w.x - x) == 0.0);
  CHECK(frobenius_norm(w.y - y) == 0.0);
  CHECK_THROWS_AS(Interaction(transpose_m2(), transpose_m2()), InteractionRejected);
}

TEST_CASE("conditional expectations", "[interaction]") {
  auto I = identity_m2();
  auto EV = expectation_V(I);
  CHECK(EV.E.matrix() == Mat::Identity(4, 4));
  CHECK(EV.range.dim() == 4);

  auto F = flip();
  auto fv = expectation_V(F), fh = expectation_H(F);
  CHECK(fv.E.matrix() == real2(1, 0, 1, 0));
  CHECK(fh.E.matrix() == real2(0, 1, 0, 1));
  CHECK(fv.range.dim() == 1);
  CHECK(fh.range.dim() == 1);
  // oracle: E_V(a b) = (a1 c, a1 c) = E_V(a) b for b = (c, c)
  Element a = diag(c2(), {2, 5}), b = diag(c2(), {3, 3});
  CHECK(frobenius_norm(fv.E(a * b) - diag(c2(), {6, 6})) == 0.0);
  CHECK(frobenius_norm(fv.E(a * b) - fv.E(a) * b) == 0.0);
  CHECK(check_conditional_expectation(fv).worst() == 0.0);
}

TEST_CASE("inverse pair", "[interaction]") {
  CHECK(check_inverse_pair(identity_m2()).worst() == 0.0);
  auto r = check_inverse_pair(flip());
  CHECK(r.worst() <= 1e-15);
  // oracle: V((c,c)) = (c,c) and V(E_H(a)) = V((a2,a2)) = (a2,a2) = V(a)
  Element cc = diag(c2(), {7, 7});
  CHECK(frobenius_norm(flip_V()(cc) - cc) == 0.0);
  Element a = diag(c2(), {1, 4});
  CHECK(frobenius_norm(flip_V()(diag(c2(), {4, 4})) - flip_V()(a)) == 0.0);
}

TEST_CASE("amplified interactions", "[interaction]") {
  auto F = flip();
  CHECK(amplified_interaction(F, 1).V().matrix() == F.V().matrix());
  auto F2 = amplified_interaction(F, 2);
  CHECK(F2.algebra().blocks() == std::vector<int>{2, 2});
  CHECK(F2.report().pass);
  CHECK(check_conditional_expectation(expectation_V(F2)).worst() <= 1e-12);
  CHECK(check_conditional_expectation(expectation_H(F2)).worst() <= 1e-12);
  auto I3 = amplified_interaction(identity_m2(), 3);
  CHECK(I3.V().matrix() == Mat::Identity(36, 36));
}

TEST_CASE("interactions are completely positive and contractive", "[interaction]") {
  std::mt19937_64 rng(20);
  for (const auto& I : {flip(), identity_m2(), amplified_interaction(flip(), 2)}) {
    for (const auto* t : {&I.V(), &I.H()}) {
      CHECK(is_completely_positive(*t).min_eigenvalue >= -1e-9);
      CHECK(contraction_ratio(*t, 20, rng) <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("endomorphism with transfer operator", "[interaction]") {
  auto I = from_endo_transfer(LinMap::identity(m2()), LinMap::identity(m2()));
  CHECK(I.V().matrix() == Mat::Identity(4, 4));

  // oracle: the four basis-pair checks of L(a alpha(b)) = L(a) b by hand
  auto sw = [](cplx a1, cplx a2) { return std::pair<cplx, cplx>{a2, a1}; };
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      cplx a[2] = {i == 0, i == 1}, b[2] = {j == 0, j == 1};
      auto [ab1, ab2] = sw(b[0], b[1]);
      auto [l1, l2] = sw(a[0] * ab1, a[1] * ab2);
      auto [la1, la2] = sw(a[0], a[1]);
      CHECK(l1 == la1 * b[0]);
      CHECK(l2 == la2 * b[1]);
    }
  auto S = from_endo_transfer(swap_c2(), swap_c2());
  CHECK(compose(S.H(), S.V()).matrix() == Mat::Identity(2, 2));

  // alpha = id, L = (id + swap)/2: at a = (1,0), b = (0,1) the left side is
  // L(0) = 0 while L(a) b = (1/2,1/2)(0,1) = (0,1/2), so the pair is rejected
  LinMap half(c2(), 0.5 * (Mat::Identity(2, 2) + swap_c2().matrix()));
  Element a = diag(c2(), {1, 0}), b = diag(c2(), {0, 1});
  CHECK(frobenius_norm(half(a * b)) == 0.0);
  CHECK(frobenius_norm(half(a) * b - diag(c2(), {0, 0.5})) == 0.0);
  CHECK_THROWS_AS(from_endo_transfer(LinMap::identity(c2()), half), InteractionRejected);
  CHECK(check_endo_transfer(LinMap::identity(c2()), half).unital == 0.0);

  // L(1) != 1
  LinMap twice(c2(), 2.0 * Mat::Identity(2, 2));
  CHECK_THROWS_AS(from_endo_transfer(LinMap::identity(c2()), twice), InteractionRejected);
  // alpha not multiplicative
  CHECK_THROWS_AS(from_endo_transfer(half, LinMap::identity(c2())), InteractionRejected);
}

TEST_CASE("derive from a partial isometry", "[interaction]") {
  AlgebraDescriptor B = m2();
  std::vector<Element> diagonals = {Element::matrix_unit(B, 0, 0, 0), Element::matrix_unit(B, 0, 1, 1)};
  Element e12 = Element::matrix_unit(B, 0, 0, 1);

  // oracle: S a S* = a2 e11 and S* a S = a1 e22
  Element a = diagonals[0] * cplx(3) + diagonals[1] * cplx(5);
  CHECK(frobenius_norm(e12 * a * adjoint(e12) - cplx(5) * diagonals[0]) == 0.0);
  CHECK(frobenius_norm(adjoint(e12) * a * e12 - cplx(3) * diagonals[1]) == 0.0);

  auto d = derive_from_partial_isometry(B, c2(), diagonals, e12);
  CHECK(map_distance(d.interaction.V(), flip_V()) <= 1e-12);
  CHECK(map_distance(d.interaction.H(), flip_H()) <= 1e-12);
  CHECK(d.report.pass);
  CHECK(d.gate_V > 0.5);
  CHECK(d.gate_H > 0.5);

  // S = 1 in B = A
  std::vector<Element> all;
  for (int k = 0; k < 4; ++k) all.push_back(Element::basis(B, k));
  auto u = derive_from_partial_isometry(B, B, all, Element::unit(B));
  CHECK(map_distance(u.interaction.V(), LinMap::identity(B)) <= 1e-12);
  CHECK(map_distance(u.interaction.H(), LinMap::identity(B)) <= 1e-12);

  auto s = derive_from_partial_isometry(B, c2(), diagonals, diagonals[0] + diagonals[1]);
  CHECK(map_distance(s.interaction.V(), LinMap::identity(c2())) <= 1e-12);

  CHECK_THROWS_AS(derive_from_partial_isometry(B, c2(), diagonals, cplx(2) * e12), std::invalid_argument);
  CHECK_THROWS_AS(derive_from_partial_isometry(B, c2(), diagonals, Element::zero(B)), InteractionRejected);
  // S = e13 in M3 moves e11 onto e33, which is outside the copy of A
  AlgebraDescriptor B3({3});
  std::vector<Element> corner = {Element::matrix_unit(B3, 0, 0, 0), Element::matrix_unit(B3, 0, 1, 1)};
  Element mix = Element::matrix_unit(B3, 0, 0, 2);
  CHECK_THROWS_AS(derive_from_partial_isometry(B3, c2(), corner, mix), InteractionRejected);
}
