#include <catch_amalgamated.hpp>

#include <interact/gencorr.hpp>

#include "fixtures.hpp"

using namespace interact;
using namespace fixtures;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Element unit_m2(int p, int q) { return Element::matrix_unit(m2(), 0, p, q); }

std::vector<Element> diagonal_embedding() { return {unit_m2(0, 0), unit_m2(1, 1)}; }

// Y = C e12 inside M2, A = diagonals
ConcreteTRO corner() { return ConcreteTRO(m2(), {unit_m2(0, 1)}, c2(), diagonal_embedding()); }

// Y = first row of M2, A = diagonals
ConcreteTRO first_row() { return ConcreteTRO(m2(), {unit_m2(0, 0), unit_m2(0, 1)}, c2(), diagonal_embedding()); }

ConcreteTRO zero_tro() { return ConcreteTRO(m2(), {}, c2(), diagonal_embedding()); }

}  // namespace

static_assert(TroModel<ConcreteTRO>);
static_assert(TroModel<AbstractTRO>);

TEST_CASE("concrete TROs are checked for closure", "[gencorr]") {
  CHECK(first_row().dim() == 2);
  CHECK(corner().dim() == 1);
  CHECK(zero_tro().dim() == 0);
  // the diagonals are not closed under x y* z together with e12
  CHECK_THROWS_AS(ConcreteTRO(m2(), {unit_m2(0, 1), unit_m2(0, 0) + unit_m2(1, 1)}, c2(), diagonal_embedding()),
                  NumericalError);
  // e11 + e12 spans a TRO but not a right module over the diagonals
  CHECK_NOTHROW(ConcreteTRO(m2(), {unit_m2(0, 0) + unit_m2(0, 1)}, c1(), {Element::unit(m2())}));
  CHECK_THROWS_AS(ConcreteTRO(m2(), {unit_m2(0, 0) + unit_m2(0, 1)}, c2(), diagonal_embedding()), NumericalError);
}

TEST_CASE("theta operators against matrix products", "[gencorr]") {
  auto Y = first_row();
  std::mt19937_64 rng(70);
  for (int t = 0; t < 5; ++t) {
    Vec xi = detail::random_matrix(2, 1, rng), eta = detail::random_matrix(2, 1, rng);
    Element X = Y.element(xi), E = Y.element(eta);
    // oracle: theta^l(x) = xi eta* x, theta^r(x) = x xi* eta, entries of first-row matrices
    Mat tl(2, 2), tr(2, 2);
    for (int j = 0; j < 2; ++j) {
      Mat x = Mat::Zero(2, 2);
      x(0, j) = 1.0;
      Mat xm = X.block(0), em = E.block(0);
      Mat l = xm * em.adjoint() * x, r = x * xm.adjoint() * em;
      tl(0, j) = l(0, 0);
      tl(1, j) = l(0, 1);
      tr(0, j) = r(0, 0);
      tr(1, j) = r(0, 1);
    }
    CHECK((theta_left(Y, xi, eta) - tl).norm() <= 1e-12 * (1 + tl.norm()));
    CHECK((theta_right(Y, xi, eta) - tr).norm() <= 1e-12 * (1 + tr.norm()));
    CHECK((tl.adjoint() - theta_left(Y, eta, xi)).norm() <= 1e-12 * (1 + tl.norm()));
    // cube: |xi xi* xi| = |xi|^3
    double n = op_norm(X);
    CHECK_THAT(Y.norm(theta_left(Y, xi, xi) * xi), WithinRel(n * n * n, 1e-10));
  }
}

TEST_CASE("on the identity interaction theta^l is left multiplication", "[gencorr]") {
  BimoduleX X(identity_m2());
  AbstractTRO t(X);
  Element one = Element::unit(m2());
  std::mt19937_64 rng(71);
  for (int s = 0; s < 4; ++s) {
    Element u = Element::random(m2(), rng), v = Element::random(m2(), rng);
    Vec xi = X.elementary(u, one).cls, eta = X.elementary(v, one).cls;
    Mat want = t.lam(u * adjoint(v));
    CHECK((theta_left(t, xi, eta) - want).norm() <= 1e-9 * (1 + want.norm()));
  }
}

TEST_CASE("compact spans", "[gencorr]") {
  BimoduleX Xi(identity_m2());
  auto si = compact_spans(AbstractTRO(Xi));
  CHECK(si.dim_left() == 4);
  CHECK(si.dim_right() == 4);

  BimoduleX Xf(flip());
  auto sf = compact_spans(AbstractTRO(Xf));
  CHECK(sf.dim_left() == 1);
  CHECK(sf.dim_right() == 1);

  // Y = C e12: theta^l is the action of e11 and theta^r that of e22
  auto Y = corner();
  auto sc = compact_spans(Y);
  CHECK(sc.dim_left() == 1);
  CHECK(sc.dim_right() == 1);
  Vec e = Vec::Unit(1, 0);
  Element d1 = diag(c2(), {1, 0}), d2 = diag(c2(), {0, 1});
  CHECK((theta_left(Y, e, e) - Y.lam(d1)).norm() <= 1e-12);
  CHECK((theta_right(Y, e, e) - Y.rho(d2)).norm() <= 1e-12);
  CHECK(Y.lam(d2).norm() <= 1e-12);
  CHECK(Y.rho(d1).norm() <= 1e-12);
}

TEST_CASE("commutation and correspondence laws", "[gencorr]") {
  for (const auto& Y : {first_row(), corner()}) {
    auto c = check_commutation(Y);
    CHECK(c.worst() <= 1e-12);
    CHECK(check_correspondence(Y).worst() <= 1e-12);
  }
  for (const auto& I : {flip(), identity_m2(), amplified_interaction(flip(), 2), from_endo_transfer(swap_c2(), swap_c2()),
                        blind_c3()}) {
    BimoduleX X(I);
    AbstractTRO t(X);
    auto c = check_commutation(t);
    CHECK(c.theta <= 1e-9);
    CHECK(c.actions <= 1e-9);
    CHECK(c.adjoint_left <= 1e-9);
    CHECK(c.adjoint_right <= 1e-9);
    CHECK(c.cube <= 1e-9);
    auto g = check_correspondence(t);
    CHECK(g.law_left <= 1e-9);
    CHECK(g.law_right <= 1e-9);
    CHECK(g.lam_hom <= 1e-9);
    CHECK(g.rho_antihom <= 1e-9);
  }
}

TEST_CASE("redundancies", "[gencorr]") {
  // classical mode: every a is a right redundancy
  BimoduleX Xi(identity_m2());
  auto ri = find_redundancies(AbstractTRO(Xi), Side::right);
  CHECK(ri.all.size() == 4);
  CHECK(ri.kernel.dim() == 0);
  CHECK(ri.katsura.size() == 4);
  for (const auto& r : ri.all) CHECK(r.residual <= 1e-9);
  auto c78 = check_classical(Xi);
  CHECK(c78.applicable(Tolerance{}));
  CHECK(c78.residual <= 1e-9);
  // flip: <xi, eta>_r = lambda_H((0, c)) e_H, so the classical identity applies as well
  BimoduleX Xf(flip());
  auto f78 = check_classical(Xf);
  CHECK(f78.fit <= 1e-12);
  CHECK(f78.residual <= 1e-12);

  // Y = C e12: rho(a) = a2, Ker(rho) is the first coordinate
  auto rc = find_redundancies(corner(), Side::right);
  CHECK(rc.all.size() == 2);
  CHECK(rc.kernel.dim() == 1);
  CHECK(rc.kernel_blocks == std::vector<int>{0});
  CHECK(rc.annihilator_blocks == std::vector<int>{1});
  REQUIRE(rc.katsura.size() == 1);
  const Element& a = rc.katsura[0].a;
  CHECK(std::abs(a.block(0)(0, 0)) <= 1e-12);
  CHECK(std::abs(a.block(1)(0, 0)) > 0.5);
  CHECK(rc.katsura[0].residual <= 1e-12);
  int flagged = 0;
  for (const auto& r : rc.all) flagged += r.in_annihilator;
  CHECK(flagged == 1);

  auto lc = find_redundancies(corner(), Side::left);
  CHECK(lc.kernel_blocks == std::vector<int>{1});
  REQUIRE(lc.katsura.size() == 1);
  CHECK(std::abs(lc.katsura[0].a.block(1)(0, 0)) <= 1e-12);

  auto rz = find_redundancies(zero_tro(), Side::right);
  CHECK(rz.all.size() == 2);
  for (const auto& r : rz.all) CHECK(r.k.size() == 0);
  CHECK(rz.kernel.dim() == 2);
  CHECK(rz.katsura.empty());
}

TEST_CASE("concrete and abstract flip agree", "[gencorr]") {
  BimoduleX X(flip());
  AbstractTRO t(X);
  auto Y = corner();
  CHECK(t.dim() == Y.dim());
  auto sa = compact_spans(t), sc = compact_spans(Y);
  CHECK(sa.dim_left() == sc.dim_left());
  CHECK(sa.dim_right() == sc.dim_right());
  Element a = diag(c2(), {cplx(2, -1), cplx(0.5, 3)});
  CHECK((t.lam(a) - Y.lam(a)).norm() <= 1e-12);
  CHECK((t.rho(a) - Y.rho(a)).norm() <= 1e-12);
  for (Side s : {Side::left, Side::right}) {
    auto ra = find_redundancies(t, s), rc = find_redundancies(Y, s);
    CHECK(ra.all.size() == rc.all.size());
    CHECK(ra.katsura.size() == rc.katsura.size());
    CHECK(ra.kernel_blocks == rc.kernel_blocks);
  }
}

TEST_CASE("crossed product identification", "[gencorr]") {
  {
    auto id = LinMap::identity(c2());
    auto I = from_endo_transfer(id, id);
    BimoduleX X(I);
    CHECK(check_713(id, id, I, X).worst() <= 1e-12);
  }
  {
    auto I = from_endo_transfer(swap_c2(), swap_c2());
    BimoduleX X(I);
    CHECK_THAT(X.norm(X.elementary(diag(c2(), {1, 0}), Element::unit(c2()))), WithinAbs(1.0, 1e-12));
    CHECK(check_713(swap_c2(), swap_c2(), I, X).worst() <= 1e-12);
  }
  {
    auto I = amplified_interaction(from_endo_transfer(swap_c2(), swap_c2()), 2);
    BimoduleX X(I);
    auto s2 = amplify(swap_c2(), 2);
    auto r = check_713(s2, s2, I, X);
    CHECK(r.density <= 1e-9);
    CHECK(r.isometry <= 1e-9);
    CHECK(r.bimodule <= 1e-9);
    CHECK(r.ternary <= 1e-9);
  }
  BimoduleX Xf(flip());
  CHECK_THROWS_AS(check_713(swap_c2(), swap_c2(), flip(), Xf), std::invalid_argument);
}

TEST_CASE("the ternary tensor determines the ternary product", "[gencorr]") {
  BimoduleX X(amplified_interaction(flip(), 2));
  AbstractTRO t(X);
  auto Y = first_row();
  std::mt19937_64 rng(72);
  auto agree = [&](const auto& model) {
    const int d = model.dim();
    auto tt = ternary_tensor(model);
    for (int s = 0; s < 5; ++s) {
      Vec x = detail::random_matrix(d, 1, rng), y = detail::random_matrix(d, 1, rng), z = detail::random_matrix(d, 1, rng);
      Vec want = model.ternary(x, y, z);
      Vec got = Vec::Zero(d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) got += x(i) * std::conj(y(j)) * (tt[i * d + j] * z);
      CHECK((got - want).norm() <= 1e-12 * (1 + want.norm()));
    }
  };
  agree(t);
  agree(Y);
}
