#pragma once
// Covariant representation (pi, S) of an interaction on H1 (+) H2, where
// H1 = X and H2 = K_H, both in orthonormal coordinates so that adjoints are
// conjugate transposes.

#include "bimodule.hpp"

namespace interact {

struct CovariantRep {
  Interaction interaction;
  int r = 0;  // dim H1
  int s = 0;  // dim H2
  std::vector<Mat> pi_basis;  // pi(e_k) for the canonical basis of A
  Mat S;

  int dim() const { return static_cast<int>(S.rows()); }
  const AlgebraDescriptor& algebra() const { return interaction.algebra(); }
  Mat pi(const Element& a) const {
    Vec c = a.coords();
    Mat out = Mat::Zero(dim(), dim());
    for (int k = 0; k < c.size(); ++k)
      if (c(k) != cplx(0.0)) out += c(k) * pi_basis[k];
    return out;
  }
  Mat SSstar() const { return S * S.adjoint(); }
  Mat SstarS() const { return S.adjoint() * S; }
};

struct RepInvariants {
  double homomorphism = 0.0;
  double star = 0.0;
  double partial_isometry = 0.0;
  double covariance_V = 0.0;  // |S pi(a) S* - pi(V(a)) SS*| / |a|
  double covariance_H = 0.0;  // |S* pi(a) S - pi(H(a)) S*S| / |a|
  std::string worst_element;
  double worst() const { return std::max({homomorphism, star, partial_isometry, covariance_V, covariance_H}); }
};

inline RepInvariants check_rep_invariants(const CovariantRep& rep) {
  RepInvariants out;
  const auto& alg = rep.algebra();
  const auto& V = rep.interaction.V();
  const auto& H = rep.interaction.H();
  const Mat& S = rep.S;
  const Mat P = rep.SSstar(), Q = rep.SstarS();
  double worst = -1.0;
  auto note = [&](double v, const Element& a) {
    if (v > worst) {
      worst = v;
      out.worst_element = describe(a);
    }
  };
  out.partial_isometry = detail::op_norm(S * S.adjoint() * S - S);
  for (int k = 0; k < alg.dim(); ++k) {
    Element a = Element::basis(alg, k);
    const Mat& pa = rep.pi_basis[k];
    double na = op_norm(a);
    double st = detail::op_norm(rep.pi(adjoint(a)) - pa.adjoint());
    out.star = std::max(out.star, st);
    double cv = detail::op_norm(S * pa * S.adjoint() - rep.pi(V(a)) * P) / na;
    double ch = detail::op_norm(S.adjoint() * pa * S - rep.pi(H(a)) * Q) / na;
    out.covariance_V = std::max(out.covariance_V, cv);
    out.covariance_H = std::max(out.covariance_H, ch);
    note(std::max({st, cv, ch}), a);
    for (int l = 0; l < alg.dim(); ++l) {
      Element b = Element::basis(alg, l);
      double h = detail::op_norm(rep.pi(a * b) - pa * rep.pi_basis[l]);
      out.homomorphism = std::max(out.homomorphism, h);
      note(h, a);
    }
  }
  return out;
}

// H2 coordinates: B_t = sqrt(m) K_t is orthonormal for phi(j* k) = tr(j* k) / m.
inline Mat lambda_on_K(const BasicConstruction& bc, const Element& a) {
  const int d = bc.dimK();
  Mat la = bc.lambda(a);
  Mat out(d, d);
  for (int t = 0; t < d; ++t) {
    Mat img = la * bc.K_element(t);
    for (int u = 0; u < d; ++u) out(u, t) = (bc.K_element(u).adjoint() * img).trace();
  }
  return out;
}

inline CovariantRep build_covrep(const BimoduleX& X) {
  const auto& I = X.interaction();
  const auto& alg = I.algebra();
  const BasicConstruction& bc = X.bcH();
  const int r = X.r(), s = bc.dimK();
  CovariantRep rep{I, r, s, {}, Mat::Zero(r + s, r + s)};
  for (int k = 0; k < alg.dim(); ++k) {
    Element a = Element::basis(alg, k);
    Mat p = Mat::Zero(r + s, r + s);
    p.topLeftCorner(r, r) = X.a_left_op(a);
    p.bottomRightCorner(s, s) = lambda_on_K(bc, a);
    rep.pi_basis.push_back(std::move(p));
  }
  Element one = Element::unit(alg);
  TensorElt x11 = X.elementary(one, one);
  const double root_m = std::sqrt(double(bc.m()));
  for (int t = 0; t < s; ++t) rep.S.block(0, r + t, r, 1) = X.right_act(x11, root_m * bc.K_element(t)).cls;

  auto inv = check_rep_invariants(rep);
  if (!(inv.worst() <= I.tol().eps))
    throw NumericalError("covariant representation invariant fails (residual " + std::to_string(inv.worst()) +
                         " at " + inv.worst_element + ")");
  return rep;
}

inline CovariantRep build_covrep(const Interaction& I, const BimoduleX& X) {
  if (!(I.algebra() == X.algebra())) throw DescriptorMismatch("bimodule built over another algebra");
  return build_covrep(X);
}

// pi = left regular representation of A, S = 0.
inline CovariantRep zero_representation(const Interaction& I) {
  const auto& alg = I.algebra();
  const int n = alg.dim();
  CovariantRep rep{I, n, 0, {}, Mat::Zero(n, n)};
  for (int k = 0; k < n; ++k) rep.pi_basis.push_back(left_mult_matrix(Element::basis(alg, k)));
  return rep;
}

struct Axiom21Report {
  double covariance_V = 0.0;
  double covariance_H = 0.0;
  double commute_V = 0.0;  // pi(V(a)) against SS*
  double commute_H = 0.0;  // pi(H(a)) against S*S
  double worst() const { return std::max({covariance_V, covariance_H, commute_V, commute_H}); }
};

inline Axiom21Report check_axiom_21(const CovariantRep& rep) {
  Axiom21Report out;
  auto inv = check_rep_invariants(rep);
  out.covariance_V = inv.covariance_V;
  out.covariance_H = inv.covariance_H;
  const auto& alg = rep.algebra();
  const Mat P = rep.SSstar(), Q = rep.SstarS();
  for (int k = 0; k < alg.dim(); ++k) {
    Element a = Element::basis(alg, k);
    Mat v = rep.pi(rep.interaction.V()(a)), h = rep.pi(rep.interaction.H()(a));
    out.commute_V = std::max(out.commute_V, detail::op_norm(v * P - P * v));
    out.commute_H = std::max(out.commute_H, detail::op_norm(h * Q - Q * h));
  }
  return out;
}

struct NondegeneracyReport {
  double gate_V_range = 0.0;      // x -> pi(x) S on range V
  double gate_V_generated = 0.0;  // same on C*(range V)
  double gate_H_range = 0.0;      // x -> S pi(x) on range H
  double gate_H_generated = 0.0;
  bool nondegenerate = false;
  bool implication_holds = true;  // V-side gate passing forces the H-side gate
};

namespace detail {

// Smallest singular value of x -> pi(x) S (or S pi(x)) on a subspace, from
// the normalized trace norm of A to the Hilbert-Schmidt norm scaled by tr(S*S).
inline double rep_gate(const CovariantRep& rep, const Subspace& sub, bool left) {
  if (sub.dim() == 0) return std::numeric_limits<double>::infinity();
  double ss = rep.SstarS().trace().real();
  if (!(ss > 0.0)) return 0.0;
  const auto& alg = rep.algebra();
  const double scale = std::sqrt(alg.trace_of_unit() / ss);
  const int N = rep.dim();
  Mat M(N * N, sub.dim());
  for (int j = 0; j < sub.dim(); ++j) {
    Element x = Element::from_coords(alg, sub.basis_matrix().col(j));
    Mat px = rep.pi(x);
    M.col(j) = scale * vec(left ? Mat(px * rep.S) : Mat(rep.S * px));
  }
  return min_singular(M);
}

}  // namespace detail

inline NondegeneracyReport check_nondegeneracy(const CovariantRep& rep) {
  const auto& I = rep.interaction;
  const auto tol = I.tol();
  NondegeneracyReport out;
  out.gate_V_range = detail::rep_gate(rep, I.rangeV(), true);
  out.gate_H_range = detail::rep_gate(rep, I.rangeH(), false);
  out.gate_V_generated = detail::rep_gate(rep, generated_subalgebra(I.rangeV().elements(), tol), true);
  out.gate_H_generated = detail::rep_gate(rep, generated_subalgebra(I.rangeH().elements(), tol), false);
  out.nondegenerate = out.gate_V_range > tol.eps && out.gate_V_generated > tol.eps &&
                      out.gate_H_range > tol.eps && out.gate_H_generated > tol.eps;
  out.implication_holds = !(out.gate_V_range > tol.eps) || out.gate_H_range > tol.eps;
  return out;
}

struct FaithfulRep {
  CovariantRep rep;  // extended pi and S
  int extra = 0;     // dimension of the added summand
  double injectivity = 0.0;  // smallest singular value of a -> pi(a)
};

inline double injectivity(const CovariantRep& rep) {
  const int n = rep.algebra().dim();
  Mat M(rep.dim() * rep.dim(), n);
  for (int k = 0; k < n; ++k) M.col(k) = detail::vec(rep.pi_basis[k]);
  return detail::min_singular(M);
}

// Direct sum with the tracial GNS space of A, carrying the identity action and S = 0.
inline FaithfulRep faithful_extension(const CovariantRep& rep) {
  const auto& alg = rep.algebra();
  const int n = alg.dim(), N = rep.dim();
  CovariantRep ext{rep.interaction, rep.r, rep.s, {}, Mat::Zero(N + n, N + n)};
  ext.S.topLeftCorner(N, N) = rep.S;
  for (int k = 0; k < n; ++k) {
    Mat p = Mat::Zero(N + n, N + n);
    p.topLeftCorner(N, N) = rep.pi_basis[k];
    p.bottomRightCorner(n, n) = left_mult_matrix(Element::basis(alg, k));
    ext.pi_basis.push_back(std::move(p));
  }
  FaithfulRep out{std::move(ext), n, 0.0};
  out.injectivity = injectivity(out.rep);
  return out;
}

struct LinkingReport {
  double projections = 0.0;        // SS*, S*S orthogonal projections
  double range_mult = 0.0;         // a -> pi(V(a)) SS* multiplicative and * on range H, mirrored
  double range_iso = 0.0;          // and isometric
  double compression_norm = 0.0;   // |pi(V(a)) SS*| = |V(a)|, mirrored
  double unit_support = 0.0;       // V(1) e_V = e_V, H(1) e_H = e_H, and pi(V(1)) SS* = SS*
  double worst() const { return std::max({projections, range_mult, range_iso, compression_norm, unit_support}); }
};

inline LinkingReport check_linking(const CovariantRep& rep, const BimoduleX& X) {
  LinkingReport out;
  const auto& I = rep.interaction;
  const auto& alg = rep.algebra();
  const auto& V = I.V();
  const auto& H = I.H();
  const Mat P = rep.SSstar(), Q = rep.SstarS();
  out.projections = std::max({(P * P - P).norm(), (P.adjoint() - P).norm(), (Q * Q - Q).norm(),
                              (Q.adjoint() - Q).norm()});
  auto side = [&](const Subspace& range, const LinMap& T, const Mat& proj) {
    auto xs = range.elements();
    for (const auto& a : xs) {
      Mat ta = rep.pi(T(a)) * proj;
      out.range_mult = std::max(out.range_mult, detail::op_norm(rep.pi(T(adjoint(a))) * proj - ta.adjoint()));
      for (const auto& b : xs)
        out.range_mult = std::max(out.range_mult,
                                   detail::op_norm(ta * rep.pi(T(b)) * proj - rep.pi(T(a * b)) * proj));
    }
    // isometry on random elements of the range
    std::mt19937_64 rng(61);
    for (int t = 0; t < 8 && range.dim() > 0; ++t) {
      Element a = Element::from_coords(alg, range.basis_matrix() * detail::random_matrix(range.dim(), 1, rng));
      double na = op_norm(a);
      out.range_iso = std::max(out.range_iso, detail::rel(std::abs(detail::op_norm(rep.pi(T(a)) * proj) - na), na));
    }
  };
  side(I.rangeH(), V, P);
  side(I.rangeV(), H, Q);
  for (int k = 0; k < alg.dim(); ++k) {
    Element a = Element::basis(alg, k);
    Element va = V(a), ha = H(a);
    out.compression_norm = std::max(out.compression_norm, detail::rel(std::abs(detail::op_norm(rep.pi(va) * P) - op_norm(va)), op_norm(va)));
    out.compression_norm = std::max(out.compression_norm, detail::rel(std::abs(detail::op_norm(rep.pi(ha) * Q) - op_norm(ha)), op_norm(ha)));
  }
  Element one = Element::unit(alg);
  const auto& bV = X.bcV();
  const auto& bH = X.bcH();
  out.unit_support = std::max({detail::op_norm(bV.lambda(V(one)) * bV.e() - bV.e()),
                          detail::op_norm(bH.lambda(H(one)) * bH.e() - bH.e()),
                          detail::op_norm(rep.pi(V(one)) * P - P), detail::op_norm(rep.pi(H(one)) * Q - Q)});
  return out;
}

struct RoundTripReport {
  double V = 0.0;  // max over the basis of |V'(a) - V(a)|
  double H = 0.0;
};

// Feed (M_N, pi(A), S) back into derive_from_partial_isometry.
inline RoundTripReport round_trip(const CovariantRep& rep) {
  const auto& alg = rep.algebra();
  AlgebraDescriptor B({rep.dim()});
  std::vector<Element> embed;
  for (const auto& p : rep.pi_basis) embed.push_back(Element::from_coords(B, detail::vec(Mat(p.transpose()))));
  Element S = Element::from_coords(B, detail::vec(Mat(rep.S.transpose())));
  auto d = derive_from_partial_isometry(B, alg, embed, S, rep.interaction.tol());
  RoundTripReport out;
  for (int k = 0; k < alg.dim(); ++k) {
    Element a = Element::basis(alg, k);
    out.V = std::max(out.V, op_norm(d.interaction.V()(a) - rep.interaction.V()(a)));
    out.H = std::max(out.H, op_norm(d.interaction.H()(a) - rep.interaction.H()(a)));
  }
  return out;
}

}  // namespace interact
