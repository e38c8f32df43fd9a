#pragma once
// Interactions (V, H): verification of the defining axioms, the associated
// conditional expectations, and a few ways of producing interactions.

#include "posmap.hpp"

#include <map>
#include <optional>
#include <sstream>

namespace interact {

// Short human-readable name of an element: "e12" for a matrix unit of a
// one-block algebra, "b2:e11" when there are several blocks, otherwise the
// coordinate vector.
inline std::string describe(const Element& x) {
  const auto& alg = x.algebra();
  Vec c = x.coords();
  int nz = -1;
  bool unit = true;
  for (int k = 0; k < c.size(); ++k) {
    if (std::abs(c(k)) < 1e-12) continue;
    if (nz >= 0 || std::abs(c(k) - cplx(1.0)) > 1e-12) {
      unit = false;
      break;
    }
    nz = k;
  }
  std::ostringstream os;
  if (unit && nz >= 0) {
    auto u = alg.unit_at(nz);
    if (alg.block_count() > 1) os << "b" << u.block + 1 << ":";
    os << "e" << u.p + 1 << u.q + 1;
    return os.str();
  }
  os << "(";
  for (int k = 0; k < c.size(); ++k) {
    if (k) os << ", ";
    double re = std::abs(c(k).real()) < 1e-12 ? 0.0 : c(k).real();
    double im = std::abs(c(k).imag()) < 1e-12 ? 0.0 : c(k).imag();
    os << re;
    if (im != 0.0) os << (im > 0 ? "+" : "") << im << "i";
  }
  os << ")";
  return os.str();
}

struct Witness {
  Element x, y;
  std::string text;
};

struct AxiomReport {
  std::map<std::string, double> residuals;
  std::map<std::string, Witness> witnesses;
  double choi_min_V = 0.0, choi_min_H = 0.0;
  bool pass = false;

  // first failing label in canonical order, or empty
  std::string first_failure(Tolerance tol) const {
    for (const char* k : {"3.1.i", "3.1.ii", "3.1.iii", "3.1.iv", "3.1.v", "2.4.i", "2.4.ii"}) {
      auto it = residuals.find(k);
      if (it != residuals.end() && !(it->second <= tol.eps)) return k;
    }
    return {};
  }
};

class InteractionRejected : public std::runtime_error {
 public:
  InteractionRejected(const std::string& what, std::optional<AxiomReport> report = std::nullopt)
      : std::runtime_error(what), report_(std::move(report)) {}
  const std::optional<AxiomReport>& report() const { return report_; }

 private:
  std::optional<AxiomReport> report_;
};

namespace detail {

// worst |V(g(x,y)) - V(x)V(y)| style residual; ties within 1e-12 go to the
// pair with the larger trace norm difference, then to the earliest pair.
struct WorstPair {
  double res = 0.0, frob = 0.0;
  std::optional<Witness> w;
  void offer(double r, double f, const Element& x, const Element& y) {
    bool better = r > res + 1e-12 || (std::abs(r - res) <= 1e-12 && f > frob + 1e-12);
    if (!better || r <= 1e-13) return;
    res = std::max(res, r);
    frob = f;
    w = Witness{x, y, "x=" + describe(x) + ", y=" + describe(y)};
  }
};

inline WorstPair multiplicativity(const LinMap& t, const Subspace& range) {
  const auto& alg = t.algebra();
  WorstPair wp;
  for (const auto& x : range.elements())
    for (int k = 0; k < alg.dim(); ++k) {
      Element y = Element::basis(alg, k);
      for (int order = 0; order < 2; ++order) {
        const Element& l = order ? y : x;
        const Element& r = order ? x : y;
        Element lhs = t(l * r), rhs = t(l) * t(r);
        Element d = lhs - rhs;
        double res = rel(op_norm(d), std::max(op_norm(lhs), op_norm(rhs)));
        wp.offer(res, frobenius_norm(d), l, r);
      }
    }
  return wp;
}

inline double map_defect(const LinMap& a, const LinMap& b) {
  const auto& alg = a.algebra();
  double worst = 0.0;
  for (int k = 0; k < alg.dim(); ++k) {
    Element e = Element::basis(alg, k);
    Element l = a(e), r = b(e);
    worst = std::max(worst, rel(op_norm(l - r), std::max(op_norm(l), op_norm(r))));
  }
  return worst;
}

}  // namespace detail

struct VerifyOptions {
  int positivity_trials = 32;
  std::uint64_t seed = 0;
};

inline AxiomReport verify_interaction(const LinMap& V, const LinMap& H, Tolerance tol = {},
                                      VerifyOptions opt = {}) {
  if (!(V.algebra() == H.algebra())) throw DescriptorMismatch();
  AxiomReport rep;
  auto pv = positivity_certificate(V, opt.positivity_trials, tol, opt.seed);
  auto ph = positivity_certificate(H, opt.positivity_trials, tol, opt.seed + 1);
  rep.residuals["3.1.i"] = std::max({pv.worst_residual, ph.worst_residual, star_defect(V), star_defect(H)});
  rep.choi_min_V = is_completely_positive(V, tol).min_eigenvalue;
  rep.choi_min_H = is_completely_positive(H, tol).min_eigenvalue;

  double vhv = detail::map_defect(compose(V, compose(H, V)), V);
  double hvh = detail::map_defect(compose(H, compose(V, H)), H);
  rep.residuals["3.1.ii"] = vhv;
  rep.residuals["3.1.iii"] = hvh;
  rep.residuals["2.4.i"] = vhv;
  rep.residuals["2.4.ii"] = hvh;

  Subspace rV = range_subspace(V, tol), rH = range_subspace(H, tol);
  auto iv = detail::multiplicativity(V, rH);
  auto v = detail::multiplicativity(H, rV);
  rep.residuals["3.1.iv"] = iv.res;
  rep.residuals["3.1.v"] = v.res;
  if (iv.w) rep.witnesses.emplace("3.1.iv", *iv.w);
  if (v.w) rep.witnesses.emplace("3.1.v", *v.w);

  rep.pass = rep.first_failure(tol).empty();
  return rep;
}

class Interaction {
 public:
  Interaction(LinMap V, LinMap H, Tolerance tol = {}, VerifyOptions opt = {})
      : V_(std::move(V)), H_(std::move(H)), tol_(tol) {
    report_ = verify_interaction(V_, H_, tol_, opt);
    if (!report_.pass)
      throw InteractionRejected("not an interaction: axiom " + report_.first_failure(tol_) + " fails",
                                report_);
    rangeV_ = range_subspace(V_, tol_);
    rangeH_ = range_subspace(H_, tol_);
  }

  const AlgebraDescriptor& algebra() const { return V_.algebra(); }
  const LinMap& V() const { return V_; }
  const LinMap& H() const { return H_; }
  Tolerance tol() const { return tol_; }
  const Subspace& rangeV() const { return rangeV_; }
  const Subspace& rangeH() const { return rangeH_; }
  const AxiomReport& report() const { return report_; }

 private:
  LinMap V_, H_;
  Tolerance tol_;
  Subspace rangeV_, rangeH_;
  AxiomReport report_;
};

struct CondExp {
  LinMap E;
  Subspace range;
};

struct CondExpResiduals {
  double idempotent = 0.0;
  double bimodule = 0.0;  // E(ab) = E(a)b and E(ba) = bE(a), b in range
  double range = 0.0;     // E(b) = b on the range
  double positivity = 0.0;
  double worst() const { return std::max({idempotent, bimodule, range, positivity}); }
};

inline CondExpResiduals check_conditional_expectation(const CondExp& c) {
  const auto& alg = c.E.algebra();
  CondExpResiduals r;
  r.idempotent = detail::map_defect(compose(c.E, c.E), c.E);
  auto rb = c.range.elements();
  for (const auto& b : rb) r.range = std::max(r.range, detail::rel(op_norm(c.E(b) - b), op_norm(b)));
  for (int k = 0; k < alg.dim(); ++k) {
    Element a = Element::basis(alg, k);
    Element ea = c.E(a);
    for (const auto& b : rb) {
      r.bimodule = std::max(r.bimodule, op_norm(c.E(a * b) - ea * b));
      r.bimodule = std::max(r.bimodule, op_norm(c.E(b * a) - b * ea));
    }
  }
  r.positivity = std::max(0.0, -is_completely_positive(c.E).min_eigenvalue);
  return r;
}

namespace detail {
inline CondExp checked(CondExp c, Tolerance tol) {
  auto r = check_conditional_expectation(c);
  if (!(r.worst() <= tol.eps))
    throw NumericalError("conditional expectation residual " + std::to_string(r.worst()) +
                         " exceeds tolerance");
  return c;
}
}  // namespace detail

inline CondExp expectation_V(const Interaction& I) {
  return detail::checked({compose(I.V(), I.H()), I.rangeV()}, I.tol());
}

inline CondExp expectation_H(const Interaction& I) {
  return detail::checked({compose(I.H(), I.V()), I.rangeH()}, I.tol());
}

struct InversePairReport {
  double h1v1 = 0.0;  // H(V(x)) = x on range H
  double v1h1 = 0.0;  // V(H(y)) = y on range V
  double v_factor = 0.0;  // V = V_1 E_H
  double h_factor = 0.0;  // H = H_1 E_V
  double v1_hom = 0.0;    // V_1, H_1 are *-homomorphisms on the ranges
  double h1_hom = 0.0;
  double worst() const { return std::max({h1v1, v1h1, v_factor, h_factor, v1_hom, h1_hom}); }
};

inline InversePairReport check_inverse_pair(const Interaction& I) {
  InversePairReport r;
  const auto& V = I.V();
  const auto& H = I.H();
  auto hom = [](const LinMap& t, const Subspace& s) {
    double w = 0.0;
    auto b = s.elements();
    for (const auto& x : b) {
      w = std::max(w, op_norm(t(adjoint(x)) - adjoint(t(x))));
      for (const auto& y : b) w = std::max(w, op_norm(t(x * y) - t(x) * t(y)));
    }
    return w;
  };
  for (const auto& x : I.rangeH().elements()) r.h1v1 = std::max(r.h1v1, op_norm(H(V(x)) - x));
  for (const auto& y : I.rangeV().elements()) r.v1h1 = std::max(r.v1h1, op_norm(V(H(y)) - y));
  r.v_factor = detail::map_defect(compose(V, compose(H, V)), V);
  r.h_factor = detail::map_defect(compose(H, compose(V, H)), H);
  r.v1_hom = hom(V, I.rangeH());
  r.h1_hom = hom(H, I.rangeV());
  return r;
}

inline Interaction amplified_interaction(const Interaction& I, int n) {
  try {
    return Interaction(amplify(I.V(), n), amplify(I.H(), n), I.tol());
  } catch (const InteractionRejected& e) {
    throw NumericalError(std::string("amplified interaction failed re-verification: ") + e.what());
  }
}

struct TransferReport {
  double alpha_mult = 0.0;
  double alpha_star = 0.0;
  double transfer = 0.0;
  double unital = 0.0;
  std::optional<Witness> transfer_witness;
};

inline TransferReport check_endo_transfer(const LinMap& alpha, const LinMap& L) {
  if (!(alpha.algebra() == L.algebra())) throw DescriptorMismatch();
  const auto& alg = alpha.algebra();
  TransferReport r;
  detail::WorstPair tw;
  for (int i = 0; i < alg.dim(); ++i) {
    Element x = Element::basis(alg, i);
    r.alpha_star = std::max(r.alpha_star, op_norm(alpha(adjoint(x)) - adjoint(alpha(x))));
    for (int j = 0; j < alg.dim(); ++j) {
      Element y = Element::basis(alg, j);
      r.alpha_mult = std::max(r.alpha_mult, op_norm(alpha(x * y) - alpha(x) * alpha(y)));
      Element d = L(x * alpha(y)) - L(x) * y;
      double res = op_norm(d);
      r.transfer = std::max(r.transfer, res);
      tw.offer(res, frobenius_norm(d), x, y);
    }
  }
  Element one = Element::unit(alg);
  r.unital = op_norm(L(one) - one);
  if (tw.w) r.transfer_witness = tw.w;
  return r;
}

// (V, H) = (alpha, L) for an endomorphism alpha with transfer operator L.
inline Interaction from_endo_transfer(const LinMap& alpha, const LinMap& L, Tolerance tol = {}) {
  auto r = check_endo_transfer(alpha, L);
  if (r.alpha_mult > tol.eps || r.alpha_star > tol.eps)
    throw InteractionRejected("alpha is not a *-homomorphism");
  if (r.transfer > tol.eps)
    throw InteractionRejected("transfer identity L(a alpha(b)) = L(a) b fails at " +
                              r.transfer_witness->text);
  if (r.unital > tol.eps) throw InteractionRejected("L(1) != 1");
  return Interaction(alpha, L, tol);
}

struct DerivedInteraction {
  Interaction interaction;
  AxiomReport report;
  double compression_residual = 0.0;  // how far S a S*, S* a S are from A SS*, A S*S
  double gate_V = 0.0;  // smallest singular value of x -> xS on C*(range V)
  double gate_H = 0.0;  // smallest singular value of x -> Sx on C*(range H)
};

namespace detail {

// Matrix (in B coordinates) of b -> b*p (right) or p*b (left).
inline Mat mult_matrix(const Element& p, bool right) {
  const auto& alg = p.algebra();
  if (!right) return left_mult_matrix(p);
  Mat R = Mat::Zero(alg.dim(), alg.dim());
  for (int i = 0; i < alg.block_count(); ++i) {
    int d = alg.block_size(i);
    // (e_rs p)_{rq} = p_{sq}
    for (int r = 0; r < d; ++r)
      for (int s = 0; s < d; ++s)
        for (int q = 0; q < d; ++q) R(alg.index(i, r, q), alg.index(i, r, s)) = p.block(i)(s, q);
  }
  return R;
}

}  // namespace detail

// Recover (V, H) from a partial isometry S in an ambient algebra B containing
// a copy of A. `embed[k]` is the image in B of the k-th canonical basis
// element of A. The equations b SS* = S a S* and c S*S = S* a S determine b
// and c only up to elements killed by SS* (resp. S*S); among the solutions we
// take the one whose corner (1-SS*) b (1-SS*) best matches that of a.
inline DerivedInteraction derive_from_partial_isometry(const AlgebraDescriptor& Bdesc,
                                                       const AlgebraDescriptor& Adesc,
                                                       const std::vector<Element>& embed,
                                                       const Element& S, Tolerance tol = {}) {
  if (static_cast<int>(embed.size()) != Adesc.dim())
    throw DescriptorMismatch("embedding must list one image per basis element of A");
  if (!(S.algebra() == Bdesc)) throw DescriptorMismatch("S does not live in B");
  const double sn = std::max(1.0, op_norm(S));
  if (op_norm(S * adjoint(S) * S - S) > tol.eps * sn)
    throw std::invalid_argument("S is not a partial isometry");

  Mat J(Bdesc.dim(), Adesc.dim());
  for (int k = 0; k < Adesc.dim(); ++k) {
    if (!(embed[k].algebra() == Bdesc)) throw DescriptorMismatch("embedding image outside B");
    J.col(k) = embed[k].coords();
  }
  auto iota = [&](const Vec& a) { return Element::from_coords(Bdesc, J * a); };
  Element one = Element::unit(Bdesc);

  double comp = 0.0;
  auto solve = [&](const Element& proj, bool forward) {
    Element co = one - proj;
    Mat RP = detail::mult_matrix(proj, true) * J;
    Mat RQ = detail::mult_matrix(co, true) * J;
    Mat N = detail::null_space(RP, 1e-12);
    Mat out(Adesc.dim(), Adesc.dim());
    for (int k = 0; k < Adesc.dim(); ++k) {
      Element a = iota(Vec::Unit(Adesc.dim(), k));
      Element target = forward ? S * a * adjoint(S) : adjoint(S) * a * S;
      Vec t = target.coords();
      Vec b0 = detail::lstsq(RP, t);
      comp = std::max(comp, detail::rel((RP * b0 - t).norm(), t.norm()));
      Vec b = b0;
      if (N.cols() > 0) {
        Vec want = (co * a * co).coords();
        Vec z = detail::lstsq(RQ * N, want - RQ * b0);
        b = b0 + N * z;
      }
      out.col(k) = b;
    }
    return out;
  };
  Mat Vm = solve(S * adjoint(S), true);
  Mat Hm = solve(adjoint(S) * S, false);
  if (!(comp <= tol.eps))
    throw InteractionRejected("compression of A by S leaves A (residual " + std::to_string(comp) + ")");
  LinMap V(Adesc, Vm), H(Adesc, Hm);

  auto gate = [&](const LinMap& t, bool right) {
    Subspace r = range_subspace(t, tol);
    if (r.dim() == 0) return std::numeric_limits<double>::infinity();
    Subspace c = generated_subalgebra(r.elements(), tol);
    Mat M(Bdesc.dim(), c.dim());
    for (int j = 0; j < c.dim(); ++j) {
      Element x = iota(c.basis_matrix().col(j));
      M.col(j) = (right ? x * S : S * x).coords();
    }
    return detail::min_singular(M);
  };
  double gV = gate(V, true), gH = gate(H, false);
  if (!(gV > tol.eps) || !(gH > tol.eps))
    throw InteractionRejected("degenerate partial isometry: x -> xS or x -> Sx is not injective");

  auto rep = verify_interaction(V, H, tol);
  if (!rep.pass)
    throw InteractionRejected("derived maps fail axiom " + rep.first_failure(tol), rep);
  return {Interaction(V, H, tol), rep, comp, gV, gH};
}

}  // namespace interact
