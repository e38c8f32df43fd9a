#pragma once
// Ternary rings of operators and generalized correspondences over A, in two
// models: a concrete subspace Y of an algebra B with [x, y, z] = x y* z, and
// the quotient classes of BimoduleX. Both expose orthonormal coordinates, so
// operator adjoints are conjugate transposes.

#include <concepts>

#include "bimodule.hpp"

namespace interact {

template <class T>
concept TroModel = requires(const T& t, const Vec& x, const Element& a) {
  { t.dim() } -> std::convertible_to<int>;
  { t.ternary(x, x, x) } -> std::convertible_to<Vec>;
  { t.norm(x) } -> std::convertible_to<double>;
  { t.coefficients() } -> std::convertible_to<AlgebraDescriptor>;
  { t.lam(a) } -> std::convertible_to<Mat>;
  { t.rho(a) } -> std::convertible_to<Mat>;
  { t.tol() } -> std::convertible_to<Tolerance>;
};

class ConcreteTRO {
 public:
  // `embed[k]` is the image in B of the k-th canonical basis element of A.
  ConcreteTRO(AlgebraDescriptor B, const std::vector<Element>& spanning, AlgebraDescriptor A,
              std::vector<Element> embed, Tolerance tol = {})
      : B_(std::move(B)), A_(std::move(A)), embed_(std::move(embed)), tol_(tol) {
    if (static_cast<int>(embed_.size()) != A_.dim())
      throw DescriptorMismatch("embedding must list one image per basis element of A");
    for (const auto& e : embed_)
      if (!(e.algebra() == B_)) throw DescriptorMismatch("embedding image outside B");
    Y_ = spanning.empty() ? Subspace(B_, Mat(B_.dim(), 0)) : Subspace::span(spanning, tol);
    auto ys = Y_.elements();
    for (const auto& x : ys)
      for (const auto& y : ys)
        for (const auto& z : ys)
          if (!membership(x * adjoint(y) * z, Y_, tol).member) throw NumericalError("span is not closed under x y* z");
    for (const auto& e : embed_)
      for (const auto& y : ys)
        if (!membership(e * y, Y_, tol).member || !membership(y * e, Y_, tol).member)
          throw NumericalError("span is not an A-A-bimodule");
  }

  int dim() const { return Y_.dim(); }
  const AlgebraDescriptor& coefficients() const { return A_; }
  const AlgebraDescriptor& ambient() const { return B_; }
  const Subspace& space() const { return Y_; }
  Tolerance tol() const { return tol_; }

  Element element(const Vec& x) const { return Element::from_coords(B_, Y_.basis_matrix() * x); }
  Vec coords(const Element& y) const { return Y_.basis_matrix().adjoint() * y.coords(); }
  Element iota(const Element& a) const {
    Element out = Element::zero(B_);
    Vec c = a.coords();
    for (int k = 0; k < c.size(); ++k)
      if (c(k) != cplx(0.0)) out += c(k) * embed_[k];
    return out;
  }

  Vec ternary(const Vec& x, const Vec& y, const Vec& z) const {
    return coords(element(x) * adjoint(element(y)) * element(z));
  }
  double norm(const Vec& x) const { return op_norm(element(x)); }
  Mat lam(const Element& a) const {
    Element ia = iota(a);
    return on_basis([&](const Element& y) { return ia * y; });
  }
  Mat rho(const Element& a) const {
    Element ia = iota(a);
    return on_basis([&](const Element& y) { return y * ia; });
  }

 private:
  template <class F>
  Mat on_basis(F f) const {
    Mat out(dim(), dim());
    for (int j = 0; j < dim(); ++j) out.col(j) = coords(f(Y_.element(j)));
    return out;
  }

  AlgebraDescriptor B_, A_;
  std::vector<Element> embed_;
  Tolerance tol_;
  Subspace Y_;
};

// BimoduleX seen through its class coordinates.
class AbstractTRO {
 public:
  explicit AbstractTRO(const BimoduleX& X) : X_(&X) {}
  int dim() const { return X_->r(); }
  const AlgebraDescriptor& coefficients() const { return X_->algebra(); }
  Tolerance tol() const { return X_->interaction().tol(); }
  const BimoduleX& bimodule() const { return *X_; }
  Vec ternary(const Vec& x, const Vec& y, const Vec& z) const {
    return X_->ternary(X_->lift(x), X_->lift(y), X_->lift(z)).cls;
  }
  double norm(const Vec& x) const { return X_->class_norm(x); }
  Mat lam(const Element& a) const { return X_->a_left_op(a); }
  Mat rho(const Element& a) const { return X_->a_right_op(a); }

 private:
  const BimoduleX* X_;
};

// theta^l_{xi,eta}: x -> [xi, eta, x] and theta^r_{xi,eta}: x -> [x, xi, eta]
template <TroModel T>
Mat theta_left(const T& t, const Vec& xi, const Vec& eta) {
  const int d = t.dim();
  Mat out(d, d);
  for (int j = 0; j < d; ++j) out.col(j) = t.ternary(xi, eta, Vec::Unit(d, j));
  return out;
}

template <TroModel T>
Mat theta_right(const T& t, const Vec& xi, const Vec& eta) {
  const int d = t.dim();
  Mat out(d, d);
  for (int j = 0; j < d; ++j) out.col(j) = t.ternary(Vec::Unit(d, j), xi, eta);
  return out;
}

struct CompactSpans {
  Mat left;   // columns: vec of an orthonormal basis of span theta^l
  Mat right;  // same for theta^r
  int dim_left() const { return static_cast<int>(left.cols()); }
  int dim_right() const { return static_cast<int>(right.cols()); }
};

// tt[i * d + j] has columns [e_i, e_j, e_m]. The ternary product is linear in
// its outer arguments and conjugate linear in the middle one, so these d^3
// values determine it.
template <TroModel T>
std::vector<Mat> ternary_tensor(const T& t) {
  const int d = t.dim();
  std::vector<Mat> tt;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) tt.push_back(theta_left(t, Vec::Unit(d, i), Vec::Unit(d, j)));
  return tt;
}

namespace detail {

// theta^r_{e_i, e_j} from the ternary tensor
inline Mat theta_right_basis(const std::vector<Mat>& tt, int d, int i, int j) {
  Mat out(d, d);
  for (int m = 0; m < d; ++m) out.col(m) = tt[m * d + i].col(j);
  return out;
}

inline CompactSpans compact_spans(const std::vector<Mat>& tt, int d, Tolerance tol) {
  if (d == 0) return {Mat(0, 0), Mat(0, 0)};
  Mat L(d * d, d * d), R(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      L.col(i * d + j) = vec(tt[i * d + j]);
      R.col(i * d + j) = vec(theta_right_basis(tt, d, i, j));
    }
  return {column_basis(L, tol.eps), column_basis(R, tol.eps)};
}

}  // namespace detail

template <TroModel T>
CompactSpans compact_spans(const T& t) {
  return detail::compact_spans(ternary_tensor(t), t.dim(), t.tol());
}

struct CorrespondenceReport {
  double law_left = 0.0;    // [xi, a eta, zeta] = [xi, eta, a* zeta]
  double law_right = 0.0;   // [xi, eta a, zeta] = [xi a*, eta, zeta]
  double lam_hom = 0.0;     // lam multiplicative and *-preserving
  double rho_antihom = 0.0; // rho(ab) = rho(b) rho(a), rho(a*) = rho(a)*
  double worst() const { return std::max({law_left, law_right, lam_hom, rho_antihom}); }
};

template <TroModel T>
CorrespondenceReport check_correspondence(const T& t) {
  CorrespondenceReport out;
  const int d = t.dim();
  const auto& A = t.coefficients();
  const auto tt = ternary_tensor(t);
  std::vector<Mat> lams, rhos;
  for (int k = 0; k < A.dim(); ++k) {
    Element a = Element::basis(A, k);
    lams.push_back(t.lam(a));
    rhos.push_back(t.rho(a));
  }
  for (int k = 0; k < A.dim(); ++k) {
    Element a = Element::basis(A, k);
    Mat la = lams[k], ra = rhos[k], las = t.lam(adjoint(a)), ras = t.rho(adjoint(a));
    out.lam_hom = std::max(out.lam_hom, detail::op_norm(las - la.adjoint()));
    out.rho_antihom = std::max(out.rho_antihom, detail::op_norm(ras - ra.adjoint()));
    for (int l = 0; l < A.dim(); ++l) {
      Element b = Element::basis(A, l);
      out.lam_hom = std::max(out.lam_hom, detail::op_norm(t.lam(a * b) - la * lams[l]));
      out.rho_antihom = std::max(out.rho_antihom, detail::op_norm(t.rho(a * b) - rhos[l] * ra));
    }
    // columns m of [e_i, y, e_m] for y = lam(a) e_j, rho(a) e_j, and of
    // [e_i, e_j, lam(a*) e_m], [rho(a*) e_i, e_j, e_m]
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Mat l1 = Mat::Zero(d, d), r1 = Mat::Zero(d, d), r2 = Mat::Zero(d, d);
        for (int k2 = 0; k2 < d; ++k2) {
          l1 += std::conj(la(k2, j)) * tt[i * d + k2];
          r1 += std::conj(ra(k2, j)) * tt[i * d + k2];
          r2 += ras(k2, i) * tt[k2 * d + j];
        }
        Mat l2 = tt[i * d + j] * las;
        out.law_left = std::max(out.law_left, (l1 - l2).colwise().norm().maxCoeff());
        out.law_right = std::max(out.law_right, (r1 - r2).colwise().norm().maxCoeff());
      }
  }
  return out;
}

struct CommutationReport {
  double theta = 0.0;       // theta^r against theta^l
  double actions = 0.0;     // lam(a) against rho(b)
  double adjoint_left = 0.0;   // (theta^l_{xi,eta})* = theta^l_{eta,xi}
  double adjoint_right = 0.0;
  double cube = 0.0;        // |[xi, xi, xi]| = |xi|^3
  double worst() const { return std::max({theta, actions, adjoint_left, adjoint_right, cube}); }
};

template <TroModel T>
CommutationReport check_commutation(const T& t) {
  CommutationReport out;
  const int d = t.dim();
  const auto tt = ternary_tensor(t);
  auto spans = detail::compact_spans(tt, d, t.tol());
  for (int i = 0; i < spans.dim_left(); ++i) {
    Mat l = detail::unvec(spans.left.col(i), d, d);
    for (int j = 0; j < spans.dim_right(); ++j) {
      Mat r = detail::unvec(spans.right.col(j), d, d);
      out.theta = std::max(out.theta, detail::op_norm(r * l - l * r));
    }
  }
  const auto& A = t.coefficients();
  for (int k = 0; k < A.dim(); ++k) {
    Mat la = t.lam(Element::basis(A, k));
    for (int l = 0; l < A.dim(); ++l) {
      Mat rb = t.rho(Element::basis(A, l));
      out.actions = std::max(out.actions, detail::op_norm(la * rb - rb * la));
    }
  }
  for (int i = 0; i < d; ++i) {
    Vec xi = Vec::Unit(d, i);
    for (int j = 0; j < d; ++j) {
      out.adjoint_left =
          std::max(out.adjoint_left, detail::op_norm(tt[i * d + j].adjoint() - tt[j * d + i]));
      out.adjoint_right =
          std::max(out.adjoint_right, detail::op_norm(detail::theta_right_basis(tt, d, i, j).adjoint() -
                                                      detail::theta_right_basis(tt, d, j, i)));
    }
    double n = t.norm(xi);
    out.cube = std::max(out.cube, detail::rel(std::abs(t.norm(t.ternary(xi, xi, xi)) - n * n * n), n * n * n));
  }
  return out;
}

enum class Side { left, right };

struct Redundancy {
  Element a;
  Mat k;
  Side side;
  double residual;
  bool in_annihilator;  // a lies in Ker(rho)^perp (Ker(lam)^perp on the left)
};

struct RedundancyReport {
  std::vector<Redundancy> all;      // basis of {a : rho(a) in span theta^r}
  std::vector<Redundancy> katsura;  // basis of the same set intersected with Ker^perp
  Subspace kernel;
  std::vector<int> kernel_blocks;
  std::vector<int> annihilator_blocks;
};

template <TroModel T>
RedundancyReport find_redundancies(const T& t, Side side) {
  const auto& A = t.coefficients();
  const int n = A.dim(), d = t.dim();
  const Tolerance tol = t.tol();
  auto spans = compact_spans(t);
  const Mat& K = side == Side::right ? spans.right : spans.left;
  auto op = [&](const Element& a) { return side == Side::right ? t.rho(a) : t.lam(a); };

  Mat R(d * d, n);
  for (int k = 0; k < n; ++k) R.col(k) = detail::vec(op(Element::basis(A, k)));
  Mat Pperp = Mat::Identity(d * d, d * d) - K * K.adjoint();

  RedundancyReport out;
  const double cut = tol.eps * std::max(1.0, R.norm());
  out.kernel = Subspace::span(A, detail::null_space_abs(R, cut), tol);
  for (int b = 0; b < A.block_count(); ++b) {
    double s = 0.0;
    for (int p = 0; p < A.block_size(b); ++p)
      for (int q = 0; q < A.block_size(b); ++q) s = std::max(s, R.col(A.index(b, p, q)).norm());
    (s <= tol.eps ? out.kernel_blocks : out.annihilator_blocks).push_back(b);
  }
  Mat ann = Mat::Zero(n, n);  // projection onto the annihilator blocks
  for (int b : out.annihilator_blocks)
    for (int p = 0; p < A.block_size(b); ++p)
      for (int q = 0; q < A.block_size(b); ++q) ann(A.index(b, p, q), A.index(b, p, q)) = 1.0;

  auto make = [&](const Mat& basis, bool restricted) {
    std::vector<Redundancy> v;
    Subspace s = Subspace::span(A, basis, tol);
    for (const auto& a : s.elements()) {
      Vec ra = detail::vec(op(a));
      Vec kv = K * (K.adjoint() * ra);
      double inside = (a.coords() - ann * a.coords()).norm();
      v.push_back({a, detail::unvec(kv, d, d), side, (ra - kv).norm(), restricted || inside <= tol.eps});
    }
    return v;
  };
  Mat red = detail::null_space_abs(Pperp * R, cut);
  out.all = make(red, false);
  // a = ann * c with Pperp R ann c = 0
  Mat onto_ann = detail::column_basis(ann, tol.eps);
  if (onto_ann.cols() > 0) {
    Mat c = detail::null_space_abs(Pperp * R * onto_ann, cut);
    if (c.cols() > 0) out.katsura = make(onto_ann * c, true);
  }
  return out;
}

struct ClassicalReport {
  double fit = 0.0;       // distance of <xi, eta>_r from lambda_H(A) e_H
  double residual = 0.0;  // |theta^r_{xi,eta} - rho(a)| with lambda_H(a) e_H = <xi, eta>_r
  bool applicable(Tolerance tol) const { return fit <= tol.eps; }
};

// Classical mode: right inner products land in the copy lambda_H(A) e_H of A,
// so theta^r_{xi,eta} should be right multiplication by that element.
inline ClassicalReport check_classical(const BimoduleX& X) {
  const auto& A = X.algebra();
  const auto& bc = X.bcH();
  const int n = A.dim(), d = X.r();
  Mat Lm(bc.m() * bc.m(), n);
  for (int k = 0; k < n; ++k) Lm.col(k) = detail::vec(Mat(bc.lambda_basis(k) * bc.e()));
  AbstractTRO t(X);
  ClassicalReport out;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Vec xi = Vec::Unit(d, i), eta = Vec::Unit(d, j);
      Vec k = detail::vec(X.inner_r(X.lift(xi), X.lift(eta)));
      Vec c = detail::lstsq(Lm, k);
      out.fit = std::max(out.fit, detail::rel((Lm * c - k).norm(), k.norm()));
      Element a = Element::from_coords(A, c);
      out.residual = std::max(out.residual, detail::op_norm(theta_right(t, xi, eta) - t.rho(a)));
    }
  return out;
}

struct CrossedProductReport {
  double density = 0.0;   // a (.) b ~ a alpha(b) (.) 1
  double isometry = 0.0;  // |a (.) 1| = |L(a* a)|^(1/2)
  double bimodule = 0.0;  // phi(m alpha(a)) = phi(m) a, phi(a m) = a phi(m)
  double ternary = 0.0;   // phi(x alpha(L(y* z))) = [phi(x), phi(y), phi(z)]
  double worst() const { return std::max({density, isometry, bimodule, ternary}); }
};

// phi(m) = class of m (.) 1 identifies A, with the (alpha, L) structure, with X.
inline CrossedProductReport check_713(const LinMap& alpha, const LinMap& L, const Interaction& I,
                                      const BimoduleX& X) {
  const double eps = I.tol().eps;
  if (detail::map_defect(alpha, I.V()) > eps || detail::map_defect(L, I.H()) > eps)
    throw std::invalid_argument("interaction is not (alpha, L)");
  if (!(X.algebra() == I.algebra())) throw DescriptorMismatch("bimodule built over another algebra");
  const auto& A = I.algebra();
  const int n = A.dim();
  Element one = Element::unit(A);
  auto phi = [&](const Element& m) { return X.elementary(m, one); };
  std::vector<Element> basis;
  for (int k = 0; k < n; ++k) basis.push_back(Element::basis(A, k));

  CrossedProductReport out;
  for (const auto& a : basis) {
    double want = std::sqrt(op_norm(L(adjoint(a) * a)));
    out.isometry = std::max(out.isometry, detail::rel(std::abs(X.norm(phi(a)) - want), want));
    for (const auto& b : basis) {
      out.density = std::max(out.density, class_distance(X.elementary(a, b), phi(a * alpha(b))));
      out.bimodule = std::max(out.bimodule, class_distance(phi(a * alpha(b)), X.act_right(phi(a), b)));
      out.bimodule = std::max(out.bimodule, class_distance(phi(b * a), X.act_left(b, phi(a))));
    }
  }
  for (const auto& x : basis)
    for (const auto& y : basis)
      for (const auto& z : basis)
        out.ternary = std::max(out.ternary, class_distance(phi(x * alpha(L(adjoint(y) * z))),
                                                           X.ternary(phi(x), phi(y), phi(z))));
  return out;
}

}  // namespace interact
