#pragma once
// The K_V - K_H Hilbert bimodule X obtained from the algebraic tensor product
// A (.) A by quotienting the null vectors of its inner products.
//
// A pre-quotient element x = sum_pq X(p,q) e_p (.) e_q is stored as the
// vector of its coefficients, index p*n + q. Classes live in C^r with the
// Hilbert structure phi(<x, y>_r), phi the normalized trace on K_H.

#include "basicc.hpp"

namespace interact {

struct TensorElt {
  Vec coords;
  Vec cls;
};

class BimoduleX {
 public:
  explicit BimoduleX(Interaction I)
      : I_(std::move(I)), bcV_(expectation_V(I_), I_.tol()), bcH_(expectation_H(I_), I_.tol()) {
    const auto& alg = I_.algebra();
    n_ = alg.dim();
    for (int k = 0; k < n_; ++k) basis_.push_back(Element::basis(alg, k));
    const auto& V = I_.V();
    const auto& H = I_.H();
    for (int q = 0; q < n_; ++q)
      for (int l = 0; l < n_; ++l) {
        v_star_.push_back(V(basis_[q] * adjoint(basis_[l])));
        v_prod_.push_back(V(basis_[q] * basis_[l]));
        MH_.push_back(bcH_.lambda(H(adjoint(basis_[q]) * basis_[l])) * bcH_.e());
        MV_.push_back(bcV_.lambda(v_star_.back()) * bcV_.e());
      }
    GA_ = Mat::Zero(n_ * n_, n_ * n_);
    GB_ = Mat::Zero(n_ * n_, n_ * n_);
    for (int p = 0; p < n_; ++p)
      for (int q = 0; q < n_; ++q)
        for (int l = 0; l < n_; ++l) {
          GA_.block(n_ * l, p * n_ + q, n_, 1) = (basis_[p] * v_star_[q * n_ + l]).coords();
          Element h = H(adjoint(basis_[l]) * basis_[p]);
          GB_.block(n_ * l, p * n_ + q, n_, 1) = (h * basis_[q]).coords();
        }
    gram_r_ = gram(true);
    gram_l_ = gram(false);
    double top = std::max(1.0, gram_r_.cwiseAbs().maxCoeff());
    double lo = std::min(detail::min_eigenvalue(gram_r_), detail::min_eigenvalue(gram_l_));
    if (lo < -I_.tol().eps * top) throw NumericalError("inner product Gram form is not positive");
    Eigen::VectorXd spec;
    detail::quotient(gram_r_, I_.tol(), r_, Q_, Qplus_, spec, gap_);
  }

  const Interaction& interaction() const { return I_; }
  const AlgebraDescriptor& algebra() const { return I_.algebra(); }
  const BasicConstruction& bcV() const { return bcV_; }
  const BasicConstruction& bcH() const { return bcH_; }
  int amb_dim() const { return n_ * n_; }
  int r() const { return r_; }
  const Mat& quotient_map() const { return Q_; }
  const Mat& lift_map() const { return Qplus_; }
  const Mat& gram_r() const { return gram_r_; }
  const Mat& gram_l() const { return gram_l_; }
  double spectral_gap() const { return gap_; }

  TensorElt make(Vec coords) const {
    if (coords.size() != amb_dim()) throw DescriptorMismatch("tensor coordinates have wrong length");
    Vec c = Q_ * coords;
    return {std::move(coords), std::move(c)};
  }
  TensorElt elementary(const Element& a, const Element& b) const {
    Vec ca = a.coords(), cb = b.coords();
    Vec v(amb_dim());
    for (int p = 0; p < n_; ++p)
      for (int q = 0; q < n_; ++q) v(p * n_ + q) = ca(p) * cb(q);
    return make(std::move(v));
  }
  TensorElt sum(const std::vector<std::pair<Element, Element>>& terms) const {
    Vec v = Vec::Zero(amb_dim());
    for (const auto& [a, b] : terms) v += elementary(a, b).coords;
    return make(std::move(v));
  }
  // canonical representative of a class
  TensorElt lift(const Vec& cls) const { return make(Qplus_ * cls); }
  TensorElt random(std::mt19937_64& rng) const { return make(detail::random_matrix(amb_dim(), 1, rng)); }
  TensorElt zero() const { return make(Vec::Zero(amb_dim())); }

  Mat inner_r(const TensorElt& x, const TensorElt& y) const {
    const int m = bcH_.m();
    std::vector<Mat> Rx = rows(x, bcH_), Ry = rows(y, bcH_);
    Mat out = Mat::Zero(m, m);
    for (int p = 0; p < n_; ++p) {
      if (Rx[p].isZero(0.0)) continue;
      Mat acc = Mat::Zero(m, m);
      for (int k = 0; k < n_; ++k)
        if (!Ry[k].isZero(0.0)) acc += MH_[p * n_ + k] * Ry[k];
      out += Rx[p].adjoint() * acc;
    }
    return out;
  }

  Mat inner_l(const TensorElt& x, const TensorElt& y) const {
    const int m = bcV_.m();
    std::vector<Mat> Px = cols(x), Py = cols(y);
    Mat out = Mat::Zero(m, m);
    for (int q = 0; q < n_; ++q) {
      if (Px[q].isZero(0.0)) continue;
      Mat acc = Mat::Zero(m, m);
      for (int l = 0; l < n_; ++l)
        if (!Py[l].isZero(0.0)) acc += MV_[q * n_ + l] * Py[l].adjoint();
      out += Px[q] * acc;
    }
    return out;
  }

  double norm(const TensorElt& x) const { return std::sqrt(detail::op_norm(inner_r(x, x))); }
  double norm_l(const TensorElt& x) const { return std::sqrt(detail::op_norm(inner_l(x, x))); }
  // norm of the class, computed on its canonical representative
  double class_norm(const Vec& cls) const { return norm(lift(cls)); }

  // x . (sum_ij c(i,j) e_i e_H e_j)
  TensorElt right_act_coeffs(const TensorElt& x, const Mat& c) const {
    auto xs = column_elements(x);
    Mat Y = Mat::Zero(n_, n_);
    for (int i = 0; i < n_; ++i) {
      if (c.row(i).isZero(0.0)) continue;
      Element Z = Element::zero(algebra());
      for (int q = 0; q < n_; ++q)
        if (!xs[q].second) Z += xs[q].first * v_prod_[q * n_ + i];
      Vec z = Z.coords();
      for (int j = 0; j < n_; ++j)
        if (c(i, j) != cplx(0.0)) Y.col(j) += c(i, j) * z;
    }
    return make(flatten(Y));
  }
  TensorElt right_act(const TensorElt& x, const Mat& k) const {
    return right_act_coeffs(x, bcH_.express_in_spanning(k).c);
  }
  // R_{a,b}(x (.) y) = x V(y a) (.) b
  TensorElt R(const Element& a, const Element& b, const TensorElt& x) const {
    auto xs = column_elements(x);
    Element Z = Element::zero(algebra());
    for (int q = 0; q < n_; ++q)
      if (!xs[q].second) Z += xs[q].first * I_.V()(basis_[q] * a);
    return elementary(Z, b);
  }

  // (sum_ij c(i,j) e_i e_V e_j) . x
  TensorElt left_act_coeffs(const Mat& c, const TensorElt& x) const {
    auto xs = column_elements(x);
    const auto& H = I_.H();
    Mat Y = Mat::Zero(n_, n_);
    for (int j = 0; j < n_; ++j) {
      if (c.col(j).isZero(0.0)) continue;
      Element W = Element::zero(algebra());
      for (int q = 0; q < n_; ++q)
        if (!xs[q].second) W += H(basis_[j] * xs[q].first) * basis_[q];
      Vec w = W.coords();
      for (int i = 0; i < n_; ++i)
        if (c(i, j) != cplx(0.0)) Y.row(i) += c(i, j) * w.transpose();
    }
    return make(flatten(Y));
  }
  TensorElt left_act(const Mat& k, const TensorElt& x) const {
    return left_act_coeffs(bcV_.express_in_spanning(k).c, x);
  }

  // [u (.) v, x (.) y, z (.) w] = u V(v y*) (.) H(x* z) w. With U, X, Z the
  // coefficient matrices, the result is A B^T where column l of A is
  // sum_pq U(p,q) e_p V(e_q e_l*) and B = C conj(X), column k of C being
  // sum_st Z(s,t) H(e_k* e_s) e_t.
  TensorElt ternary(const TensorElt& xi, const TensorElt& eta, const TensorElt& zeta) const {
    return ternary(ternary_outer(xi), eta, ternary_inner(zeta));
  }
  // the factors A (from xi) and C (from zeta), for sweeps that reuse them
  Mat ternary_outer(const TensorElt& xi) const { return detail::unvec(GA_ * xi.coords, n_, n_); }
  Mat ternary_inner(const TensorElt& zeta) const { return detail::unvec(GB_ * zeta.coords, n_, n_); }
  TensorElt ternary(const Mat& A, const TensorElt& eta, const Mat& C) const {
    Mat Y = A * (C * coeff_matrix(eta).conjugate()).transpose();
    return make(flatten(Y));
  }

  TensorElt act_left(const Element& a, const TensorElt& x) const {
    return make(flatten(left_mult_matrix(a) * coeff_matrix(x)));
  }
  TensorElt act_right(const TensorElt& x, const Element& a) const {
    // x (.) e_q a = x (.) sum_s (e_q a)_s e_s
    Mat M(n_, n_);
    for (int q = 0; q < n_; ++q) M.row(q) = (basis_[q] * a).coords().transpose();
    return make(flatten(coeff_matrix(x) * M));
  }

  // Operators on C^r induced by the module actions.
  Mat right_op(const Mat& k) const {
    Mat c = bcH_.express_in_spanning(k).c;
    Mat out(r_, r_);
    for (int j = 0; j < r_; ++j) out.col(j) = right_act_coeffs(lift(Vec::Unit(r_, j)), c).cls;
    return out;
  }
  Mat left_op(const Mat& k) const {
    Mat c = bcV_.express_in_spanning(k).c;
    Mat out(r_, r_);
    for (int j = 0; j < r_; ++j) out.col(j) = left_act_coeffs(c, lift(Vec::Unit(r_, j))).cls;
    return out;
  }
  Mat a_left_op(const Element& a) const {
    Mat out(r_, r_);
    for (int j = 0; j < r_; ++j) out.col(j) = act_left(a, lift(Vec::Unit(r_, j))).cls;
    return out;
  }
  Mat a_right_op(const Element& a) const {
    Mat out(r_, r_);
    for (int j = 0; j < r_; ++j) out.col(j) = act_right(lift(Vec::Unit(r_, j)), a).cls;
    return out;
  }
  std::vector<TensorElt> class_basis() const {
    std::vector<TensorElt> b;
    for (int j = 0; j < r_; ++j) b.push_back(lift(Vec::Unit(r_, j)));
    return b;
  }

  Mat coeff_matrix(const TensorElt& x) const {
    Mat X(n_, n_);
    for (int p = 0; p < n_; ++p)
      for (int q = 0; q < n_; ++q) X(p, q) = x.coords(p * n_ + q);
    return X;
  }

 private:
  Vec flatten(const Mat& Y) const {
    Vec v(amb_dim());
    for (int p = 0; p < n_; ++p)
      for (int q = 0; q < n_; ++q) v(p * n_ + q) = Y(p, q);
    return v;
  }
  // x = sum_q x_q (.) e_q; the flag marks x_q = 0
  std::vector<std::pair<Element, bool>> column_elements(const TensorElt& x) const {
    Mat X = coeff_matrix(x);
    std::vector<std::pair<Element, bool>> out;
    for (int q = 0; q < n_; ++q)
      out.emplace_back(Element::from_coords(algebra(), X.col(q)), X.col(q).isZero(0.0));
    return out;
  }
  // sum_q X(p,q) lambda_H(e_q), one per p
  std::vector<Mat> rows(const TensorElt& x, const BasicConstruction& bc) const {
    std::vector<Mat> out;
    for (int p = 0; p < n_; ++p) {
      Mat acc = Mat::Zero(bc.m(), bc.m());
      for (int q = 0; q < n_; ++q) {
        cplx c = x.coords(p * n_ + q);
        if (c != cplx(0.0)) acc += c * bc.lambda_basis(q);
      }
      out.push_back(std::move(acc));
    }
    return out;
  }
  // sum_p X(p,q) lambda_V(e_p), one per q
  std::vector<Mat> cols(const TensorElt& x) const {
    std::vector<Mat> out;
    for (int q = 0; q < n_; ++q) {
      Mat acc = Mat::Zero(bcV_.m(), bcV_.m());
      for (int p = 0; p < n_; ++p) {
        cplx c = x.coords(p * n_ + q);
        if (c != cplx(0.0)) acc += c * bcV_.lambda_basis(p);
      }
      out.push_back(std::move(acc));
    }
    return out;
  }

  // phi(<e_p (.) e_q, e_k (.) e_l>) over all index pairs
  Mat gram(bool right) const {
    const int N = amb_dim();
    Mat G = Mat::Zero(N, N);
    const BasicConstruction& bc = right ? bcH_ : bcV_;
    const int m = bc.m();
    if (m == 0) return G;
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) {
        // right: <e_a (.) e_q, e_b (.) e_l>_r = lambda_q* MH_ab lambda_l
        // left:  <e_k (.) e_a, e_l (.) e_b>_l = lambda_k MV_ab lambda_l*
        const Mat& T = right ? MH_[a * n_ + b] : MV_[a * n_ + b];
        if (T.isZero(0.0)) continue;
        std::vector<Mat> W;
        for (int l = 0; l < n_; ++l)
          W.push_back(right ? Mat(T * bc.lambda_basis(l)) : Mat(T * bc.lambda_basis(l).adjoint()));
        for (int q = 0; q < n_; ++q) {
          const Mat& lq = bc.lambda_basis(q);
          for (int l = 0; l < n_; ++l) {
            cplx v = right ? (lq.adjoint() * W[l]).trace() : (lq * W[l]).trace();
            if (right)
              G(a * n_ + q, b * n_ + l) = v / double(m);
            else  // stored transposed so that c* G c = phi(<c, c>_l)
              G(l * n_ + b, q * n_ + a) = v / double(m);
          }
        }
      }
    return G;
  }

  Interaction I_;
  BasicConstruction bcV_, bcH_;
  int n_ = 0;
  std::vector<Element> basis_;
  std::vector<Element> v_star_, v_prod_;  // V(e_q e_l*), V(e_q e_l)
  std::vector<Mat> MH_, MV_;
  Mat GA_, GB_;  // structure matrices of the ternary product
  Mat gram_r_, gram_l_;
  int r_ = 0;
  Mat Q_, Qplus_;
  double gap_ = 0.0;
};

inline BimoduleX build_X(const Interaction& I) { return BimoduleX(I); }

// Norm of x = sum_i a_i* (.) b_i by the two closed formulas with amplified maps.
inline std::pair<double, double> norm_two_ways(const Interaction& I,
                                               const std::vector<std::pair<Element, Element>>& terms) {
  const int N = static_cast<int>(terms.size());
  if (N == 0) return {0.0, 0.0};
  std::vector<std::vector<Element>> ga(N), gb(N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      ga[i].push_back(terms[i].first * adjoint(terms[j].first));
      gb[i].push_back(terms[i].second * adjoint(terms[j].second));
    }
  Element aa = from_grid(ga), bb = from_grid(gb);
  LinMap VN = amplify(I.V(), N), HN = amplify(I.H(), N);
  Tolerance t = I.tol();
  Element h_aa = HN(aa);
  double n1 = op_norm(sqrt_psd(h_aa, t) * sqrt_psd(HN(VN(bb)), t));
  double n2 = op_norm(sqrt_psd(VN(h_aa), t) * sqrt_psd(VN(bb), t));
  return {n1, n2};
}

// x = sum_i a_i* (.) b_i as a tensor element
inline TensorElt star_sum(const BimoduleX& X, const std::vector<std::pair<Element, Element>>& terms) {
  std::vector<std::pair<Element, Element>> t;
  for (const auto& [a, b] : terms) t.emplace_back(adjoint(a), b);
  return X.sum(t);
}

// ---------------------------------------------------------------------------
// Checks. Residuals of equalities between classes are Hilbert norms in C^r
// unless stated otherwise.

inline double class_distance(const TensorElt& x, const TensorElt& y) { return (x.cls - y.cls).norm(); }

// ac (.) b = a (.) H(c) b for c in V(A); a (.) cb = a V(c) (.) b for c in H(A)
inline double check_56(const BimoduleX& X) {
  const auto& I = X.interaction();
  const auto& alg = X.algebra();
  double worst = 0.0;
  for (int i = 0; i < alg.dim(); ++i) {
    Element a = Element::basis(alg, i);
    for (int j = 0; j < alg.dim(); ++j) {
      Element b = Element::basis(alg, j);
      for (const auto& c : I.rangeV().elements())
        worst = std::max(worst, class_distance(X.elementary(a * c, b), X.elementary(a, I.H()(c) * b)));
      for (const auto& c : I.rangeH().elements())
        worst = std::max(worst, class_distance(X.elementary(a, c * b), X.elementary(a * I.V()(c), b)));
    }
  }
  return worst;
}

struct PositivityReport {
  double min_r = 0.0, min_l = 0.0;  // smallest relative eigenvalue seen
};

inline PositivityReport check_positivity(const BimoduleX& X, int samples, std::mt19937_64& rng) {
  PositivityReport p{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (int s = 0; s < samples; ++s) {
    auto x = X.random(rng);
    Mat r = X.inner_r(x, x), l = X.inner_l(x, x);
    p.min_r = std::min(p.min_r, detail::min_eigenvalue(r) / std::max(1.0, detail::op_norm(r)));
    p.min_l = std::min(p.min_l, detail::min_eigenvalue(l) / std::max(1.0, detail::op_norm(l)));
  }
  return p;
}

struct CauchySchwarzReport {
  double min_r = 0.0, min_l = 0.0;  // smallest relative eigenvalue of the difference
};

inline CauchySchwarzReport check_cauchy_schwarz(const BimoduleX& X, int samples, std::mt19937_64& rng) {
  CauchySchwarzReport c{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (int s = 0; s < samples; ++s) {
    auto x = X.random(rng), y = X.random(rng);
    for (int side = 0; side < 2; ++side) {
      auto ip = [&](const TensorElt& u, const TensorElt& v) { return side ? X.inner_l(u, v) : X.inner_r(u, v); };
      Mat xx = ip(x, x), xy = ip(x, y), yx = ip(y, x);
      double nyy = detail::op_norm(ip(y, y));
      Mat d = xx * nyy - xy * yx;
      double scale = std::max(1.0, detail::op_norm(xx) * nyy);
      double v = detail::min_eigenvalue(d) / scale;
      (side ? c.min_l : c.min_r) = std::min(side ? c.min_l : c.min_r, v);
    }
  }
  return c;
}

struct SeminormReport {
  double null_space = 0.0;  // gram_l restricted to the null space of gram_r, and the reverse
  int rank_r = 0, rank_l = 0;
  double two_sided = 0.0;   // worst | |x|_r - |x|_l | / max(1, |x|)
  double closed_form = 0.0;  // worst relative disagreement of the three norms
};

inline SeminormReport check_seminorms(const BimoduleX& X, int samples, std::mt19937_64& rng, int terms = 3) {
  SeminormReport s;
  const double eps = X.interaction().tol().eps;
  Mat Nr = detail::null_space(X.gram_r(), eps), Nl = detail::null_space(X.gram_l(), eps);
  s.rank_r = X.amb_dim() - static_cast<int>(Nr.cols());
  s.rank_l = X.amb_dim() - static_cast<int>(Nl.cols());
  double gr = std::max(1.0, X.gram_r().norm()), gl = std::max(1.0, X.gram_l().norm());
  if (Nr.cols()) s.null_space = std::max(s.null_space, (X.gram_l() * Nr).norm() / gl);
  if (Nl.cols()) s.null_space = std::max(s.null_space, (X.gram_r() * Nl).norm() / gr);
  const auto& alg = X.algebra();
  for (int k = 0; k < samples; ++k) {
    std::vector<std::pair<Element, Element>> t;
    for (int i = 0; i < terms; ++i) {
      Element a = Element::random(alg, rng);
      Element b = Element::random(alg, rng);
      t.emplace_back(a, b);
    }
    auto x = star_sum(X, t);
    auto [n1, n2] = norm_two_ways(X.interaction(), t);
    double nr = X.class_norm(x.cls), nl = X.norm_l(X.lift(x.cls));
    double scale = std::max({1.0, n1, n2, nr});
    s.two_sided = std::max(s.two_sided, std::abs(nr - nl) / scale);
    s.closed_form = std::max({s.closed_form, std::abs(n1 - n2) / scale, std::abs(n1 - nr) / scale,
                              std::abs(n2 - nr) / scale});
  }
  return s;
}

// |<xi, sum_k R_{a_k*, b_k}(eta)>_r| <= |xi| |eta| |phi|, phi = sum_k a_k* e_H b_k
inline double check_59(const BimoduleX& X, int samples, std::mt19937_64& rng, int N = 3) {
  const auto& alg = X.algebra();
  const auto& bc = X.bcH();
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    auto xi = X.random(rng), eta = X.random(rng);
    Vec acc = Vec::Zero(X.amb_dim());
    Mat phi = Mat::Zero(bc.m(), bc.m());
    for (int k = 0; k < N; ++k) {
      Element a = Element::random(alg, rng);
      Element b = Element::random(alg, rng);
      acc += X.R(adjoint(a), b, eta).coords;
      phi += bc.lambda(adjoint(a)) * bc.e() * bc.lambda(b);
    }
    double lhs = detail::op_norm(X.inner_r(xi, X.make(acc)));
    double rhs = X.norm(xi) * X.norm(eta) * detail::op_norm(phi);
    double ratio = lhs <= 1e-13 ? 0.0 : lhs / rhs;
    worst = std::max(worst, ratio);
  }
  return worst;
}

// |eta phi| <= |phi| |eta| for phi in K_H
inline double check_module_bound(const BimoduleX& X, int samples, std::mt19937_64& rng) {
  const auto& bc = X.bcH();
  double worst = 0.0;
  for (int s = 0; s < samples && bc.dimK() > 0; ++s) {
    auto eta = X.random(rng);
    Mat phi = detail::unvec(bc.K_basis() * detail::random_matrix(bc.dimK(), 1, rng), bc.m(), bc.m());
    double lhs = X.class_norm(X.right_act(eta, phi).cls);
    double rhs = X.class_norm(eta.cls) * detail::op_norm(phi);
    worst = std::max(worst, lhs <= 1e-13 ? 0.0 : lhs / rhs);
  }
  return worst;
}

struct ModuleLawReport {
  double associativity = 0.0;  // (eta phi) psi = eta (phi psi)
  double inner = 0.0;          // <xi, eta phi>_r = <xi, eta>_r phi
  double presentation = 0.0;   // right action independent of the chosen presentation
  double quotient = 0.0;       // <n, y>_r = 0 for null vectors n
};

// Right module laws swept over a basis of K_H and a basis of X.
inline ModuleLawReport check_module_laws(const BimoduleX& X) {
  ModuleLawReport r;
  const auto& bc = X.bcH();
  const int d = bc.dimK();
  std::vector<Mat> K, R;
  for (int t = 0; t < d; ++t) {
    K.push_back(bc.K_element(t));
    R.push_back(X.right_op(K.back()));
  }
  for (int s = 0; s < d; ++s)
    for (int t = 0; t < d; ++t)
      r.associativity = std::max(r.associativity, detail::op_norm(R[t] * R[s] - X.right_op(K[s] * K[t])));
  auto xs = X.class_basis();
  for (const auto& xi : xs)
    for (const auto& eta : xs) {
      Mat ip = X.inner_r(xi, eta);
      for (int t = 0; t < d; ++t) {
        auto ep = X.lift(R[t] * eta.cls);
        r.inner = std::max(r.inner, detail::op_norm(X.inner_r(xi, ep) - ip * K[t]));
      }
    }
  // another presentation of the same phi: add a kernel vector of the spanning map
  const int n = X.algebra().dim();
  Mat span(bc.m() * bc.m(), n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      span.col(i * n + j) = detail::vec(bc.lambda_basis(i) * bc.e() * bc.lambda_basis(j));
  Mat ker = detail::null_space(span, 1e-12);
  for (int t = 0; t < d && ker.cols() > 0; ++t) {
    Mat c0 = bc.express_in_spanning(K[t]).c;
    Vec z = ker.rowwise().sum() / std::sqrt(double(ker.cols()));
    Mat c1 = c0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c1(i, j) += z(i * n + j);
    for (const auto& eta : xs)
      r.presentation = std::max(r.presentation, class_distance(X.right_act_coeffs(eta, c0), X.right_act_coeffs(eta, c1)));
  }
  Mat Nr = detail::null_space(X.gram_r(), X.interaction().tol().eps);
  for (int j = 0; j < Nr.cols(); ++j) {
    auto nv = X.make(Nr.col(j));
    for (const auto& y : xs) r.quotient = std::max(r.quotient, detail::op_norm(X.inner_r(nv, y)));
    for (const auto& y : xs) r.quotient = std::max(r.quotient, detail::op_norm(X.inner_l(nv, y)));
  }
  return r;
}

struct TernaryReport {
  double compatibility = 0.0;  // <xi,eta>_l zeta = xi <eta,zeta>_r
  double ternary_right = 0.0;  // [xi,eta,zeta] = xi <eta,zeta>_r
  double ternary_left = 0.0;   // [xi,eta,zeta] = <xi,eta>_l zeta
};

inline TernaryReport check_ternary(const BimoduleX& X) {
  TernaryReport t;
  auto xs = X.class_basis();
  for (const auto& xi : xs)
    for (const auto& eta : xs) {
      Mat lop = X.left_op(X.inner_l(xi, eta));
      for (const auto& zeta : xs) {
        auto right = X.right_act(xi, X.inner_r(eta, zeta));
        Vec left = lop * zeta.cls;
        auto tern = X.ternary(xi, eta, zeta);
        t.compatibility = std::max(t.compatibility, (left - right.cls).norm());
        t.ternary_right = std::max(t.ternary_right, class_distance(tern, right));
        t.ternary_left = std::max(t.ternary_left, (tern.cls - left).norm());
      }
    }
  return t;
}

struct SlidingReport {
  double left = 0.0;   // [xi, a eta, zeta] = [xi, eta, a* zeta]
  double right = 0.0;  // [xi, eta a, zeta] = [xi a*, eta, zeta]
  double unit = 0.0;   // 1 x = x = x 1
  double assoc = 0.0;  // (a x) b = a (x b)
};

inline SlidingReport check_sliding(const BimoduleX& X) {
  SlidingReport s;
  const auto& alg = X.algebra();
  auto xs = X.class_basis();
  std::vector<Mat> outer, inner;
  for (const auto& x : xs) {
    outer.push_back(X.ternary_outer(x));
    inner.push_back(X.ternary_inner(x));
  }
  Element one = Element::unit(alg);
  for (int k = 0; k < alg.dim(); ++k) {
    Element a = Element::basis(alg, k);
    Element as = adjoint(a);
    std::vector<TensorElt> a_eta, eta_a;
    std::vector<Mat> inner_as, outer_as;
    for (const auto& x : xs) {
      a_eta.push_back(X.act_left(a, x));
      eta_a.push_back(X.act_right(x, a));
      inner_as.push_back(X.ternary_inner(X.act_left(as, x)));
      outer_as.push_back(X.ternary_outer(X.act_right(x, as)));
    }
    const int r = static_cast<int>(xs.size());
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j)
        for (int m = 0; m < r; ++m) {
          s.left = std::max(s.left, class_distance(X.ternary(outer[i], a_eta[j], inner[m]),
                                                   X.ternary(outer[i], xs[j], inner_as[m])));
          s.right = std::max(s.right, class_distance(X.ternary(outer[i], eta_a[j], inner[m]),
                                                     X.ternary(outer_as[i], xs[j], inner[m])));
        }
    for (int l = 0; l < alg.dim(); ++l) {
      Element b = Element::basis(alg, l);
      for (const auto& x : xs)
        s.assoc = std::max(s.assoc, class_distance(X.act_right(X.act_left(a, x), b), X.act_left(a, X.act_right(x, b))));
    }
  }
  for (const auto& x : xs) {
    s.unit = std::max(s.unit, class_distance(X.act_left(one, x), x));
    s.unit = std::max(s.unit, class_distance(X.act_right(x, one), x));
  }
  return s;
}

struct FullnessReport {
  int span_r = 0, dimK_H = 0;
  int span_l = 0, dimK_V = 0;
  BasicResiduals basic_V, basic_H;
};

inline FullnessReport check_fullness(const BimoduleX& X) {
  FullnessReport f;
  auto xs = X.class_basis();
  const int mH = X.bcH().m(), mV = X.bcV().m();
  Mat sr(mH * mH, xs.size() * xs.size()), sl(mV * mV, xs.size() * xs.size());
  int c = 0;
  for (const auto& x : xs)
    for (const auto& y : xs) {
      sr.col(c) = detail::vec(X.inner_r(x, y));
      sl.col(c) = detail::vec(X.inner_l(x, y));
      ++c;
    }
  const double eps = X.interaction().tol().eps;
  f.span_r = static_cast<int>(detail::column_basis(sr, eps).cols());
  f.span_l = static_cast<int>(detail::column_basis(sl, eps).cols());
  f.dimK_H = X.bcH().dimK();
  f.dimK_V = X.bcV().dimK();
  f.basic_V = check_basic(X.bcV());
  f.basic_H = check_basic(X.bcH());
  return f;
}

}  // namespace interact
