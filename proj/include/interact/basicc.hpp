#pragma once
// Reduced basic construction of a conditional expectation E: A -> B, realized
// on the GNS quotient of A for <a, b> = tau(E(a* b)), tau the normalized trace.

#include "interaction.hpp"

namespace interact {

struct GnsSpace {
  AlgebraDescriptor algebra;
  int m = 0;
  Mat coord;  // m x dim(A): canonical coordinates -> quotient coordinates
  Mat lift;   // dim(A) x m: right inverse of coord, orthogonal to the null space
  Eigen::VectorXd spectrum;  // Gram eigenvalues, descending
  double gap = 0.0;          // smallest kept / largest dropped eigenvalue

  Vec operator()(const Element& a) const { return coord * a.coords(); }
};

namespace detail {

// Quotient of a PSD Gram matrix: rows of the returned coordinate map are
// sqrt(lambda) u* for the eigenpairs kept above tol * lambda_max.
inline void quotient(const Mat& gram, Tolerance tol, int& m, Mat& coord, Mat& lift,
                     Eigen::VectorXd& spectrum, double& gap) {
  Mat h = 0.5 * (gram + gram.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Eigen::VectorXd ev = es.eigenvalues().reverse();
  Mat U = es.eigenvectors().rowwise().reverse();
  spectrum = ev;
  double top = ev.size() ? ev(0) : 0.0;
  double cut = tol.eps * top;
  m = 0;
  while (m < ev.size() && ev(m) > cut && top > 0.0) ++m;
  for (int k = 0; k < ev.size(); ++k)
    if (ev(k) > cut / 100.0 && ev(k) <= cut * 100.0)
      throw NumericalError("quotient ill-conditioned: Gram eigenvalue " + std::to_string(ev(k)) +
                           " lies near the rank threshold " + std::to_string(cut));
  double dropped = m < ev.size() ? std::max(std::abs(ev(m)), 1e-300) : 0.0;
  gap = m == 0 ? 0.0 : (dropped > 0.0 ? ev(m - 1) / dropped : std::numeric_limits<double>::infinity());
  Mat Uk = U.leftCols(m);
  fix_phases(Uk);
  Eigen::VectorXd s = ev.head(m).cwiseSqrt();
  coord = s.cast<cplx>().asDiagonal() * Uk.adjoint();
  lift = Uk * s.cwiseInverse().cast<cplx>().asDiagonal();
}

}  // namespace detail

class BasicConstruction {
 public:
  BasicConstruction(CondExp E, Tolerance tol = {}) : E_(std::move(E)), tol_(tol) {
    const auto& alg = E_.E.algebra();
    const int n = alg.dim();
    if (!(E_.range.algebra() == alg)) throw DescriptorMismatch();
    auto rb = E_.range.elements();
    for (const auto& x : rb)
      for (const auto& y : rb)
        if (!membership(x * y, E_.range, tol).member)
          throw NumericalError("range of E is not an algebra");

    const double tr1 = alg.trace_of_unit();
    Mat G(n, n);
    std::vector<Element> basis;
    for (int k = 0; k < n; ++k) basis.push_back(Element::basis(alg, k));
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) G(k, l) = trace(E_.E(adjoint(basis[k]) * basis[l])) / tr1;
    space_.algebra = alg;
    detail::quotient(G, tol, space_.m, space_.coord, space_.lift, space_.spectrum, space_.gap);
    const int m = space_.m;

    Mat P0 = Mat::Identity(n, n) - space_.lift * space_.coord;  // onto the null space
    well_defined_ = 0.0;
    for (int k = 0; k < n; ++k) {
      Mat L = left_mult_matrix(basis[k]);
      lambda_.push_back(space_.coord * L * space_.lift);
      well_defined_ = std::max(well_defined_, (space_.coord * L * P0).norm());
    }
    e_ = space_.coord * E_.E.matrix() * space_.lift;
    well_defined_ = std::max(well_defined_, (space_.coord * E_.E.matrix() * P0).norm());
    if (!(well_defined_ <= tol.eps * std::max(1.0, std::sqrt(double(n)))))
      throw NumericalError("left multiplication or E does not preserve the null space");

    span_ = Mat(m * m, n * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) span_.col(i * n + j) = detail::vec(lambda_[i] * e_ * lambda_[j]);
    K_ = detail::column_basis(span_, tol.eps);
    detail::fix_phases(K_);
    cod_.setThreshold(1e-12);
    cod_.compute(span_);
  }

  const CondExp& expectation() const { return E_; }
  const AlgebraDescriptor& algebra() const { return space_.algebra; }
  const GnsSpace& space() const { return space_; }
  int m() const { return space_.m; }
  const Mat& e() const { return e_; }
  const Mat& lambda_basis(int k) const { return lambda_[k]; }
  Mat lambda(const Element& a) const {
    Vec c = a.coords();
    Mat out = Mat::Zero(m(), m());
    for (int k = 0; k < c.size(); ++k)
      if (c(k) != cplx(0.0)) out += c(k) * lambda_[k];
    return out;
  }
  // columns: vec of an orthonormal (trace inner product) basis of K
  const Mat& K_basis() const { return K_; }
  int dimK() const { return static_cast<int>(K_.cols()); }
  Mat K_element(int t) const { return detail::unvec(K_.col(t), m(), m()); }
  double well_defined_residual() const { return well_defined_; }
  Tolerance tol() const { return tol_; }

  double K_residual(const Mat& k) const {
    Vec v = detail::vec(k);
    return detail::rel((v - K_ * (K_.adjoint() * v)).norm(), v.norm());
  }

  struct Presentation {
    Mat c;  // k = sum_ij c(i,j) lambda(e_i) e lambda(e_j)
    double residual;
  };
  Presentation express_in_spanning(const Mat& k) const {
    const int n = algebra().dim();
    Vec v = detail::vec(k);
    Vec c = cod_.solve(v);
    double res = detail::rel((span_ * c - v).norm(), v.norm());
    if (!(res <= tol_.eps)) throw NumericalError("element is not in the basic construction");
    Mat cm(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) cm(i, j) = c(i * n + j);
    return {cm, res};
  }

 private:
  CondExp E_;
  Tolerance tol_;
  GnsSpace space_;
  std::vector<Mat> lambda_;
  Mat e_;
  Mat span_;
  Mat K_;
  Eigen::CompleteOrthogonalDecomposition<Mat> cod_;
  double well_defined_ = 0.0;
};

inline BasicConstruction build_basic(const CondExp& E, Tolerance tol = {}) {
  auto r = check_conditional_expectation(E);
  if (!(r.worst() <= tol.eps)) throw NumericalError("not a conditional expectation");
  return BasicConstruction(E, tol);
}

struct BasicResiduals {
  double projection = 0.0;  // e^2 = e = e*
  double jones = 0.0;       // e lambda(a) e = lambda(E(a)) e
  double norm = 0.0;        // |lambda(x) e| = |x| on range(E)
  double commute = 0.0;     // e lambda(x) = lambda(x) e on range(E)
  double closure = 0.0;     // K closed under product and adjoint
  double contains_e = 0.0;
  double homomorphism = 0.0;  // lambda multiplicative and *-preserving
  double worst() const {
    return std::max({projection, jones, norm, commute, closure, contains_e, homomorphism});
  }
};

inline BasicResiduals check_basic(const BasicConstruction& bc, int samples = 8, std::uint64_t seed = 0) {
  BasicResiduals r;
  const auto& alg = bc.algebra();
  const Mat& e = bc.e();
  r.projection = std::max((e * e - e).norm(), (e.adjoint() - e).norm());
  for (int k = 0; k < alg.dim(); ++k) {
    Element a = Element::basis(alg, k);
    r.jones = std::max(r.jones, detail::op_norm(e * bc.lambda(a) * e - bc.lambda(bc.expectation().E(a)) * e));
    r.homomorphism = std::max(r.homomorphism, (bc.lambda(adjoint(a)) - bc.lambda(a).adjoint()).norm());
    for (int l = 0; l < alg.dim(); ++l) {
      Element b = Element::basis(alg, l);
      r.homomorphism = std::max(r.homomorphism, (bc.lambda(a * b) - bc.lambda(a) * bc.lambda(b)).norm());
    }
  }
  std::mt19937_64 rng(seed);
  const Subspace& rg = bc.expectation().range;
  auto xs = rg.elements();
  for (int s = 0; s < samples && rg.dim() > 0; ++s)
    xs.push_back(Element::from_coords(alg, rg.basis_matrix() * detail::random_matrix(rg.dim(), 1, rng)));
  for (const auto& x : xs) {
    Mat lx = bc.lambda(x);
    double nx = op_norm(x);
    r.norm = std::max(r.norm, detail::rel(std::abs(detail::op_norm(lx * e) - nx), nx));
    r.commute = std::max(r.commute, detail::op_norm(e * lx - lx * e));
  }
  const int d = bc.dimK();
  for (int s = 0; s < d; ++s) {
    Mat ks = bc.K_element(s);
    r.closure = std::max(r.closure, bc.K_residual(ks.adjoint()));
    for (int t = 0; t < d; ++t) r.closure = std::max(r.closure, bc.K_residual(ks * bc.K_element(t)));
  }
  r.contains_e = bc.m() ? bc.K_residual(e) : 0.0;
  return r;
}

}  // namespace interact
