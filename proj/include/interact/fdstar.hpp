#pragma once
// Finite-dimensional C*-algebras A = M_{d_1} + ... + M_{d_k} and their elements.
//
// Coordinates are taken in the matrix-unit basis, blocks in order and entries
// row-major. These coordinates are orthonormal for tr(x* y).

#include "detail/linalg.hpp"

#include <numeric>
#include <ostream>
#include <utility>
#include <vector>

namespace interact {

class AlgebraDescriptor {
 public:
  AlgebraDescriptor() = default;
  explicit AlgebraDescriptor(std::vector<int> blocks) : blocks_(std::move(blocks)) {
    if (blocks_.empty()) throw std::invalid_argument("algebra needs at least one block");
    int off = 0;
    for (int d : blocks_) {
      if (d < 1) throw std::invalid_argument("block sizes must be positive");
      offsets_.push_back(off);
      off += d * d;
    }
    dim_ = off;
  }

  const std::vector<int>& blocks() const { return blocks_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }
  int block_size(int i) const { return blocks_[i]; }
  int dim() const { return dim_; }
  int offset(int i) const { return offsets_[i]; }
  int index(int block, int p, int q) const {
    return offsets_[block] + p * blocks_[block] + q;
  }
  int trace_of_unit() const {
    return std::accumulate(blocks_.begin(), blocks_.end(), 0);
  }

  struct Unit {
    int block, p, q;
  };
  Unit unit_at(int k) const {
    int i = 0;
    while (i + 1 < block_count() && offsets_[i + 1] <= k) ++i;
    int r = k - offsets_[i];
    return {i, r / blocks_[i], r % blocks_[i]};
  }

  // descriptor of M_n(A)
  AlgebraDescriptor amplified(int n) const {
    if (n < 1) throw std::invalid_argument("amplification factor must be positive");
    std::vector<int> b;
    for (int d : blocks_) b.push_back(n * d);
    return AlgebraDescriptor(b);
  }

  bool operator==(const AlgebraDescriptor& o) const { return blocks_ == o.blocks_; }

 private:
  std::vector<int> blocks_;
  std::vector<int> offsets_;
  int dim_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, const AlgebraDescriptor& a) {
  os << "[";
  for (int i = 0; i < a.block_count(); ++i) os << (i ? "," : "") << a.block_size(i);
  return os << "]";
}

class Element {
 public:
  Element() = default;
  Element(AlgebraDescriptor alg, std::vector<Mat> blocks)
      : alg_(std::move(alg)), blocks_(std::move(blocks)) {
    if (static_cast<int>(blocks_.size()) != alg_.block_count())
      throw DescriptorMismatch("wrong number of blocks");
    for (int i = 0; i < alg_.block_count(); ++i)
      if (blocks_[i].rows() != alg_.block_size(i) || blocks_[i].cols() != alg_.block_size(i))
        throw DescriptorMismatch("block shape does not match descriptor");
  }

  static Element zero(const AlgebraDescriptor& alg) {
    std::vector<Mat> b;
    for (int d : alg.blocks()) b.push_back(Mat::Zero(d, d));
    return Element(alg, std::move(b));
  }
  static Element unit(const AlgebraDescriptor& alg) {
    std::vector<Mat> b;
    for (int d : alg.blocks()) b.push_back(Mat::Identity(d, d));
    return Element(alg, std::move(b));
  }
  static Element matrix_unit(const AlgebraDescriptor& alg, int block, int p, int q) {
    Element e = zero(alg);
    e.blocks_[block](p, q) = 1.0;
    return e;
  }
  static Element basis(const AlgebraDescriptor& alg, int k) {
    auto u = alg.unit_at(k);
    return matrix_unit(alg, u.block, u.p, u.q);
  }
  static Element from_coords(const AlgebraDescriptor& alg, const Vec& c) {
    if (c.size() != alg.dim()) throw DescriptorMismatch("coordinate vector has wrong length");
    Element e = zero(alg);
    for (int i = 0; i < alg.block_count(); ++i) {
      int d = alg.block_size(i);
      for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) e.blocks_[i](p, q) = c(alg.index(i, p, q));
    }
    return e;
  }
  // diagonal algebra shorthand: one scalar per 1x1 block
  static Element scalars(const AlgebraDescriptor& alg, const std::vector<cplx>& v) {
    return from_coords(alg, Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())));
  }
  static Element random(const AlgebraDescriptor& alg, std::mt19937_64& rng) {
    std::vector<Mat> b;
    for (int d : alg.blocks()) b.push_back(detail::random_matrix(d, d, rng));
    return Element(alg, std::move(b));
  }

  const AlgebraDescriptor& algebra() const { return alg_; }
  const std::vector<Mat>& blocks() const { return blocks_; }
  const Mat& block(int i) const { return blocks_[i]; }

  Vec coords() const {
    Vec c(alg_.dim());
    for (int i = 0; i < alg_.block_count(); ++i) {
      int d = alg_.block_size(i);
      for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) c(alg_.index(i, p, q)) = blocks_[i](p, q);
    }
    return c;
  }

  Element& operator+=(const Element& o) {
    check(o);
    for (size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += o.blocks_[i];
    return *this;
  }
  Element& operator-=(const Element& o) {
    check(o);
    for (size_t i = 0; i < blocks_.size(); ++i) blocks_[i] -= o.blocks_[i];
    return *this;
  }
  Element& operator*=(cplx s) {
    for (auto& b : blocks_) b *= s;
    return *this;
  }
  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(cplx s, Element a) { return a *= s; }
  friend Element operator*(Element a, cplx s) { return a *= s; }
  friend Element operator-(Element a) { return a *= -1.0; }

  void check(const Element& o) const {
    if (!(alg_ == o.alg_)) throw DescriptorMismatch();
  }

 private:
  AlgebraDescriptor alg_;
  std::vector<Mat> blocks_;
};

inline Element multiply(const Element& x, const Element& y) {
  x.check(y);
  std::vector<Mat> b;
  for (int i = 0; i < x.algebra().block_count(); ++i) b.push_back(x.block(i) * y.block(i));
  return Element(x.algebra(), std::move(b));
}

inline Element operator*(const Element& x, const Element& y) { return multiply(x, y); }

inline Element adjoint(const Element& x) {
  std::vector<Mat> b;
  for (const auto& m : x.blocks()) b.push_back(m.adjoint());
  return Element(x.algebra(), std::move(b));
}

inline double op_norm(const Element& x) {
  double n = 0.0;
  for (const auto& m : x.blocks()) n = std::max(n, detail::op_norm(m));
  return n;
}

inline double frobenius_norm(const Element& x) {
  double s = 0.0;
  for (const auto& m : x.blocks()) s += m.squaredNorm();
  return std::sqrt(s);
}

inline cplx trace(const Element& x) {
  cplx t = 0.0;
  for (const auto& m : x.blocks()) t += m.trace();
  return t;
}

inline double hermitian_defect(const Element& x) {
  double n = 0.0;
  for (const auto& m : x.blocks()) n = std::max(n, detail::op_norm(m - m.adjoint()));
  return n;
}

inline double min_eigenvalue(const Element& x) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& m : x.blocks()) lo = std::min(lo, detail::min_eigenvalue(m));
  return lo;
}

inline bool is_positive(const Element& x, Tolerance tol = {}) {
  double n = op_norm(x);
  if (hermitian_defect(x) > tol.eps * std::max(1.0, n)) return false;
  return min_eigenvalue(x) >= -tol.eps * n;
}

inline Element sqrt_psd(const Element& x, Tolerance tol = {}) {
  if (!is_positive(x, tol)) throw NumericalError("sqrt_psd: input is not positive");
  std::vector<Mat> out;
  for (const auto& m : x.blocks()) {
    Mat h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    out.push_back(es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint());
  }
  return Element(x.algebra(), std::move(out));
}

// Matrix of y -> x y in canonical coordinates.
inline Mat left_mult_matrix(const Element& x) {
  const auto& alg = x.algebra();
  Mat L = Mat::Zero(alg.dim(), alg.dim());
  for (int i = 0; i < alg.block_count(); ++i) {
    int d = alg.block_size(i);
    // (x e_{pq})_{rq} = x_{rp}
    for (int p = 0; p < d; ++p)
      for (int q = 0; q < d; ++q)
        for (int r = 0; r < d; ++r) L(alg.index(i, r, q), alg.index(i, p, q)) = x.block(i)(r, p);
  }
  return L;
}

class Subspace {
 public:
  Subspace() = default;
  // columns of `basis` are orthonormal coordinate vectors
  Subspace(AlgebraDescriptor alg, Mat basis) : alg_(std::move(alg)), basis_(std::move(basis)) {
    if (basis_.rows() != alg_.dim()) throw DescriptorMismatch("subspace basis has wrong length");
  }

  static Subspace span(const AlgebraDescriptor& alg, const Mat& columns, Tolerance tol = {}) {
    return Subspace(alg, detail::canonical_basis(detail::column_basis(columns, tol.eps)));
  }
  static Subspace span(const std::vector<Element>& xs, Tolerance tol = {}) {
    if (xs.empty()) throw std::invalid_argument("span of an empty list needs a descriptor");
    Mat cols(xs[0].algebra().dim(), static_cast<Eigen::Index>(xs.size()));
    for (size_t j = 0; j < xs.size(); ++j) {
      xs[0].check(xs[j]);
      cols.col(j) = xs[j].coords();
    }
    return span(xs[0].algebra(), cols, tol);
  }
  static Subspace whole(const AlgebraDescriptor& alg) {
    return Subspace(alg, Mat::Identity(alg.dim(), alg.dim()));
  }

  const AlgebraDescriptor& algebra() const { return alg_; }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const Mat& basis_matrix() const { return basis_; }
  Element element(int k) const { return Element::from_coords(alg_, basis_.col(k)); }
  std::vector<Element> elements() const {
    std::vector<Element> v;
    for (int k = 0; k < dim(); ++k) v.push_back(element(k));
    return v;
  }
  Mat projector() const { return basis_ * basis_.adjoint(); }
  Element project(const Element& x) const {
    return Element::from_coords(alg_, basis_ * (basis_.adjoint() * x.coords()));
  }

 private:
  AlgebraDescriptor alg_;
  Mat basis_;
};

struct Membership {
  bool member;
  double residual;
};

// Residual measured in the trace norm, relative to max(1, |x|_2).
inline Membership membership(const Element& x, const Subspace& s, Tolerance tol = {}) {
  if (!(x.algebra() == s.algebra())) throw DescriptorMismatch();
  Vec c = x.coords();
  Vec r = c - s.basis_matrix() * (s.basis_matrix().adjoint() * c);
  double res = detail::rel(r.norm(), c.norm());
  return {res <= tol.eps, res};
}

inline Subspace generated_subalgebra(const std::vector<Element>& gens, Tolerance tol = {}) {
  if (gens.empty()) throw std::invalid_argument("generated_subalgebra: no generators");
  const auto& alg = gens[0].algebra();
  std::vector<Element> seed;
  for (const auto& g : gens) {
    g.check(gens[0]);
    seed.push_back(g);
    seed.push_back(adjoint(g));
  }
  Subspace cur = Subspace::span(seed, tol);
  for (int iter = 0; iter <= alg.dim() + 1; ++iter) {
    auto b = cur.elements();
    std::vector<Element> cand = b;
    for (const auto& u : b)
      for (const auto& v : b) cand.push_back(u * v);
    Subspace next = cand.empty() ? cur : Subspace::span(cand, tol);
    if (next.dim() == cur.dim()) return cur;
    cur = std::move(next);
  }
  throw NumericalError("generated_subalgebra: iteration cap exceeded");
}

}  // namespace interact
