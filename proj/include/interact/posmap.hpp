#pragma once
// Linear maps A -> A as matrices on canonical coordinates, with positivity
// and complete positivity tests and entrywise amplification to M_n(A).

#include "fdstar.hpp"

#include <functional>

namespace interact {

class LinMap {
 public:
  LinMap() = default;
  LinMap(AlgebraDescriptor alg, Mat matrix) : alg_(std::move(alg)), m_(std::move(matrix)) {
    if (m_.rows() != alg_.dim() || m_.cols() != alg_.dim())
      throw DescriptorMismatch("map matrix has wrong shape");
  }

  static LinMap identity(const AlgebraDescriptor& alg) {
    return LinMap(alg, Mat::Identity(alg.dim(), alg.dim()));
  }
  static LinMap from_function(const AlgebraDescriptor& alg,
                              const std::function<Element(const Element&)>& f) {
    Mat m(alg.dim(), alg.dim());
    for (int k = 0; k < alg.dim(); ++k) m.col(k) = f(Element::basis(alg, k)).coords();
    return LinMap(alg, std::move(m));
  }

  const AlgebraDescriptor& algebra() const { return alg_; }
  const Mat& matrix() const { return m_; }

  Element operator()(const Element& x) const {
    if (!(x.algebra() == alg_)) throw DescriptorMismatch();
    return Element::from_coords(alg_, m_ * x.coords());
  }

 private:
  AlgebraDescriptor alg_;
  Mat m_;
};

inline Element apply(const LinMap& t, const Element& x) { return t(x); }

inline LinMap compose(const LinMap& s, const LinMap& t) {
  if (!(s.algebra() == t.algebra())) throw DescriptorMismatch();
  return LinMap(s.algebra(), s.matrix() * t.matrix());
}

inline LinMap operator-(const LinMap& s, const LinMap& t) {
  if (!(s.algebra() == t.algebra())) throw DescriptorMismatch();
  return LinMap(s.algebra(), s.matrix() - t.matrix());
}

// An element of M_n(A) viewed as an n x n grid of elements of A.
inline Element grid_entry(const Element& x, const AlgebraDescriptor& base, int r, int s) {
  std::vector<Mat> b;
  for (int i = 0; i < base.block_count(); ++i) {
    int d = base.block_size(i);
    b.push_back(x.block(i).block(r * d, s * d, d, d));
  }
  return Element(base, std::move(b));
}

inline Element from_grid(const std::vector<std::vector<Element>>& grid) {
  const int n = static_cast<int>(grid.size());
  const auto& base = grid.at(0).at(0).algebra();
  std::vector<Mat> b;
  for (int i = 0; i < base.block_count(); ++i) {
    int d = base.block_size(i);
    Mat m(n * d, n * d);
    for (int r = 0; r < n; ++r)
      for (int s = 0; s < n; ++s) m.block(r * d, s * d, d, d) = grid[r][s].block(i);
    b.push_back(std::move(m));
  }
  return Element(base.amplified(n), std::move(b));
}

inline LinMap amplify(const LinMap& t, int n) {
  const auto& base = t.algebra();
  auto big = base.amplified(n);
  Mat m = Mat::Zero(big.dim(), big.dim());
  for (int k = 0; k < big.dim(); ++k) {
    auto u = big.unit_at(k);
    int d = base.block_size(u.block);
    int r = u.p / d, s = u.q / d;
    Vec img = t.matrix().col(base.index(u.block, u.p % d, u.q % d));
    // place T(e_pq) at grid position (r, s)
    for (int j = 0; j < base.dim(); ++j) {
      if (img(j) == cplx(0.0)) continue;
      auto v = base.unit_at(j);
      int dv = base.block_size(v.block);
      m(big.index(v.block, r * dv + v.p, s * dv + v.q), k) = img(j);
    }
  }
  return LinMap(big, std::move(m));
}

struct ChoiCertificate {
  bool completely_positive;
  double min_eigenvalue;
  double hermitian_defect;
  double norm;
};

// Choi matrices per source block: [T(e^{(i)}_{pq})]_{pq} in M_{d_i}(A).
inline std::vector<Element> choi_matrices(const LinMap& t) {
  const auto& alg = t.algebra();
  std::vector<Element> out;
  for (int i = 0; i < alg.block_count(); ++i) {
    int d = alg.block_size(i);
    std::vector<std::vector<Element>> grid(d);
    for (int p = 0; p < d; ++p)
      for (int q = 0; q < d; ++q) grid[p].push_back(t(Element::matrix_unit(alg, i, p, q)));
    out.push_back(from_grid(grid));
  }
  return out;
}

inline ChoiCertificate is_completely_positive(const LinMap& t, Tolerance tol = {}) {
  double lo = std::numeric_limits<double>::infinity(), herm = 0.0, nrm = 0.0;
  for (const auto& c : choi_matrices(t)) {
    lo = std::min(lo, min_eigenvalue(c));
    herm = std::max(herm, hermitian_defect(c));
    nrm = std::max(nrm, op_norm(c));
  }
  bool ok = herm <= tol.eps * std::max(1.0, nrm) && lo >= -tol.eps * nrm;
  return {ok, lo, herm, nrm};
}

// Rank-one positives v v* built from canonical vectors e_p, e_p + e_q, e_p + i e_q.
inline std::vector<Element> basis_positives(const AlgebraDescriptor& alg) {
  std::vector<Element> out;
  for (int i = 0; i < alg.block_count(); ++i) {
    int d = alg.block_size(i);
    auto push = [&](const Eigen::VectorXcd& v) {
      Element x = Element::zero(alg);
      std::vector<Mat> b = x.blocks();
      b[i] = v * v.adjoint();
      out.emplace_back(alg, std::move(b));
    };
    for (int p = 0; p < d; ++p) {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
      v(p) = 1.0;
      push(v);
      for (int q = p + 1; q < d; ++q) {
        Eigen::VectorXcd w = v;
        w(q) = 1.0;
        push(w);
        w(q) = cplx(0.0, 1.0);
        push(w);
      }
    }
  }
  return out;
}

// Residual of positivity for T(x): Hermitian defect and negative spectrum,
// relative to max(1, |T(x)|).
inline double positivity_residual(const Element& y) {
  double n = op_norm(y);
  double neg = std::max(0.0, -min_eigenvalue(y));
  return detail::rel(std::max(hermitian_defect(y), neg), n);
}

struct PositivityCertificate {
  bool positive;
  double worst_residual;
  int trials_run;
};

// A randomized falsifier: a pass does not prove positivity.
inline PositivityCertificate positivity_certificate(const LinMap& t, int trials, Tolerance tol = {},
                                                    std::uint64_t seed = 0) {
  if (trials < 1) throw std::invalid_argument("positivity_certificate: trials must be >= 1");
  const auto& alg = t.algebra();
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  int run = 0;
  for (int k = 0; k < trials; ++k) {
    Element y = Element::random(alg, rng);
    worst = std::max(worst, positivity_residual(t(adjoint(y) * y)));
    ++run;
    if (worst > tol.eps) return {false, worst, run};
  }
  for (const auto& x : basis_positives(alg)) {
    worst = std::max(worst, positivity_residual(t(x)));
    if (worst > tol.eps) return {false, worst, run};
  }
  return {true, worst, run};
}

// Largest |T(x*) - T(x)*| over the canonical basis.
inline double star_defect(const LinMap& t) {
  const auto& alg = t.algebra();
  double worst = 0.0;
  for (int k = 0; k < alg.dim(); ++k) {
    Element e = Element::basis(alg, k);
    worst = std::max(worst, op_norm(t(adjoint(e)) - adjoint(t(e))));
  }
  return worst;
}

inline Subspace range_subspace(const LinMap& t, Tolerance tol = {}) {
  return Subspace::span(t.algebra(), t.matrix(), tol);
}

// Largest sampled |T(x)| / |x|.
inline double contraction_ratio(const LinMap& t, int samples, std::mt19937_64& rng) {
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    Element x = Element::random(t.algebra(), rng);
    worst = std::max(worst, op_norm(t(x)) / op_norm(x));
  }
  return worst;
}

}  // namespace interact
