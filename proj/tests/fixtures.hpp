#pragma once
// Hand-written interactions shared by the test suites.

#include <interact/interaction.hpp>

namespace fixtures {

using namespace interact;

inline AlgebraDescriptor c2() { return AlgebraDescriptor({1, 1}); }
inline AlgebraDescriptor m2() { return AlgebraDescriptor({2}); }
inline AlgebraDescriptor c1() { return AlgebraDescriptor(std::vector<int>{1}); }
inline AlgebraDescriptor c3() { return AlgebraDescriptor({1, 1, 1}); }

inline Mat real2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

// V(a1, a2) = (a2, a2), H(a1, a2) = (a1, a1)
inline LinMap flip_V() { return LinMap(c2(), real2(0, 1, 0, 1)); }
inline LinMap flip_H() { return LinMap(c2(), real2(1, 0, 1, 0)); }
inline Interaction flip() { return Interaction(flip_V(), flip_H()); }

inline LinMap swap_c2() { return LinMap(c2(), real2(0, 1, 1, 0)); }

inline Interaction identity_m2() { return Interaction(LinMap::identity(m2()), LinMap::identity(m2())); }

inline Interaction identity_c() { return Interaction(LinMap::identity(c1()), LinMap::identity(c1())); }

// V(a) = (a2, a2, a2), H(a) = (a1, a1, a1): both expectations ignore a3
inline Interaction blind_c3() {
  Mat v = Mat::Zero(3, 3), h = Mat::Zero(3, 3);
  v.col(1).setOnes();
  h.col(0).setOnes();
  return Interaction(LinMap(c3(), v), LinMap(c3(), h));
}

inline LinMap transpose_m2() {
  return LinMap::from_function(m2(), [](const Element& x) {
    return Element(x.algebra(), {x.block(0).transpose()});
  });
}

inline Element diag(const AlgebraDescriptor& a, std::vector<cplx> v) { return Element::scalars(a, v); }

}  // namespace fixtures
