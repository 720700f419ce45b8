#pragma once

#include <gmpxx.h>

#include <map>
#include <string>

#include "mixlab/group.hpp"

namespace mixlab {

// Gaussian rational a + bi with exact rational parts.  All arithmetic in
// this module is exact; nothing is rounded and no tolerances exist.
struct Coeff {
  mpq_class re, im;

  Coeff() : re(0), im(0) {}
  Coeff(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {}
  static Coeff one() { return Coeff(1, 0); }
  static Coeff i() { return Coeff(0, 1); }
  static Coeff integer(long n) { return Coeff(n, 0); }

  bool is_zero() const { return re == 0 && im == 0; }
  Coeff conj() const { return Coeff(re, -im); }
  mpq_class abs_sq() const { return re * re + im * im; }

  Coeff operator+(const Coeff& o) const { return Coeff(re + o.re, im + o.im); }
  Coeff operator-(const Coeff& o) const { return Coeff(re - o.re, im - o.im); }
  Coeff operator-() const { return Coeff(-re, -im); }
  Coeff operator*(const Coeff& o) const {
    return Coeff(re * o.re - im * o.im, re * o.im + im * o.re);
  }
  bool operator==(const Coeff& o) const { return re == o.re && im == o.im; }

  std::string str() const;  // "1", "-2/3", "i", "1-i/2", ...
};

// Finitely supported element of the group algebra C[G]: a coefficient map
// with zero terms pruned, kept in the structural element order so that
// iteration, equality and serialization are canonical.
class AlgebraElement {
 public:
  using Terms = std::map<Elem, Coeff>;

  static AlgebraElement zero(GroupPtr g) { return AlgebraElement(std::move(g)); }
  static AlgebraElement lambda(GroupPtr g, const Elem& x, Coeff c = Coeff::one());

  const GroupPtr& group() const { return group_; }
  const Terms& terms() const { return terms_; }
  std::size_t support_size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  Coeff at(const Elem& g) const;

  AlgebraElement& add_term(const Elem& g, const Coeff& c);  // accumulate, prune zeros

  AlgebraElement operator+(const AlgebraElement& o) const;
  AlgebraElement operator-(const AlgebraElement& o) const;
  AlgebraElement operator-() const;
  AlgebraElement scaled(const Coeff& c) const;
  bool operator==(const AlgebraElement& o) const;

 private:
  explicit AlgebraElement(GroupPtr g) : group_(std::move(g)) {
    if (!group_) throw InputError("algebra element requires a group");
  }
  GroupPtr group_;
  Terms terms_;
};

// (x * y)(g) = sum over ab = g of x(a) y(b)
AlgebraElement convolve(const AlgebraElement& x, const AlgebraElement& y);

// x*(g) = conj(x(g^-1))
AlgebraElement adjoint(const AlgebraElement& x);

// coefficient at the identity
Coeff trace(const AlgebraElement& x);

// ||x||_2^2 = trace(x* x) = sum |x(g)|^2, exact
mpq_class norm2_sq(const AlgebraElement& x);

// decimal rendering of an exact nonnegative rational (for display only;
// reports always carry the exact value)
std::string decimal_approx(const mpq_class& q, int digits = 6);

// restriction of the coefficient map to the subgroup: the conditional
// expectation of L(G) onto L(S) in Fourier coordinates
AlgebraElement cond_exp(const AlgebraElement& x, const Subgroup& s);

AlgebraElement commutator(const AlgebraElement& x, const AlgebraElement& y);  // xy - yx

// ||: defect of the intertwining identity for B = L(H) <= N = L(K):
//   E_B(x u y) - E_B(E_N(x) u E_N(y)) == E_B((x - E_N(x)) u (y - E_N(y)))
// The two sides are computed independently and compared exactly; a mismatch
// is a ConsistencyError.  Returns ||E_B((x-E_N x) u (y-E_N y))||_2^2.
// Preconditions: u is supported in H, and H <= K as subgroups of x's group.
mpq_class wahp_defect(const AlgebraElement& x, const AlgebraElement& y, const AlgebraElement& u,
                      const Subgroup& h, const Subgroup& k);

// E_{S1} E_{S2} == E_{S2} E_{S1} == E_{S1 cap S2} on x, checked exactly
bool commuting_square_check(const Subgroup& s1, const Subgroup& s2, const AlgebraElement& x);

}  // namespace mixlab
