#include "doctest.h"
#include "support.hpp"

using namespace mixlab;
using namespace testsupport;

namespace {

InstancePtr rot() { return find_instance("rotation4"); }

}  // namespace

TEST_CASE("gaussian rational coefficients form a *-ring") {
  Coeff i = Coeff::i();
  CHECK(i * i == -Coeff::one());
  CHECK(i.conj() == -i);
  Coeff c(mpq_class(1, 2), mpq_class(-3, 4));
  CHECK((c * c.conj()).re == c.abs_sq());
  CHECK((c * c.conj()).im == 0);
  CHECK(c + (-c) == Coeff(0, 0));
  CHECK(c.abs_sq() == mpq_class(1, 4) * mpq_class(1, 1) + mpq_class(9, 16));
}

TEST_CASE("lambda is multiplicative and the trace picks the identity") {
  InstancePtr f = find_instance("free-zz");
  GroupPtr g = f->triple.G;
  Elem a = g->parse("a");
  Elem b = g->parse("b");
  CHECK(convolve(AlgebraElement::lambda(g, a), AlgebraElement::lambda(g, b)) ==
        AlgebraElement::lambda(g, g->op(a, b)));
  CHECK(trace(AlgebraElement::lambda(g, g->identity())) == Coeff::one());
  CHECK(trace(AlgebraElement::lambda(g, b)) == Coeff(0, 0));
  CHECK(norm2_sq(AlgebraElement::lambda(g, b)) == 1);
}

TEST_CASE("ring laws hold on seeded random elements") {
  auto r = rng(424242);
  for (const auto& inst : builtin_instances()) {
    GroupPtr g = inst->triple.G;
    Ball ball = feasible_ball(*g, 2, 3000);
    for (int rep = 0; rep < 25; ++rep) {
      AlgebraElement x = random_algebra(r, g, ball, 4);
      AlgebraElement y = random_algebra(r, g, ball, 4);
      AlgebraElement z = random_algebra(r, g, ball, 4);
      CHECK(convolve(convolve(x, y), z) == convolve(x, convolve(y, z)));
      CHECK(convolve(x, y + z) == convolve(x, y) + convolve(x, z));
      CHECK(adjoint(convolve(x, y)) == convolve(adjoint(y), adjoint(x)));
      CHECK(adjoint(adjoint(x)) == x);
      CHECK(trace(convolve(x, y)) == trace(convolve(y, x)));
      CHECK(norm2_sq(x) == trace(convolve(adjoint(x), x)).re);
      CHECK(norm2_sq(x) >= 0);
      if (norm2_sq(x) == 0) CHECK(x.is_zero());
    }
  }
}

TEST_CASE("conditional expectation restricts support and is a projection") {
  auto r = rng(7);
  for (const auto& inst : builtin_instances()) {
    const Triple& t = inst->triple;
    Ball ball = feasible_ball(*t.G, 2, 3000);
    for (int rep = 0; rep < 25; ++rep) {
      AlgebraElement x = random_algebra(r, t.G, ball, 5);
      AlgebraElement ex = cond_exp(x, t.H);
      for (const auto& [e, c] : ex.terms()) CHECK(t.H.contains(e));
      CHECK(cond_exp(ex, t.H) == ex);
      CHECK(trace(ex) == trace(x));
      // orthogonality: x - E(x) is 2-norm orthogonal to the H-part
      CHECK(trace(convolve(adjoint(x - ex), ex)) == Coeff(0, 0));
      CHECK(norm2_sq(x) == norm2_sq(ex) + norm2_sq(x - ex));
    }
  }
}

TEST_CASE("conditional expectation is a bimodule map over the subalgebra") {
  auto r = rng(99);
  InstancePtr inst = rot();
  const Triple& t = inst->triple;
  Ball gb = feasible_ball(*t.G, 2, 3000);
  Ball hb = t.H.ball(2, 3000);
  for (int rep = 0; rep < 40; ++rep) {
    AlgebraElement x = random_algebra(r, t.G, gb, 4);
    AlgebraElement a = AlgebraElement::lambda(t.G, pick_elem(r, hb));
    AlgebraElement b = AlgebraElement::lambda(t.G, pick_elem(r, hb));
    CHECK(cond_exp(convolve(convolve(a, x), b), t.H) ==
          convolve(convolve(a, cond_exp(x, t.H)), b));
  }
}

TEST_CASE("commutator vanishes exactly for commuting elements") {
  InstancePtr f = find_instance("free-zz");
  GroupPtr g = f->triple.G;
  AlgebraElement a = AlgebraElement::lambda(g, g->parse("a"));
  AlgebraElement a2 = AlgebraElement::lambda(g, g->parse("a^2"));
  AlgebraElement b = AlgebraElement::lambda(g, g->parse("b"));
  CHECK(commutator(a, a2).is_zero());
  CHECK_FALSE(commutator(a, b).is_zero());
}

TEST_CASE("exact intertwining identity holds on seeded triples") {
  auto r = rng(31337);
  InstancePtr inst = rot();
  const Triple& t = inst->triple;
  Ball gb = feasible_ball(*t.G, 2, 3000);
  Ball hb = t.H.ball(2, 3000);
  for (int rep = 0; rep < 30; ++rep) {
    AlgebraElement x = random_algebra(r, t.G, gb, 3);
    AlgebraElement y = random_algebra(r, t.G, gb, 3);
    AlgebraElement u = AlgebraElement::lambda(t.G, pick_elem(r, hb));
    CHECK_NOTHROW(wahp_defect(x, y, u, t.H, t.K));
  }
  // hand value: lambda_{(1,0)} against itself under u = lambda_{(0,2)}
  const Group& g = inst->g();
  AlgebraElement e1 = AlgebraElement::lambda(t.G, g.parse("(1,0):0"));
  AlgebraElement u = AlgebraElement::lambda(t.G, g.parse("(0,0):2"));
  CHECK(wahp_defect(e1, e1, u, t.H, t.K) == 1);
}

TEST_CASE("wahp_defect validates its inputs") {
  InstancePtr inst = rot();
  const Triple& t = inst->triple;
  GroupPtr g = t.G;
  AlgebraElement x = AlgebraElement::lambda(g, g->parse("(1,0):0"));
  // u must be supported in H
  CHECK_THROWS_AS(wahp_defect(x, x, x, t.H, t.K), InputError);
}

TEST_CASE("independent subalgebras form commuting squares") {
  auto r = rng(555);
  InstancePtr f = find_instance("free-zz");
  auto fp = std::dynamic_pointer_cast<const FreeProductGroup>(f->triple.G);
  REQUIRE(fp);
  Subgroup sa = fp->factor_subgroup(0);
  Subgroup sb = fp->factor_subgroup(1);
  Ball gb = feasible_ball(*f->triple.G, 2, 3000);
  for (int rep = 0; rep < 30; ++rep)
    CHECK(commuting_square_check(sa, sb, random_algebra(r, f->triple.G, gb, 4)));
}

TEST_CASE("decimal_approx renders exact rationals approximately") {
  CHECK(decimal_approx(mpq_class(1, 2), 3) == "0.500");
  CHECK(decimal_approx(mpq_class(-1, 3), 4) == "-0.3333");
  CHECK(decimal_approx(mpq_class(4), 2) == "4.00");
}
