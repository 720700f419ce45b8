#include "doctest.h"
#include "support.hpp"

using namespace mixlab;
using namespace testsupport;

namespace {

InstancePtr rot() { return find_instance("rotation4"); }

Elem vec(Elem::Int x, Elem::Int y) { return Elem::tuple({x, y}); }

}  // namespace

TEST_CASE("matrix action realizes the order-4 rotation") {
  const auto& sg = *rot()->semidirect->g;
  const Action& act = sg.action();
  CHECK(act.apply(Elem::integer(1), vec(1, 0)) == vec(0, 1));
  CHECK(act.apply(Elem::integer(1), vec(0, 1)) == vec(-1, 0));
  CHECK(act.apply(Elem::integer(2), vec(1, 0)) == vec(-1, 0));
  CHECK(act.apply(Elem::integer(4), vec(1, 0)) == vec(1, 0));
  CHECK(act.apply(Elem::integer(-1), vec(0, 1)) == vec(1, 0));
  CHECK(rot()->matrix_data->order == 4);
  CHECK(rot()->matrix_data->det_m_minus_id == 2);
}

TEST_CASE("semidirect multiplication twists the base by the top") {
  const auto& sg = *rot()->semidirect->g;
  // (a1, k1)(a2, k2) = (a1 + alpha_{k1}(a2), k1 + k2)
  Elem x = Elem::pair(vec(1, 0), Elem::integer(1));
  Elem y = Elem::pair(vec(1, 0), Elem::integer(2));
  CHECK(sg.op(x, y) == Elem::pair(vec(1, 1), Elem::integer(3)));
  CHECK(sg.op(x, sg.inv(x)) == sg.identity());
  CHECK(sg.inv(x) == Elem::pair(vec(0, 1), Elem::integer(-1)));
}

TEST_CASE("matrix_action validates shape and determinant") {
  GroupPtr z = integers();
  CHECK_THROWS_AS(matrix_action(z, lattice(2), {{2, 0}, {0, 1}}), InputError);
  CHECK_THROWS_AS(matrix_action(z, lattice(2), {{1, 0}}), InputError);
  CHECK_NOTHROW(matrix_action(z, lattice(2), {{1, 1}, {0, 1}}));
}

TEST_CASE("wreath base elements are finitely supported maps") {
  InstancePtr w = find_instance("wreath-z2-z");
  const auto& sg = *w->semidirect->g;
  auto base = std::dynamic_pointer_cast<const FinSuppGroup>(sg.base());
  REQUIRE(base);
  Elem d0 = base->parse("{0}");
  CHECK(base->op(d0, d0) == base->identity());               // Z/2 values
  CHECK(base->translate(Elem::integer(2), d0) == base->parse("{2}"));
  Elem d01 = base->parse("{0,1}");
  CHECK(base->op(d0, base->parse("{1}")) == d01);
  // shifting acts on supports
  const Action& act = sg.action();
  CHECK(act.apply(Elem::integer(1), d01) == base->parse("{1,2}"));
}

TEST_CASE("free product words reduce and cancel") {
  InstancePtr f = find_instance("free-zz");
  const Group& g = f->g();
  Elem w = g.parse("b a b^-1");
  CHECK(g.op(w, g.parse("b a^-1 b^-1")) == g.identity());
  CHECK(g.op(g.parse("a^2"), g.parse("a^-2")) == g.identity());
  CHECK(g.format(g.op(g.parse("a b"), g.parse("b^-1 a"))) == "a^2");
  CHECK(g.parse("e") == g.identity());
}

TEST_CASE("direct products carry componentwise structure") {
  InstancePtr p = find_instance("prod-wreath2");
  const Group& g = p->g();
  REQUIRE(p->factors.first);
  REQUIRE(p->factors.second);
  const Group& g1 = p->factors.first->g();
  Elem x = Elem::pair(g1.parse("{0}:1"), g1.identity());
  Elem y = Elem::pair(g1.identity(), g1.parse("{}:2"));
  CHECK(g.op(x, y) == g.op(y, x));  // disjoint components commute
  CHECK(g.parse(g.format(x)) == x);
}

TEST_CASE("trivial action instance multiplies componentwise") {
  InstancePtr t = find_instance("trivial-z2-z");
  const auto& sg = *t->semidirect->g;
  Elem x = Elem::pair(vec(1, 2), Elem::integer(3));
  Elem y = Elem::pair(vec(-1, 1), Elem::integer(4));
  CHECK(sg.op(x, y) == Elem::pair(vec(0, 3), Elem::integer(7)));
}

TEST_CASE("conjugate subgroups test membership through the conjugation") {
  InstancePtr inst = rot();
  const Group& g = inst->g();
  Elem c = g.parse("(1,0):0");
  Subgroup conj = conjugate_subgroup(inst->triple.H, c);
  // c (0,4) c^-1 has trivial base displacement since alpha_4 = id
  CHECK(conj.contains(g.op(g.op(c, g.parse("(0,0):4")), g.inv(c))));
  CHECK_FALSE(conj.contains(g.parse("(0,0):1")));
}

TEST_CASE("intersect_subgroups tests both memberships") {
  InstancePtr inst = rot();
  const Group& g = inst->g();
  Elem c = g.parse("(1,0):0");
  Subgroup conj = conjugate_subgroup(inst->triple.H, c);
  Subgroup both = intersect_subgroups(inst->triple.H, conj);
  CHECK(both.contains(g.parse("(0,0):4")));
  CHECK_FALSE(both.contains(g.parse("(0,0):1")));
  CHECK(both.contains(g.identity()));
}

TEST_CASE("semidirect base and top subgroups split the ambient group") {
  const auto& sg = *rot()->semidirect->g;
  Subgroup base = sg.base_subgroup();
  Subgroup top = sg.top_subgroup();
  Elem x = Elem::pair(vec(1, 2), Elem::integer(0));
  Elem y = Elem::pair(vec(0, 0), Elem::integer(5));
  CHECK(base.contains(x));
  CHECK_FALSE(base.contains(y));
  CHECK(top.contains(y));
  CHECK_FALSE(top.contains(x));
}

TEST_CASE("actions reject non-automorphisms at construction") {
  // a shear is fine; a broken lambda is caught by the compatibility sampler
  GroupPtr z = integers();
  GroupPtr l = lattice(1);
  Action bad{z, l,
             [](const Elem& k, const Elem& a) {
               return k.as_int() == 0 ? a : Elem::tuple({a.as_tuple()[0] + 1});
             },
             "broken"};
  CHECK_THROWS_AS(SemidirectGroup::make(bad, "bad"), InputError);
}
