#include "doctest.h"
#include "support.hpp"

#include "mixlab/experiments.hpp"
#include "mixlab/certs.hpp"

using namespace mixlab;
using namespace testsupport;

namespace {

InstancePtr rot() { return find_instance("rotation4"); }

AlgebraElement lam(const InstancePtr& inst, const char* lit) {
  return AlgebraElement::lambda(inst->triple.G, inst->g().parse(lit));
}

}  // namespace

TEST_CASE("free product junction decays everywhere except the identity") {
  InstancePtr f = find_instance("free-zz");
  DecayProfile p = decay_profile(f->triple, lam(f, "b^-1"), lam(f, "b"), Budget{8, 100000});
  CHECK(p.samples.size() == 17);  // radius-8 ball of <a>
  CHECK(p.exceptional.size() == 1);
  CHECK(p.exceptional[0] == f->g().identity());
  for (const auto& s : p.samples) {
    if (s.h == f->g().identity())
      CHECK(s.value == 1);
    else
      CHECK(s.value == 0);
  }
}

TEST_CASE("rotation decay is exactly periodic") {
  InstancePtr inst = rot();
  DecayProfile p =
      decay_profile(inst->triple, lam(inst, "(1,0)"), lam(inst, "(1,0)"), Budget{8, 100000});
  for (const auto& s : p.samples) {
    Elem::Int n = s.h.second().as_int();
    if ((n % 4 + 4) % 4 == 2)
      CHECK(s.value == 1);
    else
      CHECK(s.value == 0);
  }
  CHECK(p.exceptional.size() == 4);  // +-2, +-6 within radius 8
}

TEST_CASE("lamplighter decay profiles stabilize between radii") {
  InstancePtr w = find_instance("wreath-z2-z");
  GroupPtr g = w->triple.G;
  AlgebraElement x = AlgebraElement::zero(g);
  x.add_term(w->g().parse("{0}:0"), Coeff::one());
  x.add_term(w->g().parse("{0,1}:1"), Coeff::one());
  DecayProfile small = decay_profile(w->triple, x, x, Budget{4, 100000});
  DecayProfile large = decay_profile(w->triple, x, x, Budget{8, 100000});
  CHECK(same_elems(small.exceptional, large.exceptional));
  std::vector<Elem> expect{w->g().identity(), w->g().parse("{}:-1")};
  CHECK(same_elems(large.exceptional, expect));
}

TEST_CASE("decay enforces orthogonality to the middle subgroup") {
  InstancePtr f = find_instance("free-zz");
  CHECK_THROWS_AS(
      decay_profile(f->triple, lam(f, "a"), lam(f, "b"), Budget{4, 100000}), InputError);
  CHECK_THROWS_AS(
      decay_profile(f->triple, lam(f, "b"), lam(f, "e"), Budget{4, 100000}), InputError);
}

TEST_CASE("free product mixing check accepts junction-supported elements") {
  InstancePtr f = find_instance("free-zz");
  CHECK_NOTHROW(free_product_mixing_check(*f, lam(f, "b^-1"), lam(f, "b"), Budget{6, 100000}));
  CHECK_NOTHROW(
      free_product_mixing_check(*f, lam(f, "a b a^2"), lam(f, "b a"), Budget{6, 100000}));
  // support with no foreign letter is rejected by precondition
  CHECK_THROWS_AS(free_product_mixing_check(*f, lam(f, "a"), lam(f, "b"), Budget{6, 100000}),
                  InputError);
}

TEST_CASE("commutant counterexample on the rotation instance") {
  InstancePtr inst = rot();
  CounterexampleReport r =
      build_counterexample(*inst, Elem::tuple({1, 0}), Budget{});
  CHECK(r.f.size() == 4);
  CHECK(r.x.support_size() == 4);
  CHECK(r.selfadjoint);
  CHECK(r.orthogonal_to_k);
  CHECK(r.commutes_with_h_generators);
  CHECK(r.norm2 == 4);
  // the support is the full rotation orbit of e1 together with inverses
  const Group& g = inst->g();
  for (const char* lit : {"(1,0):0", "(0,1):0", "(-1,0):0", "(0,-1):0"})
    CHECK_FALSE(r.x.at(g.parse(lit)).is_zero());

  CounterexampleReport diag =
      build_counterexample(*inst, Elem::tuple({1, 1}), Budget{});
  CHECK(diag.f.size() == 4);
  CHECK(diag.norm2 == 4);
}

TEST_CASE("counterexample preconditions") {
  InstancePtr inst = rot();
  CHECK_THROWS_AS(build_counterexample(*inst, Elem::tuple({0, 0}), Budget{}), InputError);
  CHECK_THROWS_AS(
      build_counterexample(*find_instance("free-zz"), Elem::integer(1), Budget{}),
      InputError);
  // normalizer must certify before the construction is meaningful
  CHECK_THROWS_AS(
      build_counterexample(*find_instance("trivial-z2-z"), Elem::tuple({1, 0}), Budget{}),
      InputError);
}

TEST_CASE("hypothesis reports license the conclusion only when both certify") {
  HypothesisReport wre = corollary_hypotheses(*find_instance("wreath-z2-z"), Budget{});
  CHECK(wre.normalizer_verdict.status == Status::Holds);
  CHECK(wre.ss_verdict.status == Status::Holds);
  CHECK(wre.conclusion_licensed);
  CHECK(!wre.caveat.empty());

  HypothesisReport rot_r = corollary_hypotheses(*rot(), Budget{});
  CHECK(rot_r.normalizer_verdict.status == Status::Holds);
  CHECK(rot_r.ss_verdict.status == Status::Fails);
  CHECK_FALSE(rot_r.conclusion_licensed);
  // the caveat cites a concrete finite orbit seed
  CHECK(rot_r.caveat.find("orbit") != std::string::npos);

  HypothesisReport triv = corollary_hypotheses(*find_instance("trivial-z2-z"), Budget{});
  CHECK_FALSE(triv.conclusion_licensed);
}

TEST_CASE("decay profiles reject elements from a different group") {
  InstancePtr f = find_instance("free-zz");
  InstancePtr w = find_instance("wreath-z2-z");
  CHECK_THROWS_AS(decay_profile(f->triple, lam(w, "{0}:0"), lam(f, "b"), Budget{4, 100000}),
                  InputError);
}
