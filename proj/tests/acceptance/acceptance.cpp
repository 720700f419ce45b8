// Acceptance gate: one line per criterion, nonzero exit when any fails.
// Criteria pin exact values (hand-checked oracles) and wall-clock bounds.

#include <chrono>
#include <cstdio>
#include <exception>
#include <random>
#include <string>
#include <vector>

#include "mixlab/constructions.hpp"
#include "mixlab/report.hpp"

using namespace mixlab;

namespace {

int failures = 0;
using Clock = std::chrono::steady_clock;

void report(int num, const char* name, bool ok, double seconds) {
  std::printf("[%s] %02d %s (%.2fs)\n", ok ? "PASS" : "FAIL", num, name, seconds);
  if (!ok) ++failures;
}

template <class Fn>
void criterion(int num, const char* name, Fn&& fn) {
  auto start = Clock::now();
  bool ok = false;
  std::string err;
  try {
    ok = fn();
  } catch (const std::exception& e) {
    err = e.what();
  }
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  report(num, name, ok, secs);
  if (!err.empty()) std::printf("       threw: %s\n", err.c_str());
}

std::size_t pick(std::mt19937_64& r, std::size_t n) {
  return static_cast<std::size_t>(r() % n);
}

mpq_class small_rational(std::mt19937_64& r) {
  mpq_class q(static_cast<long>(r() % 7) - 3, static_cast<long>(r() % 3) + 1);
  q.canonicalize();
  return q;
}

AlgebraElement random_algebra(std::mt19937_64& r, GroupPtr g, const Ball& ball,
                              std::size_t max_terms) {
  AlgebraElement x = AlgebraElement::zero(g);
  std::size_t terms = 1 + pick(r, max_terms);
  for (std::size_t i = 0; i < terms; ++i)
    x.add_term(ball.elems[pick(r, ball.size())],
               Coeff(small_rational(r), small_rational(r)));
  return x;
}

bool algebra_laws() {
  auto start = Clock::now();
  auto r = std::mt19937_64(1001);
  int cases = 0;
  std::vector<GroupPtr> groups{lattice(1), lattice(2), find_instance("free-zz")->triple.G,
                               find_instance("rotation4")->triple.G};
  for (const auto& inst : builtin_instances()) groups.push_back(inst->triple.G);
  for (const GroupPtr& g : groups) {
    Ball ball = feasible_ball(*g, 2, 3000);
    for (int rep = 0; rep < 40; ++rep) {
      AlgebraElement x = random_algebra(r, g, ball, 4);
      AlgebraElement y = random_algebra(r, g, ball, 4);
      AlgebraElement z = random_algebra(r, g, ball, 4);
      if (!(convolve(convolve(x, y), z) == convolve(x, convolve(y, z)))) return false;
      if (!(convolve(x, y + z) == convolve(x, y) + convolve(x, z))) return false;
      if (!(adjoint(convolve(x, y)) == convolve(adjoint(y), adjoint(x)))) return false;
      if (!(adjoint(adjoint(x)) == x)) return false;
      if (!(trace(convolve(x, y)) == trace(convolve(y, x)))) return false;
      if (!(norm2_sq(x) == trace(convolve(adjoint(x), x)).re)) return false;
      if (norm2_sq(x) < 0) return false;
      cases += 3;  // three fresh seeded elements per round
    }
  }
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  return cases >= 200 && secs < 10.0;
}

bool cond_exp_contract() {
  auto r = std::mt19937_64(1002);
  int cases = 0;
  for (const auto& inst : builtin_instances()) {
    const Triple& t = inst->triple;
    Ball ball = feasible_ball(*t.G, 2, 3000);
    Ball hb = t.H.ball(2, 3000);
    for (int rep = 0; rep < 40; ++rep) {
      AlgebraElement x = random_algebra(r, t.G, ball, 4);
      AlgebraElement ex = cond_exp(x, t.H);
      for (const auto& [e, c] : ex.terms())
        if (!t.H.contains(e)) return false;
      if (!(cond_exp(ex, t.H) == ex)) return false;
      if (!(trace(ex) == trace(x))) return false;
      if (norm2_sq(ex) > norm2_sq(x)) return false;
      if (!(trace(convolve(adjoint(x - ex), ex)) == Coeff(0, 0))) return false;
      if (!(norm2_sq(x) == norm2_sq(ex) + norm2_sq(x - ex))) return false;
      AlgebraElement a = AlgebraElement::lambda(t.G, hb.elems[pick(r, hb.size())]);
      if (!(cond_exp(convolve(a, x), t.H) == convolve(a, ex))) return false;
      ++cases;
    }
  }
  return cases >= 200;
}

bool intertwining_identity() {
  auto r = std::mt19937_64(1003);
  for (const auto& inst : builtin_instances()) {
    const Triple& t = inst->triple;
    Ball ball = feasible_ball(*t.G, 2, 3000);
    Ball hb = t.H.ball(2, 3000);
    for (int rep = 0; rep < 100; ++rep) {
      AlgebraElement x = random_algebra(r, t.G, ball, 3);
      AlgebraElement y = random_algebra(r, t.G, ball, 3);
      AlgebraElement u = AlgebraElement::lambda(t.G, hb.elems[pick(r, hb.size())]);
      wahp_defect(x, y, u, t.H, t.K);  // throws on any mismatch
    }
  }
  return true;
}

bool commuting_squares() {
  auto r = std::mt19937_64(1004);
  InstancePtr f = find_instance("free-zz");
  auto fp = std::dynamic_pointer_cast<const FreeProductGroup>(f->triple.G);
  if (!fp) return false;
  Subgroup sa = fp->factor_subgroup(0);
  Subgroup sb = fp->factor_subgroup(1);
  Ball fb = feasible_ball(*f->triple.G, 2, 3000);
  for (int rep = 0; rep < 100; ++rep)
    if (!commuting_square_check(sa, sb, random_algebra(r, f->triple.G, fb, 4)))
      return false;

  InstancePtr rot = find_instance("rotation4");
  const Group& g = rot->g();
  Elem c = g.parse("(1,0):0");
  Subgroup conj = conjugate_subgroup(rot->triple.H, c);
  Ball rb = feasible_ball(g, 2, 3000);
  for (int rep = 0; rep < 100; ++rep)
    if (!commuting_square_check(rot->triple.H, conj,
                                random_algebra(r, rot->triple.G, rb, 4)))
      return false;
  return true;
}

bool lamplighter_sweep() {
  auto start = Clock::now();
  InstancePtr w = find_instance("wreath-z2-z");
  const Group& g = w->g();
  const Triple& t = w->triple;

  Verdict st = decide(*w, Condition::ST, Budget{});
  if (st.status != Status::Holds || st.method != Method::ClosedForm) return false;

  std::vector<Elem> pool;
  for (const Elem& x : feasible_ball(g, 4, 100000).elems)
    if (!t.K.contains(x)) pool.push_back(x);
  if (pool.size() != 35) return false;

  // generic intersection sets against a direct scan oracle
  Budget b{4, 100000};
  for (const Elem& x : pool) {
    IntersectionReport generic = intersection_set(*w, x, g.inv(x), b, true);
    std::vector<Elem> oracle;
    for (const Elem& gamma : feasible_ball(t.H, b.radius, b.element_cap).elems)
      if (t.H.contains(g.op(g.op(x, gamma), g.inv(x)))) oracle.push_back(gamma);
    if (generic.members.size() != oracle.size()) return false;
    for (std::size_t i = 0; i < oracle.size(); ++i)
      if (!(generic.members[i] == oracle[i])) return false;
  }

  // every F of size <= 3 drawn from the pool admits a certified witness
  Budget wb{6, 100000};
  auto certified = [&](std::vector<Elem> f) {
    auto o = ss_witness(*w, std::move(f), wb);
    return is_certified(o);
  };
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (!certified({pool[i]})) return false;
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      if (!certified({pool[i], pool[j]})) return false;
      for (std::size_t k = j + 1; k < pool.size(); ++k)
        if (!certified({pool[i], pool[j], pool[k]})) return false;
    }
  }
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  return secs < 60.0;
}

bool rotation_certificates() {
  InstancePtr rot = find_instance("rotation4");
  const Group& g = rot->g();
  const Triple& t = rot->triple;

  OrbitReport orbit = coset_orbit(t, g.parse("(1,0):0"), Budget{});
  if (orbit.status != OrbitReport::Status::Finite || orbit.reps.size() != 4) return false;
  // independent oracle: breadth-first over cosets with linear dedup
  std::vector<Elem> reps{g.parse("(1,0):0")};
  auto same = [&](const Elem& x, const Elem& y) { return t.K.contains(g.op(g.inv(x), y)); };
  std::vector<Elem> steps;
  for (const Elem& s : t.H.generators()) {
    steps.push_back(s);
    steps.push_back(g.inv(s));
  }
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (const Elem& s : steps) {
      Elem y = g.op(s, reps[i]);
      bool known = false;
      for (const Elem& x : reps) known = known || same(x, y);
      if (!known) reps.push_back(y);
      if (reps.size() > 16) return false;
    }
  if (reps.size() != 4) return false;

  if (fixed_vector_scan(t, Budget{3, 100000}).finite_orbits.empty()) return false;
  if (normalizer_check(*rot, Budget{}).status != Status::Holds) return false;

  Verdict ss = decide(*rot, Condition::SS, Budget{});
  if (ss.status != Status::Fails) return false;
  std::vector<Elem> expect{g.parse("(1,0):0"), g.parse("(0,1):0"), g.parse("(-1,0):0"),
                           g.parse("(0,-1):0")};
  const auto& got = ss.elem_sets.at("invariant_set");
  if (got.size() != 4) return false;
  for (const Elem& e : expect) {
    bool found = false;
    for (const Elem& x : got) found = found || x == e;
    if (!found) return false;
  }

  for (int radius : {3, 6, 9}) {
    StabilizerReport stab = st_via_action(*rot, Elem::tuple({1, 0}), Budget{radius, 100000});
    if (!stab.pattern || stab.pattern->period != 4 ||
        stab.pattern->residues != std::vector<Elem::Int>{0})
      return false;
    std::vector<Elem> expect_members;  // multiples of 4 in integer ball order
    for (Elem::Int n : {0, 1, -1, 2, -2, 3, -3, 4, -4, 5, -5, 6, -6, 7, -7, 8, -8, 9, -9})
      if ((n < 0 ? -n : n) <= radius && n % 4 == 0) expect_members.push_back(Elem::integer(n));
    if (stab.members.size() != expect_members.size()) return false;
    for (std::size_t i = 0; i < expect_members.size(); ++i)
      if (!(stab.members[i] == expect_members[i])) return false;
  }
  return true;
}

bool commutant_counterexample() {
  InstancePtr rot = find_instance("rotation4");
  const Group& g = rot->g();
  CounterexampleReport r = build_counterexample(*rot, Elem::tuple({1, 0}), Budget{});
  if (r.x.support_size() != 4) return false;
  if (!(adjoint(r.x) == r.x)) return false;
  if (!cond_exp(r.x, rot->triple.K).is_zero()) return false;
  if (!commutator(r.x, AlgebraElement::lambda(rot->triple.G, g.parse("(0,0):1"))).is_zero())
    return false;
  return norm2_sq(r.x) == 4 && r.selfadjoint && r.orthogonal_to_k &&
         r.commutes_with_h_generators;
}

bool decay_profiles() {
  Budget wide{20, 200000};
  InstancePtr f = find_instance("free-zz");
  GroupPtr fg = f->triple.G;
  DecayProfile pf = decay_profile(f->triple, AlgebraElement::lambda(fg, fg->parse("b^-1")),
                                  AlgebraElement::lambda(fg, fg->parse("b")), wide);
  if (pf.samples.size() != 41) return false;  // |n| <= 20
  if (pf.exceptional.size() != 1 || !(pf.exceptional[0] == fg->identity())) return false;

  InstancePtr rot = find_instance("rotation4");
  GroupPtr rg = rot->triple.G;
  DecayProfile pr =
      decay_profile(rot->triple, AlgebraElement::lambda(rg, rg->parse("(1,0):0")),
                    AlgebraElement::lambda(rg, rg->parse("(1,0):0")), wide);
  for (const auto& s : pr.samples) {
    Elem::Int n = s.h.second().as_int();
    bool hit = ((n % 4) + 4) % 4 == 2;
    if (hit && !(s.value == 1)) return false;
    if (!hit && !(s.value == 0)) return false;
  }

  InstancePtr w = find_instance("wreath-z2-z");
  GroupPtr wg = w->triple.G;
  AlgebraElement x = AlgebraElement::zero(wg);
  x.add_term(w->g().parse("{0}:0"), Coeff::one());
  x.add_term(w->g().parse("{0,1}:1"), Coeff::one());
  DecayProfile p4 = decay_profile(w->triple, x, x, Budget{4, 100000});
  DecayProfile p8 = decay_profile(w->triple, x, x, Budget{8, 100000});
  if (p4.exceptional.size() != p8.exceptional.size()) return false;
  for (std::size_t i = 0; i < p4.exceptional.size(); ++i)
    if (!(p4.exceptional[i] == p8.exceptional[i])) return false;
  return true;
}

bool quasi_normalizers() {
  InstancePtr f = find_instance("free-zz");
  const Group& g = f->g();
  QNReport outside = qn_membership(f->triple, g.parse("b"), Budget{});
  if (outside.kind != QNReport::Kind::IndexAtLeast) return false;
  if (outside.count < Budget{}.radius) return false;

  QNReport inside = qn_membership(f->triple, g.parse("a^3"), Budget{});
  if (inside.kind != QNReport::Kind::InQN || inside.count != 1 ||
      inside.reps.size() != 1 || !inside.cover_verified)
    return false;

  GroupPtr l = lattice(2);
  Subgroup h(l, "Zx0", [](const Elem& x) { return x.as_tuple()[1] == 0; },
             {Elem::tuple({1, 0})});
  Triple t{l, h, h, "", {}};
  for (const Elem& x : feasible_ball(*l, 3, 5000).elems) {
    QNReport r = qn_membership(t, x, Budget{4, 100000});
    if (r.kind != QNReport::Kind::InQN || r.count != 1 || r.reps.size() != 1 ||
        !r.cover_verified)
      return false;
  }
  return true;
}

bool condition_hierarchy() {
  for (const auto& inst : builtin_instances()) {
    Verdict st = decide(*inst, Condition::ST, Budget{});
    Verdict ss = decide(*inst, Condition::SS, Budget{});
    if (st.status == Status::Holds && ss.status != Status::Holds) return false;
  }
  InstancePtr f = find_instance("free-zz");
  if (malnormality_scan(*f, Budget{}).status != Status::Holds) return false;
  if (decide(*f, Condition::ST, Budget{}).status != Status::Holds) return false;

  Verdict pss = decide(*find_instance("prod-wreath2"), Condition::SS, Budget{});
  return pss.status == Status::Holds && pss.rule == "product-componentwise";
}

bool reproducible_reports() {
  auto first = repro_suite();
  auto second = repro_suite();
  if (first.size() != second.size()) return false;
  for (std::size_t i = 0; i < first.size(); ++i)
    if (first[i].first != second[i].first || first[i].second != second[i].second)
      return false;
  std::string witness_body;
  for (const auto& [name, body] : first) {
    std::string why;
    if (!verify_report(body, &why)) {
      std::printf("       %s: %s\n", name.c_str(), why.c_str());
      return false;
    }
    if (name.find("03-check-ss-wreath-set") != std::string::npos) witness_body = body;
  }
  // a mutated witness must be rejected
  Json j = Json::parse(witness_body);
  j["outcome"]["witness"]["h"] = "{}:0";
  std::string why;
  if (verify_report(j.dump(2) + "\n", &why)) return false;
  return !why.empty();
}

}  // namespace

int main() {
  criterion(1, "exact *-algebra laws on seeded elements", algebra_laws);
  criterion(2, "conditional expectation contract", cond_exp_contract);
  criterion(3, "intertwining identity never splits", intertwining_identity);
  criterion(4, "independent subalgebras give commuting squares", commuting_squares);
  criterion(5, "lamplighter sweep: closed forms, oracles, witnesses", lamplighter_sweep);
  criterion(6, "rotation certificates and finite orbits", rotation_certificates);
  criterion(7, "commutant counterexample checks out exactly", commutant_counterexample);
  criterion(8, "decay profiles match the predicted exceptional sets", decay_profiles);
  criterion(9, "quasi-normalizer membership with verified covers", quasi_normalizers);
  criterion(10, "condition hierarchy and product composition", condition_hierarchy);
  criterion(11, "reports replay byte-identically and reject tampering", reproducible_reports);
  if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
