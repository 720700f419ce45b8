#include "mixlab/experiments.hpp"

#include <algorithm>
#include <unordered_map>

namespace mixlab {

namespace {

void require_orthogonal(const Triple& t, const AlgebraElement& x, const Subgroup& s,
                        const char* who, const char* target) {
  AlgebraElement rest = cond_exp(x, s);
  if (rest.is_zero()) return;
  throw InputError(std::string(who) + " is not orthogonal to " + target +
                   "; offending support element: " +
                   t.G->format(rest.terms().begin()->first));
}

mpq_class sample_value(const Triple& t, const AlgebraElement& x, const AlgebraElement& y,
                       const Elem& h) {
  AlgebraElement mid = convolve(convolve(x, AlgebraElement::lambda(t.G, h)), y);
  return norm2_sq(cond_exp(mid, t.H));
}

}  // namespace

DecayProfile decay_profile(const Triple& t, const AlgebraElement& x,
                           const AlgebraElement& y, const Budget& b) {
  if (x.group() != t.G || y.group() != t.G)
    throw InputError("x and y must live over the instance group");
  require_orthogonal(t, x, t.K, "x", "K");
  require_orthogonal(t, y, t.K, "y", "K");

  Ball hb = feasible_ball(t.H, b.radius, b.element_cap);
  DecayProfile out{x, y, {}, {}, hb.radius, b};
  out.samples.reserve(hb.size());
  for (const auto& h : hb.elems) {
    mpq_class v = sample_value(t, x, y, h);
    if (v != 0) out.exceptional.push_back(h);
    out.samples.push_back(DecaySample{h, std::move(v)});
  }
  return out;
}

DecayProfile free_product_mixing_check(const Instance& inst, const AlgebraElement& x,
                                       const AlgebraElement& y, const Budget& b) {
  if (!inst.free_data)
    throw InputError("free-product mixing check needs a free-product instance");
  const Triple& t = inst.triple;
  if (x.group() != t.G || y.group() != t.G)
    throw InputError("x and y must live over the instance group");
  const auto& fg = *inst.free_data->g;
  const int fac = inst.free_data->factor;

  // every support word must carry at least one letter of the other factor
  for (const auto* el : {&x, &y}) {
    for (const auto& [w, c] : el->terms()) {
      bool foreign = false;
      for (const auto& letter : w.as_word()) foreign = foreign || letter.factor != fac;
      if (!foreign)
        throw InputError(std::string(el == &x ? "x" : "y") +
                         " has a support word inside the factor: " + t.G->format(w));
    }
  }
  if (!attest_infinite(t.H, 64, b))
    throw InputError("H did not attest as infinite within budget");

  // junction calculus: u a^n v falls back into the factor only when n kills
  // the boundary exponents, so the exceptional set lives in this candidate
  // list
  std::vector<Elem> predicted;
  for (const auto& [u, cu] : x.terms()) {
    for (const auto& [v, cv] : y.terms()) {
      const auto& wu = u.as_word();
      const auto& wv = v.as_word();
      Elem::Int s =
          (!wu.empty() && wu.back().factor == fac) ? wu.back().syllable.as_int() : 0;
      Elem::Int tt =
          (!wv.empty() && wv.front().factor == fac) ? wv.front().syllable.as_int() : 0;
      Elem cand = fg.embed(fac, Elem::integer(-s - tt));
      if (std::find(predicted.begin(), predicted.end(), cand) == predicted.end())
        predicted.push_back(cand);
    }
  }

  Ball hb = feasible_ball(t.H, b.radius, b.element_cap);
  DecayProfile out{x, y, {}, {}, hb.radius, b};
  out.samples.reserve(hb.size());
  for (const auto& h : hb.elems) {
    mpq_class v = sample_value(t, x, y, h);
    if (v != 0) {
      if (std::find(predicted.begin(), predicted.end(), h) == predicted.end())
        throw ConsistencyError("nonzero sample outside the predicted junction set at " +
                               t.G->format(h));
      out.exceptional.push_back(h);
    }
    out.samples.push_back(DecaySample{h, std::move(v)});
  }
  return out;
}

CounterexampleReport build_counterexample(const Instance& inst, const Elem& a0,
                                          const Budget& b) {
  if (!inst.semidirect)
    throw InputError("counterexample construction needs a semidirect instance");
  const Triple& t = inst.triple;
  const auto& sg = *inst.semidirect->g;
  if (a0 == sg.base()->identity())
    throw InputError("a0 must be a nonidentity element of the base group");

  Verdict nv = normalizer_check(inst, b);
  if (nv.status != Status::Holds)
    throw InputError("the construction requires the certified normalizer condition; "
                     "got status '" +
                     std::string(to_string(nv.status)) + "'");

  // orbit of a0 under the acting subgroup, breadth first
  std::vector<Elem> steps;
  for (const auto& s : inst.semidirect->h_in_top.generators()) {
    if (std::find(steps.begin(), steps.end(), s) == steps.end()) steps.push_back(s);
    Elem si = sg.top()->inv(s);
    if (std::find(steps.begin(), steps.end(), si) == steps.end()) steps.push_back(si);
  }
  std::vector<Elem> orbit{a0};
  std::unordered_map<Elem, std::size_t, ElemHash> seen{{a0, 0}};
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    for (const auto& s : steps) {
      Elem img = sg.action().apply(s, orbit[i]);
      if (seen.emplace(img, orbit.size()).second) {
        orbit.push_back(img);
        if (static_cast<std::int64_t>(orbit.size()) > b.element_cap)
          throw InputError("the orbit of a0 did not close within the element cap");
      }
    }
  }

  std::vector<Elem> support = orbit;
  for (const auto& p : orbit) {
    Elem q = sg.base()->inv(p);
    if (std::find(support.begin(), support.end(), q) == support.end()) support.push_back(q);
  }

  AlgebraElement x = AlgebraElement::zero(t.G);
  for (const auto& p : support)
    x.add_term(Elem::pair(p, sg.top()->identity()), Coeff::one());

  CounterexampleReport rep{t.instance_id, a0, {}, std::move(x), false, false, false,
                           0,             b};
  for (const auto& p : orbit) rep.f.push_back(Elem::pair(p, sg.top()->identity()));

  rep.selfadjoint = adjoint(rep.x) == rep.x;
  rep.orthogonal_to_k = cond_exp(rep.x, t.K).is_zero();
  rep.commutes_with_h_generators = true;
  for (const auto& hgen : t.H.generators())
    rep.commutes_with_h_generators =
        rep.commutes_with_h_generators &&
        commutator(rep.x, AlgebraElement::lambda(t.G, hgen)).is_zero();
  if (!rep.selfadjoint || !rep.orthogonal_to_k || !rep.commutes_with_h_generators)
    throw ConsistencyError("a finite-orbit element failed its defining checks");
  rep.norm2 = norm2_sq(rep.x);
  return rep;
}

HypothesisReport corollary_hypotheses(const Instance& inst, const Budget& b) {
  if (!inst.semidirect)
    throw InputError("hypothesis report needs a semidirect instance");
  const Triple& t = inst.triple;

  HypothesisReport rep{t.instance_id, normalizer_check(inst, b),
                       decide(inst, Condition::SS, b), false, "", b};
  rep.conclusion_licensed = rep.normalizer_verdict.status == Status::Holds &&
                            rep.ss_verdict.status == Status::Holds;
  rep.caveat =
      "the operator-algebra conclusion (the normalizer of the small algebra "
      "generates exactly the middle algebra) is imported on the strength of the "
      "certified combinatorial conditions, not re-proved here";
  if (!rep.conclusion_licensed) {
    rep.caveat += "; on this instance the hypotheses are not certified, so nothing "
                  "is claimed about the normalizer";
    FixedVectorReport fv = fixed_vector_scan(t, b);
    if (!fv.finite_orbits.empty()) {
      const OrbitReport& orb = fv.finite_orbits.front();
      rep.caveat += "; moreover the coset orbit of " + t.G->format(orb.seed) +
                    " is finite (" + std::to_string(orb.size()) +
                    " cosets), which yields a selfadjoint element orthogonal to the "
                    "middle algebra commuting with the small one: the middle algebra "
                    "is strictly smaller than the normalizer closure";
    }
  }
  return rep;
}

}  // namespace mixlab
