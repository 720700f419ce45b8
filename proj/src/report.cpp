#include "mixlab/report.hpp"

#include <algorithm>
#include <sstream>

namespace mixlab {

namespace {

std::string rational_str(const mpq_class& q) { return q.get_str(); }

mpq_class rational_from(const std::string& s) {
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw InputError("bad rational literal '" + s + "'");
  q.canonicalize();
  return q;
}

Json elems_json(const Group& g, const std::vector<Elem>& v) {
  Json arr = Json::array();
  for (const auto& x : v) arr.push_back(g.format(x));
  return arr;
}

std::vector<Elem> elems_from(const Group& g, const Json& arr) {
  std::vector<Elem> out;
  for (const auto& s : arr) out.push_back(g.parse(s.get<std::string>()));
  return out;
}

}  // namespace

Json budget_json(const Budget& b) {
  return Json{{"element_cap", b.element_cap}, {"radius", b.radius}};
}

Budget budget_from_json(const Json& j) {
  Budget b;
  b.radius = j.at("radius").get<int>();
  b.element_cap = j.at("element_cap").get<std::int64_t>();
  if (b.radius < 0 || b.element_cap <= 0) throw InputError("budget out of range");
  return b;
}

Json pattern_json(const ResiduePattern& p) {
  return Json{{"period", p.period}, {"residues", p.residues}, {"text", p.str()}};
}

Json algebra_json(const Group& g, const AlgebraElement& x) {
  Json terms = Json::array();
  for (const auto& [e, c] : x.terms())
    terms.push_back(Json{{"g", g.format(e)},
                         {"im", rational_str(c.im)},
                         {"re", rational_str(c.re)}});
  return Json{{"terms", terms}};
}

AlgebraElement algebra_from_json(GroupPtr g, const Json& j) {
  AlgebraElement x = AlgebraElement::zero(g);
  for (const auto& t : j.at("terms"))
    x.add_term(g->parse(t.at("g").get<std::string>()),
               Coeff(rational_from(t.at("re").get<std::string>()),
                     rational_from(t.at("im").get<std::string>())));
  return x;
}

Json verdict_json(const Group& g, const Verdict& v) {
  Json elems = Json::object();
  for (const auto& [name, e] : v.elems) elems[name] = g.format(e);
  Json sets = Json::object();
  for (const auto& [name, vec] : v.elem_sets) sets[name] = elems_json(g, vec);
  Json out{{"kind", "verdict"},
           {"condition", to_string(v.condition)},
           {"status", to_string(v.status)},
           {"method", to_string(v.method)},
           {"rule", v.rule},
           {"elems", elems},
           {"elem_sets", sets},
           {"note", v.note}};
  if (v.pattern) out["pattern"] = pattern_json(*v.pattern);
  return out;
}

Json ss_outcome_json(const Group& g, const SearchOutcome<SSWitness>& o) {
  if (is_certified(o)) {
    const SSWitness& w = certificate_of(o);
    Json witness{{"f", elems_json(g, w.f)}, {"h", g.format(w.h)}, {"checked", w.checked}};
    if (w.g) witness["g"] = g.format(*w.g);
    return Json{{"kind", "certified"}, {"witness", witness}};
  }
  if (is_refuted(o)) {
    const auto& r = std::get<RefutedWithin>(o);
    return Json{{"kind", "refuted"},
                {"rule", r.evidence.rule},
                {"elements", elems_json(g, r.evidence.elements)},
                {"note", r.evidence.note}};
  }
  const auto& inc = std::get<Inconclusive>(o);
  return Json{{"kind", "inconclusive"}, {"note", inc.note}};
}

Json exceptional_json(const Group& g, const ExceptionalSet& e) {
  Json hits = Json::array();
  for (const auto& h : e.hits)
    hits.push_back(Json{{"h", g.format(h.h)},
                        {"f1", g.format(h.f1)},
                        {"f2", g.format(h.f2)}});
  Json out{{"kind", "exceptional"}, {"f", elems_json(g, e.f)},
           {"hits", hits},          {"complete", e.complete},
           {"rule", e.rule},        {"note", e.note},
           {"ball_checked", e.ball_checked}};
  if (e.pattern) out["pattern"] = pattern_json(*e.pattern);
  return out;
}

Json qn_json(const Group& g, const QNReport& r) {
  return Json{{"kind", "qn"},
              {"g", g.format(r.g)},
              {"membership", r.kind == QNReport::Kind::InQN ? "in-qn" : "index-at-least"},
              {"reps", elems_json(g, r.reps)},
              {"count", r.count},
              {"cover_verified", r.cover_verified},
              {"ball_checked", r.ball_checked}};
}

Json orbit_json(const Group& g, const OrbitReport& r) {
  return Json{
      {"kind", "orbit"},
      {"seed", g.format(r.seed)},
      {"status", r.status == OrbitReport::Status::Finite ? "finite" : "growing-at-budget"},
      {"reps", elems_json(g, r.reps)},
      {"depth_reached", r.depth_reached}};
}

Json decay_json(const Group& g, const DecayProfile& p) {
  Json samples = Json::array();
  for (const auto& s : p.samples)
    samples.push_back(Json{{"h", g.format(s.h)}, {"value", rational_str(s.value)}});
  return Json{{"kind", "decay"},
              {"x", algebra_json(g, p.x)},
              {"y", algebra_json(g, p.y)},
              {"samples", samples},
              {"exceptional", elems_json(g, p.exceptional)},
              {"ball_checked", p.ball_checked}};
}

std::string decay_tsv(const Group& g, const DecayProfile& p) {
  std::ostringstream out;
  out << "index\th\tnumerator\tdenominator\n";
  for (std::size_t i = 0; i < p.samples.size(); ++i)
    out << i << '\t' << g.format(p.samples[i].h) << '\t'
        << p.samples[i].value.get_num().get_str() << '\t'
        << p.samples[i].value.get_den().get_str() << '\n';
  return out.str();
}

Json counterexample_json(const Instance& inst, const CounterexampleReport& r) {
  if (!inst.semidirect) throw InputError("counterexample report needs a semidirect instance");
  const Group& g = *inst.triple.G;
  return Json{{"kind", "counterexample"},
              {"a0", inst.semidirect->g->base()->format(r.a0)},
              {"f", elems_json(g, r.f)},
              {"x", algebra_json(g, r.x)},
              {"selfadjoint", r.selfadjoint},
              {"orthogonal_to_k", r.orthogonal_to_k},
              {"commutes_with_h_generators", r.commutes_with_h_generators},
              {"norm2", rational_str(r.norm2)}};
}

Json hypothesis_json(const Instance& inst, const HypothesisReport& r) {
  const Group& g = *inst.triple.G;
  return Json{{"kind", "hypotheses"},
              {"normalizer", verdict_json(g, r.normalizer_verdict)},
              {"ss", verdict_json(g, r.ss_verdict)},
              {"conclusion_licensed", r.conclusion_licensed},
              {"caveat", r.caveat}};
}

Json envelope(const std::string& instance_id, const std::string& command,
              const Json& args, const Budget& b, Json outcome) {
  return Json{{"schema_version", kSchemaVersion},
              {"command", command},
              {"instance", instance_id},
              {"args", args},
              {"budget", budget_json(b)},
              {"outcome", std::move(outcome)}};
}

std::string render(const Json& j) { return j.dump(2) + "\n"; }

// ---- certificate replay ----------------------------------------------------

namespace {

struct ReplayFail {
  std::string reason;
};

[[noreturn]] void fail(std::string reason) { throw ReplayFail{std::move(reason)}; }

void need(bool ok, const char* what) {
  if (!ok) fail(what);
}

ResiduePattern pattern_from(const Json& j) {
  ResiduePattern p;
  p.period = j.at("period").get<Elem::Int>();
  p.residues = j.at("residues").get<std::vector<Elem::Int>>();
  if (p.period < 1) fail("pattern period must be positive");
  for (Elem::Int r : p.residues)
    if (r < 0 || r >= p.period) fail("pattern residue out of range");
  return p;
}

// base parts of a G-embedded set over a semidirect product
std::vector<Elem> base_parts(const SemidirectGroup& sg, const std::vector<Elem>& v) {
  std::vector<Elem> out;
  for (const auto& x : v) {
    if (!(x.second() == sg.top()->identity()))
      fail("embedded element carries a nonidentity top part");
    out.push_back(x.first());
  }
  return out;
}

// the full invariant-set certificate: identity-free, inverse-closed, closed
// under the generator action, and disjoint from K once embedded
void replay_invariant_set(const Instance& inst, const std::vector<Elem>& embedded) {
  need(!embedded.empty(), "invariant set is empty");
  need(inst.semidirect && inst.semidirect->h_is_full_top,
       "invariant-set certificate needs H equal to the acting group");
  const auto& sg = *inst.semidirect->g;
  for (const auto& x : embedded)
    need(!inst.triple.K.contains(x), "invariant set meets K");
  std::vector<Elem> pts = base_parts(sg, embedded);
  auto inside = [&pts](const Elem& p) {
    return std::find(pts.begin(), pts.end(), p) != pts.end();
  };
  for (const auto& p : pts) {
    need(!(p == sg.base()->identity()), "invariant set contains the identity");
    need(inside(sg.base()->inv(p)), "invariant set is not closed under inversion");
    for (const auto& s : inst.semidirect->h_in_top.generators()) {
      need(inside(sg.action().apply(s, p)), "invariant set is not action-closed");
      need(inside(sg.action().apply(sg.top()->inv(s), p)),
           "invariant set is not action-closed under inverses");
    }
  }
}

void replay_ss_witness(const Instance& inst, const Json& out) {
  const Group& G = *inst.triple.G;
  const Json& w = out.at("witness");
  std::vector<Elem> f = elems_from(G, w.at("f"));
  Elem h = G.parse(w.at("h").get<std::string>());
  need(!f.empty(), "witness F is empty");
  for (const auto& x : f) need(!inst.triple.K.contains(x), "F meets K");
  need(inst.triple.H.contains(h), "witness h is not in H");
  if (w.contains("g")) {
    Elem g = G.parse(w.at("g").get<std::string>());
    need(!inst.triple.K.contains(g), "one-sided g lies in K");
    for (const auto& f1 : f)
      need(!inst.triple.H.contains(G.op(G.op(f1, h), g)), "f h g lands in H");
    return;
  }
  for (const auto& f1 : f)
    for (const auto& f2 : f)
      need(!inst.triple.H.contains(G.op(G.op(f1, h), f2)), "f1 h f2 lands in H");
}

// refutations are re-derived deterministically and compared to the record
void replay_ss_refuted(const Instance& inst, const Json& j, bool one_sided) {
  const Group& G = *inst.triple.G;
  const Json& args = j.at("args");
  std::vector<Elem> f = elems_from(G, args.at("set"));
  Budget b = budget_from_json(j.at("budget"));
  SearchOutcome<SSWitness> redo =
      one_sided ? wss_witness(inst, f, G.parse(args.at("g").get<std::string>()), b)
                : ss_witness(inst, f, b);
  need(is_refuted(redo), "re-derivation did not refute");
  const auto& ev = std::get<RefutedWithin>(redo).evidence;
  const Json& out = j.at("outcome");
  need(out.at("rule").get<std::string>() == ev.rule, "refutation rule mismatch");
  Json expect = elems_json(G, ev.elements);
  need(out.at("elements") == expect, "refutation elements mismatch");
}

void replay_verdict(const Instance& inst, const Json& v, const Budget& b);

void replay_ss_or_wss(const Instance& inst, const Json& j) {
  const Json& out = j.at("outcome");
  std::string kind = out.at("kind").get<std::string>();
  if (kind == "certified") {
    replay_ss_witness(inst, out);
  } else if (kind == "refuted") {
    replay_ss_refuted(inst, j, j.at("command").get<std::string>() == "check-wss");
  } else if (kind == "inconclusive") {
    // nothing is claimed
  } else if (kind == "verdict") {
    replay_verdict(inst, out, budget_from_json(j.at("budget")));
  } else {
    fail("unknown outcome kind '" + kind + "'");
  }
}

void replay_exceptional(const Instance& inst, const Json& out, const Budget& b) {
  const Group& G = *inst.triple.G;
  std::vector<Elem> f = elems_from(G, out.at("f"));
  need(!f.empty(), "F is empty");
  for (const auto& x : f) need(!inst.triple.K.contains(x), "F meets K");
  auto in_f = [&f](const Elem& x) { return std::find(f.begin(), f.end(), x) != f.end(); };
  auto collides = [&](const Elem& h) -> bool {
    for (const auto& f1 : f)
      for (const auto& f2 : f)
        if (inst.triple.H.contains(G.op(G.op(f1, h), f2))) return true;
    return false;
  };

  std::vector<Elem> recorded;
  for (const auto& hit : out.at("hits")) {
    Elem h = G.parse(hit.at("h").get<std::string>());
    Elem f1 = G.parse(hit.at("f1").get<std::string>());
    Elem f2 = G.parse(hit.at("f2").get<std::string>());
    need(inst.triple.H.contains(h), "hit h is not in H");
    need(in_f(f1) && in_f(f2), "hit pair is not drawn from F");
    need(inst.triple.H.contains(G.op(G.op(f1, h), f2)), "recorded hit does not collide");
    recorded.push_back(h);
  }

  if (out.contains("pattern")) {
    ResiduePattern pat = pattern_from(out.at("pattern"));
    need(inst.semidirect && inst.semidirect->h_is_full_top,
         "pattern certificate needs a semidirect instance");
    const auto& sg = *inst.semidirect->g;
    auto top_elem = [&sg](Elem::Int n) {
      return Elem::pair(sg.base()->identity(), Elem::integer(n));
    };
    for (Elem::Int r : pat.residues) {
      need(collides(top_elem(r)), "pattern residue does not collide");
      need(collides(top_elem(r + pat.period)), "pattern residue does not recur");
    }
    for (Elem::Int n = 0; n < pat.period; ++n)
      if (!pat.matches(n))
        need(!collides(top_elem(n)), "collision outside the recorded pattern");
  }

  // a small rescan must agree with the record on the ball it covers
  int stored_radius = out.at("ball_checked").get<int>();
  bool complete = out.at("complete").get<bool>();
  int r = complete ? 3 : std::min(3, stored_radius);
  Ball hb = feasible_ball(inst.triple.H, r, b.element_cap);
  for (const auto& h : hb.elems) {
    if (!collides(h)) continue;
    bool known = std::find(recorded.begin(), recorded.end(), h) != recorded.end();
    if (!known && out.contains("pattern") && inst.semidirect) {
      ResiduePattern pat = pattern_from(out.at("pattern"));
      known = pat.matches(h.second().as_int());
    }
    need(known, "rescan found a collision the record misses");
  }
}

void replay_verdict(const Instance& inst, const Json& v, const Budget& b) {
  const Triple& t = inst.triple;
  const Group& G = *t.G;
  Condition cond = condition_from(v.at("condition").get<std::string>());
  Status status = status_from(v.at("status").get<std::string>());
  if (status == Status::Undetermined) return;  // nothing is claimed
  std::string rule = v.at("rule").get<std::string>();
  auto elem = [&](const char* name) {
    return G.parse(v.at("elems").at(name).get<std::string>());
  };
  auto elem_set = [&](const char* name) {
    return elems_from(G, v.at("elem_sets").at(name));
  };

  if (cond == Condition::NormalizerEqualsK) {
    if (status == Status::Fails) {
      Elem a = elem("a");
      need(!t.K.contains(a), "normalizing element lies in K");
      need(inst.semidirect.has_value(), "normalizer witness needs a semidirect instance");
      const auto& sg = *inst.semidirect->g;
      Elem base = a.first();
      need(!(base == sg.base()->identity()), "witness base part is the identity");
      for (const auto& s : inst.semidirect->h_in_top.generators())
        need(sg.action().apply(s, base) == base, "witness is moved by a generator");
      return;
    }
    if (rule == "translation-moves-support") {
      need(t.has_tag("translation-wreath") && inst.wreath_data &&
               inst.wreath_data->torsion_free_top,
           "rule premises missing");
      return;
    }
    if (rule == "integral-matrix-fixed-space") {
      need(t.has_tag("finite-order-matrix") && inst.matrix_data &&
               inst.matrix_data->det_m_minus_id != 0,
           "rule premises missing");
      return;
    }
    fail("unknown normalizer rule '" + rule + "'");
  }

  if (cond == Condition::Malnormal) {
    if (status == Status::Fails) {
      Elem g = elem("g");
      Elem gamma = elem("gamma");
      need(!t.K.contains(g), "g lies in K");
      need(!(gamma == G.identity()), "gamma is the identity");
      need(t.H.contains(gamma), "gamma is not in H");
      need(t.H.contains(G.op(G.op(G.inv(g), gamma), g)), "gamma leaves gHg^-1");
      return;
    }
    need(rule == "free-factor-malnormal" && t.has_tag("free-product") && inst.free_data,
         "unknown malnormality rule or missing premises");
    return;
  }

  if (cond == Condition::SS) {
    if (status == Status::Holds) {
      if (rule == "st-and-infinite") {
        need(attest_infinite(t.H, 64, b), "H did not attest as infinite");
        bool st_premise = (t.has_tag("translation-wreath") && inst.wreath_data &&
                           inst.wreath_data->torsion_free_top) ||
                          (t.has_tag("free-product") && inst.free_data);
        need(st_premise, "no finite-stabilizer premise on this instance");
        return;
      }
      if (rule == "product-componentwise") {
        need(inst.factors.first && inst.factors.second, "instance is not a product");
        need(decide(*inst.factors.first, Condition::SS, b).status == Status::Holds,
             "left factor does not certify");
        need(decide(*inst.factors.second, Condition::SS, b).status == Status::Holds,
             "right factor does not certify");
        return;
      }
      fail("unknown ss rule '" + rule + "'");
    }
    // Fails
    if (rule == "finite-orbit-invariant-set") {
      replay_invariant_set(inst, elem_set("invariant_set"));
      return;
    }
    if (rule == "finite-orbit-invariant") {
      // re-derive the permutation analysis from the recorded F
      std::vector<Elem> f = elem_set("f");
      auto redo = ss_witness(inst, f, b);
      need(is_refuted(redo), "re-derivation did not refute");
      const auto& ev = std::get<RefutedWithin>(redo).evidence;
      need(elems_json(G, ev.elements) == v.at("elem_sets").at("invariant_set"),
           "invariant set mismatch");
      return;
    }
    if (rule == "product-factor-failure") {
      need(inst.factors.first && inst.factors.second, "instance is not a product");
      std::vector<Elem> lifted = elem_set("invariant_set");
      need(!lifted.empty(), "lifted invariant set is empty");
      const Instance& i1 = *inst.factors.first;
      const Instance& i2 = *inst.factors.second;
      bool left = true, right = true;
      for (const auto& x : lifted) {
        left = left && x.second() == i2.triple.G->identity();
        right = right && x.first() == i1.triple.G->identity();
      }
      need(left || right, "lifted set is not supported in one factor");
      const Instance& side = left ? i1 : i2;
      std::vector<Elem> projected;
      for (const auto& x : lifted) projected.push_back(left ? x.first() : x.second());
      replay_invariant_set(side, projected);
      return;
    }
    fail("unknown ss failure rule '" + rule + "'");
  }

  // Condition::ST
  if (status == Status::Holds) {
    if (rule == "translation-stabilizer-trivial") {
      need(t.has_tag("translation-wreath") && inst.wreath_data &&
               inst.wreath_data->torsion_free_top,
           "rule premises missing");
      need(attest_infinite(t.H, 64, b), "H did not attest as infinite");
      return;
    }
    if (rule == "free-factor-junction" || rule == "malnormal-implies-st") {
      need(t.has_tag("free-product") && inst.free_data, "rule premises missing");
      if (rule == "malnormal-implies-st")
        need(t.has_tag("malnormal-factor"), "malnormal tag missing");
      need(attest_infinite(t.H, 64, b), "H did not attest as infinite");
      return;
    }
    fail("unknown st rule '" + rule + "'");
  }
  // ST Fails
  if (rule == "finite-order-residues") {
    need(inst.semidirect && inst.matrix_data && inst.matrix_data->order > 0,
         "rule premises missing");
    const auto& sg = *inst.semidirect->g;
    ResiduePattern pat = pattern_from(v.at("pattern"));
    need(!pat.empty(), "empty pattern proves nothing");
    Elem a = elem("a");
    Elem base = a.first();
    need(!(base == sg.base()->identity()), "a is the identity");
    for (Elem::Int r : pat.residues) {
      need(sg.action().apply(Elem::integer(r), base) == base, "residue does not fix a");
      need(sg.action().apply(Elem::integer(r + pat.period), base) == base,
           "residue does not recur");
    }
    return;
  }
  if (rule == "trivial-action") {
    need(t.has_tag("trivial-action") && inst.semidirect, "rule premises missing");
    const auto& sg = *inst.semidirect->g;
    Ball ab = feasible_ball(*sg.base(), 2, b.element_cap);
    for (const auto& x : ab.elems)
      for (const auto& s : inst.semidirect->h_in_top.generators())
        need(sg.action().apply(s, x) == x, "the action moves a base element");
    return;
  }
  if (rule == "product-second-factor-stabilizer") {
    need(inst.factors.first && inst.factors.second, "instance is not a product");
    Elem g = elem("g");
    need(!t.K.contains(g), "g lies in K");
    std::vector<Elem> sample = elem_set("members_sample");
    need(!sample.empty(), "empty stabilizer sample");
    bool nonidentity = false;
    for (const auto& m : sample) {
      need(t.H.contains(m), "sample member is not in H");
      need(t.H.contains(G.op(G.op(G.inv(g), m), g)), "sample member leaves E(g^-1,g)");
      nonidentity = nonidentity || !(m == G.identity());
    }
    need(nonidentity, "sample is only the identity");
    need(attest_infinite(inst.factors.second->triple.H, 64, b),
         "second-factor H did not attest as infinite");
    return;
  }
  fail("unknown st failure rule '" + rule + "'");
}

void replay_qn(const Instance& inst, const Json& out, const Budget& b) {
  const Triple& t = inst.triple;
  const Group& G = *t.G;
  Elem g = G.parse(out.at("g").get<std::string>());
  Elem gi = G.inv(g);
  std::vector<Elem> reps = elems_from(G, out.at("reps"));
  need(!reps.empty(), "empty representative list");
  need(out.at("count").get<std::int64_t>() == static_cast<std::int64_t>(reps.size()),
       "count disagrees with the representative list");
  auto in_d = [&](const Elem& x) {
    return t.H.contains(x) && t.H.contains(G.op(G.op(gi, x), g));
  };
  for (const auto& u : reps) need(t.H.contains(u), "representative is not in H");
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (std::size_t j = i + 1; j < reps.size(); ++j)
      need(!in_d(G.op(G.inv(reps[i]), reps[j])), "representatives share a coset");
  std::string membership = out.at("membership").get<std::string>();
  if (membership == "in-qn") {
    need(out.at("cover_verified").get<bool>(), "in-qn without a verified cover");
    Ball hb = feasible_ball(t.H, std::min(3, b.radius), b.element_cap);
    for (const auto& x : hb.elems) {
      bool covered = false;
      for (const auto& u : reps)
        covered = covered || t.H.contains(G.op(G.op(gi, G.op(G.inv(u), x)), g));
      need(covered, "cover misses a ball element");
    }
  } else if (membership != "index-at-least") {
    fail("unknown qn membership '" + membership + "'");
  }
}

void replay_orbit(const Instance& inst, const Json& out) {
  const Triple& t = inst.triple;
  const Group& G = *t.G;
  Elem seed = G.parse(out.at("seed").get<std::string>());
  need(!t.K.contains(seed), "seed lies in K");
  std::vector<Elem> reps = elems_from(G, out.at("reps"));
  need(!reps.empty(), "empty orbit");
  auto same_coset = [&](const Elem& x, const Elem& y) {
    return t.K.contains(G.op(G.inv(x), y));
  };
  bool seed_found = false;
  for (const auto& r : reps) seed_found = seed_found || same_coset(r, seed);
  need(seed_found, "seed coset missing from the orbit");
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (std::size_t j = i + 1; j < reps.size(); ++j)
      need(!same_coset(reps[i], reps[j]), "representatives share a coset");
  if (out.at("status").get<std::string>() == "finite") {
    // closure under every generator step proves the orbit complete
    std::vector<Elem> steps;
    for (const auto& s : t.H.generators()) {
      steps.push_back(s);
      steps.push_back(G.inv(s));
    }
    need(!steps.empty(), "H has no declared generators");
    for (const auto& r : reps) {
      for (const auto& s : steps) {
        Elem img = G.op(s, r);
        bool found = false;
        for (const auto& r2 : reps) found = found || same_coset(r2, img);
        need(found, "orbit is not closed under the generators");
      }
    }
  }
}

void replay_decay(const Instance& inst, const Json& out) {
  const Triple& t = inst.triple;
  AlgebraElement x = algebra_from_json(t.G, out.at("x"));
  AlgebraElement y = algebra_from_json(t.G, out.at("y"));
  need(cond_exp(x, t.K).is_zero(), "x is not orthogonal to K");
  need(cond_exp(y, t.K).is_zero(), "y is not orthogonal to K");
  std::vector<Elem> nonzero;
  for (const auto& s : out.at("samples")) {
    Elem h = t.G->parse(s.at("h").get<std::string>());
    need(t.H.contains(h), "sample point is not in H");
    AlgebraElement mid = convolve(convolve(x, AlgebraElement::lambda(t.G, h)), y);
    mpq_class v = norm2_sq(cond_exp(mid, t.H));
    need(v == rational_from(s.at("value").get<std::string>()), "sample value mismatch");
    if (v != 0) nonzero.push_back(h);
  }
  need(elems_json(*t.G, nonzero) == out.at("exceptional"),
       "exceptional set disagrees with the nonzero samples");
}

void replay_counterexample(const Instance& inst, const Json& out, const Budget& b) {
  need(inst.semidirect != std::nullopt, "counterexample needs a semidirect instance");
  const Triple& t = inst.triple;
  const auto& sg = *inst.semidirect->g;
  Elem a0 = sg.base()->parse(out.at("a0").get<std::string>());
  std::vector<Elem> f = elems_from(*t.G, out.at("f"));
  need(!f.empty(), "empty orbit");
  AlgebraElement x = algebra_from_json(t.G, out.at("x"));
  need(out.at("selfadjoint").get<bool>() && out.at("orthogonal_to_k").get<bool>() &&
           out.at("commutes_with_h_generators").get<bool>(),
       "report admits a failed check");
  need(adjoint(x) == x, "x is not selfadjoint");
  need(cond_exp(x, t.K).is_zero(), "x is not orthogonal to K");
  for (const auto& hgen : t.H.generators())
    need(commutator(x, AlgebraElement::lambda(t.G, hgen)).is_zero(),
         "x does not commute with an H generator");
  need(norm2_sq(x) == rational_from(out.at("norm2").get<std::string>()),
       "norm mismatch");
  // the recorded orbit must contain a0, stay inside the support of x, and be
  // closed under the generator action
  bool seed_found = false;
  std::vector<Elem> bases = base_parts(sg, f);
  for (const auto& p : bases) seed_found = seed_found || p == a0;
  need(seed_found, "a0 missing from its own orbit");
  auto inside = [&bases](const Elem& p) {
    return std::find(bases.begin(), bases.end(), p) != bases.end();
  };
  for (const auto& p : bases) {
    need(!x.at(Elem::pair(p, sg.top()->identity())).is_zero(),
         "orbit point missing from the support of x");
    for (const auto& s : inst.semidirect->h_in_top.generators()) {
      need(inside(sg.action().apply(s, p)), "orbit is not action-closed");
      need(inside(sg.action().apply(sg.top()->inv(s), p)),
           "orbit is not action-closed under inverses");
    }
  }
  (void)b;
}

void replay_hypotheses(const Instance& inst, const Json& out, const Budget& b) {
  const Json& nv = out.at("normalizer");
  const Json& sv = out.at("ss");
  need(nv.at("condition").get<std::string>() == "normalizer", "wrong inner condition");
  need(sv.at("condition").get<std::string>() == "ss", "wrong inner condition");
  replay_verdict(inst, nv, b);
  replay_verdict(inst, sv, b);
  bool licensed = nv.at("status").get<std::string>() == "holds" &&
                  sv.at("status").get<std::string>() == "holds";
  need(out.at("conclusion_licensed").get<bool>() == licensed,
       "licensing disagrees with the verdicts");
}

}  // namespace

bool verify_report(const std::string& text, std::string* why) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("report is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("schema_version") || !j.contains("command") ||
      !j.contains("instance") || !j.contains("outcome") || !j.contains("budget"))
    throw InputError("report is missing envelope fields");
  if (!j.at("schema_version").is_number_integer())
    throw InputError("schema_version must be an integer");
  int version = j.at("schema_version").get<int>();
  if (version > kSchemaVersion)
    throw InputError("report schema_version " + std::to_string(version) +
                     " is newer than supported " + std::to_string(kSchemaVersion));

  // envelope-level problems (unknown instance, unknown command, bad budget)
  // are structural and throw; only payload replays degrade to false
  if (!j.at("command").is_string() || !j.at("instance").is_string())
    throw InputError("command and instance must be strings");
  InstancePtr inst = find_instance(j.at("instance").get<std::string>());
  Budget b = budget_from_json(j.at("budget"));
  std::string cmd = j.at("command").get<std::string>();
  static const char* known[] = {"check-ss",  "check-st",       "check-wss",
                                "check-malnormal", "check-normalizer", "qn",
                                "orbit",     "decay",          "counterexample",
                                "corollary"};
  bool cmd_known = false;
  for (const char* k : known) cmd_known = cmd_known || cmd == k;
  if (!cmd_known) throw InputError("unknown report command '" + cmd + "'");

  try {
    const Json& out = j.at("outcome");
    std::string kind = out.at("kind").get<std::string>();

    if (cmd == "check-ss" || cmd == "check-wss") {
      replay_ss_or_wss(*inst, j);
    } else if (cmd == "check-st") {
      if (kind == "exceptional")
        replay_exceptional(*inst, out, b);
      else if (kind == "verdict")
        replay_verdict(*inst, out, b);
      else
        fail("unknown outcome kind '" + kind + "'");
    } else if (cmd == "check-malnormal" || cmd == "check-normalizer") {
      need(kind == "verdict", "expected a verdict outcome");
      replay_verdict(*inst, out, b);
    } else if (cmd == "qn") {
      need(kind == "qn", "expected a qn outcome");
      replay_qn(*inst, out, b);
    } else if (cmd == "orbit") {
      need(kind == "orbit", "expected an orbit outcome");
      replay_orbit(*inst, out);
    } else if (cmd == "decay") {
      need(kind == "decay", "expected a decay outcome");
      replay_decay(*inst, out);
    } else if (cmd == "counterexample") {
      need(kind == "counterexample", "expected a counterexample outcome");
      replay_counterexample(*inst, out, b);
    } else if (cmd == "corollary") {
      need(kind == "hypotheses", "expected a hypotheses outcome");
      replay_hypotheses(*inst, out, b);
    }
  } catch (const ReplayFail& f) {
    if (why) *why = f.reason;
    return false;
  } catch (const Json::exception& e) {
    if (why) *why = std::string("payload structure: ") + e.what();
    return false;
  } catch (const InputError& e) {
    // tampered payloads surface as parse or membership failures
    if (why) *why = e.what();
    return false;
  }
  if (why) why->clear();
  return true;
}

// ---- the fixed reproduction suite -------------------------------------------

namespace {

struct ReproEntry {
  std::string name;
  std::string body;
};

std::string run_check(const char* id, Condition c, const Budget& b) {
  InstancePtr inst = find_instance(id);
  Verdict v = decide(*inst, c, b);
  std::string cmd = std::string("check-") + to_string(c);
  return render(envelope(id, cmd, Json::object(), b, verdict_json(*inst->triple.G, v)));
}

std::string run_check_set(const char* id, Condition c, const std::vector<std::string>& set,
                          const Budget& b) {
  InstancePtr inst = find_instance(id);
  const Group& G = *inst->triple.G;
  std::vector<Elem> f;
  for (const auto& s : set) f.push_back(G.parse(s));
  Json args{{"set", Json::array()}};
  for (const auto& x : f) args["set"].push_back(G.format(x));
  if (c == Condition::SS) {
    auto o = ss_witness(*inst, f, b);
    return render(envelope(id, "check-ss", args, b, ss_outcome_json(G, o)));
  }
  ExceptionalSet e = st_exceptional(*inst, f, b);
  return render(envelope(id, "check-st", args, b, exceptional_json(G, e)));
}

std::string run_wss(const char* id, const std::vector<std::string>& set,
                    const std::string& g_text, const Budget& b) {
  InstancePtr inst = find_instance(id);
  const Group& G = *inst->triple.G;
  std::vector<Elem> f;
  for (const auto& s : set) f.push_back(G.parse(s));
  Elem g = G.parse(g_text);
  Json args{{"set", Json::array()}, {"g", G.format(g)}};
  for (const auto& x : f) args["set"].push_back(G.format(x));
  auto o = wss_witness(*inst, f, g, b);
  return render(envelope(id, "check-wss", args, b, ss_outcome_json(G, o)));
}

std::string run_simple(const char* id, const char* cmd, const Budget& b) {
  InstancePtr inst = find_instance(id);
  const Group& G = *inst->triple.G;
  if (std::string(cmd) == "check-malnormal")
    return render(
        envelope(id, cmd, Json::object(), b, verdict_json(G, malnormality_scan(*inst, b))));
  return render(
      envelope(id, cmd, Json::object(), b, verdict_json(G, normalizer_check(*inst, b))));
}

std::string run_qn(const char* id, const std::string& g_text, const Budget& b) {
  InstancePtr inst = find_instance(id);
  const Group& G = *inst->triple.G;
  Elem g = G.parse(g_text);
  QNReport r = qn_membership(inst->triple, g, b);
  return render(envelope(id, "qn", Json{{"g", G.format(g)}}, b, qn_json(G, r)));
}

std::string run_orbit(const char* id, const std::string& g_text, const Budget& b) {
  InstancePtr inst = find_instance(id);
  const Group& G = *inst->triple.G;
  Elem g = G.parse(g_text);
  OrbitReport r = coset_orbit(inst->triple, g, b);
  return render(envelope(id, "orbit", Json{{"g", G.format(g)}}, b, orbit_json(G, r)));
}

std::string run_decay(const char* id, const std::string& x_text, const std::string& y_text,
                      const Budget& b) {
  InstancePtr inst = find_instance(id);
  const Group& G = *inst->triple.G;
  AlgebraElement x = AlgebraElement::lambda(inst->triple.G, G.parse(x_text));
  AlgebraElement y = AlgebraElement::lambda(inst->triple.G, G.parse(y_text));
  DecayProfile p = decay_profile(inst->triple, x, y, b);
  Json args{{"x", G.format(G.parse(x_text))}, {"y", G.format(G.parse(y_text))}};
  return render(envelope(id, "decay", args, b, decay_json(G, p)));
}

std::string run_counterexample(const char* id, const std::string& a0_text, const Budget& b) {
  InstancePtr inst = find_instance(id);
  if (!inst->semidirect) throw InputError("counterexample needs a semidirect instance");
  Elem a0 = inst->semidirect->g->base()->parse(a0_text);
  CounterexampleReport r = build_counterexample(*inst, a0, b);
  Json args{{"a0", inst->semidirect->g->base()->format(a0)}};
  return render(envelope(id, "counterexample", args, b, counterexample_json(*inst, r)));
}

std::string run_corollary(const char* id, const Budget& b) {
  InstancePtr inst = find_instance(id);
  HypothesisReport r = corollary_hypotheses(*inst, b);
  return render(envelope(id, "corollary", Json::object(), b, hypothesis_json(*inst, r)));
}

}  // namespace

std::vector<std::pair<std::string, std::string>> repro_suite() {
  const Budget b{};           // radius 6, default cap
  const Budget wide{20, b.element_cap};
  std::vector<std::pair<std::string, std::string>> out;
  auto add = [&out](std::string name, std::string body) {
    out.emplace_back(std::move(name), std::move(body));
  };

  add("01-check-st-wreath-z2-z.json", run_check("wreath-z2-z", Condition::ST, b));
  add("02-check-ss-wreath-z2-z.json", run_check("wreath-z2-z", Condition::SS, b));
  add("03-check-ss-wreath-set.json",
      run_check_set("wreath-z2-z", Condition::SS, {"{0}"}, b));
  add("04-check-st-wreath-set.json",
      run_check_set("wreath-z2-z", Condition::ST, {"{0}"}, b));
  add("05-check-st-rotation4.json", run_check("rotation4", Condition::ST, b));
  add("06-check-ss-rotation4.json", run_check("rotation4", Condition::SS, b));
  add("07-check-ss-rotation4-set.json",
      run_check_set("rotation4", Condition::SS, {"(1,0)", "(0,1)", "(-1,0)", "(0,-1)"}, b));
  add("08-check-st-rotation4-set.json",
      run_check_set("rotation4", Condition::ST, {"(1,0)"}, b));
  add("09-check-ss-free-zz.json", run_check("free-zz", Condition::SS, b));
  add("10-check-st-free-zz.json", run_check("free-zz", Condition::ST, b));
  add("11-check-st-free-zz-set.json",
      run_check_set("free-zz", Condition::ST, {"b", "b^-1"}, b));
  add("12-check-wss-free-zz.json", run_wss("free-zz", {"b"}, "b", b));
  add("13-check-malnormal-free-zz.json", run_simple("free-zz", "check-malnormal", b));
  add("14-check-malnormal-rotation4.json", run_simple("rotation4", "check-malnormal", b));
  add("15-check-normalizer-wreath.json", run_simple("wreath-z2-z", "check-normalizer", b));
  add("16-check-normalizer-rotation4.json", run_simple("rotation4", "check-normalizer", b));
  add("17-check-normalizer-trivial.json",
      run_simple("trivial-z2-z", "check-normalizer", b));
  add("18-check-ss-f2-cyclic.json", run_check("f2-cyclic", Condition::SS, b));
  add("19-check-st-f2-cyclic.json", run_check("f2-cyclic", Condition::ST, b));
  add("20-check-ss-prod-wreath2.json", run_check("prod-wreath2", Condition::SS, b));
  add("21-check-st-prod-wreath2.json", run_check("prod-wreath2", Condition::ST, b));
  add("22-check-ss-trivial-z2-z.json", run_check("trivial-z2-z", Condition::SS, b));
  add("23-check-st-trivial-z2-z.json", run_check("trivial-z2-z", Condition::ST, b));
  add("24-qn-free-zz-b.json", run_qn("free-zz", "b", b));
  add("25-qn-free-zz-a3.json", run_qn("free-zz", "a^3", b));
  add("26-qn-rotation4.json", run_qn("rotation4", "(1,0)", b));
  add("27-orbit-rotation4.json", run_orbit("rotation4", "(1,0)", b));
  add("28-decay-free-zz.json", run_decay("free-zz", "b^-1", "b", wide));
  add("29-decay-rotation4.json", run_decay("rotation4", "(1,0)", "(1,0)", wide));
  add("30-counterexample-rotation4.json", run_counterexample("rotation4", "1,0", b));
  add("31-corollary-wreath-z2-z.json", run_corollary("wreath-z2-z", b));
  add("32-corollary-rotation4.json", run_corollary("rotation4", b));
  add("33-corollary-trivial-z2-z.json", run_corollary("trivial-z2-z", b));
  return out;
}

}  // namespace mixlab
