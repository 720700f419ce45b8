#include "mixlab/certs.hpp"

#include <algorithm>
#include <unordered_map>
#include <utility>

namespace mixlab {

const char* to_string(Condition c) {
  switch (c) {
    case Condition::SS: return "ss";
    case Condition::ST: return "st";
    case Condition::WSS: return "wss";
    case Condition::Malnormal: return "malnormal";
    case Condition::NormalizerEqualsK: return "normalizer";
  }
  return "?";
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Holds: return "holds";
    case Status::Fails: return "fails";
    case Status::Undetermined: return "undetermined";
  }
  return "?";
}

const char* to_string(Method m) {
  return m == Method::ClosedForm ? "closed-form" : "generic-search";
}

Condition condition_from(std::string_view s) {
  for (Condition c : {Condition::SS, Condition::ST, Condition::WSS, Condition::Malnormal,
                      Condition::NormalizerEqualsK})
    if (s == to_string(c)) return c;
  throw InputError("unknown condition '" + std::string(s) + "'");
}

Status status_from(std::string_view s) {
  for (Status v : {Status::Holds, Status::Fails, Status::Undetermined})
    if (s == to_string(v)) return v;
  throw InputError("unknown status '" + std::string(s) + "'");
}

Method method_from(std::string_view s) {
  for (Method m : {Method::GenericSearch, Method::ClosedForm})
    if (s == to_string(m)) return m;
  throw InputError("unknown method '" + std::string(s) + "'");
}

std::vector<Elem> ExceptionalSet::exceptional() const {
  std::vector<Elem> out;
  out.reserve(hits.size());
  for (const auto& hit : hits) out.push_back(hit.h);
  return out;
}

namespace {

std::string format_set(const Group& g, const std::vector<Elem>& v) {
  std::string out;
  for (const auto& x : v) {
    if (!out.empty()) out += "; ";
    out += g.format(x);
  }
  return out;
}

void push_unique(std::vector<Elem>& v, const Elem& x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

void validate_f(const Triple& t, const std::vector<Elem>& f) {
  if (f.empty()) throw InputError("F must be nonempty");
  std::vector<Elem> bad;
  for (const auto& x : f)
    if (t.K.contains(x)) bad.push_back(x);
  if (!bad.empty())
    throw InputError("F must avoid K; offending elements: " + format_set(*t.G, bad));
}

std::vector<Elem> step_elems(const Group& g, const std::vector<Elem>& gens) {
  std::vector<Elem> steps;
  for (const auto& s : gens) {
    push_unique(steps, s);
    push_unique(steps, g.inv(s));
  }
  return steps;
}

// ---- finite orbit closures under the acting group --------------------------

// Closure of `seeds` under the permutations a -> act(step, a); one index
// permutation per step.  nullopt when the closure exceeds the cap.
struct Closure {
  std::vector<Elem> points;  // discovery order
  std::vector<std::vector<std::size_t>> step_perms;
  std::unordered_map<Elem, std::size_t, ElemHash> index;
};

std::optional<Closure> orbit_closure(const Action& act, const std::vector<Elem>& steps,
                                     const std::vector<Elem>& seeds, std::int64_t cap) {
  Closure c;
  auto add = [&c](const Elem& x) -> bool {
    if (c.index.emplace(x, c.points.size()).second) {
      c.points.push_back(x);
      return true;
    }
    return false;
  };
  for (const auto& s : seeds) add(s);
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    for (const auto& s : steps) {
      add(act.apply(s, c.points[i]));
      if (static_cast<std::int64_t>(c.points.size()) > cap) return std::nullopt;
    }
  }
  c.step_perms.reserve(steps.size());
  for (const auto& s : steps) {
    std::vector<std::size_t> p(c.points.size());
    for (std::size_t i = 0; i < c.points.size(); ++i)
      p[i] = c.index.at(act.apply(s, c.points[i]));
    c.step_perms.push_back(std::move(p));
  }
  return c;
}

// All permutations of the closure induced by the acting subgroup: the group
// generated by the step permutations.  nullopt when it exceeds the cap.
std::optional<std::vector<std::vector<std::size_t>>> induced_permutations(
    const std::vector<std::vector<std::size_t>>& gens, std::size_t n, std::int64_t cap) {
  std::vector<std::vector<std::size_t>> all;
  std::vector<std::size_t> id(n);
  for (std::size_t i = 0; i < n; ++i) id[i] = i;
  all.push_back(id);
  auto seen = [&all](const std::vector<std::size_t>& q) {
    return std::find(all.begin(), all.end(), q) != all.end();
  };
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (const auto& g : gens) {
      std::vector<std::size_t> next(n);
      for (std::size_t j = 0; j < n; ++j) next[j] = g[all[i][j]];
      if (!seen(next)) {
        all.push_back(std::move(next));
        if (static_cast<std::int64_t>(all.size()) > cap) return std::nullopt;
      }
    }
  }
  return all;
}

// Detect whether, for every permutation the acting group can induce on the
// orbit closure of the sources, some (target, source) pair collides:
// q(source) == target.  If so the budgeted search was exhaustive in
// disguise: no h can work.  If a collision-free permutation exists a
// witness exists, and scanning |Q| more levels is guaranteed to reach one.
struct InvariantAnalysis {
  bool refuted = false;
  std::vector<Elem> closure_points;
  int witness_radius = 0;  // radius guaranteed to contain a witness
};

std::optional<InvariantAnalysis> analyze_invariant(
    const SemidirectGroup& sg, const Subgroup& h_top, const std::vector<Elem>& sources,
    const std::vector<std::vector<Elem>>& target_sets, const Budget& b) {
  // target_sets[i] lists, for source i, the values q(source_i) must avoid
  const std::vector<Elem> steps = step_elems(*sg.top(), h_top.generators());
  auto closure = orbit_closure(sg.action(), steps, sources, b.element_cap);
  if (!closure) return std::nullopt;
  auto perms = induced_permutations(closure->step_perms, closure->points.size(),
                                    b.element_cap);
  if (!perms) return std::nullopt;

  bool some_free = false;
  for (const auto& q : *perms) {
    bool collide = false;
    for (std::size_t i = 0; i < sources.size() && !collide; ++i) {
      const Elem& img = closure->points[q[closure->index.at(sources[i])]];
      for (const auto& tgt : target_sets[i]) {
        if (img == tgt) {
          collide = true;
          break;
        }
      }
    }
    if (!collide) {
      some_free = true;
      break;
    }
  }
  InvariantAnalysis out;
  out.closure_points = closure->points;
  out.refuted = !some_free;
  out.witness_radius =
      std::max(b.radius, static_cast<int>(std::min<std::size_t>(perms->size() + 1, 10000)));
  return out;
}

Elem embed_base(const SemidirectGroup& sg, const Elem& a) {
  return Elem::pair(a, sg.top()->identity());
}

Elem embed_top(const SemidirectGroup& sg, const Elem& k) {
  return Elem::pair(sg.base()->identity(), k);
}

// first nonidentity element of the base-group ball, in ball order
Elem first_base_star(const SemidirectGroup& sg, const Budget& b) {
  Ball ab = feasible_ball(*sg.base(), std::max(1, b.radius), b.element_cap);
  for (const auto& a : ab.elems)
    if (!(a == sg.base()->identity())) return a;
  throw InputError("base group ball has no nonidentity element");
}

Verdict make_verdict(Condition c, Status s, Method m, std::string rule, std::string note,
                     const Budget& b) {
  Verdict v{c, s, m, std::move(rule), {}, {}, {}, std::move(note), b};
  return v;
}

}  // namespace

// ---- witness searches ------------------------------------------------------

SearchOutcome<SSWitness> ss_witness(const Instance& inst, std::vector<Elem> f,
                                    const Budget& b) {
  const Triple& t = inst.triple;
  const Group& G = *t.G;
  validate_f(t, f);

  auto ok = [&](const Elem& h) {
    for (const auto& f1 : f)
      for (const auto& f2 : f)
        if (t.H.contains(G.op(G.op(f1, h), f2))) return false;
    return true;
  };

  Ball hb = feasible_ball(t.H, b.radius, b.element_cap);
  for (const auto& h : hb.elems)
    if (ok(h)) return Certified<SSWitness>{SSWitness{std::move(f), h, {}, true}};

  if (inst.semidirect && inst.semidirect->h_is_full_top) {
    const auto& sg = *inst.semidirect->g;
    // f1 (0,n) f2 lands in H iff alpha_{k1 n}(a2) = a1^-1, i.e. the induced
    // permutation q = alpha_n sends a2 to alpha_{k1^-1}(a1^-1)
    std::vector<Elem> sources;
    for (const auto& x : f) sources.push_back(x.first());
    std::vector<Elem> targets;
    for (const auto& x : f)
      targets.push_back(
          sg.action().apply(sg.top()->inv(x.second()), sg.base()->inv(x.first())));
    std::vector<std::vector<Elem>> target_sets(sources.size(), targets);
    auto analysis =
        analyze_invariant(sg, inst.semidirect->h_in_top, sources, target_sets, b);
    if (analysis) {
      if (analysis->refuted) {
        std::vector<Elem> evidence;
        for (const auto& x : analysis->closure_points) evidence.push_back(embed_base(sg, x));
        return RefutedWithin{
            b, Refutation{"finite-orbit-invariant", std::move(evidence),
                          "the orbit closure of the F base parts is finite and every "
                          "permutation the acting group induces on it maps some base part "
                          "onto a forbidden target, so F h F meets H for every h"}};
      }
      Ball big = feasible_ball(t.H, analysis->witness_radius, b.element_cap);
      for (const auto& h : big.elems)
        if (ok(h)) return Certified<SSWitness>{SSWitness{std::move(f), h, {}, true}};
      throw ConsistencyError("invariant analysis promised an ss witness but none was found");
    }
  }

  if (inst.factors.first && inst.factors.second) {
    // componentwise: a pair can only land in H when both components stay on
    // their K side; witnesses for the outside-K projections kill those pairs
    const Instance& i1 = *inst.factors.first;
    const Instance& i2 = *inst.factors.second;
    std::vector<Elem> p1, p2;
    for (const auto& x : f) {
      if (!i1.triple.K.contains(x.first())) push_unique(p1, x.first());
      if (!i2.triple.K.contains(x.second())) push_unique(p2, x.second());
    }
    Elem h1 = i1.triple.G->identity();
    Elem h2 = i2.triple.G->identity();
    if (!p1.empty()) {
      auto o1 = ss_witness(i1, p1, b);
      if (!is_certified(o1))
        return Inconclusive{b, "left factor projection did not certify"};
      h1 = certificate_of(o1).h;
    }
    if (!p2.empty()) {
      auto o2 = ss_witness(i2, p2, b);
      if (!is_certified(o2))
        return Inconclusive{b, "right factor projection did not certify"};
      h2 = certificate_of(o2).h;
    }
    Elem h = Elem::pair(h1, h2);
    if (!ok(h))
      throw ConsistencyError("componentwise ss witnesses failed to combine");
    return Certified<SSWitness>{SSWitness{std::move(f), h, {}, true}};
  }

  return Inconclusive{b, "H-ball of radius " + std::to_string(hb.radius) + " exhausted"};
}

SearchOutcome<SSWitness> wss_witness(const Instance& inst, std::vector<Elem> f,
                                     const Elem& g, const Budget& b) {
  const Triple& t = inst.triple;
  const Group& G = *t.G;
  validate_f(t, f);
  if (t.K.contains(g)) throw InputError("the one-sided element g must avoid K");

  auto ok = [&](const Elem& h) {
    for (const auto& f1 : f)
      if (t.H.contains(G.op(G.op(f1, h), g))) return false;
    return true;
  };

  Ball hb = feasible_ball(t.H, b.radius, b.element_cap);
  for (const auto& h : hb.elems)
    if (ok(h)) return Certified<SSWitness>{SSWitness{std::move(f), h, g, true}};

  if (inst.semidirect && inst.semidirect->h_is_full_top) {
    const auto& sg = *inst.semidirect->g;
    std::vector<Elem> sources{g.first()};
    std::vector<Elem> targets;
    for (const auto& x : f)
      targets.push_back(
          sg.action().apply(sg.top()->inv(x.second()), sg.base()->inv(x.first())));
    std::vector<std::vector<Elem>> target_sets{targets};
    auto analysis =
        analyze_invariant(sg, inst.semidirect->h_in_top, sources, target_sets, b);
    if (analysis) {
      if (analysis->refuted) {
        std::vector<Elem> evidence;
        for (const auto& x : analysis->closure_points) evidence.push_back(embed_base(sg, x));
        return RefutedWithin{
            b, Refutation{"finite-orbit-invariant", std::move(evidence),
                          "every permutation induced on the finite orbit closure of g's "
                          "base part maps it onto a forbidden target, so F h g meets H "
                          "for every h"}};
      }
      Ball big = feasible_ball(t.H, analysis->witness_radius, b.element_cap);
      for (const auto& h : big.elems)
        if (ok(h)) return Certified<SSWitness>{SSWitness{std::move(f), h, g, true}};
      throw ConsistencyError("invariant analysis promised a wss witness but none was found");
    }
  }

  return Inconclusive{b, "H-ball of radius " + std::to_string(hb.radius) + " exhausted"};
}

ExceptionalSet st_exceptional(const Instance& inst, std::vector<Elem> f, const Budget& b) {
  const Triple& t = inst.triple;
  const Group& G = *t.G;
  validate_f(t, f);

  auto first_hit = [&](const Elem& h) -> std::optional<std::pair<Elem, Elem>> {
    for (const auto& f1 : f)
      for (const auto& f2 : f)
        if (t.H.contains(G.op(G.op(f1, h), f2))) return std::make_pair(f1, f2);
    return std::nullopt;
  };

  // closed forms compute every collision exactly from the pair data
  if (t.has_tag("translation-wreath") && inst.semidirect &&
      inst.semidirect->h_is_full_top) {
    const auto& sg = *inst.semidirect->g;
    std::vector<std::pair<Elem::Int, std::pair<Elem, Elem>>> found;
    for (const auto& f1 : f) {
      for (const auto& f2 : f) {
        // the shift must align the support minima (see intersection_set)
        auto min_pt = [](const Elem& m) {
          const auto& es = m.as_map();
          Elem::Int best = es.front().first.as_int();
          for (const auto& [p, v] : es) best = std::min(best, p.as_int());
          return best;
        };
        Elem::Int n = min_pt(f1.first()) - min_pt(f2.first()) - f1.second().as_int();
        Elem h = embed_top(sg, Elem::integer(n));
        if (!t.H.contains(G.op(G.op(f1, h), f2))) continue;
        bool dup = false;
        for (const auto& [m, pr] : found) dup = dup || m == n;
        if (!dup) found.emplace_back(n, std::make_pair(f1, f2));
      }
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& c) {
      return Elem::integer(a.first) < Elem::integer(c.first);
    });
    ExceptionalSet out{std::move(f), {}, true,          {}, "translation-wreath-alignment",
                       "",           0,  b};
    for (auto& [n, pr] : found)
      out.hits.push_back(ExceptionalHit{embed_top(sg, Elem::integer(n)), pr.first, pr.second});
    return out;
  }

  if (t.has_tag("free-product") && inst.free_data) {
    const auto& fg = *inst.free_data->g;
    int fac = inst.free_data->factor;
    std::vector<std::pair<Elem::Int, std::pair<Elem, Elem>>> found;
    for (const auto& f1 : f) {
      for (const auto& f2 : f) {
        const auto& w1 = f1.as_word();
        const auto& w2 = f2.as_word();
        Elem::Int s =
            (!w1.empty() && w1.back().factor == fac) ? w1.back().syllable.as_int() : 0;
        Elem::Int tt =
            (!w2.empty() && w2.front().factor == fac) ? w2.front().syllable.as_int() : 0;
        Elem::Int n = -s - tt;
        Elem h = fg.embed(fac, Elem::integer(n));
        if (!t.H.contains(G.op(G.op(f1, h), f2))) continue;
        bool dup = false;
        for (const auto& [m, pr] : found) dup = dup || m == n;
        if (!dup) found.emplace_back(n, std::make_pair(f1, f2));
      }
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& c) {
      return Elem::integer(a.first) < Elem::integer(c.first);
    });
    ExceptionalSet out{std::move(f), {}, true, {}, "free-factor-junction", "", 0, b};
    for (auto& [n, pr] : found)
      out.hits.push_back(
          ExceptionalHit{fg.embed(fac, Elem::integer(n)), pr.first, pr.second});
    return out;
  }

  Ball hb = feasible_ball(t.H, b.radius, b.element_cap);
  std::vector<ExceptionalHit> hits;
  for (const auto& h : hb.elems)
    if (auto pr = first_hit(h)) hits.push_back(ExceptionalHit{h, pr->first, pr->second});

  if (inst.semidirect && inst.semidirect->h_is_full_top && inst.matrix_data &&
      t.has_tag("finite-order-matrix") && inst.matrix_data->order > 0) {
    // union of the per-pair residue classes of n with alpha_{k1+n}(a2) = a1^-1
    const auto& sg = *inst.semidirect->g;
    Elem::Int p = inst.matrix_data->order;
    std::vector<Elem::Int> residues;
    for (const auto& f1 : f) {
      for (const auto& f2 : f) {
        Elem neg_a1 = sg.base()->inv(f1.first());
        Elem::Int k1 = f1.second().as_int();
        for (Elem::Int r = 0; r < p; ++r)
          if (sg.action().apply(Elem::integer(r), f2.first()) == neg_a1) {
            Elem::Int res = ((r - k1) % p + p) % p;
            if (std::find(residues.begin(), residues.end(), res) == residues.end())
              residues.push_back(res);
          }
      }
    }
    std::sort(residues.begin(), residues.end());
    if (residues.empty()) {
      if (!hits.empty())
        throw ConsistencyError("residue analysis found no classes but the scan hit");
      return ExceptionalSet{std::move(f), {}, true, {}, "finite-order-residues", "", 0, b};
    }
    return ExceptionalSet{std::move(f),
                          std::move(hits),
                          true,
                          ResiduePattern{p, std::move(residues)},
                          "finite-order-residues",
                          "the residue classes recur, so the exceptional set grows "
                          "with every ball: condition (ST) evidence against",
                          hb.radius,
                          b};
  }

  if (inst.semidirect && inst.semidirect->h_is_full_top && t.has_tag("trivial-action")) {
    bool everything = false;
    for (const auto& f1 : f)
      for (const auto& f2 : f)
        everything = everything ||
                     f2.first() == inst.semidirect->g->base()->inv(f1.first());
    if (!everything) {
      if (!hits.empty())
        throw ConsistencyError("no pair inverts but the scan hit");
      return ExceptionalSet{std::move(f), {}, true, {}, "trivial-action", "", 0, b};
    }
    return ExceptionalSet{std::move(f),
                          std::move(hits),
                          true,
                          ResiduePattern{1, {0}},
                          "trivial-action",
                          "some pair multiplies to the identity regardless of h, so "
                          "every h is exceptional",
                          hb.radius,
                          b};
  }

  return ExceptionalSet{std::move(f), std::move(hits), false, {}, "", "", hb.radius, b};
}

// ---- semidirect action criteria ---------------------------------------------

StabilizerReport st_via_action(const Instance& inst, const Elem& a, const Budget& b) {
  if (!inst.semidirect) throw InputError("stabilizer criterion needs a semidirect instance");
  const auto& sd = *inst.semidirect;
  const auto& sg = *sd.g;
  if (a == sg.base()->identity())
    throw InputError("a must be a nonidentity element of the base group");

  Ball hb = feasible_ball(sd.h_in_top, b.radius, b.element_cap);
  std::vector<Elem> members;
  for (const auto& h : hb.elems)
    if (sg.action().apply(h, a) == a) members.push_back(h);

  StabilizerReport rep{a, std::move(members), false, {}, {}, "", hb.radius, b};

  if (inst.triple.has_tag("translation-wreath") && inst.wreath_data &&
      inst.wreath_data->torsion_free_top) {
    if (!(rep.members == std::vector<Elem>{sg.top()->identity()}))
      throw ConsistencyError("translation stabilizer was not trivial");
    rep.complete = true;
    rep.finite = true;
    rep.rule = "translation-moves-support";
    return rep;
  }

  if (inst.triple.has_tag("finite-order-matrix") && inst.matrix_data &&
      inst.matrix_data->order > 0) {
    Elem::Int p = inst.matrix_data->order;
    std::vector<Elem::Int> residues;
    for (Elem::Int r = 0; r < p; ++r)
      if (sg.action().apply(Elem::integer(r), a) == a) residues.push_back(r);
    ResiduePattern pat{p, std::move(residues)};
    for (const auto& h : rep.members)
      if (!pat.matches(h.as_int()))
        throw ConsistencyError("stabilizer member escapes the residue pattern");
    rep.complete = true;
    rep.finite = false;  // the pattern contains 0 mod p, hence all multiples
    rep.pattern = std::move(pat);
    rep.rule = "finite-order-residues";
    return rep;
  }

  if (inst.triple.has_tag("trivial-action")) {
    rep.complete = true;
    rep.finite = false;
    rep.pattern = ResiduePattern{1, {0}};
    rep.rule = "trivial-action";
    return rep;
  }

  return rep;
}

SearchOutcome<ActionWitness> ss_via_action(const Instance& inst, std::vector<Elem> e,
                                           const Budget& b) {
  if (!inst.semidirect) throw InputError("action criterion needs a semidirect instance");
  const auto& sd = *inst.semidirect;
  const auto& sg = *sd.g;
  if (e.empty()) throw InputError("E must be nonempty");
  for (const auto& x : e)
    if (x == sg.base()->identity())
      throw InputError("E must avoid the identity of the base group");

  auto ok = [&](const Elem& h) {
    for (const auto& x : e) {
      Elem img = sg.action().apply(h, x);
      if (std::find(e.begin(), e.end(), img) != e.end()) return false;
    }
    return true;
  };

  Ball hb = feasible_ball(sd.h_in_top, b.radius, b.element_cap);
  for (const auto& h : hb.elems)
    if (ok(h)) return Certified<ActionWitness>{ActionWitness{std::move(e), h, true}};

  std::vector<std::vector<Elem>> target_sets(e.size(), e);
  auto analysis = analyze_invariant(sg, sd.h_in_top, e, target_sets, b);
  if (analysis) {
    if (analysis->refuted)
      return RefutedWithin{
          b, Refutation{"finite-orbit-invariant", analysis->closure_points,
                        "the orbit closure of E is finite and every permutation the "
                        "acting group induces on it maps some point of E back into E"}};
    Ball big = feasible_ball(sd.h_in_top, analysis->witness_radius, b.element_cap);
    for (const auto& h : big.elems)
      if (ok(h)) return Certified<ActionWitness>{ActionWitness{std::move(e), h, true}};
    throw ConsistencyError("invariant analysis promised an action witness but none found");
  }

  return Inconclusive{b, "acting-group ball of radius " + std::to_string(hb.radius) +
                             " exhausted"};
}

Verdict normalizer_check(const Instance& inst, const Budget& b) {
  if (!inst.semidirect)
    throw InputError("normalizer criterion needs a semidirect instance");
  const Triple& t = inst.triple;
  const Group& G = *t.G;
  const auto& sg = *inst.semidirect->g;

  // sampled precondition: H normal in K
  Ball kb = feasible_ball(t.K, std::min(2, b.radius), b.element_cap);
  Ball hb = feasible_ball(t.H, std::min(2, b.radius), b.element_cap);
  for (const auto& k : kb.elems)
    for (const auto& h : hb.elems)
      if (!t.H.contains(G.conj(k, h)))
        throw InputError("H is not normal in K: conjugation by " + G.format(k) +
                         " escapes at " + G.format(h));

  const std::vector<Elem>& top_gens = inst.semidirect->h_in_top.generators();
  Ball ab = feasible_ball(*sg.base(), b.radius, b.element_cap);
  for (const auto& a : ab.elems) {
    if (a == sg.base()->identity()) continue;
    bool fixed = true;
    for (const auto& s : top_gens)
      fixed = fixed && sg.action().apply(s, a) == a;
    if (fixed) {
      Verdict v = make_verdict(
          Condition::NormalizerEqualsK, Status::Fails, Method::GenericSearch, "",
          "the base element is fixed by every generator of H, so it normalizes H "
          "while lying outside K",
          b);
      v.elems.emplace("a", embed_base(sg, a));
      return v;
    }
  }

  if (t.has_tag("translation-wreath") && inst.wreath_data &&
      inst.wreath_data->torsion_free_top)
    return make_verdict(Condition::NormalizerEqualsK, Status::Holds, Method::ClosedForm,
                        "translation-moves-support",
                        "a nonzero shift translates the nonempty finite support of any "
                        "nonidentity base element off itself, so only the identity is "
                        "H-fixed",
                        b);

  if (t.has_tag("finite-order-matrix") && inst.matrix_data &&
      inst.matrix_data->det_m_minus_id != 0)
    return make_verdict(Condition::NormalizerEqualsK, Status::Holds, Method::ClosedForm,
                        "integral-matrix-fixed-space",
                        "det(M - I) != 0, so the only lattice vector fixed by the "
                        "generator is zero",
                        b);

  return make_verdict(Condition::NormalizerEqualsK, Status::Undetermined,
                      Method::GenericSearch, "",
                      "no fixed base element found in the radius-" +
                          std::to_string(ab.radius) + " ball; no closed form applies",
                      b);
}

Verdict malnormality_scan(const Instance& inst, const Budget& b) {
  const Triple& t = inst.triple;
  const Group& G = *t.G;

  Ball gb = feasible_ball(G, b.radius, b.element_cap);
  for (const auto& g : gb.elems) {
    if (t.K.contains(g)) continue;
    IntersectionReport rep = intersection_set(inst, G.inv(g), g, b);
    std::optional<Elem> gamma;
    for (const auto& m : rep.members)
      if (!(m == G.identity())) {
        gamma = m;
        break;
      }
    if (!gamma && rep.pattern && !rep.pattern->empty() && inst.semidirect) {
      // the sample may be all-identity at tiny radii; the pattern still
      // pins a concrete nonidentity member
      Elem::Int r = rep.pattern->residues.front();
      Elem::Int n = r == 0 ? rep.pattern->period : r;
      Elem cand = embed_top(*inst.semidirect->g, Elem::integer(n));
      if (t.H.contains(cand) && t.H.contains(G.op(G.op(G.inv(g), cand), g))) gamma = cand;
    }
    if (gamma) {
      Verdict v = make_verdict(Condition::Malnormal, Status::Fails, Method::GenericSearch,
                               "", "gamma is a nonidentity element of H meeting gHg^-1", b);
      v.elems.emplace("g", g);
      v.elems.emplace("gamma", *gamma);
      return v;
    }
  }

  if (t.has_tag("free-product") && inst.free_data)
    return make_verdict(Condition::Malnormal, Status::Holds, Method::ClosedForm,
                        "free-factor-malnormal",
                        "conjugating a factor element by a reduced word with a foreign "
                        "letter leaves a reduced word with a foreign letter, so the "
                        "intersection with the factor is trivial",
                        b);

  return make_verdict(Condition::Malnormal, Status::Undetermined, Method::GenericSearch, "",
                      "no violation in the radius-" + std::to_string(gb.radius) +
                          " ball; malnormality is not decided generically",
                      b);
}

// ---- instance-level decisions ----------------------------------------------

std::vector<std::vector<Elem>> standard_f_corpus(const Triple& t, const Budget& b) {
  Ball gb = feasible_ball(*t.G, std::min(2, b.radius), b.element_cap);
  std::vector<Elem> pool;
  for (const auto& g : gb.elems)
    if (!t.K.contains(g)) pool.push_back(g);
  std::vector<std::vector<Elem>> corpus;
  const std::size_t n = pool.size();
  for (std::size_t i = 0; i < n; ++i) corpus.push_back({pool[i]});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) corpus.push_back({pool[i], pool[j]});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) corpus.push_back({pool[i], pool[j], pool[k]});
  return corpus;
}

namespace {

Verdict decide_inner(const Instance& inst, Condition which, const Budget& b) {
  if (which != Condition::SS && which != Condition::ST)
    throw InputError("decide handles conditions ss and st only");
  const Triple& t = inst.triple;

  if (t.has_tag("translation-wreath") && inst.wreath_data &&
      inst.wreath_data->torsion_free_top) {
    if (!attest_infinite(t.H, 64, b))
      return make_verdict(which, Status::Undetermined, Method::GenericSearch, "",
                          "H did not attest as infinite within budget", b);
    if (which == Condition::ST)
      return make_verdict(Condition::ST, Status::Holds, Method::ClosedForm,
                          "translation-stabilizer-trivial",
                          "a nonzero translation shifts every nonempty finite support, "
                          "so stabilizers are trivial and each E(g,h) solves one "
                          "support alignment",
                          b);
    return make_verdict(Condition::SS, Status::Holds, Method::ClosedForm,
                        "st-and-infinite",
                        "stabilizers are finite and H is infinite, so every orbit of "
                        "the coset action is infinite",
                        b);
  }

  if (t.has_tag("finite-order-matrix") && inst.semidirect && inst.matrix_data &&
      inst.matrix_data->order > 1) {
    const auto& sg = *inst.semidirect->g;
    Elem a0 = first_base_star(sg, b);
    if (which == Condition::ST) {
      StabilizerReport rep = st_via_action(inst, a0, b);
      Verdict v = make_verdict(Condition::ST, Status::Fails, Method::ClosedForm,
                               "finite-order-residues",
                               "the stabilizer of a0 contains every multiple of the "
                               "matrix order, an infinite set",
                               b);
      v.elems.emplace("a", embed_base(sg, a0));
      std::vector<Elem> sample;
      for (const auto& h : rep.members) sample.push_back(embed_top(sg, h));
      v.elem_sets.emplace("stabilizer_sample", std::move(sample));
      v.pattern = rep.pattern;
      return v;
    }
    // SS: the orbit closure of {a0, a0^-1} is a finite invariant set and is
    // closed under inversion, so every h admits a colliding pair
    std::vector<Elem> seeds{a0, sg.base()->inv(a0)};
    auto closure = orbit_closure(sg.action(),
                                 step_elems(*sg.top(), inst.semidirect->h_in_top.generators()),
                                 seeds, b.element_cap);
    if (!closure) throw ConsistencyError("finite-order orbit closure overflowed");
    for (const auto& x : closure->points)
      if (!closure->index.count(sg.base()->inv(x)))
        throw ConsistencyError("invariant set is not closed under inversion");
    Verdict v = make_verdict(Condition::SS, Status::Fails, Method::ClosedForm,
                             "finite-orbit-invariant-set",
                             "the set is invariant under the action and closed under "
                             "inversion, so F h F meets H for every h when F embeds it",
                             b);
    v.elems.emplace("seed", embed_base(sg, a0));
    std::vector<Elem> emb;
    for (const auto& x : closure->points) emb.push_back(embed_base(sg, x));
    v.elem_sets.emplace("invariant_set", std::move(emb));
    return v;
  }

  if (t.has_tag("trivial-action") && inst.semidirect) {
    const auto& sg = *inst.semidirect->g;
    Elem a0 = first_base_star(sg, b);
    if (which == Condition::ST) {
      Verdict v = make_verdict(Condition::ST, Status::Fails, Method::ClosedForm,
                               "trivial-action",
                               "the action fixes everything, so the stabilizer of a0 is "
                               "all of H",
                               b);
      v.elems.emplace("a", embed_base(sg, a0));
      v.pattern = ResiduePattern{1, {0}};
      return v;
    }
    std::vector<Elem> inv_set{a0};
    push_unique(inv_set, sg.base()->inv(a0));
    Verdict v = make_verdict(Condition::SS, Status::Fails, Method::ClosedForm,
                             "finite-orbit-invariant-set",
                             "the action fixes the pair {a0, a0^-1}, an invariant set "
                             "closed under inversion",
                             b);
    v.elems.emplace("seed", embed_base(sg, a0));
    std::vector<Elem> emb;
    for (const auto& x : inv_set) emb.push_back(embed_base(sg, x));
    v.elem_sets.emplace("invariant_set", std::move(emb));
    return v;
  }

  if (t.has_tag("free-product") && inst.free_data) {
    if (!attest_infinite(t.H, 64, b))
      return make_verdict(which, Status::Undetermined, Method::GenericSearch, "",
                          "H did not attest as infinite within budget", b);
    if (which == Condition::ST) {
      if (t.has_tag("malnormal-factor"))
        return make_verdict(Condition::ST, Status::Holds, Method::ClosedForm,
                            "malnormal-implies-st",
                            "the factor is malnormal, so E(g) is trivial and every "
                            "E(g,h) is a coset sliver of size at most one",
                            b);
      return make_verdict(Condition::ST, Status::Holds, Method::ClosedForm,
                          "free-factor-junction",
                          "the junction exponents pin at most one factor power in "
                          "every E(g,h)",
                          b);
    }
    return make_verdict(Condition::SS, Status::Holds, Method::ClosedForm,
                        "st-and-infinite",
                        "every E(g,h) is finite and H is infinite, so all orbits are "
                        "infinite",
                        b);
  }

  if (inst.factors.first && inst.factors.second) {
    const Instance& i1 = *inst.factors.first;
    const Instance& i2 = *inst.factors.second;
    if (which == Condition::SS) {
      Verdict v1 = decide(i1, Condition::SS, b);
      Verdict v2 = decide(i2, Condition::SS, b);
      if (v1.status == Status::Holds && v2.status == Status::Holds)
        return make_verdict(Condition::SS, Status::Holds, Method::ClosedForm,
                            "product-componentwise",
                            "factor witnesses combine componentwise: a pair lands in H "
                            "only when both components stay on their K side, and each "
                            "side is separately separated",
                            b);
      for (const Verdict* fv : {&v1, &v2}) {
        if (fv->status != Status::Fails) continue;
        const Instance& oi = fv == &v1 ? i2 : i1;
        bool left = fv == &v1;
        Verdict v = make_verdict(Condition::SS, Status::Fails, Method::ClosedForm,
                                 "product-factor-failure",
                                 "an invariant set in one factor, paired with the "
                                 "identity in the other, stays invariant in the product",
                                 b);
        auto it = fv->elem_sets.find("invariant_set");
        if (it != fv->elem_sets.end()) {
          std::vector<Elem> lifted;
          for (const auto& x : it->second)
            lifted.push_back(left ? Elem::pair(x, oi.triple.G->identity())
                                  : Elem::pair(oi.triple.G->identity(), x));
          v.elem_sets.emplace("invariant_set", std::move(lifted));
        }
        return v;
      }
      return make_verdict(Condition::SS, Status::Undetermined, Method::GenericSearch, "",
                          "a factor was undetermined", b);
    }
    // ST fails for any product with a proper K in one factor and infinite H
    // in the other: conjugating (g1, e) does not move the second component
    if (!attest_infinite(i2.triple.H, 64, b))
      return make_verdict(Condition::ST, Status::Undetermined, Method::GenericSearch, "",
                          "second-factor H did not attest as infinite within budget", b);
    Ball g1b = feasible_ball(*i1.triple.G, std::min(2, b.radius), b.element_cap);
    std::optional<Elem> g1;
    for (const auto& x : g1b.elems)
      if (!i1.triple.K.contains(x)) {
        g1 = x;
        break;
      }
    if (!g1)
      return make_verdict(Condition::ST, Status::Undetermined, Method::GenericSearch, "",
                          "no element outside K found in the left factor ball", b);
    const Group& G = *t.G;
    Elem g = Elem::pair(*g1, i2.triple.G->identity());
    Ball h2b = feasible_ball(i2.triple.H, std::min(3, b.radius), b.element_cap);
    std::vector<Elem> sample;
    for (const auto& y : h2b.elems) {
      Elem gamma = Elem::pair(i1.triple.G->identity(), y);
      if (!t.H.contains(gamma) || !t.H.contains(G.op(G.op(G.inv(g), gamma), g)))
        throw ConsistencyError("product stabilizer sample escaped E(g^-1, g)");
      sample.push_back(gamma);
    }
    Verdict v = make_verdict(Condition::ST, Status::Fails, Method::ClosedForm,
                             "product-second-factor-stabilizer",
                             "E(g^-1, g) contains identity-times-H2, an infinite "
                             "subgroup, for g supported in the left factor",
                             b);
    v.elems.emplace("g", g);
    v.elem_sets.emplace("members_sample", std::move(sample));
    return v;
  }

  // generic aggregation over the F-corpus
  auto corpus = standard_f_corpus(t, b);
  if (which == Condition::SS) {
    for (auto& f : corpus) {
      auto outcome = ss_witness(inst, f, b);
      if (is_refuted(outcome)) {
        const auto& r = std::get<RefutedWithin>(outcome);
        Verdict v = make_verdict(Condition::SS, Status::Fails, Method::ClosedForm,
                                 r.evidence.rule, r.evidence.note, b);
        v.elem_sets.emplace("f", f);
        v.elem_sets.emplace("invariant_set", r.evidence.elements);
        return v;
      }
      if (is_inconclusive(outcome))
        return make_verdict(Condition::SS, Status::Undetermined, Method::GenericSearch, "",
                            "a corpus set was inconclusive within budget", b);
    }
    return make_verdict(Condition::SS, Status::Undetermined, Method::GenericSearch, "",
                        "every corpus F admitted a witness (" +
                            std::to_string(corpus.size()) +
                            " sets); finitely many checks cannot prove the condition",
                        b);
  }
  for (auto& f : corpus) {
    ExceptionalSet es = st_exceptional(inst, f, b);
    if (es.complete && es.pattern && !es.pattern->empty()) {
      Verdict v = make_verdict(Condition::ST, Status::Fails, Method::ClosedForm, es.rule,
                               "a corpus set has an infinite exceptional pattern", b);
      v.elem_sets.emplace("f", f);
      v.pattern = es.pattern;
      return v;
    }
  }
  return make_verdict(Condition::ST, Status::Undetermined, Method::GenericSearch, "",
                      "no corpus set produced a completeness proof either way", b);
}

void cross_check(const Instance& inst, Condition which, const Verdict& v, const Budget& b) {
  const Triple& t = inst.triple;
  if (which == Condition::SS) {
    if (v.status == Status::Holds) {
      auto corpus = standard_f_corpus(t, b);
      for (auto& f : corpus) {
        auto outcome = ss_witness(inst, f, b);
        if (is_refuted(outcome))
          throw ConsistencyError("closed form says SS holds but a corpus set was refuted");
      }
    }
    if (v.status == Status::Fails) {
      auto it = v.elem_sets.find("invariant_set");
      if (it != v.elem_sets.end() && !it->second.empty()) {
        auto outcome = ss_witness(inst, it->second, b);
        if (is_certified<SSWitness>(outcome))
          throw ConsistencyError(
              "closed form says SS fails but the invariant set admitted a witness");
      }
    }
    return;
  }
  if (which == Condition::ST) {
    // compare closed-form and generic intersection sets on a small sample
    Ball gb = feasible_ball(*t.G, std::min(2, b.radius), b.element_cap);
    std::vector<Elem> outside;
    for (const auto& g : gb.elems) {
      if (t.K.contains(g)) continue;
      outside.push_back(g);
      if (outside.size() >= 4) break;
    }
    for (const auto& g : outside) {
      for (const auto& h : outside) {
        IntersectionReport closed = intersection_set(inst, g, h, b, false);
        IntersectionReport generic = intersection_set(inst, g, h, b, true);
        for (const auto& m : generic.members) {
          bool inside = std::find(closed.members.begin(), closed.members.end(), m) !=
                        closed.members.end();
          if (!inside && closed.pattern && inst.semidirect)
            inside = closed.pattern->matches(m.second().as_int());
          if (closed.complete && !inside)
            throw ConsistencyError("generic member escapes the closed-form description");
        }
      }
    }
  }
}

}  // namespace

Verdict decide(const Instance& inst, Condition which, const Budget& b, bool cross_validate) {
  Verdict v = decide_inner(inst, which, b);
  if (cross_validate) cross_check(inst, which, v, b);
  return v;
}

}  // namespace mixlab
