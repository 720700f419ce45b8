#include "mixlab/coset.hpp"

#include <algorithm>
#include <utility>

namespace mixlab {

namespace {

// generators and their inverses, first occurrence kept
std::vector<Elem> step_set(const Group& g, const std::vector<Elem>& gens) {
  std::vector<Elem> steps;
  auto add = [&steps](const Elem& s) {
    if (std::find(steps.begin(), steps.end(), s) == steps.end()) steps.push_back(s);
  };
  for (const auto& s : gens) {
    add(s);
    add(g.inv(s));
  }
  return steps;
}

Elem::Int numeric_min_point(const Elem& finsupp_map) {
  const auto& entries = finsupp_map.as_map();
  Elem::Int best = entries.front().first.as_int();
  for (const auto& [p, v] : entries) best = std::min(best, p.as_int());
  return best;
}

}  // namespace

CosetSpace::CosetSpace(GroupPtr g, Subgroup s) : g_(std::move(g)), s_(std::move(s)) {
  if (s_.parent_ptr().get() != g_.get())
    throw InputError("coset space: subgroup belongs to a different group");
}

std::optional<std::size_t> CosetSpace::find(const Elem& x) const {
  for (std::size_t i = 0; i < reps_.size(); ++i)
    if (s_.contains(g_->op(g_->inv(reps_[i]), x))) return i;
  return std::nullopt;
}

std::size_t CosetSpace::locate(const Elem& x) {
  if (auto i = find(x)) return *i;
  reps_.push_back(x);
  return reps_.size() - 1;
}

bool CosetSpace::same_coset(const Elem& x, const Elem& y) const {
  return s_.contains(g_->op(g_->inv(x), y));
}

OrbitReport coset_orbit(const Triple& t, const Elem& seed, const Budget& b) {
  if (t.K.contains(seed)) throw InputError("orbit seed lies in K");
  if (t.H.generators().empty())
    throw InputError("orbit needs a subgroup with declared generators");
  const Group& G = *t.G;
  CosetSpace cs(t.G, t.H);
  cs.locate(seed);
  std::vector<Elem> frontier{seed};
  const std::vector<Elem> steps = step_set(G, t.H.generators());
  int depth = 0;
  bool closed = false;
  for (int d = 1; d <= b.radius && !closed; ++d) {
    std::vector<Elem> next;
    for (const auto& x : frontier) {
      for (const auto& s : steps) {
        Elem y = G.op(s, x);
        if (cs.find(y)) continue;
        cs.locate(y);
        next.push_back(y);
        if (static_cast<std::int64_t>(cs.reps().size()) > b.element_cap)
          return OrbitReport{seed, cs.reps(), OrbitReport::Status::GrowingAtBudget, d, b};
      }
    }
    depth = d;
    closed = next.empty();
    frontier = std::move(next);
  }
  return OrbitReport{seed, cs.reps(),
                     closed ? OrbitReport::Status::Finite : OrbitReport::Status::GrowingAtBudget,
                     depth, b};
}

bool ResiduePattern::matches(Elem::Int n) const {
  Elem::Int r = ((n % period) + period) % period;
  return std::find(residues.begin(), residues.end(), r) != residues.end();
}

std::string ResiduePattern::str() const {
  if (residues.empty()) return "empty";
  std::string out = "{n : n mod " + std::to_string(period) + " in {";
  for (std::size_t i = 0; i < residues.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(residues[i]);
  }
  out += "}}";
  return out;
}

IntersectionReport intersection_set(const Instance& inst, const Elem& g, const Elem& h,
                                    const Budget& b, bool force_generic) {
  const Triple& t = inst.triple;
  const Group& G = *t.G;
  if (t.K.contains(g)) throw InputError("intersection set: g lies in K");
  if (t.K.contains(h)) throw InputError("intersection set: h lies in K");

  auto hits = [&](const Elem& gamma) { return t.H.contains(G.op(G.op(g, gamma), h)); };

  // sample of an infinite residue-class answer, verified element by element
  auto pattern_sample = [&](const SemidirectGroup& sg, const ResiduePattern& pat) {
    std::vector<Elem> sample;
    Elem base_id = sg.base()->identity();
    for (Elem::Int n = 0; n <= b.radius; ++n) {
      for (int sgn = 0; sgn < 2; ++sgn) {
        if (sgn == 1 && n == 0) break;
        Elem::Int v = sgn == 0 ? n : -n;
        if (!pat.matches(v)) continue;
        Elem gamma = Elem::pair(base_id, Elem::integer(v));
        if (!hits(gamma))
          throw ConsistencyError("residue pattern disagrees with direct membership");
        sample.push_back(gamma);
      }
    }
    return sample;
  };

  if (!force_generic && inst.semidirect && inst.semidirect->h_is_full_top) {
    const auto& sg = *inst.semidirect->g;

    if (t.has_tag("translation-wreath")) {
      // gamma = (0, n) turns g gamma h into (f + shift_{m+n} f', ...); the
      // shift must map the support minimum of f' to that of f, which pins n
      Elem::Int m = g.second().as_int();
      Elem::Int n = numeric_min_point(g.first()) - numeric_min_point(h.first()) - m;
      Elem gamma = Elem::pair(sg.base()->identity(), Elem::integer(n));
      std::vector<Elem> members;
      if (hits(gamma)) members.push_back(gamma);
      return IntersectionReport{.g = g,
                                .h = h,
                                .members = std::move(members),
                                .complete = true,
                                .finite = true,
                                .pattern = {},
                                .rule = "translation-wreath-alignment",
                                .ball_checked = 0,
                                .budget = b};
    }

    if (t.has_tag("finite-order-matrix") && inst.matrix_data &&
        inst.matrix_data->order > 0) {
      // gamma = (0, n) works iff M^{k+n} b = -a, a condition on k+n mod order
      Elem::Int p = inst.matrix_data->order;
      Elem::Int k = g.second().as_int();
      Elem neg_a = sg.base()->inv(g.first());
      std::vector<Elem::Int> residues;
      for (Elem::Int r = 0; r < p; ++r) {
        if (sg.action().apply(Elem::integer(r), h.first()) == neg_a)
          residues.push_back(((r - k) % p + p) % p);
      }
      std::sort(residues.begin(), residues.end());
      if (residues.empty())
        return IntersectionReport{.g = g,
                                  .h = h,
                                  .members = {},
                                  .complete = true,
                                  .finite = true,
                                  .pattern = {},
                                  .rule = "finite-order-residues",
                                  .ball_checked = 0,
                                  .budget = b};
      ResiduePattern pat{p, std::move(residues)};
      return IntersectionReport{.g = g,
                                .h = h,
                                .members = pattern_sample(sg, pat),
                                .complete = true,
                                .finite = false,
                                .pattern = std::move(pat),
                                .rule = "finite-order-residues",
                                .ball_checked = 0,
                                .budget = b};
    }

    if (t.has_tag("trivial-action")) {
      // g gamma h = (a + b, ...): every gamma works iff b = -a, else none
      bool everything = h.first() == sg.base()->inv(g.first());
      if (!everything)
        return IntersectionReport{.g = g,
                                  .h = h,
                                  .members = {},
                                  .complete = true,
                                  .finite = true,
                                  .pattern = {},
                                  .rule = "trivial-action",
                                  .ball_checked = 0,
                                  .budget = b};
      ResiduePattern pat{1, {0}};
      return IntersectionReport{.g = g,
                                .h = h,
                                .members = pattern_sample(sg, pat),
                                .complete = true,
                                .finite = false,
                                .pattern = std::move(pat),
                                .rule = "trivial-action",
                                .ball_checked = 0,
                                .budget = b};
    }
  }

  if (!force_generic && t.has_tag("free-product") && inst.free_data) {
    // g a^n h can only fall into <a> if n cancels the junction exponents:
    // with g = p a^s and h = a^t q reduced, any other n leaves the word
    // p a^{s+n+t} q reduced with a letter outside <a>
    const auto& fg = *inst.free_data->g;
    int fac = inst.free_data->factor;
    const auto& gw = g.as_word();
    const auto& hw = h.as_word();
    Elem::Int s = (!gw.empty() && gw.back().factor == fac) ? gw.back().syllable.as_int() : 0;
    Elem::Int tt = (!hw.empty() && hw.front().factor == fac) ? hw.front().syllable.as_int() : 0;
    Elem gamma = fg.embed(fac, Elem::integer(-s - tt));
    std::vector<Elem> members;
    if (hits(gamma)) members.push_back(gamma);
    return IntersectionReport{.g = g,
                              .h = h,
                              .members = std::move(members),
                              .complete = true,
                              .finite = true,
                              .pattern = {},
                              .rule = "free-factor-junction",
                              .ball_checked = 0,
                              .budget = b};
  }

  Ball hb = feasible_ball(t.H, b.radius, b.element_cap);
  std::vector<Elem> members;
  for (const auto& gamma : hb.elems)
    if (hits(gamma)) members.push_back(gamma);
  return IntersectionReport{.g = g,
                            .h = h,
                            .members = std::move(members),
                            .complete = false,
                            .finite = {},
                            .pattern = {},
                            .rule = "",
                            .ball_checked = hb.radius,
                            .budget = b};
}

QNReport qn_membership(const Triple& t, const Elem& g, const Budget& b) {
  const Group& G = *t.G;
  GroupPtr gp = t.G;
  Subgroup h = t.H;
  Elem gi = G.inv(g);
  Subgroup d(
      gp, "H^g",
      [gp, h, g, gi](const Elem& x) {
        return h.contains(x) && h.contains(gp->op(gp->op(gi, x), g));
      },
      {});
  CosetSpace cs(gp, d);

  Ball hb = feasible_ball(t.H, b.radius, b.element_cap);
  bool stabilized = false;
  for (int k = 0; k <= hb.radius; ++k) {
    auto [lo, hi] = hb.level(k);
    std::size_t before = cs.reps().size();
    for (std::size_t i = lo; i < hi; ++i) cs.locate(hb.elems[i]);
    if (k >= 1 && cs.reps().size() == before) {
      // a level that adds no coset proves closure under every generator,
      // so the registry already holds all of H/D
      stabilized = true;
      break;
    }
  }

  QNReport rep{g,          QNReport::Kind::IndexAtLeast,
               cs.reps(),  static_cast<std::int64_t>(cs.reps().size()),
               false,      hb.radius,
               b};
  if (!stabilized) return rep;

  for (const auto& x : hb.elems) {
    bool covered = false;
    for (const auto& u : rep.reps) {
      if (t.H.contains(G.op(G.op(gi, G.op(G.inv(u), x)), g))) {
        covered = true;
        break;
      }
    }
    if (!covered)
      throw ConsistencyError("quasi-normalizer cover failed after coset stabilization");
  }
  rep.kind = QNReport::Kind::InQN;
  rep.cover_verified = true;
  return rep;
}

FixedVectorReport fixed_vector_scan(const Triple& t, const Budget& b) {
  Ball gb = feasible_ball(*t.G, b.radius, b.element_cap);
  CosetSpace visited(t.G, t.H);
  FixedVectorReport out;
  out.ball_checked = gb.radius;
  out.budget = b;
  for (const auto& x : gb.elems) {
    if (t.K.contains(x)) continue;
    if (visited.find(x)) continue;
    ++out.seeds_tried;
    OrbitReport orb = coset_orbit(t, x, b);
    for (const auto& r : orb.reps) visited.locate(r);
    if (orb.status == OrbitReport::Status::Finite) out.finite_orbits.push_back(std::move(orb));
  }
  return out;
}

}  // namespace mixlab
