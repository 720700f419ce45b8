#include "mixlab/group.hpp"

#include <algorithm>
#include <unordered_set>

namespace mixlab {

Ball enumerate_ball(const Group& g, const std::vector<Elem>& gens, int radius,
                    std::int64_t element_cap) {
  if (radius < 0) throw InputError("ball radius must be >= 0");
  if (element_cap <= 0) throw InputError("element cap must be positive");

  std::vector<Elem> steps;
  for (const Elem& s : gens) {
    steps.push_back(s);
    Elem si = g.inv(s);
    if (std::find(steps.begin(), steps.end(), si) == steps.end()) steps.push_back(si);
  }

  Ball out;
  out.radius = radius;
  std::unordered_set<Elem, ElemHash> seen;
  std::vector<Elem> frontier{g.identity()};
  seen.insert(frontier.front());
  out.elems.push_back(frontier.front());
  out.level_end.push_back(1);

  for (int level = 1; level <= radius; ++level) {
    std::vector<Elem> next;
    for (const Elem& x : frontier) {
      for (const Elem& s : steps) {
        Elem y = g.op(x, s);
        if (seen.insert(y).second) {
          next.push_back(y);
          if (static_cast<std::int64_t>(seen.size()) > element_cap)
            throw BallOverflow(element_cap);
        }
      }
    }
    std::sort(next.begin(), next.end());
    out.elems.insert(out.elems.end(), next.begin(), next.end());
    out.level_end.push_back(out.elems.size());
    frontier = std::move(next);
    if (frontier.empty()) {
      // generated set exhausted; pad remaining levels
      while (static_cast<int>(out.level_end.size()) <= radius)
        out.level_end.push_back(out.elems.size());
      break;
    }
  }
  return out;
}

Ball Group::ball(int radius, std::int64_t element_cap) const {
  return enumerate_ball(*this, generators(), radius, element_cap);
}

Elem Group::parse(std::string_view) const {
  throw InputError("group '" + name() + "' has no literal grammar");
}

Elem Group::conj(const Elem& g, const Elem& x) const { return op(op(g, x), inv(g)); }

Subgroup::Subgroup(GroupPtr parent, std::string name, Contains contains,
                   std::vector<Elem> generators, Enumerator enumerator)
    : parent_(std::move(parent)),
      name_(std::move(name)),
      contains_(std::move(contains)),
      generators_(std::move(generators)),
      enumerator_(std::move(enumerator)) {
  if (!parent_) throw InputError("subgroup requires a parent group");
  for (const Elem& s : generators_)
    if (!contains_(s))
      throw InputError("subgroup '" + name_ + "': declared generator " + s.repr() +
                       " fails its own membership predicate");
}

Ball Subgroup::ball(int radius, std::int64_t cap) const {
  if (enumerator_) return enumerator_(radius, cap);
  if (!generators_.empty()) return enumerate_ball(*parent_, generators_, radius, cap);
  // last resort: thin out the parent's ball
  Ball parent_ball = parent_->ball(radius, cap);
  Ball out;
  out.radius = radius;
  std::size_t lo = 0;
  for (std::size_t k = 0; k < parent_ball.level_end.size(); ++k) {
    for (std::size_t i = lo; i < parent_ball.level_end[k]; ++i)
      if (contains_(parent_ball.elems[i])) out.elems.push_back(parent_ball.elems[i]);
    lo = parent_ball.level_end[k];
    out.level_end.push_back(out.elems.size());
  }
  return out;
}

bool is_member(const Subgroup& s, const Elem& g) { return s.contains(g); }

void validate_triple(const Triple& t, const Budget& b) {
  if (!t.G) throw InputError("triple has no ambient group");
  const Group& g = *t.G;
  if (t.K.parent_ptr().get() != t.G.get() || t.H.parent_ptr().get() != t.G.get())
    throw InputError("triple subgroups must live in the ambient group");
  if (!t.K.contains(g.identity()) || !t.H.contains(g.identity()))
    throw InputError("subgroup predicates must accept the identity");

  int r = std::min(b.radius, 3);
  Ball hb = t.H.ball(r, b.element_cap);
  Ball kb = t.K.ball(r, b.element_cap);
  for (const Elem& h : hb.elems) {
    if (!t.H.contains(h))
      throw InputError("H enumerator emitted a non-member: " + g.format(h));
    if (!t.K.contains(h))
      throw InputError("H is not contained in K at " + g.format(h));
    if (!t.H.contains(g.inv(h)))
      throw InputError("H not closed under inverse at " + g.format(h));
  }
  for (const Elem& k : kb.elems)
    if (!t.K.contains(g.inv(k)))
      throw InputError("K not closed under inverse at " + g.format(k));
  // product closure, sampled on the radius-1 ball times the full sample
  auto [lo1, hi1] = hb.level(std::min(1, r));
  for (std::size_t i = lo1; i < hi1; ++i)
    for (const Elem& h : hb.elems)
      if (!t.H.contains(g.op(hb.elems[i], h)))
        throw InputError("H not closed under product at " + g.format(hb.elems[i]) + " * " +
                         g.format(h));
  auto [klo1, khi1] = kb.level(std::min(1, r));
  for (std::size_t i = klo1; i < khi1; ++i)
    for (const Elem& k : kb.elems)
      if (!t.K.contains(g.op(kb.elems[i], k)))
        throw InputError("K not closed under product at " + g.format(kb.elems[i]) + " * " +
                         g.format(k));
}

Ball feasible_ball(const Group& g, int radius, std::int64_t cap) {
  for (int r = radius;; --r) {
    try {
      return g.ball(r, cap);
    } catch (const BallOverflow&) {
      if (r == 0) throw;
    }
  }
}

Ball feasible_ball(const Subgroup& s, int radius, std::int64_t cap) {
  for (int r = radius;; --r) {
    try {
      return s.ball(r, cap);
    } catch (const BallOverflow&) {
      if (r == 0) throw;
    }
  }
}

bool attest_infinite(const Subgroup& s, std::int64_t want, const Budget& b) {
  for (int r = 1; r <= 4 * b.radius + 8; r *= 2) {
    Ball ball = s.ball(r, b.element_cap);
    if (static_cast<std::int64_t>(ball.size()) >= want) return true;
    if (r > 1 && ball.size() == s.ball(r / 2, b.element_cap).size()) return false;  // stopped growing
  }
  return false;
}

}  // namespace mixlab
