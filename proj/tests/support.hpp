#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "mixlab/instances.hpp"
#include "mixlab/algebra.hpp"

// Deterministic test helpers.  All randomness flows through a fixed-seed
// mt19937_64 and plain modulo picks, so failures replay exactly on any
// platform.

namespace testsupport {

using namespace mixlab;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline std::size_t pick(std::mt19937_64& r, std::size_t n) {
  return static_cast<std::size_t>(r() % n);
}

inline const Elem& pick_elem(std::mt19937_64& r, const Ball& b) {
  return b.elems[pick(r, b.size())];
}

// small exact rational in [-3, 3] with denominator 1..3
inline mpq_class small_rational(std::mt19937_64& r) {
  long num = static_cast<long>(r() % 7) - 3;
  long den = static_cast<long>(r() % 3) + 1;
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

inline AlgebraElement random_algebra(std::mt19937_64& r, GroupPtr g, const Ball& ball,
                                     std::size_t max_terms) {
  AlgebraElement x = AlgebraElement::zero(g);
  std::size_t terms = 1 + pick(r, max_terms);
  for (std::size_t i = 0; i < terms; ++i)
    x.add_term(pick_elem(r, ball), Coeff(small_rational(r), small_rational(r)));
  return x;
}

// oracle: E(g, h) = {gamma in ball_H : g gamma h in H} by direct scan
inline std::vector<Elem> brute_intersection(const Triple& t, const Elem& g, const Elem& h,
                                            int radius, std::int64_t cap) {
  std::vector<Elem> out;
  for (const Elem& gamma : t.H.ball(radius, cap).elems)
    if (t.H.contains(t.G->op(t.G->op(g, gamma), h))) out.push_back(gamma);
  return out;
}

// oracle: K-cosets reachable from seed under left multiplication by H
// generators; empty result means the orbit outgrew the cap
inline std::vector<Elem> brute_coset_orbit(const Triple& t, const Elem& seed, int depth,
                                           std::size_t cap) {
  const Group& g = *t.G;
  auto same = [&](const Elem& x, const Elem& y) { return t.K.contains(g.op(g.inv(x), y)); };
  std::vector<Elem> reps{seed};
  std::vector<Elem> frontier{seed};
  std::vector<Elem> steps;
  for (const Elem& s : t.H.generators()) {
    steps.push_back(s);
    steps.push_back(g.inv(s));
  }
  for (int d = 0; d < depth && !frontier.empty(); ++d) {
    std::vector<Elem> next;
    for (const Elem& x : frontier)
      for (const Elem& s : steps) {
        Elem y = g.op(s, x);
        bool known = false;
        for (const Elem& r : reps) known = known || same(r, y);
        if (!known) {
          reps.push_back(y);
          next.push_back(y);
          if (reps.size() > cap) return {};
        }
      }
    frontier = std::move(next);
  }
  return reps;
}

inline bool same_elems(std::vector<Elem> a, std::vector<Elem> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace testsupport
