#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mixlab/instances.hpp"

namespace mixlab {

// Registry of left cosets x S, deduplicated by the membership test
// rep^-1 x in S.  Representatives keep discovery order, which downstream
// reports expose, so insertion order is part of the contract.
class CosetSpace {
 public:
  CosetSpace(GroupPtr g, Subgroup s);

  std::size_t locate(const Elem& x);  // inserts a new representative if unseen
  std::optional<std::size_t> find(const Elem& x) const;
  bool same_coset(const Elem& x, const Elem& y) const;
  const std::vector<Elem>& reps() const { return reps_; }

 private:
  GroupPtr g_;
  Subgroup s_;
  std::vector<Elem> reps_;
};

// Orbit of the coset (seed)H under left multiplication by H, BFS over the H
// generators and their inverses.  Finite is reported only when the BFS
// closes, which proves the orbit complete; GrowingAtBudget means the orbit
// was still producing new cosets when depth or cap ran out.
struct OrbitReport {
  enum class Status { Finite, GrowingAtBudget };

  Elem seed;
  std::vector<Elem> reps;  // coset representatives in discovery order
  Status status = Status::GrowingAtBudget;
  int depth_reached = 0;
  Budget budget;

  std::size_t size() const { return reps.size(); }
};

// Precondition: seed lies outside K (InputError otherwise); the interesting
// dynamics happen on the cosets avoiding K.
OrbitReport coset_orbit(const Triple& t, const Elem& seed, const Budget& b);

// {n : n mod period in residues}; period 1 with residue 0 means all of Z.
// Used when H is (a copy of) the integers and an infinite answer is exactly
// a union of residue classes.
struct ResiduePattern {
  Elem::Int period = 1;
  std::vector<Elem::Int> residues;  // sorted, each in [0, period)

  bool empty() const { return residues.empty(); }
  bool matches(Elem::Int n) const;
  std::string str() const;
};

// E(g, h) = {gamma in H : g gamma h in H} for g, h outside K.  members are
// the elements found (all of them when a closed form proves the set finite;
// a budget-bounded sample when a pattern describes an infinite set).
struct IntersectionReport {
  Elem g, h;
  std::vector<Elem> members;
  bool complete = false;               // report fully describes E(g, h)
  std::optional<bool> finite;          // set when a rule decides finiteness
  std::optional<ResiduePattern> pattern;
  std::string rule;                    // "" = generic ball scan
  int ball_checked = 0;                // H-ball radius actually scanned
  Budget budget;
};

// Closed forms dispatch on the instance tags; force_generic skips them so
// tests can compare both answers on the same inputs.
IntersectionReport intersection_set(const Instance& inst, const Elem& g, const Elem& h,
                                    const Budget& b, bool force_generic = false);

// Membership of g in the quasi-normalizer of H: finitely many u_j with
// Hg inside the union of the u_j gH.  The coset registry walks H ball
// levels and dedups by D = H meet gHg^-1; a level that adds no new coset
// proves the found cosets exhaust H/D (they are closed under every
// generator), so the index is exactly `count` and the cover check must
// succeed (it is re-verified on the scanned ball; failure is an internal
// error).  Without stabilization the report only claims a lower bound.
struct QNReport {
  enum class Kind { InQN, IndexAtLeast };

  Elem g;
  Kind kind = Kind::IndexAtLeast;
  std::vector<Elem> reps;       // left coset representatives of D in H
  std::int64_t count = 0;       // distinct cosets found
  bool cover_verified = false;  // hg in union(u_j gH) checked over the ball
  int ball_checked = 0;
  Budget budget;
};

QNReport qn_membership(const Triple& t, const Elem& g, const Budget& b);

// Scan G-ball cosets outside K and collect the H-orbits proved finite
// within the budget, each orbit reported once.
struct FixedVectorReport {
  std::vector<OrbitReport> finite_orbits;
  std::size_t seeds_tried = 0;
  int ball_checked = 0;
  Budget budget;
};

FixedVectorReport fixed_vector_scan(const Triple& t, const Budget& b);

}  // namespace mixlab
