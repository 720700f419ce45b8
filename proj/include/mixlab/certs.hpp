#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mixlab/coset.hpp"

namespace mixlab {

enum class Condition { SS, ST, WSS, Malnormal, NormalizerEqualsK };
enum class Status { Holds, Fails, Undetermined };
enum class Method { GenericSearch, ClosedForm };

const char* to_string(Condition c);
const char* to_string(Status s);
const char* to_string(Method m);
Condition condition_from(std::string_view s);  // InputError on unknown names
Status status_from(std::string_view s);
Method method_from(std::string_view s);

// Witness that one h in H separates F from H: f1 h f2 never lands in H
// (two-sided), or f h g never lands in H when `g` is set (one-sided).
struct SSWitness {
  std::vector<Elem> f;    // finite F in G minus K, in the caller's order
  Elem h;                 // the witness, an element of H
  std::optional<Elem> g;  // set for the one-sided variant
  bool checked = false;   // re-verified at construction
};

// The h in a scanned H-ball for which F h F meets H, each with one
// witnessing pair f1 h f2 in H.  complete=true only when a closed form
// bounds every possible collision; an infinite exceptional set is conveyed
// by `pattern` (and complete then refers to the pattern being exact).
struct ExceptionalHit {
  Elem h, f1, f2;
};

struct ExceptionalSet {
  std::vector<Elem> f;
  std::vector<ExceptionalHit> hits;  // ball order in h
  bool complete = false;
  std::optional<ResiduePattern> pattern;
  std::string rule;
  std::string note;
  int ball_checked = 0;
  Budget budget;

  std::vector<Elem> exceptional() const;  // just the h components
};

// Witness h with E and alpha_h(E) disjoint, for E inside A*.
struct ActionWitness {
  std::vector<Elem> e;  // base-group elements
  Elem h;               // acting-group element
  bool checked = false;
};

// Stabilizer sample {h : alpha_h(a) = a} over the acting-group ball, with
// closed-form completeness and an optional residue-class description of an
// infinite stabilizer.
struct StabilizerReport {
  Elem a;                    // base-group element, not the identity
  std::vector<Elem> members;  // acting-group elements, ball order
  bool complete = false;
  std::optional<bool> finite;
  std::optional<ResiduePattern> pattern;
  std::string rule;
  int ball_checked = 0;
  Budget budget;
};

// One verdict shape for all five conditions.  Evidence elements are always
// stored as elements of the ambient group G (base or acting parts embedded),
// so they format, replay, and serialize uniformly.
struct Verdict {
  Condition condition;
  Status status = Status::Undetermined;
  Method method = Method::GenericSearch;
  std::string rule;  // closed-form rule name; empty for generic results
  std::map<std::string, Elem> elems;
  std::map<std::string, std::vector<Elem>> elem_sets;
  std::optional<ResiduePattern> pattern;
  std::string note;
  Budget budget;
};

// --- witness searches -----------------------------------------------------

// First h in ball_H order with F h F disjoint from H.  Certified witnesses
// are re-verified; for semidirect instances with H the full acting group, a
// finite invariant orbit closure converts exhaustion into a refutation, and
// product instances fall back to combining componentwise witnesses.
SearchOutcome<SSWitness> ss_witness(const Instance& inst, std::vector<Elem> f,
                                    const Budget& b);

// One-sided variant: first h with F h g disjoint from H.
SearchOutcome<SSWitness> wss_witness(const Instance& inst, std::vector<Elem> f,
                                     const Elem& g, const Budget& b);

// Exceptional set E = {h in ball_H : F h F meets H}, with closed-form
// completeness on the built-in families.
ExceptionalSet st_exceptional(const Instance& inst, std::vector<Elem> f,
                              const Budget& b);

// --- semidirect action criteria -------------------------------------------

// Stabilizer of a under the action of H (as a subgroup of the acting group).
StabilizerReport st_via_action(const Instance& inst, const Elem& a, const Budget& b);

// First h with E and alpha_h(E) disjoint; refuted when every permutation
// induced on the (finite) orbit closure of E maps some point of E back
// into E.
SearchOutcome<ActionWitness> ss_via_action(const Instance& inst, std::vector<Elem> e,
                                           const Budget& b);

// Fails with a nonidentity base element fixed by every generator of H
// (such an element normalizes H from outside K); Holds via the family
// closed forms; Undetermined otherwise.
Verdict normalizer_check(const Instance& inst, const Budget& b);

// Scans g outside K for a nontrivial element of H meeting gHg^-1; Holds
// only under the free-factor closed form.
Verdict malnormality_scan(const Instance& inst, const Budget& b);

// Instance-level decision for SS or ST: closed forms by tag, otherwise a
// generic aggregation over the standard F-corpus (nonempty subsets of
// ball_G(2) minus K with at most 3 elements), which can certify failures
// but never proves Holds.  cross_validate re-runs the other path and
// throws ConsistencyError on conflict (test hook).
Verdict decide(const Instance& inst, Condition which, const Budget& b,
               bool cross_validate = false);

// The standard F-corpus used by decide; exposed for tests and experiments.
std::vector<std::vector<Elem>> standard_f_corpus(const Triple& t, const Budget& b);

}  // namespace mixlab
