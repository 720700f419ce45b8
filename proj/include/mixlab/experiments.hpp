#pragma once

#include "mixlab/algebra.hpp"
#include "mixlab/certs.hpp"

namespace mixlab {

// One exact sample of the mixing functional: h together with the squared
// 2-norm of E_H(x lambda_h y).  Values are exact rationals; there are no
// thresholds and no floats anywhere in this module.
struct DecaySample {
  Elem h;
  mpq_class value;
};

struct DecayProfile {
  AlgebraElement x, y;
  std::vector<DecaySample> samples;  // ball_H order
  std::vector<Elem> exceptional;     // exactly the sample points with nonzero value
  int ball_checked = 0;
  Budget budget;
};

// Samples ||E_H(x lambda_h y)||_2^2 for h over ball_H(b.radius) in ball
// order.  Requires cond_exp(x, K) = 0 and cond_exp(y, K) = 0; a violation
// names an offending support element.  Decay of the tail of this profile is
// the finitely-supported surrogate for mixing along weakly-null unitaries:
// the tail of the ball enumeration eventually leaves every finite set.
DecayProfile decay_profile(const Triple& t, const AlgebraElement& x,
                           const AlgebraElement& y, const Budget& b);

// Free-product strong-mixing check for H inside the distinguished factor.
// Requires every support word of x and y to contain at least one letter of
// the other factor (equivalently cond_exp onto the factor vanishes).  The
// profile is computed exactly and then cross-checked against the junction
// calculus: a product u a^n v can only fall back into the factor when n
// cancels the boundary exponents of u and v, so every nonzero sample must
// sit in that finite predicted set.  A sample outside it is a
// ConsistencyError.
DecayProfile free_product_mixing_check(const Instance& inst, const AlgebraElement& x,
                                       const AlgebraElement& y, const Budget& b);

// The finite-orbit counterexample element: for a base element a0 with a
// finite orbit under the acting group, x = sum of lambda_g over the embedded
// orbit closed under inverses.  x is selfadjoint, orthogonal to L(K), and
// commutes with every generator of L(H), which places it in the relative
// commutant; all three facts are checked exactly by group-algebra
// operations and any failure is a ConsistencyError.
struct CounterexampleReport {
  std::string instance_id;
  Elem a0;              // base-group element with finite orbit
  std::vector<Elem> f;  // the orbit, embedded in G, discovery order
  AlgebraElement x;     // sum over f united with its inverses
  bool selfadjoint = false;
  bool orthogonal_to_k = false;
  bool commutes_with_h_generators = false;
  mpq_class norm2;  // ||x||_2^2
  Budget budget;
};

// Requires a semidirect instance whose normalizer condition is certified
// and a nonidentity a0 whose orbit closes within the element cap; an orbit
// still growing at the cap rejects the input (no report).
CounterexampleReport build_counterexample(const Instance& inst, const Elem& a0,
                                          const Budget& b);

// Hypothesis check for the normalizer conclusion: the combinatorial
// conditions are decided with certificates, and the report only records
// whether the operator-algebra conclusion (the normalizer of the small
// algebra generates exactly the middle algebra) is licensed by them.  The
// conclusion itself is imported, never re-proved here.
struct HypothesisReport {
  std::string instance_id;
  Verdict normalizer_verdict;
  Verdict ss_verdict;
  bool conclusion_licensed = false;
  std::string caveat;
  Budget budget;
};

HypothesisReport corollary_hypotheses(const Instance& inst, const Budget& b);

}  // namespace mixlab
