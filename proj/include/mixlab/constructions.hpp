#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mixlab/group.hpp"

namespace mixlab {

// ----- elementary groups ----------------------------------------------

// Z with generator 1, integer literals
GroupPtr integers(std::string name = "Z");

// Z/n with generator 1, elements 0..n-1
GroupPtr cyclic(Elem::Int n, std::string name = "");

// Z^dim with the standard generators, tuple elements
GroupPtr lattice(int dim, std::string name = "");

// ----- direct products --------------------------------------------------

class PairGroup : public Group {
 public:
  const GroupPtr& left() const { return left_; }
  const GroupPtr& right() const { return right_; }
  Elem embed_left(const Elem& a) const;   // a -> (a, e)
  Elem embed_right(const Elem& b) const;  // b -> (e, b)
  Subgroup left_factor() const;           // {(a, e)}
  Subgroup right_factor() const;          // {(e, b)}

 protected:
  PairGroup(std::string name, GroupPtr left, GroupPtr right);
  GroupPtr left_, right_;
};

std::shared_ptr<const PairGroup> direct_product(GroupPtr a, GroupPtr b,
                                                std::string name = "");

// ----- actions and semidirect products ----------------------------------

// Left action of `acting` on `space` by automorphisms.
struct Action {
  GroupPtr acting;
  GroupPtr space;
  std::function<Elem(const Elem& k, const Elem& a)> apply;
  std::string name;
};

// Sampled action laws on balls of the given radius: identity acts
// trivially, apply(kl, a) == apply(k, apply(l, a)), and every apply(k, .)
// is an automorphism.  Throws InputError on the first violation.
void validate_action(const Action& act, int radius, std::int64_t cap);

// A x| K for a left action of K on A; elements are pairs (a, k) with
// (a, k)(b, l) = (a * k.b, kl).
class SemidirectGroup : public PairGroup {
 public:
  static std::shared_ptr<const SemidirectGroup> make(Action act, std::string name);

  const GroupPtr& base() const { return left_; }  // A
  const GroupPtr& top() const { return right_; }  // K
  const Action& action() const { return act_; }

  Elem identity() const override;
  Elem op(const Elem& x, const Elem& y) const override;
  Elem inv(const Elem& x) const override;
  const std::vector<Elem>& generators() const override;
  std::string format(const Elem& x) const override;
  Elem parse(std::string_view text) const override;
  std::string grammar_help() const override;

  Subgroup base_subgroup() const;  // A x {e}
  Subgroup top_subgroup() const;   // {e} x K

 private:
  SemidirectGroup(Action act, std::string name);
  Action act_;
  std::vector<Elem> gens_;
};

// n |-> M^n acting on Z^dim; M integral with det +-1 so M^-1 is integral
Action matrix_action(GroupPtr z, GroupPtr zd, std::vector<std::vector<Elem::Int>> m);

Action trivial_action(GroupPtr k, GroupPtr a);

// ----- wreath products ---------------------------------------------------

// A K-set whose points are named by elements (of `point_names`), with a
// deterministic point enumeration.  Built-ins use X = K acting on itself
// by left translation; other K-sets fit the same interface.
struct PointSet {
  GroupPtr point_names;
  std::function<Elem(const Elem& k, const Elem& x)> act;
  std::function<Ball(int radius, std::int64_t cap)> points;
  Elem basepoint;
  std::string name;
};

PointSet left_translation(GroupPtr k);

// Finitely supported maps X -> V under pointwise product.  Not finitely
// generated: declared generators are the V-generators planted at the
// basepoint (enough to generate the wreath product together with K), and
// ball(r) enumerates supports inside the point ball of radius r with total
// V-word-length cost <= r.
class FinSuppGroup : public Group {
 public:
  static std::shared_ptr<const FinSuppGroup> make(PointSet x, GroupPtr values,
                                                  std::string name);

  const PointSet& points() const { return x_; }
  const GroupPtr& values() const { return values_; }

  Elem identity() const override;
  Elem op(const Elem& x, const Elem& y) const override;
  Elem inv(const Elem& x) const override;
  const std::vector<Elem>& generators() const override;
  Ball ball(int radius, std::int64_t element_cap) const override;
  std::string format(const Elem& x) const override;
  Elem parse(std::string_view text) const override;
  std::string grammar_help() const override;

  Elem delta(const Elem& point, const Elem& value) const;
  Elem translate(const Elem& k, const Elem& f) const;  // (k.f)(x) = f(k^-1 x)

 private:
  FinSuppGroup(PointSet x, GroupPtr values, std::string name);
  PointSet x_;
  GroupPtr values_;
  std::vector<Elem> gens_;
};

// V wr_X K = (finitely supported maps X -> V) x| K under the shift action
std::shared_ptr<const SemidirectGroup> wreath(GroupPtr values, PointSet x, GroupPtr k,
                                              std::string name = "");

// ----- free products ------------------------------------------------------

// G0 * G1 with reduced alternating words.  `letters` name the factors in
// the literal grammar ("a", "b"); factors with integer elements print as
// powers (a^2 b^-1).
class FreeProductGroup : public Group {
 public:
  static std::shared_ptr<const FreeProductGroup> make(GroupPtr g0, GroupPtr g1,
                                                      std::vector<std::string> letters,
                                                      std::string name = "");

  const GroupPtr& factor(int i) const { return factors_.at(static_cast<std::size_t>(i)); }
  const std::string& letter(int i) const { return letters_.at(static_cast<std::size_t>(i)); }

  Elem identity() const override;
  Elem op(const Elem& x, const Elem& y) const override;
  Elem inv(const Elem& x) const override;
  const std::vector<Elem>& generators() const override;
  std::string format(const Elem& x) const override;
  Elem parse(std::string_view text) const override;
  std::string grammar_help() const override;

  // the full factor as a subgroup: words that are empty or one letter of
  // that factor
  Subgroup factor_subgroup(int i) const;
  Elem embed(int i, const Elem& a) const;

  // syllable count of the reduced word
  static std::size_t length(const Elem& w) { return w.as_word().size(); }

 private:
  FreeProductGroup(GroupPtr g0, GroupPtr g1, std::vector<std::string> letters,
                   std::string name);
  std::vector<GroupPtr> factors_;
  std::vector<std::string> letters_;
  std::vector<Elem> gens_;
};

GroupPtr free_product(GroupPtr g0, GroupPtr g1, std::vector<std::string> letters,
                      std::string name = "");

// ----- subgroup combinators ----------------------------------------------

// S1 x S2 inside a pair group whose factors are the parents of s1, s2
Subgroup product_subgroup(std::shared_ptr<const PairGroup> g, const Subgroup& s1,
                          const Subgroup& s2, std::string name = "");

// g S g^-1 inside the same parent
Subgroup conjugate_subgroup(const Subgroup& s, const Elem& g, std::string name = "");

// predicate intersection; no generators are declared, so balls filter the
// parent (used only for conditional-expectation targets)
Subgroup intersect_subgroups(const Subgroup& s1, const Subgroup& s2,
                             std::string name = "");

}  // namespace mixlab
