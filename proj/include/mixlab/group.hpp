#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mixlab/element.hpp"

namespace mixlab {

// Search/enumeration budget.  radius bounds word-length balls; element_cap
// bounds how many distinct elements a single enumeration may produce.
struct Budget {
  int radius = 6;
  std::int64_t element_cap = 500'000;
};

// An enumeration would exceed Budget.element_cap.  Search drivers catch this
// and degrade to an inconclusive outcome instead of crashing.
class BallOverflow : public std::runtime_error {
 public:
  explicit BallOverflow(std::int64_t cap)
      : std::runtime_error("element cap exceeded (" + std::to_string(cap) + ")"), cap_(cap) {}
  std::int64_t cap() const { return cap_; }

 private:
  std::int64_t cap_;
};

// Caller-side precondition violation (bad literal, wrong parent group,
// identity in a set that must avoid it, ...).  The CLI maps this to exit 2.
class InputError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An internal cross-check failed: a closed form contradicted a generic
// search, or two sides of an exact identity disagreed.  CLI exit 3.
class ConsistencyError : public std::logic_error {
  using std::logic_error::logic_error;
};

// Word-length ball with level structure.  elems is sorted by
// (word length, structural order); level_end[k] is the end offset of the
// elements of word length <= k, so level_end.back() == elems.size().
struct Ball {
  std::vector<Elem> elems;
  std::vector<std::size_t> level_end;
  int radius = 0;

  std::size_t size() const { return elems.size(); }
  // elements whose word length is exactly k
  std::pair<std::size_t, std::size_t> level(int k) const {
    std::size_t lo = k == 0 ? 0 : level_end.at(static_cast<std::size_t>(k) - 1);
    return {lo, level_end.at(static_cast<std::size_t>(k))};
  }
};

class Group : public std::enable_shared_from_this<Group> {
 public:
  virtual ~Group() = default;

  const std::string& name() const { return name_; }
  virtual Elem identity() const = 0;
  virtual Elem op(const Elem& x, const Elem& y) const = 0;
  virtual Elem inv(const Elem& x) const = 0;
  virtual const std::vector<Elem>& generators() const = 0;

  // Deterministic word-length ball; the default is BFS closure over
  // generators() and their inverses.  Groups that are not finitely
  // generated (wreath bases) override this with a support-bounded
  // enumeration that keeps the same (cost, structural order) sorting.
  virtual Ball ball(int radius, std::int64_t element_cap) const;

  // Per-group literal grammar; grammar_help() documents it for --help.
  virtual std::string format(const Elem& x) const = 0;
  virtual Elem parse(std::string_view text) const;
  virtual std::string grammar_help() const { return "(no literal grammar)"; }

  Elem conj(const Elem& g, const Elem& x) const;  // g x g^-1

 protected:
  explicit Group(std::string name) : name_(std::move(name)) {}
  // groups are always owned by shared_ptr (see the construction helpers)
  std::shared_ptr<const Group> self() const { return shared_from_this(); }

 private:
  std::string name_;
};

using GroupPtr = std::shared_ptr<const Group>;

// BFS closure of the generating set: all products of at most `radius`
// generators/inverses, sorted by (word length, structural order).
Ball enumerate_ball(const Group& g, const std::vector<Elem>& gens, int radius,
                    std::int64_t element_cap);

// Membership predicate plus declared generators.  Balls use, in order of
// preference: a custom enumerator (for subgroups that are not finitely
// generated), BFS over the declared generators, or filtering parent balls.
class Subgroup {
 public:
  using Contains = std::function<bool(const Elem&)>;
  using Enumerator = std::function<Ball(int radius, std::int64_t cap)>;

  Subgroup(GroupPtr parent, std::string name, Contains contains,
           std::vector<Elem> generators, Enumerator enumerator = nullptr);

  const Group& parent() const { return *parent_; }
  const GroupPtr& parent_ptr() const { return parent_; }
  const std::string& name() const { return name_; }
  bool contains(const Elem& g) const { return contains_(g); }
  const std::vector<Elem>& generators() const { return generators_; }
  Ball ball(int radius, std::int64_t cap) const;

 private:
  GroupPtr parent_;
  std::string name_;
  Contains contains_;
  std::vector<Elem> generators_;
  Enumerator enumerator_;
};

bool is_member(const Subgroup& s, const Elem& g);

// Largest ball of radius at most `radius` that fits under the cap: retries
// with smaller radii on overflow and rethrows only when even radius 0 does
// not fit.  Search drivers use these to degrade instead of crashing.
Ball feasible_ball(const Group& g, int radius, std::int64_t cap);
Ball feasible_ball(const Subgroup& s, int radius, std::int64_t cap);

// Nested pair H <= K <= G.  H and K are infinite for every built-in
// instance; that fact is attested by the instance author and spot-checked
// by attest_infinite, not decided here.
struct Triple {
  GroupPtr G;
  Subgroup K;
  Subgroup H;
  std::string instance_id;        // empty for ad hoc triples
  std::vector<std::string> tags;  // closed-form family tags

  bool has_tag(std::string_view t) const {
    for (const auto& x : tags)
      if (x == t) return true;
    return false;
  }
};

// Sampled sanity checks: identity membership, closure of H and K under
// products of ball elements, H <= K, generator membership.  Throws
// InputError describing the first offender.
void validate_triple(const Triple& t, const Budget& b);

// True iff the subgroup enumerator produces at least `want` distinct
// elements within the cap (growing the radius as needed).
bool attest_infinite(const Subgroup& s, std::int64_t want, const Budget& b);

// Outcome of a budgeted search for a certificate of type C.
//  * Certified: the certificate re-verified by direct computation.
//  * RefutedWithin: exhaustion converted into a proof by a closed form.
//  * Inconclusive: budget exhausted, nothing claimed.
template <class C>
struct Certified {
  C certificate;
};

struct Refutation {
  std::string rule;            // closed-form rule licensing the refutation
  std::vector<Elem> elements;  // replayable payload (e.g. an invariant set)
  std::string note;
};

struct RefutedWithin {
  Budget budget;
  Refutation evidence;
};

struct Inconclusive {
  Budget budget;
  std::string note;
};

template <class C>
using SearchOutcome = std::variant<Certified<C>, RefutedWithin, Inconclusive>;

template <class C>
bool is_certified(const SearchOutcome<C>& o) {
  return std::holds_alternative<Certified<C>>(o);
}

template <class C>
bool is_refuted(const SearchOutcome<C>& o) {
  return std::holds_alternative<RefutedWithin>(o);
}

template <class C>
bool is_inconclusive(const SearchOutcome<C>& o) {
  return std::holds_alternative<Inconclusive>(o);
}

template <class C>
const C& certificate_of(const SearchOutcome<C>& o) {
  return std::get<Certified<C>>(o).certificate;
}

}  // namespace mixlab
