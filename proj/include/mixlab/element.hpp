#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace mixlab {

// Immutable structural value holding a group element in the normal form
// chosen by its group: a machine integer for Z and Z/n, an integer tuple for
// lattices, a pair for (semi)direct products, a finitely supported map for
// wreath bases, an alternating letter sequence for free products.
//
// Elements compare, order and hash structurally.  The total order is the
// tie-breaker inside a word-length level of every enumeration, so it is part
// of the observable contract:
//   * integers order by (|n|, sign), nonnegative first: 0, 1, -1, 2, -2, ...
//   * tuples and letter sequences order by length, then lexicographically;
//   * pairs order left to right; maps order by size, then by entries.
struct ElemLetter;  // one syllable of a free-product word; defined below

class Elem {
 public:
  using Int = std::int64_t;

  using Letter = ElemLetter;
  // (point, value) with value != identity, sorted by point, points unique
  using MapEntry = std::pair<Elem, Elem>;

  enum class Kind : std::uint8_t { Int = 0, Tuple, Pair, Map, Word };

  static Elem integer(Int n);
  static Elem tuple(std::vector<Int> v);
  static Elem pair(Elem a, Elem b);
  static Elem map(std::vector<MapEntry> entries);
  static Elem word(std::vector<Letter> letters);

  Kind kind() const;
  Int as_int() const;
  const std::vector<Int>& as_tuple() const;
  const Elem& first() const;
  const Elem& second() const;
  const std::vector<MapEntry>& as_map() const;
  const std::vector<Letter>& as_word() const;

  std::size_t hash() const;
  bool operator==(const Elem& o) const;
  std::strong_ordering operator<=>(const Elem& o) const;

  // Debug rendering; groups own the user-facing format.
  std::string repr() const;

 private:
  struct Node;
  explicit Elem(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct ElemLetter {
  int factor;     // 0-based factor index
  Elem syllable;  // non-identity element of that factor
};

struct ElemHash {
  std::size_t operator()(const Elem& e) const { return e.hash(); }
};

}  // namespace mixlab
