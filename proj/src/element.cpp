#include "mixlab/element.hpp"

#include <cassert>
#include <sstream>
#include <variant>

namespace mixlab {
namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  // boost::hash_combine constant
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::uint64_t abs_u64(Elem::Int n) {
  return n < 0 ? ~static_cast<std::uint64_t>(n) + 1 : static_cast<std::uint64_t>(n);
}

// (|n|, nonnegative-first) order used everywhere an integer is compared
std::strong_ordering int_order(Elem::Int a, Elem::Int b) {
  if (auto c = abs_u64(a) <=> abs_u64(b); c != 0) return c;
  return (a < 0) <=> (b < 0);
}

}  // namespace

struct Elem::Node {
  using Payload = std::variant<Int, std::vector<Int>, std::pair<Elem, Elem>,
                               std::vector<MapEntry>, std::vector<Letter>>;
  Payload payload;
  std::size_t hash = 0;

  explicit Node(Payload p) : payload(std::move(p)) { hash = compute_hash(); }

  Kind kind() const { return static_cast<Kind>(payload.index()); }

  std::size_t compute_hash() const {
    std::size_t h = mix(0x517cc1b7, static_cast<std::size_t>(payload.index()));
    switch (kind()) {
      case Kind::Int:
        return mix(h, static_cast<std::size_t>(std::get<Int>(payload)));
      case Kind::Tuple:
        for (Int v : std::get<std::vector<Int>>(payload))
          h = mix(h, static_cast<std::size_t>(v));
        return h;
      case Kind::Pair: {
        const auto& p = std::get<std::pair<Elem, Elem>>(payload);
        return mix(mix(h, p.first.hash()), p.second.hash());
      }
      case Kind::Map:
        for (const auto& [k, v] : std::get<std::vector<MapEntry>>(payload))
          h = mix(mix(h, k.hash()), v.hash());
        return h;
      case Kind::Word:
        for (const auto& l : std::get<std::vector<Letter>>(payload))
          h = mix(mix(h, static_cast<std::size_t>(l.factor)), l.syllable.hash());
        return h;
    }
    return h;
  }
};

Elem Elem::integer(Int n) {
  return Elem(std::make_shared<const Node>(Node::Payload(std::in_place_index<0>, n)));
}

Elem Elem::tuple(std::vector<Int> v) {
  return Elem(std::make_shared<const Node>(Node::Payload(std::in_place_index<1>, std::move(v))));
}

Elem Elem::pair(Elem a, Elem b) {
  return Elem(std::make_shared<const Node>(
      Node::Payload(std::in_place_index<2>, std::pair<Elem, Elem>(std::move(a), std::move(b)))));
}

Elem Elem::map(std::vector<MapEntry> entries) {
#ifndef NDEBUG
  for (std::size_t i = 1; i < entries.size(); ++i)
    assert(entries[i - 1].first < entries[i].first);
#endif
  return Elem(std::make_shared<const Node>(Node::Payload(std::in_place_index<3>, std::move(entries))));
}

Elem Elem::word(std::vector<Letter> letters) {
#ifndef NDEBUG
  for (std::size_t i = 1; i < letters.size(); ++i)
    assert(letters[i - 1].factor != letters[i].factor);
#endif
  return Elem(std::make_shared<const Node>(Node::Payload(std::in_place_index<4>, std::move(letters))));
}

Elem::Kind Elem::kind() const { return node_->kind(); }

Elem::Int Elem::as_int() const { return std::get<Int>(node_->payload); }

const std::vector<Elem::Int>& Elem::as_tuple() const {
  return std::get<std::vector<Int>>(node_->payload);
}

const Elem& Elem::first() const { return std::get<std::pair<Elem, Elem>>(node_->payload).first; }

const Elem& Elem::second() const { return std::get<std::pair<Elem, Elem>>(node_->payload).second; }

const std::vector<Elem::MapEntry>& Elem::as_map() const {
  return std::get<std::vector<MapEntry>>(node_->payload);
}

const std::vector<Elem::Letter>& Elem::as_word() const {
  return std::get<std::vector<Letter>>(node_->payload);
}

std::size_t Elem::hash() const { return node_->hash; }

bool Elem::operator==(const Elem& o) const {
  if (node_ == o.node_) return true;
  if (node_->hash != o.node_->hash) return false;
  return (*this <=> o) == 0;
}

std::strong_ordering Elem::operator<=>(const Elem& o) const {
  if (node_ == o.node_) return std::strong_ordering::equal;
  if (auto c = kind() <=> o.kind(); c != 0) return c;
  switch (kind()) {
    case Kind::Int:
      return int_order(as_int(), o.as_int());
    case Kind::Tuple: {
      const auto& a = as_tuple();
      const auto& b = o.as_tuple();
      if (auto c = a.size() <=> b.size(); c != 0) return c;
      for (std::size_t i = 0; i < a.size(); ++i)
        if (auto c = int_order(a[i], b[i]); c != 0) return c;
      return std::strong_ordering::equal;
    }
    case Kind::Pair: {
      if (auto c = first() <=> o.first(); c != 0) return c;
      return second() <=> o.second();
    }
    case Kind::Map: {
      const auto& a = as_map();
      const auto& b = o.as_map();
      if (auto c = a.size() <=> b.size(); c != 0) return c;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (auto c = a[i].first <=> b[i].first; c != 0) return c;
        if (auto c = a[i].second <=> b[i].second; c != 0) return c;
      }
      return std::strong_ordering::equal;
    }
    case Kind::Word: {
      const auto& a = as_word();
      const auto& b = o.as_word();
      if (auto c = a.size() <=> b.size(); c != 0) return c;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (auto c = a[i].factor <=> b[i].factor; c != 0) return c;
        if (auto c = a[i].syllable <=> b[i].syllable; c != 0) return c;
      }
      return std::strong_ordering::equal;
    }
  }
  return std::strong_ordering::equal;
}

std::string Elem::repr() const {
  std::ostringstream os;
  switch (kind()) {
    case Kind::Int:
      os << as_int();
      break;
    case Kind::Tuple: {
      os << '(';
      const auto& t = as_tuple();
      for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
      os << ')';
      break;
    }
    case Kind::Pair:
      os << '[' << first().repr() << ';' << second().repr() << ']';
      break;
    case Kind::Map: {
      os << '{';
      bool sep = false;
      for (const auto& [k, v] : as_map()) {
        os << (sep ? "," : "") << k.repr() << "->" << v.repr();
        sep = true;
      }
      os << '}';
      break;
    }
    case Kind::Word: {
      if (as_word().empty()) {
        os << 'e';
        break;
      }
      bool sep = false;
      for (const auto& l : as_word()) {
        os << (sep ? " " : "") << 'x' << l.factor << '{' << l.syllable.repr() << '}';
        sep = true;
      }
      break;
    }
  }
  return os.str();
}

}  // namespace mixlab
