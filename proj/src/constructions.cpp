#include "mixlab/constructions.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace mixlab {
namespace {

// ----- literal scanning helpers ------------------------------------------

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void parse_fail(std::string_view text, std::size_t pos, const std::string& what) {
  throw InputError("cannot parse '" + std::string(text) + "' at position " + std::to_string(pos) +
                   ": " + what);
}

Elem::Int parse_int(std::string_view text) {
  std::string_view t = trim(text);
  Elem::Int value = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size())
    parse_fail(text, static_cast<std::size_t>(ptr - t.data()), "expected an integer");
  return value;
}

int bracket_delta(char c) {
  switch (c) {
    case '(': case '{': case '[': return 1;
    case ')': case '}': case ']': return -1;
    default: return 0;
  }
}

// split at top-level occurrences of sep (bracket-aware)
std::vector<std::string_view> split_top(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    depth += bracket_delta(s[i]);
    if (depth < 0) parse_fail(s, i, "unbalanced brackets");
    if (depth == 0 && s[i] == sep) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  if (depth != 0) parse_fail(s, s.size(), "unbalanced brackets");
  parts.push_back(s.substr(start));
  return parts;
}

std::string_view strip_outer(std::string_view s, char open, char close) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == open && s.back() == close) {
    // only strip when the outer pair matches
    int depth = 0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      depth += bracket_delta(s[i]);
      if (depth == 0) return s;  // closes before the end: not an outer pair
    }
    return trim(s.substr(1, s.size() - 2));
  }
  return s;
}

// ----- Z ------------------------------------------------------------------

class IntegerGroup final : public Group {
 public:
  explicit IntegerGroup(std::string name) : Group(std::move(name)), gens_{Elem::integer(1)} {}

  Elem identity() const override { return Elem::integer(0); }
  Elem op(const Elem& x, const Elem& y) const override {
    return Elem::integer(x.as_int() + y.as_int());
  }
  Elem inv(const Elem& x) const override { return Elem::integer(-x.as_int()); }
  const std::vector<Elem>& generators() const override { return gens_; }
  std::string format(const Elem& x) const override { return std::to_string(x.as_int()); }
  Elem parse(std::string_view text) const override { return Elem::integer(parse_int(text)); }
  std::string grammar_help() const override { return "integer, e.g. -3"; }

 private:
  std::vector<Elem> gens_;
};

// ----- Z/n ----------------------------------------------------------------

class CyclicGroup final : public Group {
 public:
  CyclicGroup(Elem::Int n, std::string name)
      : Group(std::move(name)), n_(n), gens_{Elem::integer(1 % n)} {
    if (n < 2) throw InputError("cyclic group order must be >= 2");
  }

  Elem identity() const override { return Elem::integer(0); }
  Elem op(const Elem& x, const Elem& y) const override {
    return Elem::integer((x.as_int() + y.as_int()) % n_);
  }
  Elem inv(const Elem& x) const override {
    return Elem::integer(x.as_int() == 0 ? 0 : n_ - x.as_int());
  }
  const std::vector<Elem>& generators() const override { return gens_; }
  std::string format(const Elem& x) const override { return std::to_string(x.as_int()); }
  Elem parse(std::string_view text) const override {
    Elem::Int v = parse_int(text) % n_;
    return Elem::integer(v < 0 ? v + n_ : v);
  }
  std::string grammar_help() const override {
    return "residue 0.." + std::to_string(n_ - 1);
  }
  Elem::Int order() const { return n_; }

 private:
  Elem::Int n_;
  std::vector<Elem> gens_;
};

// ----- Z^d ----------------------------------------------------------------

class LatticeGroup final : public Group {
 public:
  LatticeGroup(int dim, std::string name) : Group(std::move(name)), dim_(dim) {
    if (dim < 1) throw InputError("lattice dimension must be >= 1");
    for (int i = 0; i < dim; ++i) {
      std::vector<Elem::Int> v(static_cast<std::size_t>(dim), 0);
      v[static_cast<std::size_t>(i)] = 1;
      gens_.push_back(Elem::tuple(std::move(v)));
    }
  }

  Elem identity() const override {
    return Elem::tuple(std::vector<Elem::Int>(static_cast<std::size_t>(dim_), 0));
  }
  Elem op(const Elem& x, const Elem& y) const override {
    std::vector<Elem::Int> v = x.as_tuple();
    const auto& w = y.as_tuple();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += w[i];
    return Elem::tuple(std::move(v));
  }
  Elem inv(const Elem& x) const override {
    std::vector<Elem::Int> v = x.as_tuple();
    for (auto& c : v) c = -c;
    return Elem::tuple(std::move(v));
  }
  const std::vector<Elem>& generators() const override { return gens_; }
  std::string format(const Elem& x) const override {
    std::ostringstream os;
    os << '(';
    const auto& t = x.as_tuple();
    for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
    os << ')';
    return os.str();
  }
  Elem parse(std::string_view text) const override {
    std::string_view t = strip_outer(text, '(', ')');
    auto parts = split_top(t, ',');
    if (static_cast<int>(parts.size()) != dim_)
      parse_fail(text, 0, "expected " + std::to_string(dim_) + " comma-separated integers");
    std::vector<Elem::Int> v;
    v.reserve(parts.size());
    for (auto p : parts) v.push_back(parse_int(p));
    return Elem::tuple(std::move(v));
  }
  std::string grammar_help() const override {
    return std::to_string(dim_) + " comma-separated integers, e.g. (1,0)";
  }
  int dim() const { return dim_; }

 private:
  int dim_;
  std::vector<Elem> gens_;
};

// embed a factor ball on the left/right of a pair, keeping its levels
Ball embed_ball(const Ball& b, const std::function<Elem(const Elem&)>& f) {
  Ball out;
  out.radius = b.radius;
  out.level_end = b.level_end;
  out.elems.reserve(b.elems.size());
  for (const Elem& e : b.elems) out.elems.push_back(f(e));
  return out;
}

}  // namespace

GroupPtr integers(std::string name) { return std::make_shared<IntegerGroup>(std::move(name)); }

GroupPtr cyclic(Elem::Int n, std::string name) {
  if (name.empty()) name = "Z" + std::to_string(n);
  return std::make_shared<CyclicGroup>(n, std::move(name));
}

GroupPtr lattice(int dim, std::string name) {
  if (name.empty()) name = "Z^" + std::to_string(dim);
  return std::make_shared<LatticeGroup>(dim, std::move(name));
}

// ----- pair groups ---------------------------------------------------------

namespace {

// direct product: componentwise pairs
class DirectProductGroup final : public PairGroup {
 public:
  DirectProductGroup(std::string name, GroupPtr a, GroupPtr b)
      : PairGroup(std::move(name), std::move(a), std::move(b)) {
    for (const Elem& s : left_->generators()) gens_.push_back(embed_left(s));
    for (const Elem& s : right_->generators()) gens_.push_back(embed_right(s));
  }

  Elem identity() const override {
    return Elem::pair(left_->identity(), right_->identity());
  }
  Elem op(const Elem& x, const Elem& y) const override {
    return Elem::pair(left_->op(x.first(), y.first()), right_->op(x.second(), y.second()));
  }
  Elem inv(const Elem& x) const override {
    return Elem::pair(left_->inv(x.first()), right_->inv(x.second()));
  }
  const std::vector<Elem>& generators() const override { return gens_; }
  std::string format(const Elem& x) const override {
    return "(" + left_->format(x.first()) + "|" + right_->format(x.second()) + ")";
  }
  Elem parse(std::string_view text) const override {
    std::string_view t = strip_outer(text, '(', ')');
    auto parts = split_top(t, '|');
    if (parts.size() != 2) parse_fail(text, 0, "expected 'left|right'");
    return Elem::pair(left_->parse(parts[0]), right_->parse(parts[1]));
  }
  std::string grammar_help() const override {
    return "(left|right) with left: " + left_->grammar_help() +
           "; right: " + right_->grammar_help();
  }

 private:
  std::vector<Elem> gens_;
};

}  // namespace

PairGroup::PairGroup(std::string name, GroupPtr left, GroupPtr right)
    : Group(std::move(name)), left_(std::move(left)), right_(std::move(right)) {
  if (!left_ || !right_) throw InputError("pair group requires two factors");
}

Elem PairGroup::embed_left(const Elem& a) const { return Elem::pair(a, right_->identity()); }

Elem PairGroup::embed_right(const Elem& b) const { return Elem::pair(left_->identity(), b); }

Subgroup PairGroup::left_factor() const {
  GroupPtr me = self();
  GroupPtr left = left_;
  std::vector<Elem> gens;
  for (const Elem& s : left_->generators()) gens.push_back(embed_left(s));
  Elem re = right_->identity();
  return Subgroup(
      me, left_->name() + "x{e}",
      [re](const Elem& x) { return x.second() == re; }, std::move(gens),
      [left, re](int r, std::int64_t cap) {
        return embed_ball(left->ball(r, cap), [&](const Elem& a) { return Elem::pair(a, re); });
      });
}

Subgroup PairGroup::right_factor() const {
  GroupPtr me = self();
  GroupPtr right = right_;
  Elem le = left_->identity();
  std::vector<Elem> gens;
  for (const Elem& s : right_->generators()) gens.push_back(embed_right(s));
  return Subgroup(
      me, "{e}x" + right_->name(),
      [le](const Elem& x) { return x.first() == le; }, std::move(gens),
      [right, le](int r, std::int64_t cap) {
        return embed_ball(right->ball(r, cap), [&](const Elem& b) { return Elem::pair(le, b); });
      });
}

std::shared_ptr<const PairGroup> direct_product(GroupPtr a, GroupPtr b, std::string name) {
  if (name.empty()) name = a->name() + "x" + b->name();
  return std::make_shared<DirectProductGroup>(std::move(name), std::move(a), std::move(b));
}

// ----- semidirect products -------------------------------------------------

void validate_action(const Action& act, int radius, std::int64_t cap) {
  if (!act.acting || !act.space || !act.apply) throw InputError("action is incomplete");
  const Group& k = *act.acting;
  const Group& a = *act.space;
  Ball kb = k.ball(std::min(radius, 2), cap);
  Ball ab = a.ball(radius, cap);
  Elem ke = k.identity();
  for (const Elem& x : ab.elems)
    if (!(act.apply(ke, x) == x))
      throw InputError("action '" + act.name + "': identity moves " + a.format(x));
  for (const Elem& g : kb.elems) {
    for (const Elem& h : kb.elems) {
      Elem gh = k.op(g, h);
      for (const Elem& x : ab.elems)
        if (!(act.apply(gh, x) == act.apply(g, act.apply(h, x))))
          throw InputError("action '" + act.name + "' is not compositional at k=" + k.format(g) +
                           ", l=" + k.format(h) + ", a=" + a.format(x));
    }
    for (const Elem& x : ab.elems)
      for (const Elem& y : ab.elems)
        if (!(act.apply(g, a.op(x, y)) == a.op(act.apply(g, x), act.apply(g, y))))
          throw InputError("action '" + act.name + "' is not an automorphism at k=" + k.format(g));
  }
}

SemidirectGroup::SemidirectGroup(Action act, std::string name)
    : PairGroup(std::move(name), act.space, act.acting), act_(std::move(act)) {
  for (const Elem& s : base()->generators()) gens_.push_back(embed_left(s));
  for (const Elem& s : top()->generators()) gens_.push_back(embed_right(s));
}

std::shared_ptr<const SemidirectGroup> SemidirectGroup::make(Action act, std::string name) {
  if (name.empty()) name = act.space->name() + "x|" + act.acting->name();
  validate_action(act, 2, 200'000);
  return std::shared_ptr<const SemidirectGroup>(new SemidirectGroup(std::move(act), std::move(name)));
}

Elem SemidirectGroup::identity() const {
  return Elem::pair(base()->identity(), top()->identity());
}

Elem SemidirectGroup::op(const Elem& x, const Elem& y) const {
  // (a, k)(b, l) = (a * k.b, kl)
  return Elem::pair(base()->op(x.first(), act_.apply(x.second(), y.first())),
                    top()->op(x.second(), y.second()));
}

Elem SemidirectGroup::inv(const Elem& x) const {
  // (a, k)^-1 = (k^-1 . a^-1, k^-1)
  Elem ki = top()->inv(x.second());
  return Elem::pair(act_.apply(ki, base()->inv(x.first())), ki);
}

const std::vector<Elem>& SemidirectGroup::generators() const { return gens_; }

std::string SemidirectGroup::format(const Elem& x) const {
  return base()->format(x.first()) + ":" + top()->format(x.second());
}

Elem SemidirectGroup::parse(std::string_view text) const {
  auto parts = split_top(trim(text), ':');
  if (parts.size() == 1) return Elem::pair(base()->parse(parts[0]), top()->identity());
  if (parts.size() == 2) return Elem::pair(base()->parse(parts[0]), top()->parse(parts[1]));
  parse_fail(text, 0, "expected 'base:top' or 'base'");
}

std::string SemidirectGroup::grammar_help() const {
  return "base:top (':top' optional) with base: " + base()->grammar_help() +
         "; top: " + top()->grammar_help();
}

Subgroup SemidirectGroup::base_subgroup() const { return left_factor(); }

Subgroup SemidirectGroup::top_subgroup() const { return right_factor(); }

namespace {

using Matrix = std::vector<std::vector<Elem::Int>>;

Elem::Int det(const Matrix& m) {
  std::size_t n = m.size();
  if (n == 1) return m[0][0];
  Elem::Int d = 0, sign = 1;
  for (std::size_t j = 0; j < n; ++j) {
    Matrix minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Elem::Int> row;
      for (std::size_t c = 0; c < n; ++c)
        if (c != j) row.push_back(m[r][c]);
      minor.push_back(std::move(row));
    }
    d += sign * m[0][j] * det(minor);
    sign = -sign;
  }
  return d;
}

Matrix unimodular_inverse(const Matrix& m, Elem::Int d) {
  // adjugate / det, integral because |det| = 1
  std::size_t n = m.size();
  Matrix inv(n, std::vector<Elem::Int>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Matrix minor;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == i) continue;
        std::vector<Elem::Int> row;
        for (std::size_t c = 0; c < n; ++c)
          if (c != j) row.push_back(m[r][c]);
        minor.push_back(std::move(row));
      }
      Elem::Int cof = ((i + j) % 2 == 0 ? 1 : -1) * (n == 1 ? 1 : det(minor));
      inv[j][i] = cof / d;  // d is +-1
    }
  return inv;
}

std::vector<Elem::Int> mat_apply(const Matrix& m, const std::vector<Elem::Int>& v) {
  std::vector<Elem::Int> out(v.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  return out;
}

}  // namespace

Action matrix_action(GroupPtr z, GroupPtr zd, Matrix m) {
  auto lat = std::dynamic_pointer_cast<const LatticeGroup>(zd);
  if (!lat) throw InputError("matrix action requires a lattice space");
  std::size_t n = static_cast<std::size_t>(lat->dim());
  if (m.size() != n) throw InputError("matrix size does not match lattice dimension");
  for (const auto& row : m)
    if (row.size() != n) throw InputError("matrix is not square");
  Elem::Int d = det(m);
  if (d != 1 && d != -1) throw InputError("matrix action requires det = +-1, got " + std::to_string(d));
  Matrix mi = unimodular_inverse(m, d);
  return Action{
      std::move(z), zd,
      [m, mi](const Elem& k, const Elem& a) {
        Elem::Int nzs = k.as_int();
        std::vector<Elem::Int> v = a.as_tuple();
        const Matrix& step = nzs >= 0 ? m : mi;
        for (Elem::Int i = 0, cnt = nzs >= 0 ? nzs : -nzs; i < cnt; ++i) v = mat_apply(step, v);
        return Elem::tuple(std::move(v));
      },
      "matrix"};
}

Action trivial_action(GroupPtr k, GroupPtr a) {
  return Action{std::move(k), std::move(a), [](const Elem&, const Elem& x) { return x; },
                "trivial"};
}

// ----- wreath products -------------------------------------------------------

PointSet left_translation(GroupPtr k) {
  GroupPtr kp = k;
  return PointSet{
      kp, [kp](const Elem& g, const Elem& x) { return kp->op(g, x); },
      [kp](int r, std::int64_t cap) { return kp->ball(r, cap); }, kp->identity(),
      kp->name() + " by left translation"};
}

FinSuppGroup::FinSuppGroup(PointSet x, GroupPtr values, std::string name)
    : Group(std::move(name)), x_(std::move(x)), values_(std::move(values)) {
  for (const Elem& s : values_->generators()) gens_.push_back(delta(x_.basepoint, s));
}

std::shared_ptr<const FinSuppGroup> FinSuppGroup::make(PointSet x, GroupPtr values,
                                                       std::string name) {
  if (name.empty()) name = values->name() + "^(" + x.point_names->name() + ")";
  return std::shared_ptr<const FinSuppGroup>(
      new FinSuppGroup(std::move(x), std::move(values), std::move(name)));
}

Elem FinSuppGroup::identity() const { return Elem::map({}); }

Elem FinSuppGroup::op(const Elem& x, const Elem& y) const {
  const auto& a = x.as_map();
  const auto& b = y.as_map();
  std::vector<Elem::MapEntry> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  Elem ve = values_->identity();
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      Elem v = values_->op(a[i].second, b[j].second);
      if (!(v == ve)) out.emplace_back(a[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return Elem::map(std::move(out));
}

Elem FinSuppGroup::inv(const Elem& x) const {
  std::vector<Elem::MapEntry> out;
  out.reserve(x.as_map().size());
  for (const auto& [p, v] : x.as_map()) out.emplace_back(p, values_->inv(v));
  return Elem::map(std::move(out));
}

const std::vector<Elem>& FinSuppGroup::generators() const { return gens_; }

Elem FinSuppGroup::delta(const Elem& point, const Elem& value) const {
  if (value == values_->identity()) return identity();
  return Elem::map({{point, value}});
}

Elem FinSuppGroup::translate(const Elem& k, const Elem& f) const {
  std::vector<Elem::MapEntry> out;
  out.reserve(f.as_map().size());
  for (const auto& [p, v] : f.as_map()) out.emplace_back(x_.act(k, p), v);
  std::sort(out.begin(), out.end(),
            [](const Elem::MapEntry& a, const Elem::MapEntry& b) { return a.first < b.first; });
  return Elem::map(std::move(out));
}

Ball FinSuppGroup::ball(int radius, std::int64_t element_cap) const {
  // supports inside the point ball of this radius, total value cost <= radius
  Ball pts = x_.points(radius, element_cap);
  std::vector<Elem> points = pts.elems;
  std::sort(points.begin(), points.end());  // keep map keys sorted during recursion

  Ball vb = values_->ball(radius, element_cap);
  std::vector<std::pair<Elem, int>> vals;  // non-identity values with word-length cost
  for (int lvl = 1; lvl < static_cast<int>(vb.level_end.size()); ++lvl) {
    auto [lo, hi] = vb.level(lvl);
    for (std::size_t i = lo; i < hi; ++i) vals.emplace_back(vb.elems[i], lvl);
  }

  std::vector<std::pair<Elem, int>> found;  // (map, cost)
  std::vector<Elem::MapEntry> cur;
  std::int64_t cap = element_cap;
  auto rec = [&](auto&& self, std::size_t from, int used) -> void {
    found.emplace_back(Elem::map(cur), used);
    if (static_cast<std::int64_t>(found.size()) > cap) throw BallOverflow(cap);
    for (std::size_t p = from; p < points.size(); ++p)
      for (const auto& [v, c] : vals)
        if (used + c <= radius) {
          cur.emplace_back(points[p], v);
          self(self, p + 1, used + c);
          cur.pop_back();
        }
  };
  rec(rec, 0, 0);

  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second < b.second;
    return a.first < b.first;
  });
  Ball out;
  out.radius = radius;
  std::size_t idx = 0;
  for (int lvl = 0; lvl <= radius; ++lvl) {
    while (idx < found.size() && found[idx].second == lvl) out.elems.push_back(found[idx++].first);
    out.level_end.push_back(out.elems.size());
  }
  return out;
}

std::string FinSuppGroup::format(const Elem& x) const {
  auto cyc = std::dynamic_pointer_cast<const CyclicGroup>(values_);
  bool compact = cyc && cyc->order() == 2;
  std::ostringstream os;
  os << '{';
  bool sep = false;
  for (const auto& [p, v] : x.as_map()) {
    os << (sep ? "," : "") << x_.point_names->format(p);
    if (!compact) os << "->" << values_->format(v);
    sep = true;
  }
  os << '}';
  return os.str();
}

Elem FinSuppGroup::parse(std::string_view text) const {
  std::string_view t = trim(text);
  if (t.empty() || t.front() != '{' || t.back() != '}')
    parse_fail(text, 0, "expected '{...}'");
  t = t.substr(1, t.size() - 2);
  std::vector<Elem::MapEntry> entries;
  if (!trim(t).empty()) {
    Elem ve = values_->identity();
    for (auto part : split_top(t, ',')) {
      auto arrow = part.find("->");
      Elem p = arrow == std::string_view::npos ? x_.point_names->parse(part)
                                               : x_.point_names->parse(part.substr(0, arrow));
      Elem v = arrow == std::string_view::npos
                   ? values_->generators().front()
                   : values_->parse(part.substr(arrow + 2));
      if (!(v == ve)) entries.emplace_back(std::move(p), std::move(v));
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const Elem::MapEntry& a, const Elem::MapEntry& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (entries[i - 1].first == entries[i].first) parse_fail(text, 0, "repeated point");
  return Elem::map(std::move(entries));
}

std::string FinSuppGroup::grammar_help() const {
  return "{point,point,...} (value " + values_->grammar_help() +
         " via 'point->value', omitted for the generator)";
}

std::shared_ptr<const SemidirectGroup> wreath(GroupPtr values, PointSet x, GroupPtr k,
                                              std::string name) {
  auto base = FinSuppGroup::make(std::move(x), values, "");
  if (name.empty()) name = values->name() + "wr" + k->name();
  Action shift{k, base,
               [base](const Elem& g, const Elem& f) { return base->translate(g, f); },
               "shift"};
  return SemidirectGroup::make(std::move(shift), std::move(name));
}

// ----- free products ----------------------------------------------------------

FreeProductGroup::FreeProductGroup(GroupPtr g0, GroupPtr g1, std::vector<std::string> letters,
                                   std::string name)
    : Group(std::move(name)), factors_{std::move(g0), std::move(g1)}, letters_(std::move(letters)) {
  if (letters_.size() != factors_.size()) throw InputError("free product needs one letter per factor");
  for (int i = 0; i < 2; ++i)
    for (const Elem& s : factors_[static_cast<std::size_t>(i)]->generators())
      gens_.push_back(embed(i, s));
}

std::shared_ptr<const FreeProductGroup> FreeProductGroup::make(GroupPtr g0, GroupPtr g1,
                                                               std::vector<std::string> letters,
                                                               std::string name) {
  if (name.empty()) name = g0->name() + "*" + g1->name();
  return std::shared_ptr<const FreeProductGroup>(
      new FreeProductGroup(std::move(g0), std::move(g1), std::move(letters), std::move(name)));
}

Elem FreeProductGroup::identity() const { return Elem::word({}); }

Elem FreeProductGroup::embed(int i, const Elem& a) const {
  const Group& f = *factors_.at(static_cast<std::size_t>(i));
  if (a == f.identity()) return identity();
  return Elem::word({{i, a}});
}

Elem FreeProductGroup::op(const Elem& x, const Elem& y) const {
  std::vector<Elem::Letter> w = x.as_word();
  const auto& v = y.as_word();
  std::size_t j = 0;
  while (!w.empty() && j < v.size() && w.back().factor == v[j].factor) {
    const Group& f = *factors_[static_cast<std::size_t>(w.back().factor)];
    Elem merged = f.op(w.back().syllable, v[j].syllable);
    w.pop_back();
    ++j;
    if (!(merged == f.identity())) {
      w.push_back({v[j - 1].factor, std::move(merged)});
      break;  // alternation is restored, no further cancellation possible
    }
  }
  w.insert(w.end(), v.begin() + static_cast<std::ptrdiff_t>(j), v.end());
  return Elem::word(std::move(w));
}

Elem FreeProductGroup::inv(const Elem& x) const {
  const auto& w = x.as_word();
  std::vector<Elem::Letter> out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it)
    out.push_back({it->factor, factors_[static_cast<std::size_t>(it->factor)]->inv(it->syllable)});
  return Elem::word(std::move(out));
}

const std::vector<Elem>& FreeProductGroup::generators() const { return gens_; }

std::string FreeProductGroup::format(const Elem& x) const {
  const auto& w = x.as_word();
  if (w.empty()) return "e";
  std::ostringstream os;
  bool sep = false;
  for (const auto& l : w) {
    os << (sep ? " " : "") << letters_[static_cast<std::size_t>(l.factor)];
    if (l.syllable.kind() == Elem::Kind::Int) {
      if (l.syllable.as_int() != 1) os << '^' << l.syllable.as_int();
    } else {
      os << '{' << factors_[static_cast<std::size_t>(l.factor)]->format(l.syllable) << '}';
    }
    sep = true;
  }
  return os.str();
}

Elem FreeProductGroup::parse(std::string_view text) const {
  std::string_view t = trim(text);
  if (t == "e" || t.empty()) return identity();
  Elem out = identity();
  std::size_t pos = 0;
  while (pos < t.size()) {
    while (pos < t.size() && std::isspace(static_cast<unsigned char>(t[pos]))) ++pos;
    if (pos >= t.size()) break;
    int fac = -1;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
      const std::string& l = letters_[i];
      if (t.substr(pos, l.size()) == l) {
        fac = static_cast<int>(i);
        pos += l.size();
        break;
      }
    }
    if (fac < 0) parse_fail(text, pos, "expected a factor letter");
    Elem::Int exp = 1;
    if (pos < t.size() && t[pos] == '^') {
      ++pos;
      std::size_t end = pos;
      if (end < t.size() && (t[end] == '-' || t[end] == '+')) ++end;
      while (end < t.size() && std::isdigit(static_cast<unsigned char>(t[end]))) ++end;
      exp = parse_int(t.substr(pos, end - pos));
      pos = end;
    }
    const Group& f = *factors_[static_cast<std::size_t>(fac)];
    Elem syl = f.identity();
    Elem g = f.generators().front();
    Elem step = exp >= 0 ? g : f.inv(g);
    for (Elem::Int i = 0, n = exp >= 0 ? exp : -exp; i < n; ++i) syl = f.op(syl, step);
    out = op(out, embed(fac, syl));
  }
  return out;
}

std::string FreeProductGroup::grammar_help() const {
  return "word in letters " + letters_[0] + ", " + letters_[1] +
         " with integer exponents, e.g. '" + letters_[0] + "^2 " + letters_[1] + "^-1'; 'e' = identity";
}

Subgroup FreeProductGroup::factor_subgroup(int i) const {
  GroupPtr me = self();
  GroupPtr fac = factors_.at(static_cast<std::size_t>(i));
  std::vector<Elem> gens;
  for (const Elem& s : fac->generators()) gens.push_back(embed(i, s));
  auto embed_one = [i, fac](const Elem& a) {
    return a == fac->identity() ? Elem::word({}) : Elem::word({{i, a}});
  };
  return Subgroup(
      me, "<" + letters_[static_cast<std::size_t>(i)] + ">",
      [i](const Elem& w) {
        const auto& ls = w.as_word();
        return ls.empty() || (ls.size() == 1 && ls[0].factor == i);
      },
      std::move(gens), [fac, embed_one](int r, std::int64_t cap) {
        return embed_ball(fac->ball(r, cap), embed_one);
      });
}

GroupPtr free_product(GroupPtr g0, GroupPtr g1, std::vector<std::string> letters,
                      std::string name) {
  return FreeProductGroup::make(std::move(g0), std::move(g1), std::move(letters), std::move(name));
}

// ----- subgroup combinators -----------------------------------------------------

Subgroup product_subgroup(std::shared_ptr<const PairGroup> g, const Subgroup& s1,
                          const Subgroup& s2, std::string name) {
  if (s1.parent_ptr().get() != g->left().get() || s2.parent_ptr().get() != g->right().get())
    throw InputError("product subgroup factors must live in the pair group's factors");
  if (name.empty()) name = s1.name() + "x" + s2.name();
  std::vector<Elem> gens;
  for (const Elem& s : s1.generators()) gens.push_back(g->embed_left(s));
  for (const Elem& s : s2.generators()) gens.push_back(g->embed_right(s));
  auto p1 = std::make_shared<Subgroup>(s1);
  auto p2 = std::make_shared<Subgroup>(s2);
  return Subgroup(
      g, std::move(name),
      [p1, p2](const Elem& x) { return p1->contains(x.first()) && p2->contains(x.second()); },
      std::move(gens), [p1, p2](int r, std::int64_t cap) {
        Ball b1 = p1->ball(r, cap);
        Ball b2 = p2->ball(r, cap);
        Ball out;
        out.radius = r;
        for (int total = 0; total <= r; ++total) {
          std::vector<Elem> level;
          for (int c1v = 0; c1v <= total; ++c1v) {
            auto [lo1, hi1] = b1.level(c1v);
            auto [lo2, hi2] = b2.level(total - c1v);
            for (std::size_t i = lo1; i < hi1; ++i)
              for (std::size_t j = lo2; j < hi2; ++j)
                level.push_back(Elem::pair(b1.elems[i], b2.elems[j]));
          }
          std::sort(level.begin(), level.end());
          out.elems.insert(out.elems.end(), level.begin(), level.end());
          out.level_end.push_back(out.elems.size());
          if (static_cast<std::int64_t>(out.elems.size()) > cap) throw BallOverflow(cap);
        }
        return out;
      });
}

Subgroup conjugate_subgroup(const Subgroup& s, const Elem& g, std::string name) {
  GroupPtr parent = s.parent_ptr();
  const Group& gg = *parent;
  Elem gi = gg.inv(g);
  if (name.empty()) name = gg.format(g) + "*" + s.name() + "*" + gg.format(gi);
  std::vector<Elem> gens;
  for (const Elem& h : s.generators()) gens.push_back(gg.op(gg.op(g, h), gi));
  auto base = std::make_shared<Subgroup>(s);
  Elem gc = g;
  return Subgroup(
      parent, std::move(name),
      [base, parent, gc, gi](const Elem& x) {
        return base->contains(parent->op(parent->op(gi, x), gc));
      },
      std::move(gens), [base, parent, gc, gi](int r, std::int64_t cap) {
        Ball b = base->ball(r, cap);
        Ball out;
        out.radius = r;
        out.level_end = b.level_end;
        std::size_t lo = 0;
        for (std::size_t k = 0; k < b.level_end.size(); ++k) {
          std::vector<Elem> level;
          for (std::size_t i = lo; i < b.level_end[k]; ++i)
            level.push_back(parent->op(parent->op(gc, b.elems[i]), gi));
          std::sort(level.begin(), level.end());
          out.elems.insert(out.elems.end(), level.begin(), level.end());
          lo = b.level_end[k];
        }
        return out;
      });
}

Subgroup intersect_subgroups(const Subgroup& s1, const Subgroup& s2, std::string name) {
  if (s1.parent_ptr().get() != s2.parent_ptr().get())
    throw InputError("subgroup intersection requires a common parent");
  if (name.empty()) name = s1.name() + "&" + s2.name();
  auto p1 = std::make_shared<Subgroup>(s1);
  auto p2 = std::make_shared<Subgroup>(s2);
  return Subgroup(
      s1.parent_ptr(), std::move(name),
      [p1, p2](const Elem& x) { return p1->contains(x) && p2->contains(x); },
      std::vector<Elem>{});
}

}  // namespace mixlab
