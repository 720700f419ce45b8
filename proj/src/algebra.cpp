#include "mixlab/algebra.hpp"

#include <sstream>

#include "mixlab/constructions.hpp"

namespace mixlab {

std::string Coeff::str() const {
  auto one_part = [](const mpq_class& q, bool imaginary) {
    std::string s;
    if (imaginary && q == 1) return std::string("i");
    if (imaginary && q == -1) return std::string("-i");
    s = q.get_str();
    if (imaginary) s += "i";
    return s;
  };
  if (is_zero()) return "0";
  if (im == 0) return one_part(re, false);
  if (re == 0) return one_part(im, true);
  std::string s = one_part(re, false);
  if (im > 0) s += "+";
  return s + one_part(im, true);
}

AlgebraElement AlgebraElement::lambda(GroupPtr g, const Elem& x, Coeff c) {
  AlgebraElement out(std::move(g));
  out.add_term(x, c);
  return out;
}

Coeff AlgebraElement::at(const Elem& g) const {
  auto it = terms_.find(g);
  return it == terms_.end() ? Coeff() : it->second;
}

AlgebraElement& AlgebraElement::add_term(const Elem& g, const Coeff& c) {
  if (c.is_zero()) return *this;
  auto [it, inserted] = terms_.emplace(g, c);
  if (!inserted) {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
  return *this;
}

namespace {

void require_same_group(const AlgebraElement& x, const AlgebraElement& y) {
  if (x.group().get() != y.group().get())
    throw InputError("algebra elements live in different groups ('" + x.group()->name() +
                     "' vs '" + y.group()->name() + "')");
}

void require_parent(const AlgebraElement& x, const Subgroup& s, const char* what) {
  if (x.group().get() != s.parent_ptr().get())
    throw InputError(std::string(what) + ": subgroup '" + s.name() +
                     "' does not live in group '" + x.group()->name() + "'");
}

}  // namespace

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
  require_same_group(*this, o);
  AlgebraElement out = *this;
  for (const auto& [g, c] : o.terms_) out.add_term(g, c);
  return out;
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const {
  require_same_group(*this, o);
  AlgebraElement out = *this;
  for (const auto& [g, c] : o.terms_) out.add_term(g, -c);
  return out;
}

AlgebraElement AlgebraElement::operator-() const {
  AlgebraElement out = zero(group_);
  for (const auto& [g, c] : terms_) out.add_term(g, -c);
  return out;
}

AlgebraElement AlgebraElement::scaled(const Coeff& c) const {
  AlgebraElement out = zero(group_);
  for (const auto& [g, v] : terms_) out.add_term(g, v * c);
  return out;
}

bool AlgebraElement::operator==(const AlgebraElement& o) const {
  return group_.get() == o.group_.get() && terms_ == o.terms_;
}

AlgebraElement convolve(const AlgebraElement& x, const AlgebraElement& y) {
  require_same_group(x, y);
  const Group& g = *x.group();
  AlgebraElement out = AlgebraElement::zero(x.group());
  for (const auto& [a, ca] : x.terms())
    for (const auto& [b, cb] : y.terms()) out.add_term(g.op(a, b), ca * cb);
  return out;
}

AlgebraElement adjoint(const AlgebraElement& x) {
  const Group& g = *x.group();
  AlgebraElement out = AlgebraElement::zero(x.group());
  for (const auto& [a, c] : x.terms()) out.add_term(g.inv(a), c.conj());
  return out;
}

Coeff trace(const AlgebraElement& x) { return x.at(x.group()->identity()); }

mpq_class norm2_sq(const AlgebraElement& x) {
  mpq_class out(0);
  for (const auto& [g, c] : x.terms()) out += c.abs_sq();
  return out;
}

std::string decimal_approx(const mpq_class& q, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << std::fixed << q.get_d();
  return os.str();
}

AlgebraElement cond_exp(const AlgebraElement& x, const Subgroup& s) {
  require_parent(x, s, "cond_exp");
  AlgebraElement out = AlgebraElement::zero(x.group());
  for (const auto& [g, c] : x.terms())
    if (s.contains(g)) out.add_term(g, c);
  return out;
}

AlgebraElement commutator(const AlgebraElement& x, const AlgebraElement& y) {
  return convolve(x, y) - convolve(y, x);
}

mpq_class wahp_defect(const AlgebraElement& x, const AlgebraElement& y, const AlgebraElement& u,
                      const Subgroup& h, const Subgroup& k) {
  require_same_group(x, y);
  require_same_group(x, u);
  require_parent(x, h, "wahp_defect");
  require_parent(x, k, "wahp_defect");
  for (const auto& [g, c] : u.terms()) {
    if (!h.contains(g))
      throw InputError("wahp_defect: u has support outside H at " + x.group()->format(g));
    if (!k.contains(g))
      throw InputError("wahp_defect: H is not inside K at " + x.group()->format(g));
  }

  AlgebraElement xk = cond_exp(x, k);
  AlgebraElement yk = cond_exp(y, k);
  AlgebraElement lhs = cond_exp(convolve(convolve(x, u), y), h) -
                       cond_exp(convolve(convolve(xk, u), yk), h);
  AlgebraElement rhs = cond_exp(convolve(convolve(x - xk, u), y - yk), h);
  if (!(lhs == rhs))
    throw ConsistencyError("wahp_defect: the two sides of the exact intertwining identity differ");
  return norm2_sq(rhs);
}

bool commuting_square_check(const Subgroup& s1, const Subgroup& s2, const AlgebraElement& x) {
  require_parent(x, s1, "commuting_square_check");
  require_parent(x, s2, "commuting_square_check");
  AlgebraElement a = cond_exp(cond_exp(x, s1), s2);
  AlgebraElement b = cond_exp(cond_exp(x, s2), s1);
  AlgebraElement c = cond_exp(x, intersect_subgroups(s1, s2));
  return a == b && a == c;
}

}  // namespace mixlab
