#include "mixlab/instances.hpp"

#include <string>
#include <utility>

namespace mixlab {

namespace {

using Mat = std::vector<std::vector<Elem::Int>>;

Mat mat_mul(const Mat& a, const Mat& b) {
  std::size_t n = a.size();
  Mat c(n, std::vector<Elem::Int>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

bool mat_is_identity(const Mat& m) {
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      if (m[i][j] != (i == j ? 1 : 0)) return false;
  return true;
}

Elem::Int mat_det(const Mat& m) {
  std::size_t n = m.size();
  if (n == 1) return m[0][0];
  Elem::Int acc = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c] == 0) continue;
    Mat minor;
    minor.reserve(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<Elem::Int> row;
      row.reserve(n - 1);
      for (std::size_t j = 0; j < n; ++j)
        if (j != c) row.push_back(m[i][j]);
      minor.push_back(std::move(row));
    }
    Elem::Int term = m[0][c] * mat_det(minor);
    acc += (c % 2 == 0) ? term : -term;
  }
  return acc;
}

Elem::Int mat_order(const Mat& m, int limit = 64) {
  Mat p = m;
  for (int n = 1; n <= limit; ++n) {
    if (mat_is_identity(p)) return n;
    p = mat_mul(p, m);
  }
  return 0;
}

Mat mat_minus_identity(Mat m) {
  for (std::size_t i = 0; i < m.size(); ++i) m[i][i] -= 1;
  return m;
}

// the whole group as a subgroup of itself
Subgroup full_subgroup(const GroupPtr& g) {
  return Subgroup(
      g, g->name(), [](const Elem&) { return true; }, g->generators(),
      [g](int radius, std::int64_t cap) { return g->ball(radius, cap); });
}

InstancePtr make_wreath_z2_z(std::string id) {
  GroupPtr values = cyclic(2, "Z/2");
  GroupPtr k = integers("Z");
  auto g = wreath(values, left_translation(k), k, "Z/2 wr Z");
  Subgroup top = g->top_subgroup();
  auto base = std::dynamic_pointer_cast<const FinSuppGroup>(g->base());
  return std::make_shared<Instance>(Instance{
      .id = id,
      .summary = "lamplighter Z/2 wr Z with H = K = the translation copy of Z",
      .triple = Triple{g, top, top, id, {"semidirect", "translation-wreath"}},
      .semidirect = SemidirectData{g, full_subgroup(g->top()), true},
      .wreath_data = WreathData{base, true},
      .infinite_note = "H = K is the integer group of translations"});
}

InstancePtr make_rotation4(std::string id) {
  Mat m{{0, -1}, {1, 0}};
  GroupPtr z = integers("Z");
  GroupPtr zd = lattice(2, "Z^2");
  auto g = SemidirectGroup::make(matrix_action(z, zd, m), "Z^2 x| Z (rotation)");
  Subgroup top = g->top_subgroup();
  return std::make_shared<Instance>(Instance{
      .id = id,
      .summary = "Z^2 twisted by the order-4 rotation, H = K = the acting Z",
      .triple = Triple{g, top, top, id, {"semidirect", "finite-order-matrix"}},
      .semidirect = SemidirectData{g, full_subgroup(g->top()), true},
      .matrix_data = MatrixData{m, mat_order(m), mat_det(mat_minus_identity(m))},
      .infinite_note = "H = K is the acting integer group"});
}

InstancePtr make_free_zz(std::string id, std::vector<std::string> tags,
                         std::string summary) {
  auto g = FreeProductGroup::make(integers("<a>"), integers("<b>"), {"a", "b"}, "Z*Z");
  Subgroup h = g->factor_subgroup(0);
  return std::make_shared<Instance>(
      Instance{.id = id,
               .summary = std::move(summary),
               .triple = Triple{g, h, h, id, std::move(tags)},
               .free_data = FreeFactorData{g, 0},
               .infinite_note = "H = K is the infinite cyclic factor <a>"});
}

InstancePtr make_trivial_z2_z(std::string id) {
  GroupPtr z = integers("Z");
  GroupPtr zd = lattice(2, "Z^2");
  auto g = SemidirectGroup::make(trivial_action(z, zd), "Z^2 x Z");
  Subgroup top = g->top_subgroup();
  return std::make_shared<Instance>(Instance{
      .id = id,
      .summary = "direct product Z^2 x Z seen as a trivial action, H = K = Z",
      .triple = Triple{g, top, top, id, {"semidirect", "trivial-action"}},
      .semidirect = SemidirectData{g, full_subgroup(g->top()), true},
      .infinite_note = "H = K is the second factor Z"});
}

InstancePtr make_prod_wreath2(std::string id) {
  InstancePtr f1 = make_wreath_z2_z("");
  InstancePtr f2 = make_wreath_z2_z("");
  auto p = direct_product(f1->triple.G, f2->triple.G, "(Z/2 wr Z)^2");
  Subgroup k = product_subgroup(p, f1->triple.K, f2->triple.K, "Z x Z");
  return std::make_shared<Instance>(
      Instance{.id = id,
               .summary = "square of the lamplighter triple, H = K = Z x Z",
               .triple = Triple{p, k, k, id, {"product"}},
               .factors = {f1, f2},
               .infinite_note = "H = K is a product of two infinite groups"});
}

}  // namespace

const std::vector<InstancePtr>& builtin_instances() {
  static const std::vector<InstancePtr> all = [] {
    std::vector<InstancePtr> v;
    v.push_back(make_wreath_z2_z("wreath-z2-z"));
    v.push_back(make_rotation4("rotation4"));
    v.push_back(make_free_zz("free-zz", {"free-product", "free-factor"},
                             "free product Z*Z with H = K = <a>, word calculus"));
    v.push_back(make_free_zz("f2-cyclic", {"free-product", "malnormal-factor"},
                             "free product Z*Z with H = K = <a>, via malnormality"));
    v.push_back(make_prod_wreath2("prod-wreath2"));
    v.push_back(make_trivial_z2_z("trivial-z2-z"));
    return v;
  }();
  return all;
}

InstancePtr find_instance(std::string_view id) {
  for (const auto& inst : builtin_instances())
    if (inst->id == id) return inst;
  std::string known;
  for (const auto& inst : builtin_instances()) {
    if (!known.empty()) known += ", ";
    known += inst->id;
  }
  throw InputError("unknown instance '" + std::string(id) + "' (known: " + known + ")");
}

Instance adhoc_instance(Triple t) {
  return Instance{.summary = "ad hoc triple", .triple = std::move(t)};
}

}  // namespace mixlab
