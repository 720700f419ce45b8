#pragma once

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "mixlab/constructions.hpp"

namespace mixlab {

// Construction recipes carried by instances.  Closed-form deciders dispatch
// on the triple's tags and read the structured data they need from here;
// everything else treats an instance as an opaque Triple.

struct SemidirectData {
  std::shared_ptr<const SemidirectGroup> g;
  Subgroup h_in_top;      // H as a subgroup of the acting group
  bool h_is_full_top = false;
};

struct WreathData {
  std::shared_ptr<const FinSuppGroup> base;  // finitely supported maps X -> V
  bool torsion_free_top = false;             // no nonzero k with k.S = S for finite S
};

struct MatrixData {
  std::vector<std::vector<Elem::Int>> m;
  Elem::Int order = 0;            // least n >= 1 with M^n = I (0: none found)
  Elem::Int det_m_minus_id = 0;   // det(M - I); nonzero <=> only 0 is M-fixed
};

struct FreeFactorData {
  std::shared_ptr<const FreeProductGroup> g;
  int factor = 0;  // H = K = this full free factor
};

struct Instance;
using InstancePtr = std::shared_ptr<const Instance>;

struct Instance {
  std::string id{};  // registry name; empty for ad hoc triples
  std::string summary{};
  Triple triple;
  std::optional<SemidirectData> semidirect{};
  std::optional<WreathData> wreath_data{};
  std::optional<MatrixData> matrix_data{};
  std::optional<FreeFactorData> free_data{};
  std::pair<InstancePtr, InstancePtr> factors{};  // direct products only
  std::string infinite_note{};  // why H and K are infinite (attested)

  const Group& g() const { return *triple.G; }
  bool has_tag(std::string_view t) const { return triple.has_tag(t); }
};

// Built-in instances, in a fixed order:
//   wreath-z2-z    Z/2 wr Z with H = K = Z (translations)
//   rotation4      Z^2 x| Z by the order-4 rotation matrix, H = K = Z
//   free-zz        Z * Z with H = K = <a>, reduced-word closed forms
//   f2-cyclic      Z * Z with H = K = <a>, routed through malnormality
//   prod-wreath2   direct product of two wreath-z2-z triples
//   trivial-z2-z   Z^2 x Z with the trivial action, H = K = Z
const std::vector<InstancePtr>& builtin_instances();

// Throws InputError listing known ids when the id is unknown.
InstancePtr find_instance(std::string_view id);

// Wraps an ad hoc triple (no tags, no recipe) for APIs that take instances.
Instance adhoc_instance(Triple t);

}  // namespace mixlab
