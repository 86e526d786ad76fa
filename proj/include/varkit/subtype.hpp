#ifndef VARKIT_SUBTYPE_HPP
#define VARKIT_SUBTYPE_HPP

#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "varkit/ground.hpp"
#include "varkit/types.hpp"

namespace varkit {

// Syntax-directed decision procedure for ground subtyping:
//   same head t:        t(s) <= t(s') iff s_i <_{w_i} s'_i for every i
//   p(s) <= q           always
//   base b <= base c    iff (b, c) is in the reflexive-transitive closure
//                       of the base axioms
//   anything else       false
//
// The engine owns a GroundStore and a memo table. It is not thread-safe;
// concurrent callers each work on their own copy.
class SubtypeEngine {
 public:
  explicit SubtypeEngine(std::shared_ptr<const Signature> sig);

  const Signature& signature() const { return *sig_; }
  const std::shared_ptr<const Signature>& signature_ptr() const { return sig_; }
  GroundStore& store() { return store_; }
  const GroundStore& store() const { return store_; }

  bool subtype(TypeId a, TypeId b);
  bool rel(Variance v, TypeId a, TypeId b);

  // Convenience overloads on type expressions; throw StructuralError on
  // non-ground input or unknown constructors.
  bool subtype(const TypeExpr& a, const TypeExpr& b);
  bool rel(Variance v, const TypeExpr& a, const TypeExpr& b);
  // Positional: a[i] and b[i] are compared at the variance of the i-th entry
  // of g.
  bool rel_context(const Context& g, std::span<const TypeExpr> a, std::span<const TypeExpr> b);

  // v-closedness from the signature's closure flags. Inv-closedness holds
  // unless a base is equivalent to a distinct base; Irr-closedness never holds.
  bool closed(std::string_view ctor, Variance v) const;
  bool closed(std::uint32_t ctor, Variance v) const;

  bool base_leq(std::uint32_t a, std::uint32_t b) const;
  TypeId intern(const TypeExpr& t) { return store_.from_expr(*sig_, t); }
  TypeExpr expr(TypeId id) const { return store_.to_expr(*sig_, id); }

  std::uint32_t p_index() const { return p_; }
  std::uint32_t q_index() const { return q_; }
  std::size_t memo_size() const { return memo_.size(); }

 private:
  std::shared_ptr<const Signature> sig_;
  GroundStore store_;
  std::vector<std::vector<bool>> base_order_;
  std::vector<bool> base_has_equivalent_;
  std::unordered_map<std::uint64_t, bool> memo_;
  std::uint32_t p_ = UINT32_MAX;
  std::uint32_t q_ = UINT32_MAX;
};

}  // namespace varkit

#endif  // VARKIT_SUBTYPE_HPP
