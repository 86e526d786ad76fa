#ifndef VARKIT_GROUND_HPP
#define VARKIT_GROUND_HPP

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "varkit/types.hpp"

namespace varkit {

using TypeId = std::uint32_t;

// Hash-consed ground types. Two ids are equal iff the types are structurally
// equal. Constructors are referred to by their index in the Signature.
class GroundStore {
 public:
  struct Node {
    std::uint32_t ctor;
    std::uint32_t first_child;
    std::uint16_t arity;
    std::uint16_t depth;
  };

  TypeId intern(std::uint32_t ctor, std::span<const TypeId> children);
  const Node& node(TypeId id) const { return nodes_[id]; }
  std::uint32_t ctor(TypeId id) const { return nodes_[id].ctor; }
  int depth(TypeId id) const { return nodes_[id].depth; }
  std::span<const TypeId> children(TypeId id) const {
    const Node& n = nodes_[id];
    return {children_.data() + n.first_child, n.arity};
  }
  TypeId child(TypeId id, std::size_t i) const { return children_[nodes_[id].first_child + i]; }
  std::size_t size() const { return nodes_.size(); }

  // Throws StructuralError on variables, unknown constructors and arity
  // mismatches.
  TypeId from_expr(const Signature& sig, const TypeExpr& t);
  TypeExpr to_expr(const Signature& sig, TypeId id) const;

  // Instantiates t, whose variables are looked up in `vars`/`values`.
  TypeId instantiate(const Signature& sig, const TypeExpr& t,
                     std::span<const std::string> vars, std::span<const TypeId> values);

 private:
  std::vector<Node> nodes_;
  std::vector<TypeId> children_;
  std::unordered_multimap<std::uint64_t, TypeId> index_;
};

}  // namespace varkit

#endif  // VARKIT_GROUND_HPP
