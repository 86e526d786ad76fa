#include "varkit/ground.hpp"

#include <algorithm>

namespace varkit {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h * 0xff51afd7ed558ccdULL;
}

}  // namespace

TypeId GroundStore::intern(std::uint32_t ctor, std::span<const TypeId> children) {
  std::uint64_t h = mix(0x12345, ctor);
  for (TypeId c : children) h = mix(h, c);
  auto [lo, hi] = index_.equal_range(h);
  for (auto it = lo; it != hi; ++it) {
    const Node& n = nodes_[it->second];
    if (n.ctor == ctor && n.arity == children.size() &&
        std::equal(children.begin(), children.end(), children_.begin() + n.first_child))
      return it->second;
  }
  int d = 0;
  for (TypeId c : children) d = std::max(d, depth(c));
  Node n{ctor, static_cast<std::uint32_t>(children_.size()),
         static_cast<std::uint16_t>(children.size()), static_cast<std::uint16_t>(d + 1)};
  children_.insert(children_.end(), children.begin(), children.end());
  auto id = static_cast<TypeId>(nodes_.size());
  nodes_.push_back(n);
  index_.emplace(h, id);
  return id;
}

TypeId GroundStore::from_expr(const Signature& sig, const TypeExpr& t) {
  if (t.is_var()) throw StructuralError("type '" + t.to_string() + "' is not ground");
  auto idx = sig.index_of(t.name);
  if (!idx) throw StructuralError("unknown type constructor '" + t.name + "'");
  if (sig.decl(*idx).arity() != t.args.size())
    throw StructuralError("arity mismatch for '" + t.name + "'");
  std::vector<TypeId> kids;
  kids.reserve(t.args.size());
  for (const auto& a : t.args) kids.push_back(from_expr(sig, a));
  return intern(static_cast<std::uint32_t>(*idx), kids);
}

TypeExpr GroundStore::to_expr(const Signature& sig, TypeId id) const {
  TypeExpr out = TypeExpr::app(sig.decl(ctor(id)).name);
  for (TypeId c : children(id)) out.args.push_back(to_expr(sig, c));
  return out;
}

TypeId GroundStore::instantiate(const Signature& sig, const TypeExpr& t,
                                std::span<const std::string> vars,
                                std::span<const TypeId> values) {
  if (t.is_var()) {
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i] == t.name) return values[i];
    throw StructuralError("unbound type variable '" + t.name + "' in substitution");
  }
  auto idx = sig.index_of(t.name);
  if (!idx) throw StructuralError("unknown type constructor '" + t.name + "'");
  TypeId small[4];
  std::vector<TypeId> big;
  std::span<TypeId> kids;
  if (t.args.size() <= 4) {
    kids = std::span<TypeId>(small, t.args.size());
  } else {
    big.resize(t.args.size());
    kids = big;
  }
  for (std::size_t i = 0; i < t.args.size(); ++i) kids[i] = instantiate(sig, t.args[i], vars, values);
  return intern(static_cast<std::uint32_t>(*idx), kids);
}

}  // namespace varkit
