#include "varkit/subtype.hpp"

namespace varkit {

SubtypeEngine::SubtypeEngine(std::shared_ptr<const Signature> sig) : sig_(std::move(sig)) {
  const std::size_t n = sig_->size();
  base_order_.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    base_order_[i][i] = true;
    if (sig_->decl(i).kind == TypeKind::BuiltinP) p_ = static_cast<std::uint32_t>(i);
    if (sig_->decl(i).kind == TypeKind::BuiltinQ) q_ = static_cast<std::uint32_t>(i);
  }
  for (const auto& [lo, hi] : sig_->base_axioms()) {
    auto a = sig_->index_of(lo);
    auto b = sig_->index_of(hi);
    if (a && b && sig_->decl(*a).kind == TypeKind::Base && sig_->decl(*b).kind == TypeKind::Base)
      base_order_[*a][*b] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (base_order_[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (base_order_[k][j]) base_order_[i][j] = true;
  base_has_equivalent_.assign(n, false);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && base_order_[i][j] && base_order_[j][i]) base_has_equivalent_[i] = true;
}

bool SubtypeEngine::base_leq(std::uint32_t a, std::uint32_t b) const { return base_order_[a][b]; }

bool SubtypeEngine::subtype(TypeId a, TypeId b) {
  if (a == b) return true;
  const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | b;
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  const std::uint32_t ca = store_.ctor(a);
  const std::uint32_t cb = store_.ctor(b);
  bool result = false;
  if (ca == cb) {
    const TypeConDecl& d = sig_->decl(ca);
    result = true;
    for (std::size_t i = 0; i < d.arity() && result; ++i)
      result = rel(d.param_variances[i], store_.child(a, i), store_.child(b, i));
  } else if (ca == p_ && cb == q_) {
    result = true;
  } else if (sig_->decl(ca).kind == TypeKind::Base && sig_->decl(cb).kind == TypeKind::Base) {
    result = base_order_[ca][cb];
  }
  memo_.emplace(key, result);
  return result;
}

bool SubtypeEngine::rel(Variance v, TypeId a, TypeId b) {
  switch (v) {
    case Variance::Cov: return subtype(a, b);
    case Variance::Contra: return subtype(b, a);
    case Variance::Inv: return subtype(a, b) && subtype(b, a);
    case Variance::Irr: return true;
  }
  return false;
}

bool SubtypeEngine::subtype(const TypeExpr& a, const TypeExpr& b) {
  return subtype(intern(a), intern(b));
}

bool SubtypeEngine::rel(Variance v, const TypeExpr& a, const TypeExpr& b) {
  return rel(v, intern(a), intern(b));
}

bool SubtypeEngine::rel_context(const Context& g, std::span<const TypeExpr> a,
                                std::span<const TypeExpr> b) {
  if (a.size() != g.size() || b.size() != g.size())
    throw StructuralError("rel_context: expected " + std::to_string(g.size()) +
                          " types on each side, got " + std::to_string(a.size()) + " and " +
                          std::to_string(b.size()));
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!rel(g.entries()[i].second, a[i], b[i])) return false;
  return true;
}

bool SubtypeEngine::closed(std::string_view ctor, Variance v) const {
  auto idx = sig_->index_of(ctor);
  if (!idx) throw StructuralError("unknown type constructor '" + std::string(ctor) + "'");
  return closed(static_cast<std::uint32_t>(*idx), v);
}

bool SubtypeEngine::closed(std::uint32_t ctor, Variance v) const {
  const TypeConDecl& d = sig_->decl(ctor);
  switch (v) {
    case Variance::Cov: return d.upward_closed;
    case Variance::Contra: return d.downward_closed;
    case Variance::Inv: return !base_has_equivalent_[ctor];
    case Variance::Irr: return false;
  }
  return false;
}

}  // namespace varkit
