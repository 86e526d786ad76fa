#include <limits>

#include "varkit/oracle.hpp"

namespace varkit {

OverflowError::OverflowError(int depth, std::size_t count, std::size_t cap)
    : std::runtime_error("universe at depth " + std::to_string(depth) + " would hold " +
                         (count == std::numeric_limits<std::size_t>::max()
                              ? std::string("more than 2^64")
                              : std::to_string(count)) +
                         " types, over the cap of " + std::to_string(cap)),
      depth_(depth),
      count_(count) {}

std::span<const TypeId> Universe::up_to(int d) const {
  if (d <= 0) return {};
  if (d > depth())
    throw StructuralError("universe only built to depth " + std::to_string(depth()) +
                          ", asked for " + std::to_string(d));
  return std::span<const TypeId>(types_).first(level_end_[d - 1]);
}

namespace {

std::size_t sat_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a)
    return std::numeric_limits<std::size_t>::max();
  return a * b;
}

std::size_t sat_pow(std::size_t base, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < k; ++i) r = sat_mul(r, base);
  return r;
}

std::size_t sat_add(std::size_t a, std::size_t b) {
  return a > std::numeric_limits<std::size_t>::max() - b ? std::numeric_limits<std::size_t>::max()
                                                         : a + b;
}

}  // namespace

void Universe::extend(GroundStore& store, const Signature& sig, int target) {
  while (depth() < target) {
    const int d = depth() + 1;
    const std::size_t prev = d >= 2 ? level_end_[d - 2] : 0;        // |U_{d-1}|
    const std::size_t older = d >= 3 ? level_end_[d - 3] : 0;       // |U_{d-2}|

    std::size_t fresh = 0;
    for (const auto& decl : sig.decls()) {
      const std::size_t k = decl.arity();
      if (k == 0) {
        if (d == 1) fresh = sat_add(fresh, 1);
      } else if (d >= 2) {
        fresh = sat_add(fresh, sat_pow(prev, k) - sat_pow(older, k));
      }
    }
    const std::size_t total = sat_add(types_.size(), fresh);
    if (total > cap_) throw OverflowError(d, total, cap_);

    types_.reserve(total);
    for (std::size_t c = 0; c < sig.size(); ++c) {
      const std::size_t k = sig.decl(c).arity();
      if (k == 0) {
        if (d == 1) types_.push_back(store.intern(static_cast<std::uint32_t>(c), {}));
        continue;
      }
      if (d < 2) continue;
      // Odometer over U_{d-1}^k, keeping tuples with at least one component of
      // depth exactly d-1.
      std::vector<std::size_t> idx(k, 0);
      std::vector<TypeId> kids(k);
      while (true) {
        bool fresh_tuple = false;
        for (std::size_t i = 0; i < k; ++i) {
          kids[i] = types_[idx[i]];
          if (idx[i] >= older) fresh_tuple = true;
        }
        if (fresh_tuple) types_.push_back(store.intern(static_cast<std::uint32_t>(c), kids));
        std::size_t pos = k;
        while (pos > 0) {
          --pos;
          if (++idx[pos] < prev) break;
          idx[pos] = 0;
          if (pos == 0) {
            pos = k + 1;
            break;
          }
        }
        if (pos == k + 1) break;
      }
    }
    level_end_.push_back(types_.size());
  }
}

Universe enumerate(SubtypeEngine& engine, int depth, std::size_t cap) {
  if (depth < 1) throw StructuralError("universe depth must be at least 1");
  Universe u;
  u.cap_ = cap;
  u.extend(engine.store(), engine.signature(), depth);
  return u;
}

}  // namespace varkit
