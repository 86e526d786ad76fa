#include "varkit/oracle.hpp"

#include <algorithm>
#include <limits>

#include "oracle_internal.hpp"

namespace varkit {

namespace {

constexpr std::uint32_t kAnyType = std::numeric_limits<std::uint32_t>::max();

std::uint64_t pack(Variance v, TypeId g) {
  return (static_cast<std::uint64_t>(v) << 32) | g;
}
Variance atom_variance(std::uint64_t a) { return static_cast<Variance>(a >> 32); }
TypeId atom_type(std::uint64_t a) { return static_cast<TypeId>(a & 0xFFFFFFFFu); }

// Calls f(tuple) for every tuple of the cartesian product, in lexicographic
// order; stops as soon as f returns true. Returns whether f stopped the loop.
template <typename F>
bool for_each_product(const std::vector<std::vector<TypeId>>& sets, std::vector<TypeId>& tuple,
                      F&& f) {
  const std::size_t k = sets.size();
  tuple.assign(k, 0);
  for (const auto& s : sets)
    if (s.empty()) return false;
  std::vector<std::size_t> idx(k, 0);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) tuple[i] = sets[i][idx[i]];
    if (f(tuple)) return true;
    std::size_t pos = k;
    while (true) {
      if (pos == 0) return false;
      --pos;
      if (++idx[pos] < sets[pos].size()) break;
      idx[pos] = 0;
    }
  }
}

std::size_t sat_pow(std::size_t base, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (base != 0 && r > std::numeric_limits<std::size_t>::max() / base)
      return std::numeric_limits<std::size_t>::max();
    r *= base;
  }
  return r;
}

std::string join_types(const std::vector<TypeExpr>& ts) {
  std::string out = "(";
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i) out += ", ";
    out += ts[i].to_string();
  }
  return out + ")";
}

Variance constraint_mode(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::Eq: return Variance::Inv;
    case ConstraintKind::Sup: return Variance::Cov;
    case ConstraintKind::Sub: return Variance::Contra;
  }
  return Variance::Inv;
}

}  // namespace

std::string Violation::to_string() const {
  return datatype + "." + constructor + ": sigma=" + join_types(sigma) +
         " sigma'=" + join_types(sigma_prime) + " rho=" + join_types(rho) + ": " + reason;
}

// ---------------------------------------------------------------------------
// Pattern

Pattern::Pattern(const Signature& sig, const TypeExpr& t, std::span<const std::string> vars) {
  root_ = build(sig, t, vars);
}

std::uint32_t Pattern::build(const Signature& sig, const TypeExpr& t,
                             std::span<const std::string> vars) {
  if (t.is_var()) {
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i] == t.name) {
        nodes_.push_back({-1, static_cast<std::uint32_t>(i), 0, 0});
        return static_cast<std::uint32_t>(nodes_.size() - 1);
      }
    throw StructuralError("unbound type variable '" + t.name + "'");
  }
  auto idx = sig.index_of(t.name);
  if (!idx) throw StructuralError("unknown type constructor '" + t.name + "'");
  if (sig.decl(*idx).arity() != t.args.size())
    throw StructuralError("arity mismatch for '" + t.name + "'");
  std::vector<std::uint32_t> kids;
  for (const auto& a : t.args) kids.push_back(build(sig, a, vars));
  Node n{static_cast<std::int32_t>(*idx), 0, static_cast<std::uint32_t>(kids_.size()),
         static_cast<std::uint32_t>(kids.size())};
  kids_.insert(kids_.end(), kids.begin(), kids.end());
  nodes_.push_back(n);
  return static_cast<std::uint32_t>(nodes_.size() - 1);
}

TypeId Pattern::instantiate(GroundStore& store, std::span<const TypeId> values) const {
  return inst(store, root_, values);
}

TypeId Pattern::inst(GroundStore& store, std::uint32_t i, std::span<const TypeId> values) const {
  const Node& n = nodes_[i];
  if (n.ctor < 0) return values[n.var];
  TypeId buf[8];
  std::vector<TypeId> big;
  std::span<TypeId> kids;
  if (n.arity <= 8) {
    kids = std::span<TypeId>(buf, n.arity);
  } else {
    big.resize(n.arity);
    kids = big;
  }
  for (std::uint32_t k = 0; k < n.arity; ++k) kids[k] = inst(store, child(i, k), values);
  return store.intern(static_cast<std::uint32_t>(n.ctor), kids);
}

// ---------------------------------------------------------------------------
// Oracle

std::size_t Oracle::KeyHash::operator()(const std::vector<std::uint64_t>& k) const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint64_t x : k) {
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h);
}

Oracle::Oracle(std::shared_ptr<const Signature> sig, OracleConfig config)
    : config_(config), engine_(std::move(sig)) {
  if (config_.depth < 1) throw StructuralError("oracle depth must be at least 1");
  if (config_.slack < 0) throw StructuralError("oracle slack must be non-negative");
  universe_ = enumerate(engine_, config_.depth, config_.cap);
  // The witness search draws children from one level below the witness depth.
  ensure_levels(witness_depth() - 1);
}

void Oracle::ensure_levels(int depth) {
  if (depth > universe_.depth()) universe_.extend(engine_.store(), engine_.signature(), depth);
}

std::vector<TypeExpr> Oracle::exprs(std::span<const TypeId> ids) const {
  std::vector<TypeExpr> out;
  out.reserve(ids.size());
  for (TypeId id : ids) out.push_back(engine_.expr(id));
  return out;
}

const std::vector<TypeId>& Oracle::related(Variance v, TypeId g, int depth) {
  static const std::vector<TypeId> kNone;
  if (depth < 1) return kNone;
  const TypeId key_type = v == Variance::Irr ? kAnyType : g;
  const std::uint64_t key = (static_cast<std::uint64_t>(static_cast<unsigned>(v)) << 40) |
                            (static_cast<std::uint64_t>(depth) << 32) | key_type;
  if (auto it = related_memo_.find(key); it != related_memo_.end()) return it->second;

  std::vector<TypeId> out;
  if (v == Variance::Irr) {
    ensure_levels(depth);
    auto all = universe_.up_to(depth);
    out.assign(all.begin(), all.end());
    return related_memo_.emplace(key, std::move(out)).first->second;
  }

  GroundStore& store = engine_.store();
  const Signature& sig = engine_.signature();
  const std::uint32_t c = store.ctor(g);
  const TypeConDecl& d = sig.decl(c);

  if (d.kind == TypeKind::Base) {
    for (std::size_t b = 0; b < sig.size(); ++b) {
      if (sig.decl(b).kind != TypeKind::Base) continue;
      const auto bi = static_cast<std::uint32_t>(b);
      const bool up = engine_.base_leq(c, bi);
      const bool down = engine_.base_leq(bi, c);
      const bool keep = v == Variance::Cov ? up : v == Variance::Contra ? down : (up && down);
      if (keep) out.push_back(store.intern(bi, {}));
    }
  } else {
    // Same head.
    if (d.arity() == 0) {
      out.push_back(g);
    } else if (depth >= 2) {
      std::vector<std::vector<TypeId>> kids(d.arity());
      for (std::size_t i = 0; i < d.arity(); ++i)
        kids[i] = related(compose(v, d.param_variances[i]), store.child(g, i), depth - 1);
      std::vector<TypeId> tuple;
      for_each_product(kids, tuple, [&](const std::vector<TypeId>& t) {
        out.push_back(store.intern(c, t));
        return false;
      });
    }
    // Different head through p(s) <= q.
    if (c == engine_.p_index() && v == Variance::Cov && engine_.q_index() != kAnyType) {
      out.push_back(store.intern(engine_.q_index(), {}));
    }
    if (c == engine_.q_index() && v == Variance::Contra && depth >= 2 &&
        engine_.p_index() != kAnyType) {
      ensure_levels(depth - 1);
      auto below = universe_.up_to(depth - 1);
      std::vector<TypeId> inner(below.begin(), below.end());
      for (TypeId h : inner) out.push_back(store.intern(engine_.p_index(), std::span(&h, 1)));
    }
  }
  return related_memo_.emplace(key, std::move(out)).first->second;
}

bool Oracle::cross_head(std::uint32_t c, std::uint32_t cg, Variance v) const {
  const Signature& sig = engine_.signature();
  const bool bases = sig.decl(c).kind == TypeKind::Base && sig.decl(cg).kind == TypeKind::Base;
  const std::uint32_t p = engine_.p_index(), q = engine_.q_index();
  switch (v) {
    case Variance::Cov: return (c == p && cg == q) || (bases && engine_.base_leq(c, cg));
    case Variance::Contra: return (c == q && cg == p) || (bases && engine_.base_leq(cg, c));
    case Variance::Inv: return bases && engine_.base_leq(c, cg) && engine_.base_leq(cg, c);
    case Variance::Irr: return true;
  }
  return false;
}

// Reduces rel(v, P(x), g) to per-variable atoms. Exactly one syntax-directed
// rule can apply at each node, so the solution set is a product.
bool Oracle::solve(const Pattern& p, std::uint32_t node, Variance v, TypeId g,
                   VarConstraints& out) {
  if (v == Variance::Irr) return true;
  const Pattern::Node& n = p.node(node);
  if (n.ctor < 0) {
    out.emplace_back(n.var, pack(v, g));
    return true;
  }
  const auto c = static_cast<std::uint32_t>(n.ctor);
  const GroundStore& store = engine_.store();
  const std::uint32_t cg = store.ctor(g);
  if (c != cg) return cross_head(c, cg, v);
  const TypeConDecl& d = engine_.signature().decl(c);
  for (std::uint32_t k = 0; k < n.arity; ++k)
    if (!solve(p, p.child(node, k), compose(v, d.param_variances[k]), store.child(g, k), out))
      return false;
  return true;
}

bool Oracle::satisfiable(std::span<const std::uint64_t> atoms, int depth) {
  if (atoms.empty()) return true;
  std::vector<std::uint64_t> key(atoms.begin(), atoms.end());
  key.push_back(static_cast<std::uint64_t>(depth));
  if (auto it = sat_memo_.find(key); it != sat_memo_.end()) return it->second;

  auto fits = [&](TypeId x) {
    for (std::uint64_t a : atoms)
      if (!engine_.rel(atom_variance(a), x, atom_type(a))) return false;
    return true;
  };
  bool result = false;
  for (std::uint64_t a : atoms) {
    const TypeId g = atom_type(a);
    if (engine_.store().depth(g) <= depth && fits(g)) {
      result = true;
      break;
    }
  }
  if (!result) {
    // Enumerate the candidates of the most selective atom.
    auto rank = [](Variance v) { return v == Variance::Inv ? 0 : v == Variance::Contra ? 1 : 2; };
    std::uint64_t pivot = atoms[0];
    for (std::uint64_t a : atoms)
      if (rank(atom_variance(a)) < rank(atom_variance(pivot))) pivot = a;
    const auto& cands = related(flip(atom_variance(pivot)), atom_type(pivot), depth);
    for (TypeId x : cands)
      if (fits(x)) {
        result = true;
        break;
      }
  }
  sat_memo_.emplace(std::move(key), result);
  return result;
}

bool Oracle::all_satisfiable(VarConstraints& cs, int depth) {
  std::sort(cs.begin(), cs.end());
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  std::size_t i = 0;
  while (i < cs.size()) {
    std::size_t j = i;
    scratch_.clear();
    while (j < cs.size() && cs[j].first == cs[i].first) scratch_.push_back(cs[j++].second);
    // satisfiable() may call back into related(), which never touches scratch_.
    std::vector<std::uint64_t> atoms(scratch_);
    if (!satisfiable(atoms, depth)) return false;
    i = j;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Judgment semantics

std::optional<VarianceCounterexample> Oracle::variance_counterexample(const Context& g,
                                                                      const TypeExpr& t,
                                                                      Variance v) {
  std::vector<std::string> vars;
  for (const auto& [x, w] : g) vars.push_back(x);
  Pattern pat(engine_.signature(), t, vars);
  // The full relation relates everything.
  if (v == Variance::Irr) return std::nullopt;
  auto base = universe_.up_to(config_.depth);
  std::vector<std::vector<TypeId>> sets(vars.size(), std::vector<TypeId>(base.begin(), base.end()));
  std::optional<VarianceCounterexample> found;
  // Both relations are preorders, so sigma' may differ from sigma in one
  // variable at a time: any sigma ~ sigma' pair is a chain of such steps.
  std::vector<TypeId> sigma;
  for_each_product(sets, sigma, [&](const std::vector<TypeId>& s) {
    const TypeId lhs = pat.instantiate(engine_.store(), s);
    std::vector<TypeId> s2 = s;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      for (TypeId x : related(g.entries()[i].second, s[i], config_.depth)) {
        s2[i] = x;
        if (engine_.rel(v, lhs, pat.instantiate(engine_.store(), s2))) continue;
        found = VarianceCounterexample{exprs(s), exprs(s2)};
        return true;
      }
      s2[i] = s[i];
    }
    return false;
  });
  return found;
}

bool Oracle::semantic_variance(const Context& g, const TypeExpr& t, Variance v) {
  return !variance_counterexample(g, t, v).has_value();
}

std::optional<DecompositionCounterexample> Oracle::decomposition_counterexample(
    const Context& g, const TypeExpr& t, Variance v, Variance v2) {
  std::vector<std::string> vars;
  for (const auto& [x, w] : g) vars.push_back(x);
  Pattern pat(engine_.signature(), t, vars);
  // rho' = rho always witnesses the full relation.
  if (v2 == Variance::Irr) return std::nullopt;
  const int big = witness_depth();
  if (v == Variance::Irr) ensure_levels(big);
  auto base = universe_.up_to(config_.depth);
  std::vector<std::vector<TypeId>> sets(vars.size(), std::vector<TypeId>(base.begin(), base.end()));
  // Under v = Irr the targets do not depend on rho, and an irrelevant
  // variable's value never reaches the witness constraints, so one value
  // stands for all of them.
  if (v == Variance::Irr)
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (g.entries()[i].second == Variance::Irr) sets[i].resize(1);
  std::optional<DecompositionCounterexample> found;
  std::vector<TypeId> rho;
  for_each_product(sets, rho, [&](const std::vector<TypeId>& r) {
    const TypeId lhs = pat.instantiate(engine_.store(), r);
    const std::vector<TypeId> targets = related(v, lhs, big);
    for (TypeId target : targets) {
      VarConstraints cs;
      bool ok = solve(pat, pat.root(), v2, target, cs);
      for (std::size_t i = 0; ok && i < vars.size(); ++i) {
        const Variance w = g.entries()[i].second;
        if (w != Variance::Irr) cs.emplace_back(static_cast<std::uint32_t>(i), pack(flip(w), r[i]));
      }
      if (!ok || !all_satisfiable(cs, big)) {
        found = DecompositionCounterexample{exprs(r), engine_.expr(target)};
        return true;
      }
    }
    return false;
  });
  return found;
}

bool Oracle::semantic_decomposability(const Context& g, const TypeExpr& t, Variance v,
                                      Variance v2) {
  return !decomposition_counterexample(g, t, v, v2).has_value();
}

// ---------------------------------------------------------------------------
// Req

Oracle::Prepared Oracle::prepare(std::string_view datatype, const ConstructorDecl& k,
                                 std::span<const Variance> variances) const {
  Prepared p;
  p.datatype = std::string(datatype);
  p.constructor = k.name;
  p.existentials = k.existentials;
  p.variances.assign(variances.begin(), variances.end());
  const Signature& sig = engine_.signature();
  for (std::size_t i = 0; i < variances.size(); ++i) {
    const Constraint* c = k.constraint_for(i);
    if (!c)
      throw StructuralError("constructor '" + k.name + "' has no constraint on parameter " +
                            std::to_string(i));
    p.kinds.push_back(c->kind);
    p.rhs.emplace_back(sig, c->rhs, p.existentials);
  }
  if (k.argument) p.argument.emplace(sig, *k.argument, p.existentials);
  std::vector<bool> used(p.existentials.size(), false);
  auto mark = [&](const Pattern& pat) {
    for (std::uint32_t i = 0; i < pat.size(); ++i)
      if (pat.node(i).ctor < 0) used[pat.node(i).var] = true;
  };
  for (const auto& pat : p.rhs) mark(pat);
  if (p.argument) mark(*p.argument);
  for (std::size_t i = 0; i < used.size(); ++i)
    if (used[i]) p.live.push_back(i);
  p.work = sat_pow(universe_.up_to(config_.depth).size(), p.live.size());
  return p;
}

std::size_t Oracle::req_work(const ConstructorDecl& k) const {
  const TypeConDecl* owner = nullptr;
  for (const auto& d : engine_.signature().decls())
    for (const auto& c : d.constructors)
      if (&c == &k) owner = &d;
  if (!owner) return sat_pow(universe_.up_to(config_.depth).size(), k.existentials.size());
  return prepare(owner->name, k, owner->param_variances).work;
}

std::optional<Violation> Oracle::req_at(const Prepared& p, std::size_t index) {
  const std::size_t count = universe_.up_to(config_.depth).size();
  std::vector<TypeId> rho(p.existentials.size(), universe_.types()[0]);
  std::size_t rest = index;
  for (std::size_t i = p.live.size(); i-- > 0;) {
    rho[p.live[i]] = universe_.types()[rest % count];
    rest /= count;
  }
  return req_eval(p, rho, index, config_.depth, {}, true);
}

std::optional<Violation> Oracle::req_eval(const Prepared& p, const std::vector<TypeId>& rho,
                                          std::size_t index, int d,
                                          std::span<const TypeId> irr_pool, bool memo) {
  const std::size_t n = p.variances.size();
  const int big = d + config_.slack;
  GroundStore& store = engine_.store();

  std::vector<TypeId> gs(n);
  for (std::size_t i = 0; i < n; ++i) gs[i] = p.rhs[i].instantiate(store, rho);
  const bool has_arg = p.argument.has_value();
  const TypeId tr = has_arg ? p.argument->instantiate(store, rho) : 0;

  // The outcome depends on rho only through tau(rho) and the instantiated
  // constraints of the non-irrelevant parameters: an irrelevant parameter's
  // sigma' ranges over the whole universe whatever sigma is.
  std::vector<std::uint64_t> key(n + 1, kNoKey);
  for (std::size_t i = 0; i < n; ++i)
    if (p.variances[i] != Variance::Irr) key[i] = gs[i];
  if (has_arg) key[n] = tr;
  if (memo && req_passed_.contains(key)) return std::nullopt;

  std::vector<std::vector<TypeId>> sigma_sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Every sigma gives the same sigma' range under Irr, so one suffices.
    if (p.variances[i] == Variance::Irr) {
      sigma_sets[i] = {gs[i]};
      continue;
    }
    switch (p.kinds[i]) {
      case ConstraintKind::Eq: sigma_sets[i] = {gs[i]}; break;
      case ConstraintKind::Sup: sigma_sets[i] = related(Variance::Cov, gs[i], d); break;
      case ConstraintKind::Sub: sigma_sets[i] = related(Variance::Contra, gs[i], d); break;
    }
  }

  VarConstraints base;
  bool base_ok = true;
  if (has_arg) base_ok = solve(*p.argument, p.argument->root(), Variance::Contra, tr, base);

  std::optional<Violation> found;
  std::vector<TypeId> sigma, sigma2;
  for_each_product(sigma_sets, sigma, [&](const std::vector<TypeId>& s) {
    std::vector<std::vector<TypeId>> primes(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (p.variances[i] == Variance::Irr && !irr_pool.empty())
        primes[i].assign(irr_pool.begin(), irr_pool.end());
      else
        primes[i] = related(p.variances[i], s[i], d);
    }
    return for_each_product(primes, sigma2, [&](const std::vector<TypeId>& s2) {
      VarConstraints cs = base;
      bool ok = base_ok;
      for (std::size_t i = 0; ok && i < n; ++i)
        ok = solve(p.rhs[i], p.rhs[i].root(), constraint_mode(p.kinds[i]), s2[i], cs);
      if (ok && all_satisfiable(cs, big)) return false;
      Violation v;
      v.datatype = p.datatype;
      v.constructor = p.constructor;
      v.sigma = exprs(s);
      v.sigma_prime = exprs(s2);
      v.rho = exprs(rho);
      v.rho_index = index;
      v.depth = d;
      v.witness_depth = big;
      v.reason = ok ? "no rho' of depth <= " + std::to_string(big) +
                          " satisfies the constraints at sigma' with tau(rho) <= tau(rho')"
                    : "no rho' can satisfy the constraints at sigma'";
      found = std::move(v);
      return true;
    });
  });
  if (!found && memo) req_passed_.insert(std::move(key));
  return found;
}

std::optional<Violation> Oracle::req_serial(const Prepared& p) {
  req_passed_.clear();
  for (std::size_t i = 0; i < p.work; ++i)
    if (auto v = req_at(p, i)) return v;
  return std::nullopt;
}

std::optional<Violation> Oracle::constructor_req(std::string_view datatype,
                                                 const ConstructorDecl& k,
                                                 std::span<const Variance> variances,
                                                 bool parallel) {
  Prepared p = prepare(datatype, k, variances);
  return parallel ? req_parallel(p) : req_serial(p);
}

std::optional<Violation> Oracle::req_probe(std::string_view datatype, const ConstructorDecl& k,
                                           std::span<const Variance> variances,
                                           std::span<const TypeId> rho, int depth,
                                           std::span<const TypeId> irr_pool) {
  Prepared p = prepare(datatype, k, variances);
  if (rho.size() != p.existentials.size())
    throw StructuralError("constructor '" + k.name + "' needs " +
                          std::to_string(p.existentials.size()) + " existential value(s)");
  return req_eval(p, std::vector<TypeId>(rho.begin(), rho.end()), 0, depth, irr_pool, false);
}

std::optional<Violation> Oracle::semantic_req(std::string_view datatype) {
  const TypeConDecl* d = engine_.signature().find(datatype);
  if (!d || !d->is_datatype())
    throw StructuralError("'" + std::string(datatype) + "' is not a datatype");
  for (const auto& k : d->constructors)
    if (auto v = constructor_req(datatype, k, d->param_variances, false)) return v;
  return std::nullopt;
}

std::optional<Violation> Oracle::semantic_req_parallel(std::string_view datatype) {
  const TypeConDecl* d = engine_.signature().find(datatype);
  if (!d || !d->is_datatype())
    throw StructuralError("'" + std::string(datatype) + "' is not a datatype");
  for (const auto& k : d->constructors)
    if (auto v = constructor_req(datatype, k, d->param_variances, true)) return v;
  return std::nullopt;
}

RecheckResult Oracle::recheck(const Violation& v, int wdepth, std::size_t brute_limit) {
  RecheckResult out;
  const Signature& sig = engine_.signature();
  const TypeConDecl& d = sig.at(v.datatype);
  const ConstructorDecl* k = nullptr;
  for (const auto& c : d.constructors)
    if (c.name == v.constructor) k = &c;
  if (!k) throw StructuralError("no constructor '" + v.constructor + "' in '" + v.datatype + "'");
  Prepared p = prepare(v.datatype, *k, d.param_variances);
  const std::size_t n = p.variances.size();
  const std::size_t m = p.existentials.size();
  if (v.sigma.size() != n || v.sigma_prime.size() != n || v.rho.size() != m)
    throw StructuralError("violation does not match the constructor's shape");

  GroundStore& store = engine_.store();
  std::vector<TypeId> s, s2, rho;
  for (const auto& t : v.sigma) s.push_back(engine_.intern(t));
  for (const auto& t : v.sigma_prime) s2.push_back(engine_.intern(t));
  for (const auto& t : v.rho) rho.push_back(engine_.intern(t));

  out.premises_hold = true;
  for (std::size_t i = 0; i < n && out.premises_hold; ++i) {
    const TypeId g = p.rhs[i].instantiate(store, rho);
    out.premises_hold = engine_.rel(p.variances[i], s[i], s2[i]) &&
                        engine_.rel(constraint_mode(p.kinds[i]), g, s[i]);
  }
  const bool has_arg = p.argument.has_value();
  const TypeId tr = has_arg ? p.argument->instantiate(store, rho) : 0;

  auto witness = [&](const std::vector<TypeId>& r2) {
    for (std::size_t i = 0; i < n; ++i)
      if (!engine_.rel(constraint_mode(p.kinds[i]), p.rhs[i].instantiate(store, r2), s2[i]))
        return false;
    return !has_arg || engine_.subtype(tr, p.argument->instantiate(store, r2));
  };

  bool brute = false;
  if (brute_limit > 0) {
    try {
      ensure_levels(wdepth);
      brute = sat_pow(universe_.up_to(wdepth).size(), m) <= brute_limit;
    } catch (const OverflowError&) {
      brute = false;
    }
  }
  if (brute) {
    auto all = universe_.up_to(wdepth);
    std::vector<std::vector<TypeId>> sets(m, std::vector<TypeId>(all.begin(), all.end()));
    std::vector<TypeId> r2;
    const bool any = m == 0 ? witness({}) : for_each_product(sets, r2, witness);
    out.witness_absent = !any;
    out.exhaustive = true;
    return out;
  }
  VarConstraints cs;
  bool ok = true;
  if (has_arg) ok = solve(*p.argument, p.argument->root(), Variance::Contra, tr, cs);
  for (std::size_t i = 0; ok && i < n; ++i)
    ok = solve(p.rhs[i], p.rhs[i].root(), constraint_mode(p.kinds[i]), s2[i], cs);
  out.witness_absent = !(ok && all_satisfiable(cs, wdepth));
  return out;
}

bool Oracle::still_violates(const Violation& v, int wdepth) { return recheck(v, wdepth, 0).ok(); }

// ---------------------------------------------------------------------------
// Closure probing

std::optional<ClosureCounterexample> Oracle::closure_counterexample(std::string_view ctor,
                                                                    Variance v) {
  auto idx = engine_.signature().index_of(ctor);
  if (!idx) throw StructuralError("unknown type constructor '" + std::string(ctor) + "'");
  const auto c = static_cast<std::uint32_t>(*idx);
  auto all = universe_.up_to(config_.depth);
  std::vector<TypeId> types(all.begin(), all.end());
  const GroundStore& store = engine_.store();
  for (TypeId x : types) {
    if (store.ctor(x) != c) continue;
    for (TypeId y : types) {
      if (store.ctor(y) == c) continue;
      if (engine_.rel(v, x, y)) return ClosureCounterexample{engine_.expr(x), engine_.expr(y)};
    }
  }
  return std::nullopt;
}

bool Oracle::closure_probe(std::string_view ctor, Variance v) {
  return !closure_counterexample(ctor, v).has_value();
}

}  // namespace varkit
