#include "varkit/checker.hpp"

#include <algorithm>
#include <map>

#include "varkit/diagnostic.hpp"

namespace varkit {

namespace {

// Witness preference: the least informative variance first.
constexpr std::array<Variance, 4> kPreference = {Variance::Irr, Variance::Cov, Variance::Contra,
                                                 Variance::Inv};

VarianceSet lub_sets(VarianceSet x, VarianceSet y) {
  VarianceSet out;
  for (Variance a : x.members())
    for (Variance b : y.members()) out.insert(lub(a, b));
  return out;
}

bool contains_name(const std::vector<std::string>* names, std::string_view n) {
  return names && std::find(names->begin(), names->end(), n) != names->end();
}

ContextBox zip_boxes(const ContextBox& a, const ContextBox& b,
                     const std::vector<std::string>* lenient) {
  if (!lenient) return box_zip(a, b);
  ContextBox out;
  auto merge = [&](const std::string& k) {
    VarianceSet x = a.get(k), y = b.get(k);
    out.set(k, contains_name(lenient, k) ? lub_sets(x, y) : zip_sets(x, y));
  };
  for (const auto& [k, s] : a.entries()) merge(k);
  for (const auto& [k, s] : b.entries())
    if (!a.entries().count(k)) merge(k);
  return out;
}

Variance preferred_member(VarianceSet s) {
  for (Variance v : kPreference)
    if (s.contains(v)) return v;
  throw StructuralError("no member in empty variance set");
}

}  // namespace

// ---------------------------------------------------------------------------
// BoxUnion

void BoxUnion::normalize() {
  std::vector<ContextBox> kept;
  for (auto& b : boxes_) {
    if (b.has_empty()) continue;
    bool subsumed = false;
    for (const auto& k : kept)
      if (b.subset_of(k)) {
        subsumed = true;
        break;
      }
    if (subsumed) continue;
    std::erase_if(kept, [&](const ContextBox& k) { return k.subset_of(b); });
    kept.push_back(std::move(b));
  }
  boxes_ = std::move(kept);
}

bool BoxUnion::contains(const Context& g) const {
  return std::any_of(boxes_.begin(), boxes_.end(),
                     [&](const ContextBox& b) { return b.contains(g); });
}

std::string BoxUnion::to_string() const {
  if (boxes_.empty()) return "{}";
  std::string out;
  for (std::size_t i = 0; i < boxes_.size(); ++i) {
    if (i) out += " | ";
    out += boxes_[i].to_string();
  }
  return out;
}

std::optional<ConstraintMode> compile_constraint(ConstraintKind kind, Variance v) {
  switch (kind) {
    case ConstraintKind::Eq:
      return ConstraintMode{v, Variance::Inv};
    case ConstraintKind::Sup:
      if (v == Variance::Cov || v == Variance::Inv) return ConstraintMode{Variance::Cov, Variance::Cov};
      return ConstraintMode{Variance::Irr, Variance::Cov};
    case ConstraintKind::Sub:
      if (v == Variance::Contra || v == Variance::Inv)
        return ConstraintMode{Variance::Contra, Variance::Contra};
      return ConstraintMode{Variance::Irr, Variance::Contra};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Checker

Checker::Checker(std::shared_ptr<const Signature> sig) : sig_(sig), engine_(std::move(sig)) {}

const TypeConDecl& Checker::ctor(const TypeExpr& t) const {
  const TypeConDecl* d = sig_->find(t.name);
  if (!d) throw StructuralError("unknown type constructor '" + t.name + "'");
  if (d->arity() != t.args.size())
    throw StructuralError("'" + t.name + "' expects " + std::to_string(d->arity()) +
                          " argument(s), got " + std::to_string(t.args.size()));
  return *d;
}

bool Checker::check_variance(const Context& g, const TypeExpr& t, Variance v) const {
  if (t.is_var()) {
    auto w = g.find(t.name);
    if (!w) throw StructuralError("unbound type variable '" + t.name + "'");
    return leq(v, *w);
  }
  const TypeConDecl& d = ctor(t);
  for (std::size_t i = 0; i < t.args.size(); ++i)
    if (!check_variance(g, t.args[i], compose(v, d.param_variances[i]))) return false;
  return true;
}

void Checker::demands(const TypeExpr& t, Variance v, Context& acc) const {
  if (t.is_var()) {
    auto cur = acc.find(t.name);
    if (!cur) throw StructuralError("unbound type variable '" + t.name + "'");
    acc.set(t.name, lub(*cur, v));
    return;
  }
  const TypeConDecl& d = ctor(t);
  for (std::size_t i = 0; i < t.args.size(); ++i)
    demands(t.args[i], compose(v, d.param_variances[i]), acc);
}

Context Checker::min_context(const TypeExpr& t, Variance v) const {
  auto vars = free_vars(t);
  return min_context(t, v, vars);
}

Context Checker::min_context(const TypeExpr& t, Variance v,
                             std::span<const std::string> vars) const {
  Context acc;
  for (const auto& x : vars) acc.set(x, Variance::Irr);
  demands(t, v, acc);
  return acc;
}

BoxUnion Checker::decomp_boxes(const TypeExpr& t, Variance v, Variance v2) const {
  return decomp_impl(t, v, v2, nullptr);
}

BoxUnion Checker::decomp_impl(const TypeExpr& t, Variance v, Variance v2,
                              const std::vector<std::string>* lenient) const {
  BoxUnion out;
  // sc-Triv
  if (leq(v2, v)) {
    ContextBox b;
    for (const auto& [x, w] : min_context(t, v)) b.set(x, VarianceSet::up_closure(w));
    out.add(std::move(b));
  }
  if (t.is_var()) {
    // sc-Var
    ContextBox b;
    b.set(t.name, VarianceSet::single(v));
    out.add(std::move(b));
  } else {
    const TypeConDecl& d = ctor(t);
    auto idx = static_cast<std::uint32_t>(*sig_->index_of(t.name));
    // sc-Constr
    if (engine_.closed(idx, v)) {
      // A nullary constructor derives under any context.
      std::vector<ContextBox> acc{ContextBox{}};
      for (std::size_t i = 0; i < t.args.size() && !acc.empty(); ++i) {
        const Variance w = d.param_variances[i];
        BoxUnion child = decomp_impl(t.args[i], compose(v, w), compose(v2, w), lenient);
        if (i == 0) {
          acc = child.boxes();
          continue;
        }
        BoxUnion next;
        for (const auto& a : acc)
          for (const auto& b : child.boxes()) next.add(zip_boxes(a, b, lenient));
        next.normalize();
        acc = next.boxes();
      }
      for (auto& b : acc) out.add(std::move(b));
    }
  }
  out.normalize();
  return out;
}

bool Checker::check_decomposability(const Context& g, const TypeExpr& t, Variance v,
                                    Variance v2) const {
  for (const auto& x : free_vars(t))
    if (!g.contains(x)) throw StructuralError("unbound type variable '" + x + "'");
  // Derivability only looks at the free variables of t.
  Context restricted;
  for (const auto& x : free_vars(t)) restricted.set(x, g.at(x));
  return decomp_boxes(t, v, v2).contains(restricted);
}

namespace {

// First head constructor on the way down that blocks sc-Constr, for messages.
std::optional<std::string> blocking_head(const Checker& c, const Signature& sig,
                                         const TypeExpr& t, Variance v, Variance v2) {
  if (t.is_var()) return std::nullopt;
  if (!c.closed(t.name, v))
    return "'" + t.name + "' is not " + std::string(symbol(v)) + "-closed";
  const TypeConDecl& d = sig.at(t.name);
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    const Variance w = d.param_variances[i];
    if (auto r = blocking_head(c, sig, t.args[i], compose(v, w), compose(v2, w))) return r;
  }
  return std::nullopt;
}

struct Choice {
  std::vector<std::size_t> picks;  // box index per constraint
  ContextBox zipped;
};

}  // namespace

CheckReport Checker::check_constructor(const ConstructorDecl& decl,
                                       std::span<const Variance> variances,
                                       std::string_view datatype) const {
  CheckReport report;
  report.datatype = std::string(datatype);
  report.constructor = decl.name;
  report.sound_mode = decl.uses_subtyping_constraints();

  if (decl.constraints.size() != variances.size())
    throw StructuralError("constructor '" + decl.name + "' has " +
                          std::to_string(decl.constraints.size()) + " constraint(s) for " +
                          std::to_string(variances.size()) + " parameter(s)");
  const TypeConDecl* owner = datatype.empty() ? nullptr : sig_->find(datatype);
  auto param_name = [&](std::size_t i) {
    if (owner && i < owner->params.size()) return owner->params[i];
    return "#" + std::to_string(i);
  };

  const auto& exs = decl.existentials;
  std::vector<BoxUnion> unions;
  for (std::size_t ci = 0; ci < decl.constraints.size(); ++ci) {
    const Constraint& c = decl.constraints[ci];
    if (c.param_index >= variances.size())
      throw StructuralError("constraint on missing parameter in '" + decl.name + "'");
    for (const auto& x : free_vars(c.rhs))
      if (std::find(exs.begin(), exs.end(), x) == exs.end())
        throw StructuralError("'" + x + "' is not an existential of '" + decl.name + "'");
    ConstraintMode m = *compile_constraint(c.kind, variances[c.param_index]);
    BoxUnion u = decomp_impl(c.rhs, m.source, m.target, nullptr);
    if (u.empty()) {
      Failure f;
      f.requirement = Failure::Requirement::Decomposability;
      f.rule = "sc-Constr";
      f.constraint_index = ci;
      const std::string what = param_name(c.param_index) + " " +
                               std::string(constraint_symbol(c.kind)) + " " + c.rhs.to_string();
      const std::string mode =
          std::string(symbol(m.source)) + " => " + std::string(symbol(m.target));
      auto vars = free_vars(c.rhs);
      if (!decomp_impl(c.rhs, m.source, m.target, &vars).empty()) {
        f.code = codes::kZip;
        f.requirement = Failure::Requirement::Zip;
        f.variable = vars.front();
        for (const auto& x : vars) {
          std::vector<std::string> one{x};
          if (!decomp_impl(c.rhs, m.source, m.target, &one).empty()) {
            f.variable = x;
            break;
          }
        }
        f.message = "constraint " + what + " is not decomposable at " + mode + ": occurrences of '" +
                    f.variable + "' interfere";
      } else {
        f.code = codes::kClosure;
        f.variable = param_name(c.param_index);
        auto head = blocking_head(*this, *sig_, c.rhs, m.source, m.target);
        f.message = "constraint " + what + " is not decomposable at " + mode +
                    (head ? ": " + *head : std::string());
      }
      report.failure = std::move(f);
      return report;
    }
    unions.push_back(std::move(u));
  }

  // A constraint on an irrelevant parameter with a relevant target can only
  // be decomposed by sc-Var, which hands its variable the value ⋈. That ⋈
  // does not mean the variable is unused: the witness must pick it freely to
  // hit the new parameter. Zipping it with another ⋈ would let a second
  // constraint fix the same variable, so such a variable must be irrelevant
  // in every other constraint and may not be claimed twice.
  std::map<std::string, std::size_t> claimed;
  for (std::size_t ci = 0; ci < decl.constraints.size(); ++ci) {
    const Constraint& c = decl.constraints[ci];
    const ConstraintMode m = *compile_constraint(c.kind, variances[c.param_index]);
    if (m.source != Variance::Irr || m.target == Variance::Irr || !c.rhs.is_var()) continue;
    if (auto [it, fresh] = claimed.emplace(c.rhs.name, ci); !fresh) {
      Failure f;
      f.code = codes::kZip;
      f.requirement = Failure::Requirement::Zip;
      f.rule = "zip";
      f.variable = c.rhs.name;
      f.constraint_index = ci;
      f.message = "irrelevant parameters " + param_name(decl.constraints[it->second].param_index) +
                  " and " + param_name(c.param_index) + " both need '" + f.variable +
                  "' chosen freely";
      report.failure = std::move(f);
      return report;
    }
  }
  for (const auto& [x, owner] : claimed) {
    for (std::size_t ci = 0; ci < unions.size(); ++ci) {
      if (ci == owner) continue;
      BoxUnion narrowed;
      for (ContextBox b : unions[ci].boxes()) {
        b.restrict(x, VarianceSet::single(Variance::Irr));
        if (!b.has_empty()) narrowed.add(std::move(b));
      }
      if (narrowed.empty()) {
        const Constraint& c = decl.constraints[ci];
        Failure f;
        f.code = codes::kZip;
        f.requirement = Failure::Requirement::Zip;
        f.rule = "zip";
        f.variable = x;
        f.constraint_index = ci;
        f.message = "'" + x + "' is chosen freely for irrelevant parameter " +
                    param_name(decl.constraints[owner].param_index) + " but constraint " +
                    param_name(c.param_index) + " " + std::string(constraint_symbol(c.kind)) + " " +
                    c.rhs.to_string() + " depends on it";
        report.failure = std::move(f);
        return report;
      }
      unions[ci] = std::move(narrowed);
    }
  }

  ContextBox variance_box;
  if (decl.argument) {
    for (const auto& [x, w] : min_context(*decl.argument, Variance::Cov, exs))
      variance_box.set(x, VarianceSet::up_closure(w));
  }

  // Every choice of one box per constraint whose zip is nonempty. With no
  // constraint at all the zip is the full box.
  std::vector<Choice> zipped;
  std::optional<Choice> accepted;
  std::vector<std::size_t> picks;
  auto search = [&](auto&& self, std::size_t i, const ContextBox& acc) -> bool {
    if (i == unions.size()) {
      zipped.push_back({picks, acc});
      if (!box_intersect(acc, variance_box).has_empty()) {
        accepted = Choice{picks, acc};
        return true;
      }
      return false;
    }
    for (std::size_t b = 0; b < unions[i].boxes().size(); ++b) {
      ContextBox next = i == 0 ? unions[i].boxes()[b] : box_zip(acc, unions[i].boxes()[b]);
      if (next.has_empty()) continue;
      picks.push_back(b);
      bool done = self(self, i + 1, next);
      picks.pop_back();
      if (done) return true;
    }
    return false;
  };
  search(search, 0, ContextBox{});

  if (accepted) {
    report.accepted = true;
    ContextBox final_box = box_intersect(accepted->zipped, variance_box);
    Context gamma;
    std::vector<Context> parts(unions.size());
    for (const auto& x : exs) {
      const Variance target = preferred_member(final_box.get(x));
      gamma.set(x, target);
      // Split target back into one variance per constraint.
      std::vector<Variance> split(unions.size());
      auto back = [&](auto&& self, std::size_t i, Variance acc) -> bool {
        if (i == unions.size()) return acc == target;
        VarianceSet s = unions[i].boxes()[accepted->picks[i]].get(x);
        for (Variance v : kPreference) {
          if (!s.contains(v)) continue;
          auto z = zip(acc, v);
          if (!z) continue;
          split[i] = v;
          if (self(self, i + 1, *z)) return true;
        }
        return false;
      };
      if (!back(back, 0, Variance::Irr))
        throw StructuralError("internal: witness split failed for '" + x + "'");
      for (std::size_t i = 0; i < unions.size(); ++i) parts[i].set(x, split[i]);
    }
    report.witness = std::move(gamma);
    report.constraint_contexts = std::move(parts);
    return report;
  }

  Failure f;
  f.rule = "sc-Constr";
  if (zipped.empty()) {
    // Report the first existential that no choice of boxes can zip.
    f.code = codes::kZip;
    f.requirement = Failure::Requirement::Zip;
    f.rule = "zip";
    std::vector<ContextBox> all;
    auto collect = [&](auto&& self, std::size_t i, const ContextBox& acc) -> void {
      if (i == unions.size()) {
        all.push_back(acc);
        return;
      }
      for (const auto& b : unions[i].boxes()) self(self, i + 1, i == 0 ? b : box_zip(acc, b));
    };
    collect(collect, 0, ContextBox{});
    for (const auto& x : exs) {
      bool always_empty = std::all_of(all.begin(), all.end(),
                                      [&](const ContextBox& b) { return b.get(x).empty(); });
      if (always_empty) {
        f.variable = x;
        break;
      }
    }
    if (f.variable.empty() && !all.empty())
      for (const auto& x : exs)
        if (all.front().get(x).empty()) {
          f.variable = x;
          break;
        }
    f.message = "constraints place incompatible variance demands on '" + f.variable + "'";
  } else {
    f.code = codes::kVariance;
    f.requirement = Failure::Requirement::Variance;
    f.rule = "vc-Var";
    for (const auto& x : exs) {
      bool always_empty = std::all_of(zipped.begin(), zipped.end(), [&](const Choice& c) {
        return (c.zipped.get(x) & variance_box.get(x)).empty();
      });
      if (always_empty) {
        f.variable = x;
        break;
      }
    }
    if (f.variable.empty())
      for (const auto& x : exs)
        if ((zipped.front().zipped.get(x) & variance_box.get(x)).empty()) {
          f.variable = x;
          break;
        }
    f.message = "argument " + (decl.argument ? decl.argument->to_string() : std::string()) +
                " needs '" + f.variable + "' at " + variance_box.get(f.variable).to_string() +
                " but the constraints only allow " +
                zipped.front().zipped.get(f.variable).to_string();
  }
  report.failure = std::move(f);
  return report;
}

std::vector<CheckReport> Checker::check_datatype(std::string_view name) const {
  const TypeConDecl* d = sig_->find(name);
  if (!d) throw StructuralError("unknown datatype '" + std::string(name) + "'");
  if (!d->is_datatype()) throw StructuralError("'" + std::string(name) + "' is not a datatype");
  std::vector<CheckReport> out;
  out.reserve(d->constructors.size());
  for (const auto& k : d->constructors) out.push_back(check_constructor(k, d->param_variances, name));
  return out;
}

}  // namespace varkit
