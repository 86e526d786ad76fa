#include "varkit/types.hpp"

#include <algorithm>
#include <set>

namespace varkit {

std::string_view severity_name(Severity s) {
  switch (s) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Info: return "info";
  }
  return "error";
}

std::string Diagnostic::to_string() const {
  std::string out;
  if (span.line > 0) out += std::to_string(span.line) + ":" + std::to_string(span.column) + ": ";
  out += std::string(severity_name(severity)) + "[" + code + "]: " + message;
  return out;
}

// ---------------------------------------------------------------------------
// TypeExpr

bool TypeExpr::is_ground() const {
  if (is_var()) return false;
  return std::all_of(args.begin(), args.end(), [](const TypeExpr& a) { return a.is_ground(); });
}

int TypeExpr::depth() const {
  int d = 0;
  for (const auto& a : args) d = std::max(d, a.depth());
  return d + 1;
}

namespace {

bool is_infix(const TypeExpr& t, std::string_view op) {
  return !t.is_var() && t.name == op && t.args.size() == 2;
}

void print(const TypeExpr& t, std::string& out) {
  if (t.is_var()) {
    out += t.name;
    return;
  }
  if (is_infix(t, kArrow)) {
    bool paren = is_infix(t.args[0], kArrow);
    if (paren) out += "(";
    print(t.args[0], out);
    if (paren) out += ")";
    out += " -> ";
    print(t.args[1], out);
    return;
  }
  if (is_infix(t, kProduct)) {
    bool lp = is_infix(t.args[0], kArrow);
    bool rp = is_infix(t.args[1], kArrow) || is_infix(t.args[1], kProduct);
    if (lp) out += "(";
    print(t.args[0], out);
    if (lp) out += ")";
    out += " * ";
    if (rp) out += "(";
    print(t.args[1], out);
    if (rp) out += ")";
    return;
  }
  out += t.name;
  if (t.args.empty()) return;
  out += "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ", ";
    print(t.args[i], out);
  }
  out += ")";
}

void collect_vars(const TypeExpr& t, std::vector<std::string>& out) {
  if (t.is_var()) {
    if (std::find(out.begin(), out.end(), t.name) == out.end()) out.push_back(t.name);
    return;
  }
  for (const auto& a : t.args) collect_vars(a, out);
}

TypeExpr rename(const TypeExpr& t, const std::map<std::string, std::string>& names) {
  if (t.is_var()) {
    auto it = names.find(t.name);
    return TypeExpr::var(it == names.end() ? t.name : it->second);
  }
  TypeExpr out = TypeExpr::app(t.name);
  for (const auto& a : t.args) out.args.push_back(rename(a, names));
  return out;
}

}  // namespace

std::string TypeExpr::to_string() const {
  std::string out;
  print(*this, out);
  return out;
}

TypeExpr substitute(const TypeExpr& t, const Assignment& assignment) {
  if (t.is_var()) {
    auto it = assignment.find(t.name);
    if (it == assignment.end())
      throw StructuralError("unbound type variable '" + t.name + "' in substitution");
    return it->second;
  }
  TypeExpr out = TypeExpr::app(t.name);
  out.args.reserve(t.args.size());
  for (const auto& a : t.args) out.args.push_back(substitute(a, assignment));
  return out;
}

std::vector<std::string> free_vars(const TypeExpr& t) {
  std::vector<std::string> out;
  collect_vars(t, out);
  return out;
}

std::string_view constraint_symbol(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::Eq: return "=";
    case ConstraintKind::Sup: return ">=";
    case ConstraintKind::Sub: return "<=";
  }
  return "=";
}

// ---------------------------------------------------------------------------
// ConstructorDecl

const Constraint* ConstructorDecl::constraint_for(std::size_t param) const {
  for (const auto& c : constraints)
    if (c.param_index == param) return &c;
  return nullptr;
}

bool ConstructorDecl::uses_subtyping_constraints() const {
  return std::any_of(constraints.begin(), constraints.end(),
                     [](const Constraint& c) { return c.kind != ConstraintKind::Eq; });
}

namespace {

ConstructorDecl canonical(const ConstructorDecl& d) {
  std::vector<Constraint> cs = d.constraints;
  std::stable_sort(cs.begin(), cs.end(), [](const Constraint& a, const Constraint& b) {
    return a.param_index < b.param_index;
  });
  std::vector<std::string> order;
  for (const auto& c : cs) collect_vars(c.rhs, order);
  if (d.argument) collect_vars(*d.argument, order);
  for (const auto& e : d.existentials)
    if (std::find(order.begin(), order.end(), e) == order.end()) order.push_back(e);

  std::map<std::string, std::string> names;
  ConstructorDecl out;
  out.name = d.name;
  for (std::size_t i = 0; i < order.size(); ++i) {
    names[order[i]] = "#" + std::to_string(i);
    out.existentials.push_back(names[order[i]]);
  }
  for (auto& c : cs) out.constraints.push_back({c.param_index, c.kind, rename(c.rhs, names)});
  if (d.argument) out.argument = rename(*d.argument, names);
  return out;
}

}  // namespace

bool alpha_equivalent(const ConstructorDecl& a, const ConstructorDecl& b) {
  if (a.existentials.size() != b.existentials.size()) return false;
  return canonical(a) == canonical(b);
}

ConstructorDecl encode_plain_constructor(const std::string& name,
                                         const std::vector<std::string>& params,
                                         std::optional<TypeExpr> argument) {
  ConstructorDecl d;
  d.name = name;
  std::map<std::string, std::string> names;
  for (std::size_t i = 0; i < params.size(); ++i) {
    std::string e = "_e" + std::to_string(i);
    names[params[i]] = e;
    d.existentials.push_back(e);
    d.constraints.push_back({i, ConstraintKind::Eq, TypeExpr::var(e)});
  }
  if (argument) d.argument = rename(*argument, names);
  return d;
}

// ---------------------------------------------------------------------------
// Signature

Signature Signature::with_builtins() {
  Signature s;
  auto builtin = [&](std::string name, TypeKind kind, std::vector<Variance> vs, bool up, bool down) {
    TypeConDecl d;
    d.name = std::move(name);
    d.kind = kind;
    d.param_variances = std::move(vs);
    for (std::size_t i = 0; i < d.param_variances.size(); ++i)
      d.params.push_back(std::string(1, static_cast<char>('a' + i)));
    d.upward_closed = up;
    d.downward_closed = down;
    d.builtin = true;
    s.add(std::move(d));
  };
  using V = Variance;
  builtin("int", TypeKind::Base, {}, true, true);
  builtin("q", TypeKind::BuiltinQ, {}, true, false);
  builtin("p", TypeKind::BuiltinP, {V::Cov}, false, true);
  builtin(std::string(kArrow), TypeKind::BuiltinArrow, {V::Contra, V::Cov}, true, true);
  builtin(std::string(kProduct), TypeKind::BuiltinProduct, {V::Cov, V::Cov}, true, true);
  builtin("list", TypeKind::Abstract, {V::Cov}, true, true);
  builtin("ref", TypeKind::Abstract, {V::Inv}, true, true);
  return s;
}

bool Signature::add(TypeConDecl decl) {
  if (index_.count(decl.name)) return false;
  index_.emplace(decl.name, decls_.size());
  decls_.push_back(std::move(decl));
  return true;
}

void Signature::add_axiom(const std::string& lower, const std::string& upper) {
  axioms_.emplace_back(lower, upper);
  if (lower == upper) return;
  if (auto* l = find_mutable(lower)) l->upward_closed = false;
  if (auto* u = find_mutable(upper)) u->downward_closed = false;
}

const TypeConDecl* Signature::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : &decls_[it->second];
}

TypeConDecl* Signature::find_mutable(std::string_view name) {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : &decls_[it->second];
}

const TypeConDecl& Signature::at(std::string_view name) const {
  if (auto* d = find(name)) return *d;
  throw StructuralError("unknown type constructor '" + std::string(name) + "'");
}

std::optional<std::size_t> Signature::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<const TypeConDecl*> Signature::datatypes() const {
  std::vector<const TypeConDecl*> out;
  for (const auto& d : decls_)
    if (d.is_datatype()) out.push_back(&d);
  return out;
}

// ---------------------------------------------------------------------------
// Well-formedness

namespace {

struct WfContext {
  const Signature& sig;
  std::vector<Diagnostic>& out;

  void report(std::string_view code, std::string msg, SourceSpan span, std::string var = {}) {
    Diagnostic d;
    d.code = std::string(code);
    d.message = std::move(msg);
    d.span = span;
    d.variable = std::move(var);
    out.push_back(std::move(d));
  }

  void check_expr(const TypeExpr& t, const std::set<std::string>& scope, SourceSpan span,
                  const std::string& where) {
    if (t.is_var()) {
      if (!scope.count(t.name))
        report(codes::kScope,
               "type variable '" + t.name + "' is not an existential of " + where, span, t.name);
      return;
    }
    const TypeConDecl* d = sig.find(t.name);
    if (!d) {
      report(codes::kUnknown, "unknown type constructor '" + t.name + "' in " + where, span);
    } else if (d->arity() != t.args.size()) {
      report(codes::kArity,
             "type constructor '" + t.name + "' expects " + std::to_string(d->arity()) +
                 " argument(s), got " + std::to_string(t.args.size()) + " in " + where,
             span);
    }
    for (const auto& a : t.args) check_expr(a, scope, span, where);
  }

  void check_constructor(const TypeConDecl& owner, const ConstructorDecl& k) {
    std::string where = "constructor " + k.name;
    std::set<std::string> scope;
    for (const auto& e : k.existentials)
      if (!scope.insert(e).second)
        report(codes::kScope, "existential '" + e + "' bound twice in " + where, k.span, e);
    for (const auto& p : owner.params)
      if (scope.count(p))
        report(codes::kScope,
               "existential '" + p + "' shadows a parameter of " + owner.name + " in " + where,
               k.span, p);

    std::vector<int> seen(owner.arity(), 0);
    for (const auto& c : k.constraints) {
      if (c.param_index >= owner.arity()) {
        report(codes::kConstraint, "constraint on a nonexistent parameter in " + where, k.span);
        continue;
      }
      ++seen[c.param_index];
      check_expr(c.rhs, scope, k.span, where);
    }
    for (std::size_t i = 0; i < owner.arity(); ++i) {
      const std::string pname = i < owner.params.size() ? owner.params[i] : std::to_string(i);
      if (seen[i] == 0)
        report(codes::kConstraint, "parameter '" + pname + "' has no constraint in " + where,
               k.span, pname);
      else if (seen[i] > 1)
        report(codes::kConstraint,
               "parameter '" + pname + "' has more than one constraint in " + where, k.span, pname);
    }
    if (k.argument) check_expr(*k.argument, scope, k.span, where);
  }
};

}  // namespace

std::vector<Diagnostic> well_formed(const Signature& sig) {
  std::vector<Diagnostic> out;
  WfContext cx{sig, out};
  for (const auto& d : sig.decls()) {
    if (!d.params.empty() && d.params.size() != d.param_variances.size())
      cx.report(codes::kArity, "parameter list of '" + d.name + "' does not match its variances",
                d.span);
    if (!d.is_datatype()) continue;
    std::set<std::string> names;
    for (const auto& p : d.params)
      if (!names.insert(p).second)
        cx.report(codes::kScope, "parameter '" + p + "' of '" + d.name + "' declared twice",
                  d.span, p);
    for (const auto& k : d.constructors) cx.check_constructor(d, k);
  }
  for (const auto& [lo, hi] : sig.base_axioms()) {
    for (const auto& name : {lo, hi}) {
      const TypeConDecl* d = sig.find(name);
      if (!d)
        cx.report(codes::kUnknown, "axiom mentions unknown type '" + name + "'", {});
      else if (d->kind != TypeKind::Base || d->arity() != 0)
        cx.report(codes::kAxiom, "axioms may only relate base types; '" + name + "' is not one",
                  d->span);
    }
  }
  return out;
}

}  // namespace varkit
