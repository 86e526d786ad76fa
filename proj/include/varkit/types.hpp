#ifndef VARKIT_TYPES_HPP
#define VARKIT_TYPES_HPP

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "varkit/diagnostic.hpp"
#include "varkit/variance.hpp"

namespace varkit {

inline constexpr std::string_view kArrow = "->";
inline constexpr std::string_view kProduct = "*";

// A type expression: a variable or a constructor applied to arguments.
// Arrow and product are ordinary binary constructors named "->" and "*".
struct TypeExpr {
  enum class Kind : std::uint8_t { Var, App };

  Kind kind = Kind::App;
  std::string name;
  std::vector<TypeExpr> args;

  static TypeExpr var(std::string n) { return {Kind::Var, std::move(n), {}}; }
  static TypeExpr app(std::string n, std::vector<TypeExpr> a = {}) {
    return {Kind::App, std::move(n), std::move(a)};
  }
  static TypeExpr arrow(TypeExpr a, TypeExpr b) {
    return app(std::string(kArrow), {std::move(a), std::move(b)});
  }
  static TypeExpr product(TypeExpr a, TypeExpr b) {
    return app(std::string(kProduct), {std::move(a), std::move(b)});
  }

  bool is_var() const { return kind == Kind::Var; }
  bool is_ground() const;
  // Constructor nesting depth; a variable or nullary constructor has depth 1.
  int depth() const;
  std::string to_string() const;

  bool operator==(const TypeExpr&) const = default;
};

using Assignment = std::map<std::string, TypeExpr, std::less<>>;

// Capture-free simultaneous substitution. Throws StructuralError naming the
// first unbound variable.
TypeExpr substitute(const TypeExpr& t, const Assignment& assignment);

// Free variables in left-to-right first-occurrence order.
std::vector<std::string> free_vars(const TypeExpr& t);

enum class ConstraintKind : std::uint8_t { Eq, Sup, Sub };  // a = T, a >= T, a <= T

std::string_view constraint_symbol(ConstraintKind k);

struct Constraint {
  std::size_t param_index = 0;
  ConstraintKind kind = ConstraintKind::Eq;
  TypeExpr rhs;

  bool operator==(const Constraint&) const = default;
};

// K of exists b1..bn [a1 = T1, ..., am = Tm]. tau
struct ConstructorDecl {
  std::string name;
  std::vector<std::string> existentials;
  std::vector<Constraint> constraints;
  std::optional<TypeExpr> argument;  // nullopt: constant constructor
  SourceSpan span;

  // Constraint on the given parameter, if any.
  const Constraint* constraint_for(std::size_t param) const;
  bool uses_subtyping_constraints() const;
  bool operator==(const ConstructorDecl& o) const {
    return name == o.name && existentials == o.existentials &&
           constraints == o.constraints && argument == o.argument;
  }
};

// Same constructor up to renaming (and reordering) of existentials.
bool alpha_equivalent(const ConstructorDecl& a, const ConstructorDecl& b);

enum class TypeKind : std::uint8_t {
  BuiltinP,
  BuiltinQ,
  BuiltinArrow,
  BuiltinProduct,
  Base,
  Abstract,
  Datatype
};

struct TypeConDecl {
  std::string name;
  std::vector<std::string> params;
  std::vector<Variance> param_variances;
  bool upward_closed = true;
  bool downward_closed = true;
  TypeKind kind = TypeKind::Abstract;
  std::vector<ConstructorDecl> constructors;
  bool builtin = false;
  SourceSpan span;

  std::size_t arity() const { return param_variances.size(); }
  bool is_datatype() const { return kind == TypeKind::Datatype; }
  bool operator==(const TypeConDecl& o) const {
    return name == o.name && params == o.params && param_variances == o.param_variances &&
           upward_closed == o.upward_closed && downward_closed == o.downward_closed &&
           kind == o.kind && constructors == o.constructors && builtin == o.builtin;
  }
};

// The environment of type constructors. Immutable once handed to the checker
// or the oracle; share it through std::shared_ptr<const Signature>.
class Signature {
 public:
  Signature() = default;

  // int, q, p, ->, *, list, ref.
  static Signature with_builtins();

  // Returns false if the name is already declared.
  bool add(TypeConDecl decl);
  // Records b1 <= b2. Clears upward_closed on b1 and downward_closed on b2
  // when both are declared. Self-axioms are ignored.
  void add_axiom(const std::string& lower, const std::string& upper);

  const TypeConDecl* find(std::string_view name) const;
  TypeConDecl* find_mutable(std::string_view name);
  const TypeConDecl& at(std::string_view name) const;  // throws StructuralError
  std::optional<std::size_t> index_of(std::string_view name) const;
  const TypeConDecl& decl(std::size_t index) const { return decls_[index]; }
  std::size_t size() const { return decls_.size(); }
  const std::vector<TypeConDecl>& decls() const { return decls_; }
  const std::vector<std::pair<std::string, std::string>>& base_axioms() const { return axioms_; }

  std::vector<const TypeConDecl*> datatypes() const;

  bool operator==(const Signature& o) const { return decls_ == o.decls_ && axioms_ == o.axioms_; }

 private:
  std::vector<TypeConDecl> decls_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::pair<std::string, std::string>> axioms_;
};

// Arity, scoping, and constraint-shape hygiene. Empty iff well-formed.
std::vector<Diagnostic> well_formed(const Signature& sig);

// Encodes a plain constructor K of tau(a1..an) as
// K of exists _e0.._en-1 [a_i = _ei]. tau[_ei/a_i].
ConstructorDecl encode_plain_constructor(const std::string& name,
                                         const std::vector<std::string>& params,
                                         std::optional<TypeExpr> argument);

}  // namespace varkit

#endif  // VARKIT_TYPES_HPP
