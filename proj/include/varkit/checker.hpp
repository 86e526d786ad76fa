#ifndef VARKIT_CHECKER_HPP
#define VARKIT_CHECKER_HPP

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "varkit/subtype.hpp"
#include "varkit/types.hpp"
#include "varkit/variance.hpp"

namespace varkit {

// A finite union of boxes. normalize() drops boxes with an empty component and
// boxes included in another one.
class BoxUnion {
 public:
  BoxUnion() = default;
  explicit BoxUnion(std::vector<ContextBox> boxes) : boxes_(std::move(boxes)) {}
  static BoxUnion full() { return BoxUnion({ContextBox{}}); }

  void add(ContextBox b) { boxes_.push_back(std::move(b)); }
  void normalize();
  bool empty() const { return boxes_.empty(); }
  bool contains(const Context& g) const;
  const std::vector<ContextBox>& boxes() const { return boxes_; }
  std::string to_string() const;

 private:
  std::vector<ContextBox> boxes_;
};

struct ConstraintMode {
  Variance source;
  Variance target;
  bool operator==(const ConstraintMode&) const = default;
};

// The decomposability judgment each kind of constraint has to satisfy when
// the parameter carries variance v.
std::optional<ConstraintMode> compile_constraint(ConstraintKind kind, Variance v);

struct Failure {
  enum class Requirement { Variance, Decomposability, Zip };

  std::string code;  // R_VARIANCE, R_CLOSURE or R_ZIP
  Requirement requirement = Requirement::Variance;
  std::string variable;
  std::string rule;
  std::string message;
  std::optional<std::size_t> constraint_index;
};

struct CheckReport {
  std::string datatype;
  std::string constructor;
  bool accepted = false;
  // Declarations with >= / <= constraints are only checked for soundness.
  bool sound_mode = false;
  std::optional<Context> witness;             // over the existentials
  std::vector<Context> constraint_contexts;   // one per constraint, in order
  std::optional<Failure> failure;
};

class Checker {
 public:
  explicit Checker(std::shared_ptr<const Signature> sig);

  const Signature& signature() const { return *sig_; }
  const std::shared_ptr<const Signature>& signature_ptr() const { return sig_; }

  bool check_variance(const Context& g, const TypeExpr& t, Variance v) const;

  // Least context over free_vars(t) validating t at v.
  Context min_context(const TypeExpr& t, Variance v) const;
  // Same, over the given variables; those not occurring in t get Irr.
  Context min_context(const TypeExpr& t, Variance v, std::span<const std::string> vars) const;

  // Exactly the contexts (over free_vars(t)) deriving t : v => v2.
  BoxUnion decomp_boxes(const TypeExpr& t, Variance v, Variance v2) const;
  bool check_decomposability(const Context& g, const TypeExpr& t, Variance v, Variance v2) const;

  CheckReport check_constructor(const ConstructorDecl& decl, std::span<const Variance> variances,
                                std::string_view datatype = {}) const;
  std::vector<CheckReport> check_datatype(std::string_view name) const;

  bool closed(std::string_view ctor, Variance v) const { return engine_.closed(ctor, v); }

 private:
  BoxUnion decomp_impl(const TypeExpr& t, Variance v, Variance v2,
                       const std::vector<std::string>* lenient) const;
  void demands(const TypeExpr& t, Variance v, Context& acc) const;
  const TypeConDecl& ctor(const TypeExpr& t) const;

  std::shared_ptr<const Signature> sig_;
  SubtypeEngine engine_;
};

}  // namespace varkit

#endif  // VARKIT_CHECKER_HPP
