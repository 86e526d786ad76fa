#ifndef VARKIT_ORACLE_HPP
#define VARKIT_ORACLE_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "varkit/ground.hpp"
#include "varkit/subtype.hpp"
#include "varkit/types.hpp"
#include "varkit/variance.hpp"

namespace varkit {

class OverflowError : public std::runtime_error {
 public:
  OverflowError(int depth, std::size_t count, std::size_t cap);
  int depth() const { return depth_; }
  std::size_t count() const { return count_; }

 private:
  int depth_;
  std::size_t count_;
};

// All ground types of nesting depth <= depth(), level by level. Types of depth
// <= d form a prefix of types(), and the order is deterministic: within a
// level, constructors in signature order, arguments in lexicographic index
// order.
class Universe {
 public:
  Universe() = default;

  int depth() const { return static_cast<int>(level_end_.size()); }
  std::size_t cap() const { return cap_; }
  std::span<const TypeId> types() const { return types_; }
  std::span<const TypeId> up_to(int d) const;
  std::size_t size() const { return types_.size(); }

  // Builds the missing levels; throws OverflowError when the total would
  // exceed the cap. Nothing is added on failure.
  void extend(GroundStore& store, const Signature& sig, int depth);

 private:
  friend Universe enumerate(SubtypeEngine& engine, int depth, std::size_t cap);
  std::vector<TypeId> types_;
  std::vector<std::size_t> level_end_;  // level_end_[d-1]: size of the depth-<=d prefix
  std::size_t cap_ = 0;
};

Universe enumerate(SubtypeEngine& engine, int depth, std::size_t cap);

// A type expression compiled against a signature, with variables numbered by
// their position in a given variable list.
class Pattern {
 public:
  Pattern() = default;
  Pattern(const Signature& sig, const TypeExpr& t, std::span<const std::string> vars);

  struct Node {
    std::int32_t ctor;  // -1 for a variable
    std::uint32_t var;
    std::uint32_t first_child;
    std::uint32_t arity;
  };
  std::uint32_t root() const { return root_; }
  std::size_t size() const { return nodes_.size(); }
  const Node& node(std::uint32_t i) const { return nodes_[i]; }
  std::uint32_t child(std::uint32_t i, std::uint32_t k) const {
    return kids_[nodes_[i].first_child + k];
  }
  TypeId instantiate(GroundStore& store, std::span<const TypeId> values) const;

 private:
  std::uint32_t build(const Signature& sig, const TypeExpr& t, std::span<const std::string> vars);
  TypeId inst(GroundStore& store, std::uint32_t i, std::span<const TypeId> values) const;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> kids_;
  std::uint32_t root_ = 0;
};

struct OracleConfig {
  int depth = 3;
  int slack = 1;
  std::size_t cap = 2'000'000;
};

// A failure of the Req criterion: the instantiations satisfy the premises but
// no witness rho' exists in the witness universe.
struct Violation {
  std::string datatype;
  std::string constructor;
  std::vector<TypeExpr> sigma;
  std::vector<TypeExpr> sigma_prime;
  std::vector<TypeExpr> rho;
  std::size_t rho_index = 0;
  int depth = 0;
  int witness_depth = 0;
  std::string reason;
  std::string to_string() const;
};

struct VarianceCounterexample {
  std::vector<TypeExpr> sigma;
  std::vector<TypeExpr> sigma_prime;
};

struct DecompositionCounterexample {
  std::vector<TypeExpr> rho;
  TypeExpr sigma_prime;
};

struct ClosureCounterexample {
  TypeExpr instance;
  TypeExpr other;
};

// Outcome of re-verifying a Violation from scratch.
struct RecheckResult {
  bool premises_hold = false;
  bool witness_absent = false;
  bool exhaustive = false;  // witness absence checked by plain enumeration
  bool ok() const { return premises_hold && witness_absent; }
};

// Bounded semantic ground truth. Holds its own SubtypeEngine, so one Oracle
// must not be shared between threads; the parallel kernels copy it.
class Oracle {
 public:
  Oracle(std::shared_ptr<const Signature> sig, OracleConfig config);

  const OracleConfig& config() const { return config_; }
  const Signature& signature() const { return engine_.signature(); }
  SubtypeEngine& engine() { return engine_; }
  const Universe& universe() const { return universe_; }
  int witness_depth() const { return config_.depth + config_.slack; }

  // { x : depth(x) <= depth, rel(v, g, x) }, generated from the structure of g.
  const std::vector<TypeId>& related(Variance v, TypeId g, int depth);

  // Quantifiers range over the universe; variables are taken in g's order.
  bool semantic_variance(const Context& g, const TypeExpr& t, Variance v);
  std::optional<VarianceCounterexample> variance_counterexample(const Context& g,
                                                                const TypeExpr& t, Variance v);

  // rho over the universe, sigma' and rho' over the witness universe.
  bool semantic_decomposability(const Context& g, const TypeExpr& t, Variance v, Variance v2);
  std::optional<DecompositionCounterexample> decomposition_counterexample(const Context& g,
                                                                          const TypeExpr& t,
                                                                          Variance v, Variance v2);

  // First violation in enumeration order over all constructors of the
  // datatype, using its declared variances.
  std::optional<Violation> semantic_req(std::string_view datatype);
  std::optional<Violation> semantic_req_parallel(std::string_view datatype);
  std::optional<Violation> constructor_req(std::string_view datatype, const ConstructorDecl& k,
                                           std::span<const Variance> variances, bool parallel);
  // Req at a single rho tuple, which need not lie in the universe. sigma'
  // ranges over related types of depth <= depth, except that an irrelevant
  // parameter's sigma' is drawn from irr_pool when it is nonempty. Witnesses
  // are searched up to depth + slack.
  std::optional<Violation> req_probe(std::string_view datatype, const ConstructorDecl& k,
                                     std::span<const Variance> variances,
                                     std::span<const TypeId> rho, int depth,
                                     std::span<const TypeId> irr_pool = {});
  // Number of rho tuples the constructor loop visits.
  std::size_t req_work(const ConstructorDecl& k) const;

  // Re-verifies a violation at an arbitrary witness depth. Witness absence is
  // checked by enumeration when the witness space is at most `brute_limit`
  // tuples, otherwise by the structural solver.
  RecheckResult recheck(const Violation& v, int witness_depth, std::size_t brute_limit = 2'000'000);
  // Instantiation check: does the violation's (sigma, sigma', rho) still fail
  // when the witness universe is larger?
  bool still_violates(const Violation& v, int witness_depth);

  bool closure_probe(std::string_view ctor, Variance v);
  std::optional<ClosureCounterexample> closure_counterexample(std::string_view ctor, Variance v);

 private:
  struct Prepared;
  // (variable index, packed atom): the variable's value x must satisfy
  // rel(v, x, g) for the atom (v, g).
  using VarConstraints = std::vector<std::pair<std::uint32_t, std::uint64_t>>;
  struct KeyHash {
    std::size_t operator()(const std::vector<std::uint64_t>& k) const;
  };

  void ensure_levels(int depth);
  bool cross_head(std::uint32_t c, std::uint32_t cg, Variance v) const;
  bool solve(const Pattern& p, std::uint32_t node, Variance v, TypeId g, VarConstraints& out);
  bool satisfiable(std::span<const std::uint64_t> atoms, int depth);
  bool all_satisfiable(VarConstraints& cs, int depth);
  Prepared prepare(std::string_view datatype, const ConstructorDecl& k,
                   std::span<const Variance> variances) const;
  std::optional<Violation> req_at(const Prepared& p, std::size_t index);
  std::optional<Violation> req_eval(const Prepared& p, const std::vector<TypeId>& rho,
                                    std::size_t index, int depth,
                                    std::span<const TypeId> irr_pool, bool memo);
  std::optional<Violation> req_serial(const Prepared& p);
  std::optional<Violation> req_parallel(const Prepared& p);
  std::vector<TypeExpr> exprs(std::span<const TypeId> ids) const;

  OracleConfig config_;
  SubtypeEngine engine_;
  // Built to the configured depth up front; deeper levels are added on demand
  // by the witness search. Quantifiers only use the configured prefix.
  Universe universe_;
  std::unordered_map<std::uint64_t, std::vector<TypeId>> related_memo_;
  std::unordered_map<std::vector<std::uint64_t>, bool, KeyHash> sat_memo_;
  std::vector<std::uint64_t> scratch_;
  // Req keys already shown to hold for the constructor being checked.
  std::unordered_set<std::vector<std::uint64_t>, KeyHash> req_passed_;
  static constexpr std::uint64_t kNoKey = ~std::uint64_t{0};
};

}  // namespace varkit

#endif  // VARKIT_ORACLE_HPP
