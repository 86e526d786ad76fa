#ifndef VARKIT_TESTS_DERIVATION_HPP
#define VARKIT_TESTS_DERIVATION_HPP

// Reference derivability for the two syntactic judgments, written directly
// from the inference rules. It never touches boxes: sc-Constr is decided by
// enumerating every per-child context and every way to zip them back.

#include <functional>
#include <string>
#include <vector>

#include "varkit/types.hpp"
#include "varkit/variance.hpp"

namespace varkit::testing {

using ClosedFn = std::function<bool(const std::string&, Variance)>;

// vc-Var / vc-Constr.
bool derive_variance(const Signature& sig, const Context& g, const TypeExpr& t, Variance v);

// sc-Triv / sc-Var / sc-Constr. Only the free variables of t are read from g.
bool derive_decomposability(const Signature& sig, const ClosedFn& closed, const Context& g,
                            const TypeExpr& t, Variance v, Variance v2);

// All 4^n contexts over vars, in a fixed order.
std::vector<Context> all_contexts(const std::vector<std::string>& vars);

}  // namespace varkit::testing

#endif
