#include "derivation.hpp"

#include <algorithm>
#include <optional>

namespace varkit::testing {

std::vector<Context> all_contexts(const std::vector<std::string>& vars) {
  std::vector<Context> out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < vars.size(); ++i) total *= 4;
  for (std::size_t code = 0; code < total; ++code) {
    Context g;
    std::size_t rest = code;
    for (const auto& x : vars) {
      g.set(x, kAllVariances[rest % 4]);
      rest /= 4;
    }
    out.push_back(std::move(g));
  }
  return out;
}

bool derive_variance(const Signature& sig, const Context& g, const TypeExpr& t, Variance v) {
  if (t.is_var()) return leq(v, g.at(t.name));
  const TypeConDecl& d = sig.at(t.name);
  for (std::size_t i = 0; i < t.args.size(); ++i)
    if (!derive_variance(sig, g, t.args[i], compose(v, d.param_variances[i]))) return false;
  return true;
}

namespace {

Context restrict_to(const Context& g, const std::vector<std::string>& vars) {
  Context out;
  for (const auto& x : vars) out.set(x, g.at(x));
  return out;
}

// Is there one context per child (from its candidate list) whose zip over the
// children mentioning each variable gives exactly g?
bool some_split_zips(const std::vector<std::vector<Context>>& candidates,
                     const std::vector<std::vector<std::string>>& child_vars, const Context& g,
                     std::size_t i, std::vector<const Context*>& picked) {
  if (i == candidates.size()) {
    for (const auto& [x, want] : g) {
      std::optional<Variance> acc;
      bool seen = false;
      for (std::size_t k = 0; k < picked.size(); ++k) {
        const auto& vars = child_vars[k];
        if (std::find(vars.begin(), vars.end(), x) == vars.end()) continue;
        const Variance w = picked[k]->at(x);
        if (!seen) {
          acc = w;
          seen = true;
        } else {
          acc = acc ? zip(*acc, w) : std::nullopt;
        }
      }
      if (seen && acc != want) return false;
    }
    return true;
  }
  for (const auto& c : candidates[i]) {
    picked.push_back(&c);
    const bool ok = some_split_zips(candidates, child_vars, g, i + 1, picked);
    picked.pop_back();
    if (ok) return true;
  }
  return false;
}

}  // namespace

bool derive_decomposability(const Signature& sig, const ClosedFn& closed, const Context& g,
                            const TypeExpr& t, Variance v, Variance v2) {
  const Context own = restrict_to(g, free_vars(t));
  if (leq(v2, v) && derive_variance(sig, own, t, v)) return true;  // sc-Triv
  if (t.is_var()) return own.at(t.name) == v;                      // sc-Var
  if (!closed(t.name, v)) return false;                            // sc-Constr
  const TypeConDecl& d = sig.at(t.name);
  std::vector<std::vector<Context>> candidates;
  std::vector<std::vector<std::string>> child_vars;
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    const Variance w = d.param_variances[i];
    child_vars.push_back(free_vars(t.args[i]));
    std::vector<Context> ok;
    for (const auto& c : all_contexts(child_vars.back()))
      if (derive_decomposability(sig, closed, c, t.args[i], compose(v, w), compose(v2, w)))
        ok.push_back(c);
    if (ok.empty()) return false;
    candidates.push_back(std::move(ok));
  }
  std::vector<const Context*> picked;
  return some_split_zips(candidates, child_vars, own, 0, picked);
}

}  // namespace varkit::testing
