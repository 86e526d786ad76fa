#include "varkit/parser.hpp"

namespace varkit {

namespace {

std::string param_list(const TypeConDecl& d) {
  if (d.params.empty()) return {};
  std::string out = "(";
  for (std::size_t i = 0; i < d.params.size(); ++i) {
    if (i) out += ", ";
    out += std::string(symbol(d.param_variances[i])) + d.params[i];
  }
  return out + ")";
}

std::string flag_suffix(const TypeConDecl& d) {
  std::string out;
  if (!d.upward_closed) out += " noup";
  if (!d.downward_closed) out += " nodown";
  return out;
}

}  // namespace

std::string pretty_constructor(const TypeConDecl& owner, const ConstructorDecl& k) {
  std::string out = k.name + " of ";
  if (!k.existentials.empty()) {
    out += "exists";
    for (const auto& x : k.existentials) out += " " + x;
    out += " ";
  }
  out += "[";
  for (std::size_t i = 0; i < k.constraints.size(); ++i) {
    const Constraint& c = k.constraints[i];
    if (i) out += ", ";
    out += c.param_index < owner.params.size() ? owner.params[c.param_index]
                                               : "_" + std::to_string(c.param_index);
    out += " " + std::string(constraint_symbol(c.kind)) + " " + c.rhs.to_string();
  }
  out += "]";
  if (k.argument) out += ". " + k.argument->to_string();
  return out;
}

std::string pretty(const Signature& sig) {
  std::string out;
  for (const auto& d : sig.decls()) {
    if (d.builtin) continue;
    switch (d.kind) {
      case TypeKind::Base:
        out += "base " + d.name + flag_suffix(d) + "\n";
        break;
      case TypeKind::Abstract:
        out += "abstract " + d.name + param_list(d) + flag_suffix(d) + "\n";
        break;
      case TypeKind::Datatype:
        out += "type " + d.name + param_list(d) + " =";
        for (const auto& k : d.constructors) out += "\n  | " + pretty_constructor(d, k);
        out += "\n";
        break;
      default:
        break;
    }
  }
  for (const auto& [lo, hi] : sig.base_axioms()) out += "axiom " + lo + " <= " + hi + "\n";
  return out;
}

}  // namespace varkit
