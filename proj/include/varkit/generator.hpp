#ifndef VARKIT_GENERATOR_HPP
#define VARKIT_GENERATOR_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "varkit/types.hpp"

namespace varkit {

struct GeneratorBounds {
  int max_existentials = 2;
  int constraint_depth = 2;
  int argument_depth = 2;
  int max_constructors = 2;
  // Out of 100: how often a constraint is `>=` or `<=` instead of `=`.
  int subtyping_percent = 15;
  bool recursive = true;
};

struct GeneratedDecl {
  std::size_t index = 0;
  std::shared_ptr<const Signature> signature;
  std::string datatype;
  std::vector<Variance> annotation;
};

// Deterministic stream of single-parameter GADT declarations over
// {int, q, p, ->, *, list, ref}. Each generated shape is emitted four times in
// a row, once per annotation in the order =, +, -, ~.
class DeclarationGenerator {
 public:
  DeclarationGenerator(std::uint64_t seed, GeneratorBounds bounds = {});
  GeneratedDecl next();

 private:
  std::uint64_t draw(std::uint64_t n) { return rng_() % n; }
  TypeExpr random_type(int depth, const std::vector<std::string>& vars, bool allow_self);
  void new_shape();

  std::mt19937_64 rng_;
  GeneratorBounds bounds_;
  std::size_t count_ = 0;
  std::vector<ConstructorDecl> shape_;
};

std::vector<GeneratedDecl> generate_declarations(std::uint64_t seed, std::size_t count,
                                                 GeneratorBounds bounds = {});

// Plain algebraic datatypes (one or two parameters with random annotations)
// in their existential encoding, for comparing against the classic check.
struct PlainAdt {
  GeneratedDecl decl;
  std::vector<std::optional<TypeExpr>> arguments;  // per constructor, over the parameters
};
std::vector<PlainAdt> generate_plain_adts(std::uint64_t seed, std::size_t count, int max_depth = 3);

// The fixed base signature the generators draw from.
Signature generator_base_signature();

}  // namespace varkit

#endif  // VARKIT_GENERATOR_HPP
