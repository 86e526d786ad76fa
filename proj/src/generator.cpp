#include "varkit/generator.hpp"

namespace varkit {

namespace {

constexpr const char* kName = "t";
constexpr const char* kParam = "a";
const char* const kExistentials[] = {"b", "c", "d", "e"};

struct Former {
  const char* name;
  int arity;
};
const Former kFormers[] = {{"p", 1}, {"->", 2}, {"*", 2}, {"list", 1}, {"ref", 1}};

}  // namespace

Signature generator_base_signature() { return Signature::with_builtins(); }

DeclarationGenerator::DeclarationGenerator(std::uint64_t seed, GeneratorBounds bounds)
    : rng_(seed), bounds_(bounds) {}

TypeExpr DeclarationGenerator::random_type(int depth, const std::vector<std::string>& vars,
                                           bool allow_self) {
  const bool leaf = depth <= 1 || draw(3) == 0;
  if (leaf) {
    if (!vars.empty() && draw(3) != 0) return TypeExpr::var(vars[draw(vars.size())]);
    return TypeExpr::app(draw(2) == 0 ? "int" : "q");
  }
  const std::size_t formers = std::size(kFormers) + (allow_self ? 1 : 0);
  const std::size_t pick = draw(formers);
  if (pick == std::size(kFormers)) return TypeExpr::app(kName, {random_type(depth - 1, vars, true)});
  TypeExpr t = TypeExpr::app(kFormers[pick].name);
  for (int i = 0; i < kFormers[pick].arity; ++i) t.args.push_back(random_type(depth - 1, vars, allow_self));
  return t;
}

void DeclarationGenerator::new_shape() {
  shape_.clear();
  const int ctors = 1 + static_cast<int>(draw(static_cast<std::uint64_t>(bounds_.max_constructors)));
  for (int k = 0; k < ctors; ++k) {
    ConstructorDecl c;
    c.name = "K" + std::to_string(k);
    const int m = static_cast<int>(draw(static_cast<std::uint64_t>(bounds_.max_existentials) + 1));
    for (int i = 0; i < m; ++i) c.existentials.push_back(kExistentials[i]);
    Constraint con;
    con.param_index = 0;
    const auto roll = static_cast<int>(draw(100));
    con.kind = roll < bounds_.subtyping_percent / 2 ? ConstraintKind::Sup
               : roll < bounds_.subtyping_percent   ? ConstraintKind::Sub
                                                    : ConstraintKind::Eq;
    con.rhs = random_type(1 + static_cast<int>(draw(static_cast<std::uint64_t>(bounds_.constraint_depth))),
                          c.existentials, false);
    c.constraints.push_back(std::move(con));
    if (draw(6) != 0)
      c.argument = random_type(1 + static_cast<int>(draw(static_cast<std::uint64_t>(bounds_.argument_depth))),
                               c.existentials, bounds_.recursive);
    shape_.push_back(std::move(c));
  }
}

GeneratedDecl DeclarationGenerator::next() {
  const std::size_t slot = count_ % 4;
  if (slot == 0) new_shape();
  Signature sig = generator_base_signature();
  TypeConDecl d;
  d.name = kName;
  d.kind = TypeKind::Datatype;
  d.params = {kParam};
  d.param_variances = {kAllVariances[slot]};
  d.constructors = shape_;
  sig.add(std::move(d));
  GeneratedDecl out;
  out.index = count_++;
  out.signature = std::make_shared<const Signature>(std::move(sig));
  out.datatype = kName;
  out.annotation = {kAllVariances[slot]};
  return out;
}

std::vector<GeneratedDecl> generate_declarations(std::uint64_t seed, std::size_t count,
                                                 GeneratorBounds bounds) {
  DeclarationGenerator gen(seed, bounds);
  std::vector<GeneratedDecl> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(gen.next());
  return out;
}

std::vector<PlainAdt> generate_plain_adts(std::uint64_t seed, std::size_t count, int max_depth) {
  std::mt19937_64 rng(seed);
  auto draw = [&](std::uint64_t n) { return rng() % n; };
  const char* const names[] = {"a", "b"};
  std::vector<PlainAdt> out;
  for (std::size_t n = 0; n < count; ++n) {
    const std::size_t arity = 1 + draw(2);
    TypeConDecl d;
    d.name = kName;
    d.kind = TypeKind::Datatype;
    for (std::size_t i = 0; i < arity; ++i) {
      d.params.push_back(names[i]);
      d.param_variances.push_back(kAllVariances[draw(4)]);
    }
    PlainAdt adt;
    std::function<TypeExpr(int)> gen = [&](int depth) -> TypeExpr {
      if (depth <= 1 || draw(3) == 0) {
        if (draw(4) != 0) return TypeExpr::var(d.params[draw(d.params.size())]);
        return TypeExpr::app(draw(2) == 0 ? "int" : "q");
      }
      const std::size_t pick = draw(std::size(kFormers) + 1);
      if (pick == std::size(kFormers)) {
        TypeExpr t = TypeExpr::app(kName);
        for (std::size_t i = 0; i < arity; ++i) t.args.push_back(gen(depth - 1));
        return t;
      }
      TypeExpr t = TypeExpr::app(kFormers[pick].name);
      for (int i = 0; i < kFormers[pick].arity; ++i) t.args.push_back(gen(depth - 1));
      return t;
    };
    const std::size_t ctors = 1 + draw(2);
    for (std::size_t k = 0; k < ctors; ++k) {
      std::optional<TypeExpr> arg;
      if (draw(8) != 0) arg = gen(1 + static_cast<int>(draw(static_cast<std::uint64_t>(max_depth))));
      adt.arguments.push_back(arg);
      d.constructors.push_back(encode_plain_constructor("K" + std::to_string(k), d.params, arg));
    }
    Signature sig = generator_base_signature();
    adt.decl.annotation = d.param_variances;
    sig.add(std::move(d));
    adt.decl.index = n;
    adt.decl.signature = std::make_shared<const Signature>(std::move(sig));
    adt.decl.datatype = kName;
    out.push_back(std::move(adt));
  }
  return out;
}

}  // namespace varkit
