#include <benchmark/benchmark.h>

#include "varkit/generator.hpp"
#include "varkit/oracle.hpp"
#include "varkit/parser.hpp"

using namespace varkit;

namespace {

std::shared_ptr<const Signature> expression_language() {
  static const auto sig = [] {
    ParseResult r = parse(R"(type exp(+a) =
  | Val of exists b [a = b]. b
  | Int of [a = int]. int
  | Thunk of exists b g [a = g]. exp(b) * (b -> g)
  | Prod of exists b c [a = b * c]. exp(b) * exp(c)
)");
    return std::make_shared<const Signature>(std::move(r.signature));
  }();
  return sig;
}

void BM_Universe(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  auto sig = std::make_shared<const Signature>(Signature::with_builtins());
  for (auto _ : state) {
    Oracle o(sig, {depth, 0, 2'000'000});
    benchmark::DoNotOptimize(o.universe().size());
  }
}
BENCHMARK(BM_Universe)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_ReqSerial(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) {
    Oracle o(expression_language(), {depth, 1, 2'000'000});
    benchmark::DoNotOptimize(o.semantic_req("exp"));
  }
}
BENCHMARK(BM_ReqSerial)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_ReqParallel(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) {
    Oracle o(expression_language(), {depth, 1, 2'000'000});
    benchmark::DoNotOptimize(o.semantic_req_parallel("exp"));
  }
}
BENCHMARK(BM_ReqParallel)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

// A slice of the soundness sweep: 40 generated declarations end to end.
void BM_GeneratedSweep(benchmark::State& state) {
  const auto decls = generate_declarations(1, 40);
  for (auto _ : state) {
    std::size_t violations = 0;
    for (const auto& g : decls) {
      Oracle o(g.signature, {3, 1, 2'000'000});
      violations += o.semantic_req(g.datatype).has_value();
    }
    benchmark::DoNotOptimize(violations);
  }
}
BENCHMARK(BM_GeneratedSweep)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
