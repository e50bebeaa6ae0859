#include <benchmark/benchmark.h>

#include "generators.hpp"
#include "iwasawa/hypothesis.hpp"
#include "iwasawa/local_factors.hpp"
#include "iwasawa/quad_field.hpp"
#include "iwasawa/series.hpp"
#include "iwasawa/transfer.hpp"

using namespace iwasawa;

namespace {

std::string form_path(const std::string& label) { return std::string(IWASAWA_DATA) + "/forms/" + label + ".json"; }

IwasawaElement random_element(long p, int D, int M, std::uint64_t seed) {
  gen::Rng rng(seed);
  return IwasawaElement::from_integers(LocalRing::make(p), gen::planted_series(rng, p, D, M, 1, D / 2), D, M);
}

void BM_MuLambda(benchmark::State& st) {
  auto F = random_element(5, static_cast<int>(st.range(0)), 8, 1);
  for (auto _ : st) benchmark::DoNotOptimize(mu_lambda(F));
}
BENCHMARK(BM_MuLambda)->Arg(16)->Arg(64)->Arg(256);

void BM_SeriesProduct(benchmark::State& st) {
  int D = static_cast<int>(st.range(0));
  auto F = random_element(7, D, 10, 2), G = random_element(7, D, 10, 3);
  for (auto _ : st) benchmark::DoNotOptimize(F * G);
}
BENCHMARK(BM_SeriesProduct)->Arg(16)->Arg(64)->Arg(128);

void BM_BinomialSeries(benchmark::State& st) {
  auto R = LocalRing::make(5);
  auto u = PadicNumber::from_integer(R, 123456789, 20);
  for (auto _ : st) benchmark::DoNotOptimize(binomial_series(u, static_cast<int>(st.range(0)), 8));
}
BENCHMARK(BM_BinomialSeries)->Arg(64)->Arg(128);

void BM_ClassNumber(benchmark::State& st) {
  for (auto _ : st) {
    long h = 0;
    for (long d = -3; d >= -st.range(0); --d)
      if (is_fundamental_discriminant(d)) h += class_number(d);
    benchmark::DoNotOptimize(h);
  }
}
BENCHMARK(BM_ClassNumber)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

// h = 21: the norm search is hopeless for q = 11 and composition takes over
void BM_GeneratorSearch(benchmark::State& st) {
  auto ctx = QuadFieldContext::make(-431, 5, 12);
  for (auto _ : st) benchmark::DoNotOptimize(generator_by_search(2, ctx));
}
BENCHMARK(BM_GeneratorSearch)->Unit(benchmark::kMicrosecond);

void BM_GeneratorComposition(benchmark::State& st) {
  auto ctx = QuadFieldContext::make(-431, 5, 12);
  for (auto _ : st) benchmark::DoNotOptimize(generator_by_composition(st.range(0), ctx));
}
BENCHMARK(BM_GeneratorComposition)->Arg(2)->Arg(11)->Arg(19)->Unit(benchmark::kMicrosecond);

void BM_FrobeniusExponent(benchmark::State& st) {
  auto ctx = QuadFieldContext::make(-431, 5, 12);
  for (auto _ : st) benchmark::DoNotOptimize(frobenius_exponent(19, ctx, 12));
}
BENCHMARK(BM_FrobeniusExponent)->Unit(benchmark::kMicrosecond);

void BM_AssessPair(benchmark::State& st) {
  auto f1 = twist(load_form(form_path("11a")), -3), f2 = twist(load_form(form_path("38b")), -3);
  auto ctx = QuadFieldContext::make(-431, 5, 12);
  for (auto _ : st) benchmark::DoNotOptimize(assess_pair(f1, f2, ctx));
}
BENCHMARK(BM_AssessPair)->Unit(benchmark::kMillisecond);

void BM_LocalTables(benchmark::State& st) {
  auto f1 = twist(load_form(form_path("11a")), -3), f2 = twist(load_form(form_path("38b")), -3);
  auto ctx = QuadFieldContext::make(-431, 5, 12);
  auto hyp = assess_pair(f1, f2, ctx);
  for (auto _ : st) benchmark::DoNotOptimize(local_tables(f1, f2, ctx, hyp, 12));
}
BENCHMARK(BM_LocalTables)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
