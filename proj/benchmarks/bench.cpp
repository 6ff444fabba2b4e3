#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "posttitle/rouge.hpp"
#include "posttitle/textrank.hpp"

namespace pt = posttitle;

namespace {

std::vector<std::string> random_titles(std::size_t count, std::size_t words, unsigned seed) {
  static const std::vector<std::string> vocab = {
      "how",  "to",     "sort",  "list", "java",   "array", "convert", "string", "python",
      "dict", "value",  "async", "void", "handle", "json",  "parse",   "file",   "read",
      "int",  "object", "null",  "map",  "loop",   "error"};
  std::mt19937 rng(seed);
  std::vector<std::string> out(count);
  for (auto& t : out) {
    for (std::size_t i = 0; i < words; ++i) {
      if (i) t += ' ';
      t += vocab[rng() % vocab.size()];
    }
  }
  return out;
}

void BM_RougeL(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto titles = random_titles(2, n, 1);
  const auto a = pt::tokenize(titles[0]);
  const auto b = pt::tokenize(titles[1]);
  for (auto _ : state) benchmark::DoNotOptimize(pt::rouge_l(a, b));
}
BENCHMARK(BM_RougeL)->Arg(8)->Arg(32)->Arg(128);

void BM_TfIdf(benchmark::State& state) {
  const pt::CandidateSet set("p", random_titles(static_cast<std::size_t>(state.range(0)), 8, 2));
  for (auto _ : state) benchmark::DoNotOptimize(pt::tfidf_vectors(set, pt::LogBase::natural));
}
BENCHMARK(BM_TfIdf)->Arg(10)->Arg(30)->Arg(100);

void BM_RankAndSelect(benchmark::State& state) {
  const pt::CandidateSet set("p", random_titles(static_cast<std::size_t>(state.range(0)), 8, 3));
  const pt::RankConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(pt::rank_and_select(set, config));
}
BENCHMARK(BM_RankAndSelect)->Arg(10)->Arg(30)->Arg(100);

}  // namespace
BENCHMARK_MAIN();
