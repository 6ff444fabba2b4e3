#include "posttitle/textrank.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "posttitle/error.hpp"
#include "posttitle/rouge.hpp"
#include "support/oracles.hpp"

namespace posttitle {
namespace {

constexpr double kA = 0.23;

std::vector<std::vector<double>> dense(const SimilarityGraph& g) {
  std::vector<std::vector<double>> m(g.size(), std::vector<double>(g.size(), 0.0));
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) m[i][j] = i == j ? 0.0 : g(i, j);
  return m;
}

SimilarityGraph random_connected_graph(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  SimilarityGraph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) g.set(i, j, u(rng));
  return g;
}

TEST(TfIdf, TwoTitleFixture) {
  const auto v = tfidf_vectors(CandidateSet("p", {"a b", "a c"}));
  ASSERT_EQ(v.size(), 2u);
  // Vocabulary order of first appearance: a=0, b=1, c=2.
  EXPECT_NEAR(v[0].weight(0), 1.0, 1e-12);
  EXPECT_NEAR(v[1].weight(0), 1.0, 1e-12);
  EXPECT_NEAR(v[0].weight(1), 1.6931471805599454, 1e-12);
  EXPECT_EQ(v[0].weight(2), 0.0);
  EXPECT_NEAR(v[1].weight(2), 1.6931471805599454, 1e-12);
}

TEST(TfIdf, SingleCandidate) {
  const auto v = tfidf_vectors(CandidateSet("p", {"x"}));
  EXPECT_NEAR(v[0].weight(0), 1.0, 1e-15);
}

TEST(TfIdf, RepeatedTokenTermFrequency) {
  const auto v = tfidf_vectors(CandidateSet("p", {"x x y"}));
  EXPECT_NEAR(v[0].weight(0), std::log(2.0) + 1.0, 1e-12);
  EXPECT_NEAR(v[0].weight(1), 1.0, 1e-12);
}

TEST(TfIdf, EmptyTitleGivesZeroVector) {
  const auto v = tfidf_vectors(CandidateSet("p", {"?!", "a"}));
  EXPECT_TRUE(v[0].weights.empty());
  EXPECT_EQ(v[0].norm(), 0.0);
}

TEST(TfIdf, Log10Option) {
  const auto v = tfidf_vectors(CandidateSet("p", {"a b", "a c"}), LogBase::base10);
  EXPECT_NEAR(v[0].weight(1), std::log10(2.0) + 1.0, 1e-12);
}

TEST(TfIdf, MatchesDenseOracle) {
  const std::vector<std::string> titles = {"how to sort a list", "sort list in python",
                                           "how to sort sort", "python list", "reverse a string"};
  const auto v = tfidf_vectors(CandidateSet("p", titles));
  std::vector<std::vector<std::string>> tokens;
  for (const auto& t : titles) {
    const auto seq = tokenize(t);
    tokens.emplace_back(seq.begin(), seq.end());
  }
  const auto ref = oracle::dense_tfidf(tokens);
  const auto graph = similarity_graph(v);
  for (std::size_t i = 0; i < titles.size(); ++i) {
    double sum_ref = 0.0, sum_got = 0.0;
    for (const auto& [tok, w] : ref[i]) sum_ref += w;
    for (const auto& [idx, w] : v[i].weights) sum_got += w;
    EXPECT_NEAR(sum_got, sum_ref, 1e-12);
    for (std::size_t j = 0; j < titles.size(); ++j) {
      if (i != j) EXPECT_NEAR(graph(i, j), oracle::dense_cosine(ref[i], ref[j]), 1e-12);
    }
  }
}

TEST(Similarity, TwoTitleFixture) {
  const auto g = similarity_graph(tfidf_vectors(CandidateSet("p", {"a b", "a c"})));
  EXPECT_NEAR(g(0, 1), 0.25861529161577274, 1e-12);
  EXPECT_EQ(g(0, 1), g(1, 0));
}

TEST(Similarity, IdenticalAndDisjoint) {
  const auto g = similarity_graph(tfidf_vectors(CandidateSet("p", {"a b", "a b", "c d"})));
  EXPECT_NEAR(g(0, 1), 1.0, 1e-12);
  EXPECT_LE(g(0, 1), 1.0);
  EXPECT_EQ(g(0, 2), 0.0);
  EXPECT_EQ(g(1, 2), 0.0);
}

TEST(Similarity, RejectsEmptyAndOutOfRange) {
  EXPECT_THROW(similarity_graph({}), InvalidArg);
  SimilarityGraph g(2);
  EXPECT_THROW(g.set(0, 1, 1.5), InvalidArg);
  EXPECT_THROW(g.set(0, 0, 0.5), InvalidArg);
  EXPECT_THROW(g.set(0, 2, 0.5), InvalidArg);
}

TEST(TextRank, SingleNode) {
  const auto r = textrank_scores(SimilarityGraph(1), kA, 1e-6, 100);
  ASSERT_EQ(r.scores.size(), 1u);
  EXPECT_DOUBLE_EQ(r.scores[0], 1.0 - kA);
  EXPECT_EQ(r.best_index, 0u);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_TRUE(r.converged);
}

TEST(TextRank, UniformGraphIsAllOnes) {
  SimilarityGraph g(3);
  g.set(0, 1, 0.4);
  g.set(0, 2, 0.4);
  g.set(1, 2, 0.4);
  const auto r = textrank_scores(g, kA, 1e-6, 100);
  EXPECT_TRUE(r.converged);
  for (double s : r.scores) EXPECT_NEAR(s, 1.0, 1e-6);
  EXPECT_EQ(r.best_index, 0u);
}

TEST(TextRank, RejectsBadParameters) {
  SimilarityGraph g(2);
  EXPECT_THROW(textrank_scores(g, 0.0, 1e-6, 10), InvalidArg);
  EXPECT_THROW(textrank_scores(g, 1.0, 1e-6, 10), InvalidArg);
  EXPECT_THROW(textrank_scores(g, -0.5, 1e-6, 10), InvalidArg);
  EXPECT_THROW(textrank_scores(g, 0.5, 0.0, 10), InvalidArg);
  EXPECT_THROW(textrank_scores(g, 0.5, -1e-3, 10), InvalidArg);
  EXPECT_THROW(textrank_scores(g, 0.5, 1e-6, 0), InvalidArg);
}

TEST(TextRank, IsolatedNodesSitAtFloor) {
  SimilarityGraph g(4);
  g.set(0, 1, 0.5);
  g.set(1, 2, 0.9);
  const auto r = textrank_scores(g, kA, 1e-9, 200);
  EXPECT_TRUE(r.converged);
  EXPECT_DOUBLE_EQ(r.scores[3], 1.0 - kA);
  // The three connected nodes conserve their own mass.
  EXPECT_NEAR(r.scores[0] + r.scores[1] + r.scores[2], 3.0, 3e-9);
  EXPECT_EQ(r.best_index, 1u);
}

TEST(TextRank, IterationCapReportsNotConverged) {
  std::mt19937_64 rng(3);
  const auto g = random_connected_graph(rng, 6);
  const auto r = textrank_scores(g, 0.99, 1e-15, 2);
  EXPECT_EQ(r.iterations, 2);
  EXPECT_FALSE(r.converged);
}

TEST(TextRank, ConservationAndFloorOnRandomGraphs) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 9;
    const auto g = random_connected_graph(rng, n);
    const double tol = 1e-6;
    const auto r = textrank_scores(g, kA, tol, 100);
    ASSERT_TRUE(r.converged);
    const double sum = std::accumulate(r.scores.begin(), r.scores.end(), 0.0);
    EXPECT_LE(std::abs(sum - static_cast<double>(n)), static_cast<double>(n) * tol);
    for (double s : r.scores) EXPECT_GE(s, 1.0 - kA - tol);
    EXPECT_EQ(r.best_index, static_cast<std::size_t>(std::max_element(r.scores.begin(), r.scores.end()) -
                                                     r.scores.begin()));
  }
}

TEST(TextRank, MatchesDirectSolveForSmallGraphs) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 4;
    const auto g = random_connected_graph(rng, n);
    const auto r = textrank_scores(g, kA, 1e-12, 1000);
    const auto exact = oracle::textrank_fixpoint(dense(g), kA);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(r.scores[i], exact[i], 1e-8);
  }
}

TEST(TextRank, PermutationEquivariance) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng() % 8;
    const auto g = random_connected_graph(rng, n);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    SimilarityGraph p(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) p.set(i, j, g(perm[i], perm[j]));
    const auto a = textrank_scores(g, kA, 1e-10, 500);
    const auto b = textrank_scores(p, kA, 1e-10, 500);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(b.scores[i], a.scores[perm[i]], 1e-9);
    // Symmetric graphs (always at n = 2) tie, and ties go to the lowest index.
    const double top = a.scores[a.best_index];
    const auto near_top = std::count_if(a.scores.begin(), a.scores.end(),
                                        [&](double s) { return top - s <= 1e-9; });
    if (near_top == 1) EXPECT_EQ(perm[b.best_index], a.best_index);
  }
}

TEST(RankAndSelect, MajorityClusterWins) {
  const CandidateSet c("p", {"u", "t", "t", "t", "t", "t"});
  const auto sel = rank_and_select(c, RankConfig{});
  EXPECT_EQ(sel.best_title, "t");
  EXPECT_EQ(sel.ranked.best_index, 1u);
  EXPECT_DOUBLE_EQ(sel.ranked.scores[0], 1.0 - kA);

  // Brute-force fixpoint at K=6 through the direct solver.
  const auto graph = similarity_graph(tfidf_vectors(c));
  const auto exact = oracle::textrank_fixpoint(dense(graph), kA);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(sel.ranked.scores[i], exact[i], 1e-6);
  EXPECT_GT(exact[1], exact[0]);
}

TEST(RankAndSelect, SingleCandidate) {
  const auto sel = rank_and_select(CandidateSet("p", {"only one"}), RankConfig{});
  EXPECT_EQ(sel.best_title, "only one");
  EXPECT_DOUBLE_EQ(sel.ranked.scores[0], 1.0 - kA);
}

TEST(RankAndSelect, DuplicatesTieToFirstIndex) {
  const auto sel = rank_and_select(CandidateSet("p", {"same title", "same title"}), RankConfig{});
  EXPECT_EQ(sel.ranked.best_index, 0u);

  const auto many = rank_and_select(
      CandidateSet("p", {"sort list", "sort a list", "sort list", "python sort", "sort a list"}),
      RankConfig{});
  EXPECT_NEAR(many.ranked.scores[0], many.ranked.scores[2], 1e-6);
  EXPECT_NEAR(many.ranked.scores[1], many.ranked.scores[4], 1e-6);
}

TEST(RankAndSelect, PrefersConsensusTitle) {
  const auto sel = rank_and_select(CandidateSet("p", {"reverse string", "how to sort a list",
                                                      "sort a list in python", "sort list",
                                                      "python sort a list"}),
                                   RankConfig{});
  EXPECT_NE(sel.best_title, "reverse string");
  EXPECT_DOUBLE_EQ(sel.ranked.scores[0], 1.0 - kA);
}

TEST(CandidateSetTest, RejectsEmpty) {
  EXPECT_THROW(CandidateSet("p", {}), InvalidArg);
}

TEST(RankConfigTest, Defaults) {
  const RankConfig c;
  EXPECT_EQ(c.damping, 0.23);
  EXPECT_EQ(c.tolerance, 1e-6);
  EXPECT_EQ(c.max_iter, 100);
  EXPECT_EQ(c.num_candidates, 30);
  EXPECT_EQ(c.log_base, LogBase::natural);
}

}  // namespace
}  // namespace posttitle
