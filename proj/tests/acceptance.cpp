// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "posttitle/commands.hpp"
#include "posttitle/corpus.hpp"
#include "posttitle/generator.hpp"
#include "posttitle/rouge.hpp"
#include "posttitle/selfimprove.hpp"
#include "posttitle/textrank.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

namespace pt = posttitle;

namespace {

const std::string kData = POSTTITLE_TEST_DATA_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// 1. Randomized pairs of length <= 10: LCS and clipped n-gram overlap agree
// exactly with enumeration oracles, in under 5 s.
Outcome rouge_oracle_suite() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937 rng(20240601);
  const std::vector<std::string> vocab = {"how", "to", "sort", "a", "list", "in", "java"};
  const auto draw = [&] {
    std::vector<std::string> t(rng() % 11);
    for (auto& s : t) s = vocab[rng() % vocab.size()];
    return t;
  };
  for (int i = 0; i < 50; ++i) {
    const auto a = draw();
    const auto b = draw();
    const pt::TokenSeq ta(a), tb(b);
    const auto lcs = pt::oracle::brute_force_lcs(a, b);
    o.require(pt::lcs_length(ta, tb) == lcs, "LCS mismatch at pair " + std::to_string(i));
    const auto rl = pt::rouge_l(ta, tb);
    o.require(rl.recall == (a.empty() ? 0.0 : static_cast<double>(lcs) / static_cast<double>(a.size())),
              "ROUGE-L recall mismatch at pair " + std::to_string(i));
    for (std::size_t n = 1; n <= 2; ++n) {
      const auto overlap = pt::oracle::brute_force_overlap(a, b, n);
      o.require(pt::ngram_overlap(ta, tb, n) == overlap,
                "ROUGE-" + std::to_string(n) + " overlap mismatch at pair " + std::to_string(i));
      const auto gold_grams = a.size() >= n ? a.size() - n + 1 : 0;
      const auto r = pt::rouge_n(ta, tb, static_cast<int>(n));
      o.require(r.recall == (gold_grams == 0 ? 0.0
                                             : static_cast<double>(overlap) / static_cast<double>(gold_grams)),
                "ROUGE-N recall mismatch at pair " + std::to_string(i));
    }
  }
  const double secs = seconds_since(t0);
  o.require(secs < 5.0, "runtime " + fmt(secs) + " s >= 5 s");
  if (o.pass) o.detail = "50 pairs, runtime " + fmt(secs) + " s";
  return o;
}

// 2. Hand-computed ROUGE fixtures to 1e-9.
Outcome rouge_fixtures() {
  Outcome o;
  const auto near = [](double a, double b) { return std::abs(a - b) <= 1e-9; };
  const pt::TokenSeq gold({"how", "to", "sort", "a", "list"});
  const pt::TokenSeq gen({"how", "to", "sort"});
  const auto r1 = pt::rouge_n(gold, gen, 1);
  o.require(near(r1.recall, 0.6) && near(r1.precision, 1.0) && near(r1.f1, 0.75), "ROUGE-1 fixture");
  const auto r2 = pt::rouge_n(gold, gen, 2);
  o.require(near(r2.recall, 0.5) && near(r2.precision, 1.0) && near(r2.f1, 2.0 / 3.0),
            "ROUGE-2 fixture");
  const auto rl = pt::rouge_l(pt::TokenSeq({"a", "b", "c", "d"}), pt::TokenSeq({"a", "c", "d"}));
  o.require(near(rl.recall, 0.75) && near(rl.precision, 1.0) && near(rl.f1, 6.0 / 7.0),
            "ROUGE-L fixture");
  if (o.pass) o.detail = "R-1 0.75, R-2 0.6667, R-L 0.8571";
  return o;
}

// 3. TF-IDF and cosine on ["a b", "a c"] with natural log, within 1e-4.
Outcome tfidf_fixture() {
  Outcome o;
  const pt::CandidateSet c("p", {"a b", "a c"});
  const auto v = pt::tfidf_vectors(c, pt::LogBase::natural);
  const double w_a = v[0].weight(0);
  const double w_b = v[0].weight(1);
  const double sim = pt::similarity_graph(v)(0, 1);
  o.require(std::abs(w_a - 1.0) <= 1e-4, "w_a = " + fmt(w_a));
  o.require(std::abs(w_b - 1.6931) <= 1e-4, "w_b = " + fmt(w_b));
  o.require(std::abs(sim - 0.2586) <= 1e-4, "l_12 = " + fmt(sim));
  if (o.pass) o.detail = "w_b " + std::to_string(w_b) + ", l_12 " + std::to_string(sim);
  return o;
}

pt::SimilarityGraph random_connected(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> weight(0.01, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  pt::SimilarityGraph g(n);
  // Random spanning tree, then extra edges with probability 1/2.
  for (std::size_t i = 1; i < n; ++i) g.set(i, rng() % i, weight(rng));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (g(i, j) == 0.0 && coin(rng) < 0.5) g.set(i, j, weight(rng));
  return g;
}

std::vector<std::vector<double>> dense(const pt::SimilarityGraph& g) {
  std::vector<std::vector<double>> m(g.size(), std::vector<double>(g.size(), 0.0));
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j)
      if (i != j) m[i][j] = g(i, j);
  return m;
}

// 4. Mass conservation on 100 random connected graphs and agreement with a
// direct linear solve for K <= 4.
Outcome textrank_conservation() {
  Outcome o;
  constexpr double kTol = 1e-6;
  constexpr double kA = 0.23;
  std::mt19937_64 rng(77);
  double worst_mass = 0.0;
  double worst_solve = 0.0;
  int solved = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 2 + rng() % 9;
    const auto g = random_connected(rng, k);
    const auto r = pt::textrank_scores(g, kA, kTol, 100);
    o.require(r.converged, "graph " + std::to_string(trial) + " did not converge");
    const double sum = std::accumulate(r.scores.begin(), r.scores.end(), 0.0);
    const double err = std::abs(sum - static_cast<double>(k));
    worst_mass = std::max(worst_mass, err / static_cast<double>(k));
    o.require(err <= static_cast<double>(k) * kTol,
              "graph " + std::to_string(trial) + ": |sum - K| = " + fmt(err));
  }
  // The direct solve is compared against a run iterated to 1e-12 so the
  // stopping rule does not dominate the 1e-8 comparison.
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 1 + rng() % 4;
    const auto g = random_connected(rng, k);
    const auto r = pt::textrank_scores(g, kA, 1e-12, 1000);
    const auto exact = pt::oracle::textrank_fixpoint(dense(g), kA);
    for (std::size_t i = 0; i < k; ++i) {
      const double diff = std::abs(r.scores[i] - exact[i]);
      worst_solve = std::max(worst_solve, diff);
      o.require(diff <= 1e-8, "K=" + std::to_string(k) + " solve mismatch " + fmt(diff));
    }
    ++solved;
  }
  if (o.pass) {
    o.detail = "100 graphs, worst |sum-K|/K " + fmt(worst_mass) + "; " + std::to_string(solved) +
               " direct solves, worst diff " + fmt(worst_solve);
  }
  return o;
}

// 5. Uniform graphs converge to all-ones; permuting candidates permutes
// scores and keeps the selected title.
Outcome textrank_symmetry() {
  Outcome o;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> weight(0.05, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 2 + rng() % 29;
    const double w = weight(rng);
    pt::SimilarityGraph g(k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) g.set(i, j, w);
    const auto r = pt::textrank_scores(g, 0.23, 1e-6, 100);
    for (double s : r.scores) o.require(std::abs(s - 1.0) <= 1e-6, "uniform score " + fmt(s));
  }

  const std::vector<std::string> words = {"how", "to", "sort", "list", "java", "array",
                                          "convert", "string", "python", "dict"};
  pt::RankConfig config;
  int checked = 0;
  int skipped_ties = 0;
  while (checked < 100) {
    std::vector<std::string> titles(2 + rng() % 12);
    for (auto& t : titles) {
      for (int n = 1 + static_cast<int>(rng() % 5); n > 0; --n) {
        if (!t.empty()) t += ' ';
        t += words[rng() % words.size()];
      }
    }
    const auto base = pt::rank_and_select(pt::CandidateSet("p", titles), config);
    // A best title is well defined only if every near-maximal score
    // belongs to the same string.
    const double top = base.ranked.scores[base.ranked.best_index];
    bool ambiguous = false;
    for (std::size_t i = 0; i < titles.size(); ++i) {
      if (top - base.ranked.scores[i] <= 1e-6 && titles[i] != base.best_title) ambiguous = true;
    }
    if (ambiguous) {
      ++skipped_ties;
      continue;
    }
    std::vector<std::size_t> perm(titles.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::string> shuffled;
    for (auto p : perm) shuffled.push_back(titles[p]);
    const auto moved = pt::rank_and_select(pt::CandidateSet("p", shuffled), config);
    for (std::size_t i = 0; i < perm.size(); ++i) {
      o.require(std::abs(moved.ranked.scores[i] - base.ranked.scores[perm[i]]) <= 1e-6,
                "scores not permuted consistently");
    }
    o.require(moved.best_title == base.best_title,
              "selected title changed under permutation: '" + base.best_title + "' vs '" +
                  moved.best_title + "'");
    ++checked;
  }
  if (o.pass) {
    o.detail = "50 uniform graphs; " + std::to_string(checked) + " permuted sets (" +
               std::to_string(skipped_ties) + " tied sets excluded)";
  }
  return o;
}

// 6. Self-improvement on 200 posts with k = 20 template candidates: the
// selected candidate dominates its siblings; mean selected F1 is at least
// the mean over all candidates.
Outcome augment_dominance() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto train = pt::load_dataset(kData + "/train_200.jsonl", pt::Split::train);
  o.require(train.size() == 200, "fixture has " + std::to_string(train.size()) + " posts");
  pt::AugmentOptions options;
  options.k = 20;
  pt::TemplateGenerator generator(2023);
  const auto result = pt::augment(train, generator, options);
  o.require(result.report.skipped.empty(), "posts skipped");

  double sum_all = 0.0;
  std::size_t n_all = 0;
  for (std::size_t i = 0; i < train.size() && o.pass; ++i) {
    const auto& post = train.posts()[i];
    const auto& entry = result.report.per_post[i];
    o.require(entry.candidate_count == 20, "candidate_count != 20 for " + post.id);
    const auto candidates =
        pt::TemplateGenerator(2023)
            .generate({post.id, pt::format_input(post, options.format).text, 20})
            .candidates;
    const auto gold = pt::tokenize(*post.title);
    for (const auto& c : candidates) {
      const double f1 = pt::rouge_l(gold, pt::tokenize(c)).f1;
      o.require(entry.selected_score >= f1, "dominance violated for " + post.id);
      sum_all += f1;
      ++n_all;
    }
    o.require(result.dataset.posts()[i].title == entry.selected_candidate, "title not replaced");
  }
  const double mean_all = n_all ? sum_all / static_cast<double>(n_all) : 0.0;
  o.require(result.report.mean_selected_score >= mean_all, "mean selected F1 below candidate mean");
  const double secs = seconds_since(t0);
  o.require(secs < 30.0, "runtime " + fmt(secs) + " s >= 30 s");
  if (o.pass) {
    o.detail = "mean selected F1 " + fmt(result.report.mean_selected_score) + " vs all " +
               fmt(mean_all) + ", runtime " + fmt(secs) + " s";
  }
  return o;
}

// 7. Pipeline on the 4-post fixture with the mock generator and K = 30 is
// byte-identical to the golden file on three runs.
Outcome pipeline_determinism() {
  Outcome o;
  pt::test::TempDir dir;
  pt::PipelineConfig config;
  config.rank.num_candidates = 30;
  config.generator = pt::GeneratorSpec::parse("mock:fixture=" + kData + "/mock_candidates_30.jsonl");
  const auto golden = pt::read_file(kData + "/pipeline_golden.jsonl");
  for (int run = 0; run < 3; ++run) {
    const auto out = dir.path() / ("run" + std::to_string(run) + ".jsonl");
    const auto status = pt::cmd_pipeline(kData + "/posts_4.jsonl", out, dir.path() / "report.json", config);
    o.require(status.failures == 0, "pipeline reported failures");
    o.require(pt::read_file(out) == golden, "run " + std::to_string(run) + " differs from golden");
  }
  if (o.pass) o.detail = "3 runs byte-identical (" + std::to_string(golden.size()) + " bytes)";
  return o;
}

// 8. load(save(d)) == d on 1000 synthetic posts with unicode and embedded
// separator literals.
Outcome corpus_round_trip() {
  Outcome o;
  std::mt19937 rng(8);
  const std::vector<std::string> pieces = {"sort", "列表", "naïve", "<code>", "🚀", "\"quoted\"",
                                           "back\\slash", "tab\tin", "new\nline", "Ωmega", " ", "x"};
  const std::vector<std::string> langs = {"java", "csharp", "python", "javascript"};
  const auto text = [&](int max_pieces) {
    std::string s;
    for (int i = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_pieces)); i > 0; --i) {
      s += pieces[rng() % pieces.size()];
    }
    return s;
  };
  std::vector<pt::Post> posts;
  for (int i = 0; i < 1000; ++i) {
    pt::Post p;
    p.id = "post-" + std::to_string(i) + (i % 7 == 0 ? "-ß" : "");
    p.lang = langs[rng() % langs.size()];
    p.description = "q " + text(8);
    p.code = rng() % 4 == 0 ? "" : text(10);
    p.title = text(5);
    posts.push_back(std::move(p));
  }
  const pt::Dataset d(posts, pt::Split::train);
  pt::test::TempDir dir;
  const auto path = dir.path() / "corpus.jsonl";
  pt::save_dataset(d, path);
  const auto back = pt::load_dataset(path, pt::Split::train);
  o.require(back == d, "round-trip changed the dataset");
  std::size_t with_sep = 0;
  for (const auto& p : d.posts()) with_sep += p.description.find("<code>") != std::string::npos;
  o.require(with_sep > 0, "fixture lacks embedded separators");
  if (o.pass) o.detail = "1000 posts, " + std::to_string(with_sep) + " with embedded <code>";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1 ROUGE oracle suite", rouge_oracle_suite},
      {"AC2 hand-computed ROUGE fixtures", rouge_fixtures},
      {"AC3 TF-IDF/cosine fixture", tfidf_fixture},
      {"AC4 TextRank conservation + direct solve", textrank_conservation},
      {"AC5 TextRank symmetry + permutation", textrank_symmetry},
      {"AC6 self-improvement dominance (k=20, 200 posts)", augment_dominance},
      {"AC7 pipeline determinism vs golden (K=30)", pipeline_determinism},
      {"AC8 corpus round-trip (1k posts)", corpus_round_trip},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome result;
    try {
      result = check();
    } catch (const std::exception& e) {
      result = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %s: %s\n", result.pass ? "PASS" : "FAIL", name.c_str(), result.detail.c_str());
    failed += result.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
