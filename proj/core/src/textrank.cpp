#include "posttitle/textrank.hpp"

#include <algorithm>
#include <cmath>
#include <string_view>
#include <unordered_map>

#include "posttitle/error.hpp"
#include "posttitle/rouge.hpp"

namespace posttitle {

namespace {
constexpr double kTieEpsilon = 1e-12;
}  // namespace

CandidateSet::CandidateSet(std::string post_id, std::vector<std::string> titles)
    : post_id_(std::move(post_id)), titles_(std::move(titles)) {
  if (titles_.empty()) {
    throw InvalidArg("candidate set for '" + post_id_ + "' is empty");
  }
}

void RankConfig::validate() const {
  if (!(damping > 0.0 && damping < 1.0)) {
    throw InvalidArg("damping must lie in (0, 1), got " + std::to_string(damping));
  }
  if (!(tolerance > 0.0)) {
    throw InvalidArg("tolerance must be positive, got " + std::to_string(tolerance));
  }
  if (max_iter < 1) throw InvalidArg("max_iter must be >= 1");
  if (num_candidates < 1) throw InvalidArg("candidate count must be >= 1");
}

double TfIdfVector::weight(std::size_t term) const {
  const auto it = std::lower_bound(
      weights.begin(), weights.end(), term,
      [](const auto& entry, std::size_t t) { return entry.first < t; });
  return it != weights.end() && it->first == term ? it->second : 0.0;
}

double TfIdfVector::dot(const TfIdfVector& other) const {
  double sum = 0.0;
  auto a = weights.begin();
  auto b = other.weights.begin();
  while (a != weights.end() && b != other.weights.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      sum += a->second * b->second;
      ++a;
      ++b;
    }
  }
  return sum;
}

double TfIdfVector::norm() const {
  double sq = 0.0;
  for (const auto& [term, w] : weights) sq += w * w;
  return std::sqrt(sq);
}

std::vector<TfIdfVector> tfidf_vectors(const CandidateSet& candidates,
                                       LogBase base) {
  const auto log = [base](double x) {
    return base == LogBase::natural ? std::log(x) : std::log10(x);
  };

  std::unordered_map<std::string, std::size_t> vocab;
  std::vector<std::size_t> doc_freq;
  // Per title: term index -> raw frequency.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> counts;
  counts.reserve(candidates.size());

  for (const auto& title : candidates.titles()) {
    std::unordered_map<std::size_t, std::size_t> freq;
    for (const auto& token : tokenize(title)) {
      const auto [it, inserted] = vocab.emplace(token, vocab.size());
      if (inserted) doc_freq.push_back(0);
      ++freq[it->second];
    }
    std::vector<std::pair<std::size_t, std::size_t>> sorted(freq.begin(), freq.end());
    std::sort(sorted.begin(), sorted.end());
    for (const auto& [term, f] : sorted) ++doc_freq[term];
    counts.push_back(std::move(sorted));
  }

  const double k = static_cast<double>(candidates.size());
  std::vector<TfIdfVector> vectors(candidates.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    auto& weights = vectors[i].weights;
    weights.reserve(counts[i].size());
    for (const auto& [term, f] : counts[i]) {
      const double tf = log(static_cast<double>(f)) + 1.0;
      const double idf = log(k / static_cast<double>(doc_freq[term])) + 1.0;
      weights.emplace_back(term, tf * idf);
    }
  }
  return vectors;
}

SimilarityGraph::SimilarityGraph(std::size_t size)
    : size_(size), sim_(size * size, 0.0) {}

void SimilarityGraph::set(std::size_t i, std::size_t j, double value) {
  if (i >= size_ || j >= size_ || i == j) {
    throw InvalidArg("similarity index out of range or on the diagonal");
  }
  if (!(value >= 0.0 && value <= 1.0)) {
    throw InvalidArg("similarity must lie in [0, 1], got " + std::to_string(value));
  }
  sim_[i * size_ + j] = value;
  sim_[j * size_ + i] = value;
}

double SimilarityGraph::out_weight(std::size_t j) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < size_; ++k) {
    if (k != j) sum += sim_[j * size_ + k];
  }
  return sum;
}

SimilarityGraph similarity_graph(const std::vector<TfIdfVector>& vectors) {
  if (vectors.empty()) throw InvalidArg("similarity_graph needs at least one vector");
  SimilarityGraph graph(vectors.size());
  std::vector<double> norms;
  norms.reserve(vectors.size());
  for (const auto& v : vectors) norms.push_back(v.norm());

  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = i + 1; j < vectors.size(); ++j) {
      if (norms[i] == 0.0 || norms[j] == 0.0) continue;
      const double cos = vectors[i].dot(vectors[j]) / (norms[i] * norms[j]);
      // Rounding can push equal vectors just past 1.
      graph.set(i, j, std::clamp(cos, 0.0, 1.0));
    }
  }
  return graph;
}

RankedTitles textrank_scores(const SimilarityGraph& graph, double damping,
                             double tolerance, int max_iter) {
  RankConfig{damping, tolerance, max_iter}.validate();
  const std::size_t n = graph.size();
  if (n == 0) throw InvalidArg("textrank_scores needs at least one node");

  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = graph.out_weight(j);

  const double floor = 1.0 - damping;
  RankedTitles result;
  std::vector<double>& scores = result.scores;
  scores.assign(n, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (out[j] == 0.0) scores[j] = floor;
  }

  std::vector<double> next(n);
  while (result.iterations < max_iter) {
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double incoming = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || out[j] == 0.0) continue;
        incoming += graph(i, j) / out[j] * scores[j];
      }
      next[i] = floor + damping * incoming;
      delta = std::max(delta, std::abs(next[i] - scores[i]));
    }
    scores.swap(next);
    ++result.iterations;
    if (delta < tolerance) {
      result.converged = true;
      break;
    }
  }

  // Scores within kTieEpsilon of the maximum count as tied; the earliest
  // candidate wins. Duplicate titles can differ in the last bits only
  // because of summation order.
  const double best = *std::max_element(scores.begin(), scores.end());
  for (std::size_t i = 0; i < n; ++i) {
    if (scores[i] >= best - kTieEpsilon) {
      result.best_index = i;
      break;
    }
  }
  return result;
}

Selection rank_and_select(const CandidateSet& candidates,
                          const RankConfig& config) {
  config.validate();
  const auto vectors = tfidf_vectors(candidates, config.log_base);
  const auto graph = similarity_graph(vectors);
  auto ranked = textrank_scores(graph, config.damping, config.tolerance,
                                config.max_iter);
  return {candidates.titles()[ranked.best_index], std::move(ranked)};
}

}  // namespace posttitle
