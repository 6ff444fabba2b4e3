#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace posttitle {

// K >= 1 generated titles for one post, in generation order. Titles may
// repeat.
class CandidateSet {
 public:
  // Throws InvalidArg when `titles` is empty.
  CandidateSet(std::string post_id, std::vector<std::string> titles);

  const std::string& post_id() const noexcept { return post_id_; }
  const std::vector<std::string>& titles() const noexcept { return titles_; }
  std::size_t size() const noexcept { return titles_.size(); }

 private:
  std::string post_id_;
  std::vector<std::string> titles_;
};

enum class LogBase { natural, base10 };

struct RankConfig {
  double damping = 0.23;
  double tolerance = 1e-6;
  int max_iter = 100;
  // Number of candidates requested per post at inference time.
  int num_candidates = 30;
  LogBase log_base = LogBase::natural;

  // Throws InvalidArg on out-of-range values.
  void validate() const;
};

// Sparse TF-IDF weights keyed by vocabulary index, sorted by index. Only
// strictly positive weights are stored.
struct TfIdfVector {
  std::vector<std::pair<std::size_t, double>> weights;

  double weight(std::size_t term) const;
  double dot(const TfIdfVector& other) const;
  double norm() const;
};

// w = (log f + 1) * (log(K / K_j) + 1) for every token j of every title,
// where f is the in-title frequency and K_j the number of titles holding j.
// Vocabulary indices follow first appearance across the candidate set.
std::vector<TfIdfVector> tfidf_vectors(const CandidateSet& candidates,
                                       LogBase base = LogBase::natural);

// Dense symmetric cosine-similarity matrix. The diagonal is stored as 0 and
// never read by the ranking iteration.
class SimilarityGraph {
 public:
  explicit SimilarityGraph(std::size_t size);

  std::size_t size() const noexcept { return size_; }
  double operator()(std::size_t i, std::size_t j) const {
    return sim_[i * size_ + j];
  }
  // Sets both (i, j) and (j, i). Throws InvalidArg unless value is in
  // [0, 1] and i != j.
  void set(std::size_t i, std::size_t j, double value);

  // Sum of off-diagonal similarities of node j.
  double out_weight(std::size_t j) const;

 private:
  std::size_t size_;
  std::vector<double> sim_;
};

SimilarityGraph similarity_graph(const std::vector<TfIdfVector>& vectors);

struct RankedTitles {
  std::vector<double> scores;
  std::size_t best_index = 0;
  int iterations = 0;
  bool converged = false;
};

// Damped TextRank with synchronous updates from S = 1:
//   S_i <- (1 - a) + a * sum_{j != i} l_ij / (sum_{k != j} l_jk) * S_j
// Nodes with zero out-weight are not mass sources and are pinned to 1 - a.
// Stops once the largest per-node change drops below `tolerance`.
RankedTitles textrank_scores(const SimilarityGraph& graph, double damping,
                             double tolerance, int max_iter);

struct Selection {
  std::string best_title;
  RankedTitles ranked;
};

Selection rank_and_select(const CandidateSet& candidates,
                          const RankConfig& config);

}  // namespace posttitle
