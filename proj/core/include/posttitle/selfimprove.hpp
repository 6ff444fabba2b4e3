#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "posttitle/corpus.hpp"
#include "posttitle/generator.hpp"

namespace posttitle {

enum class SelectionMetric { f1, recall };

std::string_view to_string(SelectionMetric metric);
SelectionMetric parse_selection_metric(std::string_view name);

struct AugmentOptions {
  int k = 20;
  SelectionMetric metric = SelectionMetric::f1;
  FormatConfig format;
  // Number of concurrent generator clients. Only used by the factory
  // overload; 1 means sequential.
  int workers = 1;
};

struct AugmentedPost {
  std::string post_id;
  std::string selected_candidate;
  // ROUGE-L score of the selected candidate under the selection metric.
  double selected_score = 0.0;
  std::size_t candidate_count = 0;
};

struct SkippedPost {
  std::string post_id;
  std::string reason;
};

struct AugmentationReport {
  std::vector<AugmentedPost> per_post;
  double mean_selected_score = 0.0;
  std::vector<SkippedPost> skipped;
};

struct AugmentResult {
  Dataset dataset;
  AugmentationReport report;
};

// Index of the candidate with the highest ROUGE-L score against `gold`;
// the earliest candidate wins ties. Throws InvalidArg on an empty list.
std::size_t select_best_candidate(std::string_view gold,
                                  const std::vector<std::string>& candidates,
                                  SelectionMetric metric, double* best_score = nullptr);

// Builds the augmented training set: every titled post is formatted, k
// candidates are requested, and the post re-enters the output with its
// title replaced by the best candidate. Posts whose generation fails are
// reported as skipped and left out. Output order follows input order.
AugmentResult augment(const Dataset& dataset, Generator& generator,
                      const AugmentOptions& options);

using GeneratorFactory = std::function<std::unique_ptr<Generator>()>;

// Same as above, fanning out over `options.workers` clients built by
// `factory`. Results are identical to the sequential run for deterministic
// generators.
AugmentResult augment(const Dataset& dataset, const GeneratorFactory& factory,
                      const AugmentOptions& options);

}  // namespace posttitle
