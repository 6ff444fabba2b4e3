#include "posttitle/selfimprove.hpp"

#include <algorithm>
#include <atomic>
#include <optional>
#include <thread>
#include <variant>

#include "posttitle/error.hpp"
#include "posttitle/rouge.hpp"

namespace posttitle {

namespace {

struct Selected {
  std::string candidate;
  double score;
  std::size_t count;
};

using Outcome = std::variant<Selected, std::string>;  // selection or skip reason

Outcome process_post(const Post& post, Generator& generator, const AugmentOptions& options) {
  try {
    const auto input = format_input(post, options.format);
    auto response = generator.generate({post.id, input.text, options.k});
    if (response.candidates.empty()) return std::string("generator returned no candidates");
    if (response.candidates.size() > static_cast<std::size_t>(options.k)) {
      return "generator returned " + std::to_string(response.candidates.size()) +
             " candidates, " + std::to_string(options.k) + " requested";
    }
    double score = 0.0;
    const auto best =
        select_best_candidate(*post.title, response.candidates, options.metric, &score);
    return Selected{std::move(response.candidates[best]), score, response.candidates.size()};
  } catch (const Error& e) {
    return std::string(e.what());
  }
}

void check_inputs(const Dataset& dataset, const AugmentOptions& options) {
  if (options.k < 1) throw InvalidArg("k must be >= 1");
  for (const auto& post : dataset.posts()) {
    if (!post.title) {
      throw InvalidArg("post '" + post.id + "' has no ground-truth title to select against");
    }
  }
}

AugmentResult assemble(const Dataset& dataset, std::vector<Outcome> outcomes) {
  std::vector<Post> posts;
  AugmentationReport report;
  double total = 0.0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& src = dataset.posts()[i];
    if (auto* sel = std::get_if<Selected>(&outcomes[i])) {
      Post out = src;
      out.title = sel->candidate;
      posts.push_back(std::move(out));
      report.per_post.push_back({src.id, std::move(sel->candidate), sel->score, sel->count});
      total += sel->score;
    } else {
      report.skipped.push_back({src.id, std::get<std::string>(outcomes[i])});
    }
  }
  if (!report.per_post.empty()) {
    report.mean_selected_score = total / static_cast<double>(report.per_post.size());
  }
  // An all-skipped run yields an empty augmented set, which the Dataset
  // constructor accepts; load_dataset is what rejects empty training files.
  return {Dataset(std::move(posts), Split::augmented), std::move(report)};
}

}  // namespace

std::string_view to_string(SelectionMetric metric) {
  return metric == SelectionMetric::f1 ? "f1" : "recall";
}

SelectionMetric parse_selection_metric(std::string_view name) {
  if (name == "f1") return SelectionMetric::f1;
  if (name == "recall") return SelectionMetric::recall;
  throw InvalidArg("unknown selection metric '" + std::string(name) + "'");
}

std::size_t select_best_candidate(std::string_view gold,
                                  const std::vector<std::string>& candidates,
                                  SelectionMetric metric, double* best_score) {
  if (candidates.empty()) throw InvalidArg("no candidates to select from");
  const auto gold_tokens = tokenize(gold);
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto score = rouge_l(gold_tokens, tokenize(candidates[i]));
    const double value = metric == SelectionMetric::f1 ? score.f1 : score.recall;
    if (value > best_value) {
      best_value = value;
      best = i;
    }
  }
  if (best_score) *best_score = best_value;
  return best;
}

AugmentResult augment(const Dataset& dataset, Generator& generator,
                      const AugmentOptions& options) {
  check_inputs(dataset, options);
  std::vector<Outcome> outcomes;
  outcomes.reserve(dataset.size());
  for (const auto& post : dataset.posts()) {
    outcomes.push_back(process_post(post, generator, options));
  }
  return assemble(dataset, std::move(outcomes));
}

AugmentResult augment(const Dataset& dataset, const GeneratorFactory& factory,
                      const AugmentOptions& options) {
  check_inputs(dataset, options);
  const auto workers = static_cast<std::size_t>(std::max(1, options.workers));
  std::vector<Outcome> outcomes(dataset.size(), Outcome{std::string("not processed")});

  if (workers == 1 || dataset.size() < 2) {
    auto generator = factory();
    return augment(dataset, *generator, options);
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::string> worker_errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        std::unique_ptr<Generator> generator;
        try {
          generator = factory();
        } catch (const Error& e) {
          worker_errors[w] = e.what();
        }
        for (auto i = next.fetch_add(1); i < dataset.size(); i = next.fetch_add(1)) {
          outcomes[i] = generator ? process_post(dataset.posts()[i], *generator, options)
                                  : Outcome{"generator unavailable: " + worker_errors[w]};
        }
      });
    }
  }
  return assemble(dataset, std::move(outcomes));
}

}  // namespace posttitle
