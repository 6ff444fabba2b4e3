#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "posttitle/config.hpp"
#include "posttitle/corpus.hpp"

namespace posttitle {

// Outcome of a batch command. Fatal problems (unreadable input, unknown
// language, bad config) are thrown instead.
struct CommandStatus {
  std::size_t records = 0;
  std::size_t failures = 0;

  // 0 when every record succeeded. With allow_partial, failures are
  // tolerated unless nothing succeeded.
  int exit_code(bool allow_partial) const;
};

// Posts JSONL -> {"id","input"} JSONL.
CommandStatus cmd_format(const std::filesystem::path& in, const std::filesystem::path& out,
                         const PipelineConfig& config);

// Self-improvement over a titled split. Writes the augmented dataset to
// `out` and a JSON report to `report`.
CommandStatus cmd_augment(const std::filesystem::path& in, const std::filesystem::path& out,
                          const std::filesystem::path& report, Split split,
                          const PipelineConfig& config);

// {"post_id","candidates"} JSONL -> {"post_id","best","scores"} JSONL.
// Records that cannot be ranked become {"post_id","error"} lines.
CommandStatus cmd_rank(const std::filesystem::path& in, const std::filesystem::path& out,
                       const PipelineConfig& config);

struct MetricTriple {
  double f1 = 0.0;
  double recall = 0.0;
  double precision = 0.0;
};

// Mean ROUGE values over a group, scaled by 100.
struct GroupScores {
  std::size_t count = 0;
  MetricTriple rouge1;
  MetricTriple rouge2;
  MetricTriple rougeL;
};

struct EvaluationSummary {
  std::map<std::string, GroupScores> by_language;
  // Pooled mean over every pair.
  GroupScores overall;
  // Unweighted mean of the per-language means.
  GroupScores average;
};

struct EvalPair {
  std::string lang;
  std::string gold;
  std::string prediction;
};

EvaluationSummary evaluate_pairs(const std::vector<EvalPair>& pairs);

// Aligned text table: one row per language plus Average and Overall rows,
// F1 columns followed by recall columns, two decimals.
std::string format_table(const EvaluationSummary& summary);

// Predictions JSONL ({"id"|"post_id", "title"|"best"}) against a gold
// corpus. Writes JSON to `report` and the text table to `table` (or to
// `table_stream` when `table` is empty). Throws MissingPrediction when the
// id sets differ.
CommandStatus cmd_evaluate(const std::filesystem::path& pred, const std::filesystem::path& gold,
                           const std::filesystem::path& report,
                           const std::filesystem::path& table, std::ostream& table_stream,
                           const PipelineConfig& config);

// Inference: format -> generate K candidates -> rank -> best title, one
// {"id","title","scores"} line per post, flushed as produced. When every
// post has a gold title the report also carries ROUGE results.
CommandStatus cmd_pipeline(const std::filesystem::path& in, const std::filesystem::path& out,
                           const std::filesystem::path& report, const PipelineConfig& config);

}  // namespace posttitle
