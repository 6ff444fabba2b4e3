#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "posttitle/corpus.hpp"
#include "posttitle/generator.hpp"
#include "posttitle/selfimprove.hpp"
#include "posttitle/textrank.hpp"

namespace posttitle {

struct AugmentConfig {
  int k = 20;
  SelectionMetric metric = SelectionMetric::f1;
  int workers = 1;
};

struct PathConfig {
  std::string input;
  std::string output;
  std::string report;
};

// Effective settings for every command. Defaults: damping 0.23, 30
// candidates for ranking, 20 for augmentation.
struct PipelineConfig {
  FormatConfig format;
  RankConfig rank;
  AugmentConfig augment;
  GeneratorSpec generator = GeneratorSpec::parse("template:seed=0");
  PathConfig paths;

  void validate() const;
};

// Applies a TOML-like document on top of `config`:
//
//   # comment
//   [rank]
//   damping = 0.23
//   log_base = "e"            # or "10"
//   [format.prefixes]
//   kotlin = "KT"
//
// Sections: format, format.prefixes, rank, augment, generator, paths.
// Strings may be double-quoted; bare values are taken verbatim. Unknown
// keys are errors (InvalidArg with the line number).
void apply_config_text(std::string_view text, PipelineConfig& config);
PipelineConfig load_config(const std::filesystem::path& path);

// Effective configuration as a JSON object, echoed into reports.
std::string config_to_json(const PipelineConfig& config);

std::string_view to_string(LogBase base);
LogBase parse_log_base(std::string_view text);

}  // namespace posttitle
