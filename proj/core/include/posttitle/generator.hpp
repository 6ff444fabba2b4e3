#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace posttitle {

enum class GeneratorKind { mock, templated, external_process, http };

std::string_view to_string(GeneratorKind kind);

// Which generator to build and how. Textual form used on the command line:
//
//   mock:fixture=cands.jsonl
//   template:seed=7
//   external-process:cmd=python3 serve.py --checkpoint out;timeout=60
//   http:url=http://127.0.0.1:8000;timeout=30
//
// Parameters are separated by ';' so commands and URLs may contain spaces
// and commas. `timeout` is in seconds.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::templated;
  std::map<std::string, std::string> params;

  // Throws InvalidArg on unknown kinds or missing/invalid parameters.
  static GeneratorSpec parse(std::string_view text);
  std::string to_string() const;
  void validate() const;

  std::chrono::milliseconds timeout() const;
};

struct GenerationRequest {
  std::string post_id;
  // Formatted bi-modal input.
  std::string input;
  int num_candidates = 1;
};

struct GenerationResponse {
  std::vector<std::string> candidates;
  std::string generator_id;
};

// Stand-in for the fine-tuned model. A client instance serves one request
// at a time; callers wanting parallelism create one instance per worker.
class Generator {
 public:
  virtual ~Generator() = default;

  // Returns at most request.num_candidates non-blank candidates.
  virtual GenerationResponse generate(const GenerationRequest& request) = 0;
  virtual std::string id() const = 0;
};

// Replays fixture candidates keyed by post id.
class MockGenerator final : public Generator {
 public:
  explicit MockGenerator(std::map<std::string, std::vector<std::string>> fixture);
  // Fixture file: JSONL of {"id": ..., "candidates": [...]}.
  static MockGenerator from_file(const std::filesystem::path& path);

  GenerationResponse generate(const GenerationRequest& request) override;
  std::string id() const override { return "mock"; }

 private:
  std::map<std::string, std::vector<std::string>> fixture_;
};

// Deterministic seeded rewrites of the leading words of the description
// embedded in the formatted input. Pure in (seed, request).
class TemplateGenerator final : public Generator {
 public:
  explicit TemplateGenerator(std::uint64_t seed = 0, std::string separator = "<code>");

  GenerationResponse generate(const GenerationRequest& request) override;
  std::string id() const override;

 private:
  std::uint64_t seed_;
  std::string separator_;
};

std::unique_ptr<Generator> make_process_generator(std::string command,
                                                  std::chrono::milliseconds timeout);
std::unique_ptr<Generator> make_http_generator(std::string url,
                                               std::chrono::milliseconds timeout);

std::unique_ptr<Generator> make_generator(const GeneratorSpec& spec);

// One-shot convenience: builds a client for `spec` and serves one request.
GenerationResponse generate(const GeneratorSpec& spec, const GenerationRequest& request);

// Shared post-processing for all clients: drops blank candidates and
// rejects responses longer than requested (ProtocolError).
std::vector<std::string> sanitize_candidates(std::vector<std::string> candidates,
                                             int requested);

}  // namespace posttitle
