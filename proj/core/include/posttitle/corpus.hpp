#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace posttitle {

// One Stack Overflow question. `title` is absent for inference-only posts.
struct Post {
  std::string id;
  std::string lang;
  std::string description;
  std::string code;
  std::optional<std::string> title;

  friend bool operator==(const Post&, const Post&) = default;
};

enum class Split { train, validation, test, augmented };

std::string_view to_string(Split split);
Split parse_split(std::string_view name);

// Splits that are used as supervision must carry a title on every post.
bool requires_titles(Split split);

class Dataset {
 public:
  Dataset() = default;
  // Validates id uniqueness, non-empty descriptions and, for supervised
  // splits, title presence. Throws SchemaError / DuplicateId.
  Dataset(std::vector<Post> posts, Split split);

  const std::vector<Post>& posts() const noexcept { return posts_; }
  Split split() const noexcept { return split_; }
  std::size_t size() const noexcept { return posts_.size(); }
  bool empty() const noexcept { return posts_.empty(); }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<Post> posts_;
  Split split_ = Split::test;
};

struct FormatConfig {
  // Language tag -> prefix token placed at the front of the input.
  std::map<std::string, std::string> prefixes = default_prefixes();
  std::string separator = "<code>";
  // Byte budget for the formatted text; cut on a UTF-8 boundary.
  std::optional<std::size_t> max_chars;

  static std::map<std::string, std::string> default_prefixes();
};

struct FormattedInput {
  std::string text;
  std::string post_id;

  friend bool operator==(const FormattedInput&, const FormattedInput&) = default;
};

// prefix + " " + description [+ " " + separator + " " + code]. The
// separator segment is omitted entirely when the code field is empty.
// Throws UnknownLanguage when post.lang has no registered prefix.
FormattedInput format_input(const Post& post, const FormatConfig& config);

// JSONL with one {id, lang, title, description, code} object per line.
// `code` may be omitted (treated as empty); `title` may be null or omitted
// for splits that do not require titles. Blank lines are ignored.
Dataset load_dataset(const std::filesystem::path& path, Split split);
Dataset parse_dataset(std::string_view jsonl, Split split);

void save_dataset(const Dataset& dataset, const std::filesystem::path& path);
std::string serialize_dataset(const Dataset& dataset);

// Shared helpers for the other line-oriented formats.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);
std::string_view trim(std::string_view text);

}  // namespace posttitle
