#include "posttitle/corpus.hpp"

#include <fstream>
#include <iterator>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "json.hpp"
#include "posttitle/error.hpp"

namespace posttitle {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(Split split) {
  switch (split) {
    case Split::train: return "train";
    case Split::validation: return "validation";
    case Split::test: return "test";
    case Split::augmented: return "augmented";
  }
  return "test";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::train;
  if (name == "validation") return Split::validation;
  if (name == "test") return Split::test;
  if (name == "augmented") return Split::augmented;
  throw InvalidArg("unknown split '" + std::string(name) + "'");
}

bool requires_titles(Split split) { return split != Split::test; }

std::string_view trim(std::string_view text) {
  constexpr std::string_view ws = " \t\n\r\f\v";
  const auto first = text.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(ws);
  return text.substr(first, last - first + 1);
}

namespace {

void validate_post(const Post& post, Split split, std::size_t line) {
  if (post.id.empty()) throw SchemaError(line, "post id is empty");
  if (trim(post.description).empty()) {
    throw SchemaError(line, "post '" + post.id + "' has an empty description");
  }
  if (requires_titles(split) && !post.title) {
    throw SchemaError(line, "post '" + post.id + "' has no title but split '" +
                                std::string(to_string(split)) +
                                "' requires one");
  }
}

// Cuts at the last UTF-8 lead byte at or before `limit`.
std::string truncate_utf8(std::string text, std::size_t limit) {
  if (text.size() <= limit) return text;
  std::size_t cut = limit;
  while (cut > 0 && (static_cast<unsigned char>(text[cut]) & 0xC0) == 0x80) {
    --cut;
  }
  text.resize(cut);
  return text;
}

std::string required_string(const ordered_json& obj, const char* key,
                            std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    throw SchemaError(line, std::string("missing required field '") + key + "'");
  }
  if (!it->is_string()) {
    throw SchemaError(line, std::string("field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const ordered_json& obj,
                                           const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw SchemaError(line, std::string("field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

}  // namespace

Dataset::Dataset(std::vector<Post> posts, Split split)
    : posts_(std::move(posts)), split_(split) {
  std::unordered_map<std::string_view, std::size_t> seen;
  seen.reserve(posts_.size());
  for (std::size_t i = 0; i < posts_.size(); ++i) {
    validate_post(posts_[i], split_, 0);
    if (!seen.emplace(posts_[i].id, i).second) {
      throw DuplicateId(0, posts_[i].id);
    }
  }
}

std::map<std::string, std::string> FormatConfig::default_prefixes() {
  return {{"java", "JAVA"},
          {"csharp", "CS"},
          {"python", "PY"},
          {"javascript", "JS"}};
}

FormattedInput format_input(const Post& post, const FormatConfig& config) {
  const auto it = config.prefixes.find(post.lang);
  if (it == config.prefixes.end()) throw UnknownLanguage(post.lang);

  std::string text;
  text.reserve(it->second.size() + post.description.size() +
               config.separator.size() + post.code.size() + 3);
  text += it->second;
  text += ' ';
  text += post.description;
  if (!post.code.empty()) {
    text += ' ';
    text += config.separator;
    text += ' ';
    text += post.code;
  }
  if (config.max_chars) text = truncate_utf8(std::move(text), *config.max_chars);
  return {std::move(text), post.id};
}

Dataset parse_dataset(std::string_view jsonl, Split split) {
  std::vector<Post> posts;
  std::unordered_map<std::string, std::size_t> first_line;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < jsonl.size()) {
    auto end = jsonl.find('\n', pos);
    if (end == std::string_view::npos) end = jsonl.size();
    const auto line = jsonl.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (trim(line).empty()) continue;

    ordered_json obj;
    try {
      obj = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, e.what());
    }
    if (!obj.is_object()) throw ParseError(line_no, "expected a JSON object");

    Post post;
    post.id = required_string(obj, "id", line_no);
    post.lang = required_string(obj, "lang", line_no);
    post.description = required_string(obj, "description", line_no);
    post.code = optional_string(obj, "code", line_no).value_or("");
    post.title = optional_string(obj, "title", line_no);
    validate_post(post, split, line_no);

    if (!first_line.emplace(post.id, line_no).second) {
      throw DuplicateId(line_no, post.id);
    }
    posts.push_back(std::move(post));
  }

  if (posts.empty() && (split == Split::train || split == Split::augmented)) {
    throw SchemaError(0, "dataset for split '" + std::string(to_string(split)) +
                             "' is empty");
  }
  return Dataset(std::move(posts), split);
}

Dataset load_dataset(const std::filesystem::path& path, Split split) {
  return parse_dataset(read_file(path), split);
}

std::string serialize_dataset(const Dataset& dataset) {
  std::string out;
  for (const auto& post : dataset.posts()) {
    ordered_json obj;
    obj["id"] = post.id;
    obj["lang"] = post.lang;
    obj["title"] = post.title ? ordered_json(*post.title) : ordered_json(nullptr);
    obj["description"] = post.description;
    obj["code"] = post.code;
    try {
      out += obj.dump();
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(0, "post '" + post.id + "': " + e.what());
    }
    out += '\n';
  }
  return out;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  write_file(path, serialize_dataset(dataset));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
  return std::move(buf).str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace posttitle
