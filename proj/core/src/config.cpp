#include "posttitle/config.hpp"

#include <charconv>

#include "config_json.hpp"
#include "json.hpp"
#include "posttitle/error.hpp"

namespace posttitle {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw InvalidArg("config line " + std::to_string(line) + ": " + what);
}

std::string unquote(std::string_view value, std::size_t line) {
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
    try {
      return nlohmann::json::parse(value).get<std::string>();
    } catch (const nlohmann::json::exception&) {
      fail(line, "bad string literal " + std::string(value));
    }
  }
  return std::string(value);
}

// Strips a trailing '#' comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && quoted) {
      ++i;
    } else if (line[i] == '"') {
      quoted = !quoted;
    } else if (line[i] == '#' && !quoted) {
      return line.substr(0, i);
    }
  }
  return line;
}

double to_double(const std::string& v, std::size_t line) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) fail(line, "expected a number, got '" + v + "'");
  return out;
}

int to_int(const std::string& v, std::size_t line) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) fail(line, "expected an integer, got '" + v + "'");
  return out;
}

void apply(PipelineConfig& c, const std::string& section, const std::string& key,
           const std::string& v, std::size_t line) {
  if (section == "format") {
    if (key == "separator") {
      c.format.separator = v;
    } else if (key == "max_chars") {
      const int n = to_int(v, line);
      if (n <= 0) {
        c.format.max_chars.reset();
      } else {
        c.format.max_chars = static_cast<std::size_t>(n);
      }
    } else {
      fail(line, "unknown key format." + key);
    }
  } else if (section == "format.prefixes") {
    c.format.prefixes[key] = v;
  } else if (section == "rank") {
    if (key == "damping") c.rank.damping = to_double(v, line);
    else if (key == "tolerance") c.rank.tolerance = to_double(v, line);
    else if (key == "max_iter") c.rank.max_iter = to_int(v, line);
    else if (key == "candidates") c.rank.num_candidates = to_int(v, line);
    else if (key == "log_base") c.rank.log_base = parse_log_base(v);
    else fail(line, "unknown key rank." + key);
  } else if (section == "augment") {
    if (key == "k") c.augment.k = to_int(v, line);
    else if (key == "metric") c.augment.metric = parse_selection_metric(v);
    else if (key == "workers") c.augment.workers = to_int(v, line);
    else fail(line, "unknown key augment." + key);
  } else if (section == "generator") {
    if (key == "spec") c.generator = GeneratorSpec::parse(v);
    else fail(line, "unknown key generator." + key);
  } else if (section == "paths") {
    if (key == "in") c.paths.input = v;
    else if (key == "out") c.paths.output = v;
    else if (key == "report") c.paths.report = v;
    else fail(line, "unknown key paths." + key);
  } else {
    fail(line, "key '" + key + "' outside a known section");
  }
}

}  // namespace

void PipelineConfig::validate() const {
  rank.validate();
  if (augment.k < 1) throw InvalidArg("augment k must be >= 1");
  if (augment.workers < 1) throw InvalidArg("augment workers must be >= 1");
  if (format.prefixes.empty()) throw InvalidArg("no language prefixes configured");
  if (format.separator.empty()) throw InvalidArg("code separator must not be empty");
  generator.validate();
}

std::string_view to_string(LogBase base) { return base == LogBase::natural ? "e" : "10"; }

LogBase parse_log_base(std::string_view text) {
  if (text == "e" || text == "natural" || text == "ln") return LogBase::natural;
  if (text == "10" || text == "log10") return LogBase::base10;
  throw InvalidArg("unknown log base '" + std::string(text) + "' (use e or 10)");
}

void apply_config_text(std::string_view text, PipelineConfig& config) {
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(strip_comment(text.substr(pos, end - pos)));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) fail(line_no, "empty key");
    try {
      apply(config, section, key, unquote(trim(line.substr(eq + 1)), line_no), line_no);
    } catch (const InvalidArg& e) {
      const std::string what = e.what();
      if (what.rfind("config line", 0) == 0) throw;
      fail(line_no, what);
    }
  }
}

PipelineConfig load_config(const std::filesystem::path& path) {
  PipelineConfig config;
  apply_config_text(read_file(path), config);
  config.validate();
  return config;
}

nlohmann::ordered_json config_json(const PipelineConfig& c) {
  nlohmann::ordered_json j;
  j["format"]["separator"] = c.format.separator;
  j["format"]["max_chars"] =
      c.format.max_chars ? nlohmann::ordered_json(*c.format.max_chars) : nlohmann::ordered_json(nullptr);
  for (const auto& [lang, prefix] : c.format.prefixes) j["format"]["prefixes"][lang] = prefix;
  j["rank"]["damping"] = c.rank.damping;
  j["rank"]["tolerance"] = c.rank.tolerance;
  j["rank"]["max_iter"] = c.rank.max_iter;
  j["rank"]["candidates"] = c.rank.num_candidates;
  j["rank"]["log_base"] = to_string(c.rank.log_base);
  j["augment"]["k"] = c.augment.k;
  j["augment"]["metric"] = to_string(c.augment.metric);
  j["augment"]["workers"] = c.augment.workers;
  j["generator"]["spec"] = c.generator.to_string();
  j["paths"]["in"] = c.paths.input;
  j["paths"]["out"] = c.paths.output;
  j["paths"]["report"] = c.paths.report;
  return j;
}

std::string config_to_json(const PipelineConfig& config) { return config_json(config).dump(); }

}  // namespace posttitle
