#include "posttitle/generator.hpp"

#include <array>
#include <charconv>
#include <random>
#include <utility>

#include "json.hpp"
#include "posttitle/corpus.hpp"
#include "posttitle/error.hpp"

namespace posttitle {

namespace {

constexpr auto kDefaultTimeout = std::chrono::seconds(120);

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t hash = 0xcbf29ce484222325ULL) {
  for (const unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::vector<std::string_view> split_words(std::string_view text) {
  std::vector<std::string_view> words;
  constexpr std::string_view ws = " \t\n\r\f\v";
  std::size_t pos = 0;
  while (true) {
    const auto start = text.find_first_not_of(ws, pos);
    if (start == std::string_view::npos) break;
    auto end = text.find_first_of(ws, start);
    if (end == std::string_view::npos) end = text.size();
    words.push_back(text.substr(start, end - start));
    pos = end;
  }
  return words;
}

std::uint64_t parse_u64(const std::string& text, const char* what) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw InvalidArg(std::string("generator parameter '") + what +
                     "' is not a non-negative integer: '" + text + "'");
  }
  return value;
}

}  // namespace

std::string_view to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::mock: return "mock";
    case GeneratorKind::templated: return "template";
    case GeneratorKind::external_process: return "external-process";
    case GeneratorKind::http: return "http";
  }
  return "template";
}

GeneratorSpec GeneratorSpec::parse(std::string_view text) {
  GeneratorSpec spec;
  const auto colon = text.find(':');
  const auto kind = trim(text.substr(0, colon));
  if (kind == "mock") {
    spec.kind = GeneratorKind::mock;
  } else if (kind == "template") {
    spec.kind = GeneratorKind::templated;
  } else if (kind == "external-process" || kind == "process") {
    spec.kind = GeneratorKind::external_process;
  } else if (kind == "http") {
    spec.kind = GeneratorKind::http;
  } else {
    throw InvalidArg("unknown generator kind '" + std::string(kind) + "'");
  }

  if (colon != std::string_view::npos) {
    auto rest = text.substr(colon + 1);
    while (!rest.empty()) {
      const auto semi = rest.find(';');
      const auto item = rest.substr(0, semi);
      rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
      if (trim(item).empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw InvalidArg("generator parameter '" + std::string(item) +
                         "' is not of the form key=value");
      }
      spec.params[std::string(trim(item.substr(0, eq)))] =
          std::string(trim(item.substr(eq + 1)));
    }
  }
  spec.validate();
  return spec;
}

std::string GeneratorSpec::to_string() const {
  std::string out(posttitle::to_string(kind));
  char sep = ':';
  for (const auto& [key, value] : params) {
    out += sep;
    out += key;
    out += '=';
    out += value;
    sep = ';';
  }
  return out;
}

void GeneratorSpec::validate() const {
  const auto require = [this](const char* key) {
    const auto it = params.find(key);
    if (it == params.end() || it->second.empty()) {
      throw InvalidArg(std::string("generator '") +
                       std::string(posttitle::to_string(kind)) +
                       "' requires parameter '" + key + "'");
    }
  };
  switch (kind) {
    case GeneratorKind::mock:
      require("fixture");
      break;
    case GeneratorKind::templated:
      if (params.count("seed")) parse_u64(params.at("seed"), "seed");
      break;
    case GeneratorKind::external_process:
      require("cmd");
      break;
    case GeneratorKind::http:
      require("url");
      break;
  }
  if (params.count("timeout")) {
    if (parse_u64(params.at("timeout"), "timeout") == 0) {
      throw InvalidArg("generator timeout must be positive");
    }
  }
}

std::chrono::milliseconds GeneratorSpec::timeout() const {
  const auto it = params.find("timeout");
  if (it == params.end()) return kDefaultTimeout;
  return std::chrono::seconds(parse_u64(it->second, "timeout"));
}

std::vector<std::string> sanitize_candidates(std::vector<std::string> candidates,
                                             int requested) {
  if (requested < 1) throw InvalidArg("num_candidates must be >= 1");
  if (candidates.size() > static_cast<std::size_t>(requested)) {
    throw ProtocolError("generator returned " + std::to_string(candidates.size()) +
                        " candidates, " + std::to_string(requested) + " requested");
  }
  std::erase_if(candidates, [](const std::string& c) { return trim(c).empty(); });
  return candidates;
}

MockGenerator::MockGenerator(std::map<std::string, std::vector<std::string>> fixture)
    : fixture_(std::move(fixture)) {}

MockGenerator MockGenerator::from_file(const std::filesystem::path& path) {
  const auto text = read_file(path);
  std::map<std::string, std::vector<std::string>> fixture;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    const auto line = std::string_view(text).substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto obj = nlohmann::json::parse(line);
      fixture[obj.at("id").get<std::string>()] =
          obj.at("candidates").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, path.string() + ": " + e.what());
    }
  }
  return MockGenerator(std::move(fixture));
}

GenerationResponse MockGenerator::generate(const GenerationRequest& request) {
  const auto it = fixture_.find(request.post_id);
  if (it == fixture_.end()) {
    throw GeneratorUnavailable("mock fixture has no candidates for '" +
                               request.post_id + "'");
  }
  auto candidates = it->second;
  if (candidates.size() > static_cast<std::size_t>(request.num_candidates)) {
    candidates.resize(static_cast<std::size_t>(request.num_candidates));
  }
  return {sanitize_candidates(std::move(candidates), request.num_candidates), id()};
}

TemplateGenerator::TemplateGenerator(std::uint64_t seed, std::string separator)
    : seed_(seed), separator_(std::move(separator)) {}

std::string TemplateGenerator::id() const {
  return "template:seed=" + std::to_string(seed_);
}

GenerationResponse TemplateGenerator::generate(const GenerationRequest& request) {
  if (request.num_candidates < 1) throw InvalidArg("num_candidates must be >= 1");

  // Skip the prefix token; stop at the first code separator.
  std::string_view desc = request.input;
  if (const auto sp = desc.find(' '); sp != std::string_view::npos) {
    desc = desc.substr(sp + 1);
  }
  if (const auto sep = desc.find(" " + separator_); sep != std::string_view::npos) {
    desc = desc.substr(0, sep);
  }
  auto words = split_words(desc);
  if (words.size() > 16) words.resize(16);

  static constexpr std::array<std::string_view, 5> kLeads = {
      "how to", "why does", "what is the best way to", "error when", "how do i"};

  const auto base = fnv1a(request.input, fnv1a(std::to_string(seed_)));
  std::vector<std::string> candidates;
  candidates.reserve(static_cast<std::size_t>(request.num_candidates));
  for (int j = 0; j < request.num_candidates; ++j) {
    std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                      static_cast<std::uint32_t>(j)};
    std::mt19937_64 rng(seq);
    // Raw engine output keeps results identical across standard libraries.
    const auto draw = [&rng](std::size_t bound) {
      return bound == 0 ? std::size_t{0} : static_cast<std::size_t>(rng() % bound);
    };

    std::vector<std::string_view> window;
    if (!words.empty()) {
      const std::size_t len = std::min(words.size(), 3 + draw(6));
      const std::size_t start = draw(std::min<std::size_t>(4, words.size() - len + 1));
      window.assign(words.begin() + static_cast<std::ptrdiff_t>(start),
                    words.begin() + static_cast<std::ptrdiff_t>(start + len));
    }
    switch (draw(4)) {
      case 1:
        if (window.size() > 2) window.erase(window.begin() + static_cast<std::ptrdiff_t>(draw(window.size())));
        break;
      case 2:
        if (window.size() > 1) {
          const auto at = draw(window.size() - 1);
          std::swap(window[at], window[at + 1]);
        }
        break;
      case 3:
        window.insert(window.begin(), kLeads[draw(kLeads.size())]);
        break;
      default:
        break;
    }

    std::string title;
    for (const auto w : window) {
      if (!title.empty()) title += ' ';
      title += w;
    }
    if (trim(title).empty()) title = "question about code";
    candidates.push_back(std::move(title));
  }
  return {std::move(candidates), id()};
}

std::unique_ptr<Generator> make_generator(const GeneratorSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case GeneratorKind::mock:
      return std::make_unique<MockGenerator>(MockGenerator::from_file(spec.params.at("fixture")));
    case GeneratorKind::templated: {
      const auto seed_it = spec.params.find("seed");
      const auto sep_it = spec.params.find("separator");
      return std::make_unique<TemplateGenerator>(
          seed_it == spec.params.end() ? 0 : parse_u64(seed_it->second, "seed"),
          sep_it == spec.params.end() ? std::string("<code>") : sep_it->second);
    }
    case GeneratorKind::external_process:
      return make_process_generator(spec.params.at("cmd"), spec.timeout());
    case GeneratorKind::http:
      return make_http_generator(spec.params.at("url"), spec.timeout());
  }
  throw InvalidArg("unsupported generator kind");
}

GenerationResponse generate(const GeneratorSpec& spec, const GenerationRequest& request) {
  return make_generator(spec)->generate(request);
}

}  // namespace posttitle
