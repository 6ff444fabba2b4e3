#include "posttitle/commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "config_json.hpp"
#include "json.hpp"
#include "posttitle/error.hpp"
#include "posttitle/rouge.hpp"
#include "posttitle/selfimprove.hpp"
#include "posttitle/textrank.hpp"

namespace posttitle {

using ordered_json = nlohmann::ordered_json;

namespace {

// Languages in the order of the multi-language benchmark; anything else
// follows alphabetically.
constexpr std::array<std::string_view, 4> kLanguageOrder = {"java", "csharp", "python",
                                                            "javascript"};

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!trim(line).empty()) fn(line_no, line);
  }
}

std::string dump_line(const ordered_json& obj) {
  return obj.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
}

double round2(double v) { return std::round(v * 100.0) / 100.0; }

ordered_json triple_json(const MetricTriple& t) {
  return {{"f1", round2(t.f1)}, {"recall", round2(t.recall)}, {"precision", round2(t.precision)}};
}

ordered_json group_json(const GroupScores& g) {
  ordered_json j;
  j["count"] = g.count;
  j["rouge-1"] = triple_json(g.rouge1);
  j["rouge-2"] = triple_json(g.rouge2);
  j["rouge-l"] = triple_json(g.rougeL);
  return j;
}

ordered_json summary_json(const EvaluationSummary& s) {
  ordered_json j;
  j["overall"] = group_json(s.overall);
  j["average"] = group_json(s.average);
  j["by_language"] = ordered_json::object();
  std::vector<std::string> langs;
  for (const auto& [lang, scores] : s.by_language) langs.push_back(lang);
  std::stable_sort(langs.begin(), langs.end(), [](const auto& a, const auto& b) {
    const auto rank = [](const std::string& l) {
      const auto it = std::find(kLanguageOrder.begin(), kLanguageOrder.end(), l);
      return static_cast<std::size_t>(it - kLanguageOrder.begin());
    };
    return rank(a) < rank(b);
  });
  for (const auto& lang : langs) j["by_language"][lang] = group_json(s.by_language.at(lang));
  return j;
}

void accumulate(MetricTriple& acc, const RougeScore& s) {
  acc.f1 += s.f1;
  acc.recall += s.recall;
  acc.precision += s.precision;
}

void scale(MetricTriple& t, double factor) {
  t.f1 *= factor;
  t.recall *= factor;
  t.precision *= factor;
}

void finish(GroupScores& g) {
  const double factor = g.count == 0 ? 0.0 : 100.0 / static_cast<double>(g.count);
  scale(g.rouge1, factor);
  scale(g.rouge2, factor);
  scale(g.rougeL, factor);
}

void add_scaled(MetricTriple& acc, const MetricTriple& t, double w) {
  acc.f1 += t.f1 * w;
  acc.recall += t.recall * w;
  acc.precision += t.precision * w;
}

std::string string_or(const ordered_json& obj, std::initializer_list<const char*> keys,
                      std::size_t line, const char* what) {
  for (const char* key : keys) {
    const auto it = obj.find(key);
    if (it != obj.end() && it->is_string()) return it->get<std::string>();
  }
  throw SchemaError(line, std::string("missing ") + what);
}

ordered_json parse_line(std::size_t line_no, std::string_view line) {
  try {
    auto obj = ordered_json::parse(line);
    if (!obj.is_object()) throw ParseError(line_no, "expected a JSON object");
    return obj;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(line_no, e.what());
  }
}

class LineWriter {
 public:
  explicit LineWriter(const std::filesystem::path& path)
      : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw IoError("cannot open '" + path.string() + "' for writing");
  }
  void write(const std::string& line) {
    out_ << line;
    out_.flush();
    if (!out_) throw IoError("failed writing '" + path_.string() + "'");
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

void write_report(const std::filesystem::path& path, const ordered_json& report) {
  if (path.empty()) return;
  write_file(path, report.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n");
}

}  // namespace

int CommandStatus::exit_code(bool allow_partial) const {
  if (failures == 0) return 0;
  if (allow_partial && failures < records) return 0;
  return 1;
}

CommandStatus cmd_format(const std::filesystem::path& in, const std::filesystem::path& out,
                         const PipelineConfig& config) {
  const auto dataset = load_dataset(in, Split::test);
  std::string text;
  for (const auto& post : dataset.posts()) {
    const auto formatted = format_input(post, config.format);
    ordered_json obj;
    obj["id"] = formatted.post_id;
    obj["input"] = formatted.text;
    text += dump_line(obj);
  }
  write_file(out, text);
  return {dataset.size(), 0};
}

CommandStatus cmd_augment(const std::filesystem::path& in, const std::filesystem::path& out,
                          const std::filesystem::path& report, Split split,
                          const PipelineConfig& config) {
  config.validate();
  const auto dataset = load_dataset(in, split);

  AugmentOptions options;
  options.k = config.augment.k;
  options.metric = config.augment.metric;
  options.format = config.format;
  options.workers = config.augment.workers;

  const auto& spec = config.generator;
  const GeneratorFactory factory = [&spec] { return make_generator(spec); };
  // Build one client up front so a broken spec fails before any work.
  auto probe = make_generator(spec);
  const auto generator_id = probe->id();
  auto result = options.workers > 1 ? augment(dataset, factory, options)
                                    : augment(dataset, *probe, options);

  save_dataset(result.dataset, out);

  ordered_json j;
  j["config"] = config_json(config);
  j["generator"] = generator_id;
  j["input"] = in.string();
  j["output"] = out.string();
  j["k"] = options.k;
  j["selection_metric"] = std::string("rouge_l_") + std::string(to_string(options.metric));
  j["posts"] = dataset.size();
  j["augmented"] = result.report.per_post.size();
  j["mean_selected_score"] = result.report.mean_selected_score;
  j["per_post"] = ordered_json::array();
  for (const auto& p : result.report.per_post) {
    j["per_post"].push_back({{"id", p.post_id},
                             {"selected", p.selected_candidate},
                             {"selected_score", p.selected_score},
                             {"candidate_count", p.candidate_count}});
  }
  j["skipped"] = ordered_json::array();
  for (const auto& s : result.report.skipped) {
    j["skipped"].push_back({{"id", s.post_id}, {"reason", s.reason}});
  }
  write_report(report, j);
  return {dataset.size(), result.report.skipped.size()};
}

CommandStatus cmd_rank(const std::filesystem::path& in, const std::filesystem::path& out,
                       const PipelineConfig& config) {
  config.rank.validate();
  const auto text = read_file(in);
  LineWriter writer(out);
  CommandStatus status;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    ++status.records;
    ordered_json result;
    std::string post_id;
    try {
      const auto obj = parse_line(line_no, line);
      post_id = string_or(obj, {"post_id", "id"}, line_no, "post_id");
      const auto it = obj.find("candidates");
      if (it == obj.end() || !it->is_array()) {
        throw SchemaError(line_no, "missing candidates array");
      }
      std::vector<std::string> titles;
      for (const auto& c : *it) {
        if (!c.is_string()) throw SchemaError(line_no, "candidates must be strings");
        titles.push_back(c.get<std::string>());
      }
      const auto selection = rank_and_select(CandidateSet(post_id, std::move(titles)), config.rank);
      result["post_id"] = post_id;
      result["best"] = selection.best_title;
      result["scores"] = selection.ranked.scores;
    } catch (const Error& e) {
      ++status.failures;
      result = ordered_json::object();
      result["post_id"] = post_id.empty() ? ordered_json(nullptr) : ordered_json(post_id);
      result["error"] = e.what();
    }
    writer.write(dump_line(result));
  });
  return status;
}

EvaluationSummary evaluate_pairs(const std::vector<EvalPair>& pairs) {
  EvaluationSummary s;
  for (const auto& p : pairs) {
    const auto scores = rouge_all(p.gold, p.prediction);
    for (GroupScores* g : {&s.overall, &s.by_language[p.lang]}) {
      ++g->count;
      accumulate(g->rouge1, scores.rouge1);
      accumulate(g->rouge2, scores.rouge2);
      accumulate(g->rougeL, scores.rougeL);
    }
  }
  finish(s.overall);
  for (auto& [lang, g] : s.by_language) finish(g);

  if (!s.by_language.empty()) {
    const double w = 1.0 / static_cast<double>(s.by_language.size());
    for (const auto& [lang, g] : s.by_language) {
      s.average.count += g.count;
      add_scaled(s.average.rouge1, g.rouge1, w);
      add_scaled(s.average.rouge2, g.rouge2, w);
      add_scaled(s.average.rougeL, g.rougeL, w);
    }
  }
  return s;
}

std::string format_table(const EvaluationSummary& summary) {
  const auto j = summary_json(summary);
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-12s %6s | %7s %7s %7s | %7s %7s %7s\n", "Language", "N",
                "R-1", "R-2", "R-L", "R-1 rec", "R-2 rec", "R-L rec");
  out += buf;
  out += std::string(std::string_view(buf).size() - 1, '-') + "\n";
  const auto row = [&](const std::string& name, const GroupScores& g) {
    std::snprintf(buf, sizeof buf, "%-12s %6zu | %7.2f %7.2f %7.2f | %7.2f %7.2f %7.2f\n",
                  name.c_str(), g.count, g.rouge1.f1, g.rouge2.f1, g.rougeL.f1,
                  g.rouge1.recall, g.rouge2.recall, g.rougeL.recall);
    out += buf;
  };
  for (const auto& [lang, unused] : j["by_language"].items()) {
    row(lang, summary.by_language.at(lang));
  }
  row("Average", summary.average);
  row("Overall", summary.overall);
  return out;
}

CommandStatus cmd_evaluate(const std::filesystem::path& pred, const std::filesystem::path& gold,
                           const std::filesystem::path& report,
                           const std::filesystem::path& table, std::ostream& table_stream,
                           const PipelineConfig& config) {
  const auto gold_set = load_dataset(gold, Split::test);
  std::map<std::string, std::string> predictions;
  for_each_line(read_file(pred), [&](std::size_t line_no, std::string_view line) {
    const auto obj = parse_line(line_no, line);
    auto id = string_or(obj, {"id", "post_id"}, line_no, "id");
    auto title = string_or(obj, {"title", "best"}, line_no, "title");
    if (!predictions.emplace(std::move(id), std::move(title)).second) {
      throw DuplicateId(line_no, string_or(obj, {"id", "post_id"}, line_no, "id"));
    }
  });

  std::vector<std::string> missing;
  std::vector<std::string> unexpected;
  std::set<std::string> gold_ids;
  std::vector<EvalPair> pairs;
  for (const auto& post : gold_set.posts()) {
    gold_ids.insert(post.id);
    if (!post.title) throw SchemaError(0, "gold post '" + post.id + "' has no title");
    const auto it = predictions.find(post.id);
    if (it == predictions.end()) {
      missing.push_back(post.id);
      continue;
    }
    pairs.push_back({post.lang, *post.title, it->second});
  }
  for (const auto& [id, title] : predictions) {
    if (!gold_ids.count(id)) unexpected.push_back(id);
  }
  if (!missing.empty() || !unexpected.empty()) {
    throw MissingPrediction(std::move(missing), std::move(unexpected));
  }

  const auto summary = evaluate_pairs(pairs);
  ordered_json j;
  j["config"] = config_json(config);
  j["predictions"] = pred.string();
  j["gold"] = gold.string();
  j["scale"] = "x100";
  j.update(summary_json(summary));
  write_report(report, j);

  const auto rendered = format_table(summary);
  if (table.empty()) {
    table_stream << rendered;
  } else {
    write_file(table, rendered);
  }
  return {pairs.size(), 0};
}

CommandStatus cmd_pipeline(const std::filesystem::path& in, const std::filesystem::path& out,
                           const std::filesystem::path& report, const PipelineConfig& config) {
  config.validate();
  const auto dataset = load_dataset(in, Split::test);
  auto generator = make_generator(config.generator);

  LineWriter writer(out);
  CommandStatus status;
  ordered_json skipped = ordered_json::array();
  std::vector<EvalPair> pairs;
  bool all_titled = !dataset.empty();

  for (const auto& post : dataset.posts()) {
    ++status.records;
    all_titled = all_titled && post.title.has_value();
    try {
      const auto input = format_input(post, config.format);
      auto response =
          generator->generate({post.id, input.text, config.rank.num_candidates});
      if (response.candidates.empty()) {
        throw GeneratorUnavailable("generator returned no candidates");
      }
      const auto selection =
          rank_and_select(CandidateSet(post.id, std::move(response.candidates)), config.rank);
      ordered_json line;
      line["id"] = post.id;
      line["title"] = selection.best_title;
      line["scores"] = selection.ranked.scores;
      writer.write(dump_line(line));
      if (post.title) pairs.push_back({post.lang, *post.title, selection.best_title});
    } catch (const Error& e) {
      ++status.failures;
      skipped.push_back({{"id", post.id}, {"reason", e.what()}});
    }
  }

  ordered_json j;
  j["config"] = config_json(config);
  j["generator"] = generator->id();
  j["input"] = in.string();
  j["output"] = out.string();
  j["posts"] = status.records;
  j["ranked"] = status.records - status.failures;
  j["skipped"] = skipped;
  if (all_titled && !pairs.empty()) {
    j["evaluation"] = summary_json(evaluate_pairs(pairs));
    j["evaluation"]["scale"] = "x100";
  }
  write_report(report, j);
  return status;
}

}  // namespace posttitle
