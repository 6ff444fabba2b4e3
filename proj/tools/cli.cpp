#include "cli.hpp"

#include <algorithm>
#include <optional>

#include "CLI11.hpp"
#include "posttitle/commands.hpp"
#include "posttitle/error.hpp"

namespace posttitle::cli {

namespace {

constexpr int kExitUsage = 2;

// Flag values; only the ones actually given override the config file.
struct Overrides {
  std::string config_path;
  std::string in, out, report, table, pred, gold;
  std::string split = "train";
  std::string separator;
  std::optional<std::size_t> max_chars;
  std::vector<std::string> prefixes;
  std::optional<double> damping, tolerance;
  std::optional<int> max_iter, candidates, k, workers;
  std::string log_base, metric, generator;
  bool allow_partial = false;
};

void add_rank_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--damping", o.damping, "TextRank damping factor in (0,1) [0.23]");
  cmd->add_option("--tolerance", o.tolerance, "Convergence tolerance on max score change [1e-6]");
  cmd->add_option("--max-iter", o.max_iter, "Iteration cap [100]");
  cmd->add_option("--log-base", o.log_base, "TF-IDF logarithm base: e or 10 [e]");
}

void add_format_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--separator", o.separator, "Code separator token [<code>]");
  cmd->add_option("--max-chars", o.max_chars, "Truncate formatted inputs to this many bytes");
  cmd->add_option("--prefix", o.prefixes, "Extra language prefix, as lang=PREFIX");
}

PipelineConfig effective_config(const Overrides& o) {
  PipelineConfig c;
  if (!o.config_path.empty()) c = load_config(o.config_path);
  if (!o.separator.empty()) c.format.separator = o.separator;
  if (o.max_chars) c.format.max_chars = *o.max_chars;
  for (const auto& p : o.prefixes) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw InvalidArg("--prefix expects lang=PREFIX, got '" + p + "'");
    }
    c.format.prefixes[p.substr(0, eq)] = p.substr(eq + 1);
  }
  if (o.damping) c.rank.damping = *o.damping;
  if (o.tolerance) c.rank.tolerance = *o.tolerance;
  if (o.max_iter) c.rank.max_iter = *o.max_iter;
  if (o.candidates) c.rank.num_candidates = *o.candidates;
  if (!o.log_base.empty()) c.rank.log_base = parse_log_base(o.log_base);
  if (o.k) c.augment.k = *o.k;
  if (o.workers) c.augment.workers = *o.workers;
  if (!o.metric.empty()) c.augment.metric = parse_selection_metric(o.metric);
  if (!o.generator.empty()) c.generator = GeneratorSpec::parse(o.generator);
  if (!o.in.empty()) c.paths.input = o.in;
  if (!o.out.empty()) c.paths.output = o.out;
  if (!o.report.empty()) c.paths.report = o.report;
  c.validate();
  return c;
}

std::string require_path(const std::string& value, const char* flag) {
  if (value.empty()) throw InvalidArg(std::string("missing ") + flag + " (flag or config [paths])");
  return value;
}

std::string default_report(const PipelineConfig& c) {
  return c.paths.report.empty() ? c.paths.output + ".report.json" : c.paths.report;
}

int finish(const CommandStatus& status, bool allow_partial, const char* what, std::ostream& err) {
  if (status.failures > 0) {
    err << what << ": " << status.failures << " of " << status.records
        << " records failed (see report)\n";
  }
  return status.exit_code(allow_partial);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stack Overflow title generation pipeline: input formatting, "
               "self-improvement augmentation, TextRank post-ranking and ROUGE evaluation",
               "posttitle"};
  app.require_subcommand(1);
  Overrides o;
  app.add_option("--config", o.config_path, "TOML-like config file; flags override it")
      ->check(CLI::ExistingFile);

  auto* format = app.add_subcommand("format", "Write bi-modal generator inputs for a corpus");
  format->add_option("--in", o.in, "Posts JSONL");
  format->add_option("--out", o.out, "Output JSONL of {id, input}");
  add_format_flags(format, o);

  auto* aug = app.add_subcommand("augment", "Build the self-improvement training set");
  aug->add_option("--in", o.in, "Training posts JSONL");
  aug->add_option("--out", o.out, "Augmented posts JSONL");
  aug->add_option("--report", o.report, "Report JSON [<out>.report.json]");
  aug->add_option("--k", o.k, "Candidates per post [20]");
  aug->add_option("--generator", o.generator, "Generator spec, e.g. mock:fixture=f.jsonl");
  aug->add_option("--metric", o.metric, "ROUGE-L statistic used for selection: f1 or recall");
  aug->add_option("--workers", o.workers, "Concurrent generator clients [1]");
  aug->add_option("--split", o.split, "Split tag of the input file [train]");
  aug->add_flag("--allow-partial", o.allow_partial, "Exit 0 when only some posts fail");
  add_format_flags(aug, o);

  auto* rank = app.add_subcommand("rank", "Select the best title from candidate sets");
  rank->add_option("--in", o.in, "JSONL of {post_id, candidates}");
  rank->add_option("--out", o.out, "JSONL of {post_id, best, scores}");
  rank->add_flag("--allow-partial", o.allow_partial, "Exit 0 when only some records fail");
  add_rank_flags(rank, o);

  auto* eval = app.add_subcommand("evaluate", "ROUGE-1/2/L of predictions against gold titles");
  eval->add_option("--pred", o.pred, "Predictions JSONL of {id, title}")->required();
  eval->add_option("--gold", o.gold, "Gold posts JSONL")->required();
  eval->add_option("--report", o.report, "Report JSON");
  eval->add_option("--table", o.table, "Text table output [stdout]");

  auto* pipe = app.add_subcommand("pipeline", "Format, generate, rank and optionally evaluate");
  pipe->add_option("--in", o.in, "Posts JSONL");
  pipe->add_option("--out", o.out, "JSONL of {id, title, scores}");
  pipe->add_option("--report", o.report, "Report JSON [<out>.report.json]");
  pipe->add_option("--generator", o.generator, "Generator spec");
  pipe->add_option("-K,--candidates", o.candidates, "Candidates per post for ranking [30]");
  pipe->add_flag("--allow-partial", o.allow_partial, "Exit 0 when only some posts fail");
  add_format_flags(pipe, o);
  add_rank_flags(pipe, o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    const auto config = effective_config(o);
    if (*format) {
      const auto status = cmd_format(require_path(config.paths.input, "--in"),
                                     require_path(config.paths.output, "--out"), config);
      return finish(status, false, "format", err);
    }
    if (*aug) {
      const auto status = cmd_augment(require_path(config.paths.input, "--in"),
                                      require_path(config.paths.output, "--out"),
                                      default_report(config), parse_split(o.split), config);
      return finish(status, o.allow_partial, "augment", err);
    }
    if (*rank) {
      const auto status = cmd_rank(require_path(config.paths.input, "--in"),
                                   require_path(config.paths.output, "--out"), config);
      return finish(status, o.allow_partial, "rank", err);
    }
    if (*eval) {
      const auto status = cmd_evaluate(o.pred, o.gold, config.paths.report, o.table, out, config);
      return finish(status, false, "evaluate", err);
    }
    if (*pipe) {
      const auto status = cmd_pipeline(require_path(config.paths.input, "--in"),
                                       require_path(config.paths.output, "--out"),
                                       default_report(config), config);
      return finish(status, o.allow_partial, "pipeline", err);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace posttitle::cli
