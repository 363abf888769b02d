// Command-line front end for the divide-and-conquer summarization toolkit.
//
// Subcommands: ingest, split, stats, summarize, evaluate, score.
// Data goes to files or stdout; diagnostics and progress go to stderr.
// Exit codes: 0 success, 1 fatal error, 2 usage error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dancer/adapter.hpp"
#include "dancer/aligner.hpp"
#include "dancer/compose.hpp"
#include "dancer/corpus.hpp"
#include "dancer/example_gen.hpp"
#include "dancer/parallel.hpp"
#include "dancer/rouge.hpp"
#include "dancer/section_classify.hpp"
#include "dancer/stats_eval.hpp"
#include "dancer/summarizer.hpp"

namespace {

using namespace dancer;

struct FatalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

DiagnosticSink stderr_sink() {
  return [](const std::string& message) { std::cerr << "warning: " << message << '\n'; };
}

void progress(std::size_t count) {
  if (count % 1000 == 0) std::cerr << "processed " << count << " documents\n";
}

DatasetFormat parse_format_or_throw(const std::string& name) {
  auto format = parse_dataset_format(name);
  if (!format) throw FatalError("unknown dataset format '" + name + "'");
  return *format;
}

// Options shared by every corpus-reading subcommand.
struct CorpusArgs {
  std::string input;
  std::string format = "arxiv-pubmed";
  std::string keyword_table_path;

  void attach(CLI::App* cmd) {
    cmd->add_option("--in", input, "input corpus (JSONL)")->required();
    cmd->add_option("--format", format, "dataset layout: arxiv-pubmed|native")
        ->check(CLI::IsMember({"arxiv-pubmed", "native"}));
    cmd->add_option("--keyword-table", keyword_table_path,
                    "keyword table file overriding the built-in header keywords");
  }

  JsonlDocumentReader reader() const {
    return {input, parse_format_or_throw(format), stderr_sink()};
  }

  KeywordTable table() const {
    return keyword_table_path.empty() ? KeywordTable::defaults()
                                      : KeywordTable::load(keyword_table_path);
  }
};

// Generation knobs shared by split/stats/summarize.
struct GenArgs {
  std::size_t max_source = 500;
  std::size_t max_target = 100;
  std::vector<std::string> selected_types;
  std::size_t fallback_first_k = 0;
  std::string align_denominator = "summary";
  bool drop_zero_overlap = false;
  bool sentence_truncation = false;

  void attach(CLI::App* cmd, bool with_target = true) {
    cmd->add_option("--max-source", max_source, "source truncation, in word tokens")
        ->check(CLI::PositiveNumber);
    if (with_target) {
      cmd->add_option("--max-target", max_target, "target truncation, in word tokens")
          ->check(CLI::PositiveNumber);
    }
    cmd->add_option("--selected-types", selected_types,
                    "section types fed to summarization (default: introduction methods results conclusion)")
        ->delimiter(',');
    cmd->add_option("--fallback-first-k", fallback_first_k,
                    "when no header matches, treat the first K sections as introduction");
    cmd->add_option("--align-denominator", align_denominator,
                    "length that divides the LCS when aligning: summary|doc")
        ->check(CLI::IsMember({"summary", "doc"}));
    cmd->add_flag("--drop-zero-overlap", drop_zero_overlap,
                  "drop summary sentences with zero overlap instead of assigning by tie-break");
    cmd->add_flag("--sentence-truncation", sentence_truncation,
                  "truncate at sentence boundaries instead of cutting mid-sentence");
  }

  GenConfig config() const {
    GenConfig config;
    config.max_source_words = max_source;
    config.max_target_words = max_target;
    if (!selected_types.empty()) {
      config.selected_types.clear();
      for (const auto& name : selected_types) {
        auto type = section_type_from_string(name);
        if (!type) throw FatalError("unknown section type '" + name + "'");
        config.selected_types.insert(*type);
      }
    }
    return config;
  }

  GenOptions options() const {
    GenOptions options;
    options.denominator = align_denominator == "doc" ? AlignDenominator::DocumentSentence
                                                     : AlignDenominator::SummarySentence;
    options.drop_zero_overlap = drop_zero_overlap;
    options.sentence_truncation = sentence_truncation;
    options.fallback_first_k = fallback_first_k;
    return options;
  }
};

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FatalError("cannot open output file: " + path);
  return out;
}

// Writes to the file when --out was given, to stdout otherwise.
void emit_report(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
  } else {
    open_output(path) << text;
  }
}

int run_ingest(const CorpusArgs& corpus, const std::string& out_path) {
  auto reader = corpus.reader();
  std::optional<std::ofstream> file;
  if (!out_path.empty()) file.emplace(open_output(out_path));
  std::ostream& out = file ? *file : std::cout;

  std::size_t count = 0;
  while (auto doc = reader.next()) {
    write_native(*doc, out);
    progress(++count);
  }
  if (!out) throw FatalError("write failed");
  std::cerr << "ingested " << count << " documents (" << reader.records_skipped()
            << " skipped)\n";
  return 0;
}

int run_split(const CorpusArgs& corpus, const GenArgs& gen, const std::string& out_path,
              std::size_t workers) {
  const KeywordTable table = corpus.table();
  const GenConfig config = gen.config();
  const GenOptions options = gen.options();

  auto reader = corpus.reader();
  std::optional<std::ofstream> file;
  if (!out_path.empty()) file.emplace(open_output(out_path));
  std::ostream& out = file ? *file : std::cout;

  std::size_t docs = 0, docs_with_examples = 0, examples = 0;
  const std::size_t chunk_size = std::max<std::size_t>(32, workers * 8);
  std::vector<Document> chunk;
  std::vector<std::vector<TrainingExample>> results;
  auto flush = [&] {
    results.assign(chunk.size(), {});
    parallel_for_indexed(chunk.size(), workers, [&](std::size_t i, std::size_t) {
      results[i] = generate_examples(chunk[i], config, table, options);
    });
    for (const auto& generated : results) {
      examples += write_examples(generated, out);
      if (!generated.empty()) ++docs_with_examples;
    }
    chunk.clear();
  };
  while (auto doc = reader.next()) {
    chunk.push_back(std::move(*doc));
    progress(++docs);
    if (chunk.size() >= chunk_size) flush();
  }
  flush();

  if (!out) throw FatalError("write failed");
  std::cerr << "wrote " << examples << " examples from " << docs_with_examples << "/" << docs
            << " documents (" << reader.records_skipped() << " records skipped)\n";
  return 0;
}

int run_stats(const CorpusArgs& corpus, const GenArgs& gen, const std::string& out_path,
              bool as_json, bool multiset, std::size_t workers) {
  const KeywordTable table = corpus.table();
  const GenConfig config = gen.config();
  const GenOptions options = gen.options();

  auto reader = corpus.reader();
  StatsAccumulator total;
  std::size_t docs = 0;
  const std::size_t chunk_size = std::max<std::size_t>(32, workers * 8);
  std::vector<Document> chunk;
  auto flush = [&] {
    std::vector<StatsAccumulator> shards(chunk.size());
    parallel_for_indexed(chunk.size(), workers, [&](std::size_t i, std::size_t) {
      shards[i].add(chunk[i], config, table, options);
    });
    for (const auto& shard : shards) total.merge(shard);
    chunk.clear();
  };
  while (auto doc = reader.next()) {
    chunk.push_back(std::move(*doc));
    progress(++docs);
    if (chunk.size() >= chunk_size) flush();
  }
  flush();

  const CorpusStats corpus_stats = total.corpus();
  const CopyStats copy_stats = total.copied(multiset);
  if (as_json) {
    nlohmann::json j;
    j["corpus"] = to_json(corpus_stats);
    j["copied_ngrams"] = to_json(copy_stats);
    emit_report(j.dump(2) + "\n", out_path);
  } else {
    emit_report(render_text(corpus_stats) + render_text(copy_stats), out_path);
  }
  return 0;
}

int run_summarize(const CorpusArgs& corpus, const GenArgs& gen, const std::string& out_path,
                  const std::string& summarizer, bool trigram_block, std::size_t timeout_ms,
                  std::size_t workers) {
  SummarizerSpec spec = SummarizerSpec::parse(summarizer);
  spec.trigram_block = trigram_block;
  spec.timeout = std::chrono::milliseconds(timeout_ms);

  const KeywordTable table = corpus.table();
  const GenConfig config = gen.config();
  ComposeOptions options;
  options.fallback_first_k = gen.fallback_first_k;

  auto reader = corpus.reader();
  std::optional<std::ofstream> file;
  if (!out_path.empty()) file.emplace(open_output(out_path));
  std::ostream& out = file ? *file : std::cout;

  std::size_t count = 0;
  summarize_corpus(
      reader, spec, table, config, workers,
      [&](SummaryHypothesis hyp) {
        write_hypothesis(hyp, out);
        progress(++count);
      },
      options, stderr_sink());
  if (!out) throw FatalError("write failed");
  std::cerr << "summarized " << count << " documents (" << reader.records_skipped()
            << " records skipped)\n";
  return 0;
}

int run_evaluate(const std::string& hyps_path, const CorpusArgs& refs, const EvalOptions& options,
                 const std::string& out_path, bool as_json) {
  const auto hypotheses = read_hypotheses(hyps_path);
  auto reader = refs.reader();
  std::vector<Document> references;
  while (auto doc = reader.next()) references.push_back(std::move(*doc));

  const EvalReport report = evaluate(hypotheses, references, options);
  for (const auto& id : report.unmatched_hypotheses)
    std::cerr << "warning: hypothesis '" << id << "' has no reference\n";
  for (const auto& id : report.unmatched_references)
    std::cerr << "warning: reference '" << id << "' has no hypothesis\n";

  if (as_json) {
    emit_report(to_json(report).dump(2) + "\n", out_path);
  } else {
    emit_report(render_text(report), out_path);
  }
  return 0;
}

int run_score(const std::string& candidate_path, const std::string& reference_path, bool stemming,
              bool as_json) {
  auto read_file = [](const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FatalError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  std::vector<std::string> candidate = tokenize(read_file(candidate_path));
  std::vector<std::string> reference = tokenize(read_file(reference_path));
  if (stemming) {
    candidate = stem_tokens(candidate);
    reference = stem_tokens(reference);
  }

  const RougeScore r1 = rouge_score(candidate, reference, RougeVariant::ngram(1));
  const RougeScore r2 = rouge_score(candidate, reference, RougeVariant::ngram(2));
  const RougeScore rl = rouge_score(candidate, reference, RougeVariant::lcs());

  if (as_json) {
    nlohmann::json j;
    auto put = [&](const char* name, const RougeScore& s) {
      j[name] = {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
    };
    put("rouge-1", r1);
    put("rouge-2", r2);
    put("rouge-l", rl);
    std::cout << j.dump(2) << '\n';
  } else {
    auto row = [](const char* name, const RougeScore& s) {
      std::ostringstream out;
      out.setf(std::ios::fixed);
      out.precision(2);
      out << name << "   " << 100.0 * s.precision << "   " << 100.0 * s.recall << "   "
          << 100.0 * s.f1 << '\n';
      return out.str();
    };
    std::cout << "metric    precision   recall   f1\n"
              << row("rouge-1", r1) << row("rouge-2", r2) << row("rouge-l", rl);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"divide-and-conquer summarization toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key-value config file; command-line flags win");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "validate a dataset and emit the native layout");
  CorpusArgs ingest_corpus;
  std::string ingest_out;
  ingest_corpus.attach(ingest);
  ingest->add_option("--out", ingest_out, "output file (default: stdout)");

  // split
  auto* split = app.add_subcommand("split", "emit section-level training examples (JSONL)");
  CorpusArgs split_corpus;
  GenArgs split_gen;
  std::string split_out;
  std::size_t split_workers = 1;
  split_corpus.attach(split);
  split_gen.attach(split);
  split->add_option("--out", split_out, "output file (default: stdout)");
  split->add_option("--workers", split_workers, "worker threads")
      ->envname("DANCER_WORKERS")
      ->check(CLI::PositiveNumber);

  // stats
  auto* stats = app.add_subcommand("stats", "corpus statistics, section distribution, copied n-grams");
  CorpusArgs stats_corpus;
  GenArgs stats_gen;
  std::string stats_out;
  bool stats_json = false, stats_multiset = false;
  std::size_t stats_workers = 1;
  stats_corpus.attach(stats);
  stats_gen.attach(stats);
  stats->add_option("--out", stats_out, "output file (default: stdout)");
  stats->add_flag("--json", stats_json, "machine-readable report");
  stats->add_flag("--multiset-ngrams", stats_multiset,
                  "count copied n-grams as clipped occurrences instead of distinct types");
  stats->add_option("--workers", stats_workers, "worker threads")
      ->envname("DANCER_WORKERS")
      ->check(CLI::PositiveNumber);

  // summarize
  auto* summarize = app.add_subcommand("summarize", "summarize each document section by section");
  CorpusArgs sum_corpus;
  GenArgs sum_gen;
  std::string sum_out, sum_spec = "lead:10";
  bool sum_block = false;
  std::size_t sum_timeout = 30000, sum_workers = 1;
  sum_corpus.attach(summarize);
  sum_gen.attach(summarize, /*with_target=*/false);
  summarize->add_option("--out", sum_out, "output file (default: stdout)");
  summarize->add_option("--summarizer", sum_spec,
                        "lead:N | lexrank[:N] | sumbasic[:N] | external:CMD");
  summarize->add_flag("--trigram-block", sum_block,
                      "suppress tokens that would repeat an emitted trigram");
  summarize->add_option("--timeout-ms", sum_timeout, "per-request adapter timeout")
      ->check(CLI::PositiveNumber);
  summarize->add_option("--workers", sum_workers, "worker threads / adapter processes")
      ->envname("DANCER_WORKERS")
      ->check(CLI::PositiveNumber);

  // evaluate
  auto* evaluate_cmd = app.add_subcommand("evaluate", "score hypotheses against reference abstracts");
  CorpusArgs eval_refs;
  std::string eval_hyps, eval_out;
  bool eval_json = false, eval_stemming = false;
  EvalOptions eval_options;
  evaluate_cmd->add_option("--hyps", eval_hyps, "hypotheses JSONL from `summarize`")->required();
  eval_refs.input.clear();
  evaluate_cmd->add_option("--refs", eval_refs.input, "reference corpus (JSONL)")->required();
  evaluate_cmd->add_option("--format", eval_refs.format, "reference layout: arxiv-pubmed|native")
      ->check(CLI::IsMember({"arxiv-pubmed", "native"}));
  evaluate_cmd->add_flag("--stemming", eval_stemming, "Porter-stem tokens before scoring");
  evaluate_cmd->add_option("--seed", eval_options.seed, "bootstrap RNG seed");
  evaluate_cmd->add_option("--resamples", eval_options.resamples, "bootstrap resamples")
      ->check(CLI::PositiveNumber);
  evaluate_cmd->add_option("--confidence", eval_options.confidence, "CI confidence level");
  evaluate_cmd->add_option("--out", eval_out, "output file (default: stdout)");
  evaluate_cmd->add_flag("--json", eval_json, "machine-readable report");
  evaluate_cmd->add_option("--workers", eval_options.workers, "worker threads")
      ->envname("DANCER_WORKERS")
      ->check(CLI::PositiveNumber);

  // score
  auto* score = app.add_subcommand("score", "ad-hoc ROUGE between two text files");
  std::string score_candidate, score_reference;
  bool score_stemming = false, score_json = false;
  score->add_option("--candidate", score_candidate, "candidate text file")->required();
  score->add_option("--reference", score_reference, "reference text file")->required();
  score->add_flag("--stemming", score_stemming, "Porter-stem tokens before scoring");
  score->add_flag("--json", score_json, "machine-readable report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (*ingest) return run_ingest(ingest_corpus, ingest_out);
    if (*split) return run_split(split_corpus, split_gen, split_out, split_workers);
    if (*stats)
      return run_stats(stats_corpus, stats_gen, stats_out, stats_json, stats_multiset,
                       stats_workers);
    if (*summarize)
      return run_summarize(sum_corpus, sum_gen, sum_out, sum_spec, sum_block, sum_timeout,
                           sum_workers);
    if (*evaluate_cmd) {
      eval_options.stemming = eval_stemming;
      return run_evaluate(eval_hyps, eval_refs, eval_options, eval_out, eval_json);
    }
    if (*score) return run_score(score_candidate, score_reference, score_stemming, score_json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
