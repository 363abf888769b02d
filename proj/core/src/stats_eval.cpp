#include "dancer/stats_eval.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace dancer {

namespace {

std::unordered_set<std::string> distinct_ngrams(std::span<const std::string> tokens, int n) {
  std::unordered_set<std::string> grams;
  if (n <= 0 || tokens.size() < static_cast<std::size_t>(n)) return grams;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (int k = 1; k < n; ++k) {
      key.push_back(' ');
      key += tokens[i + k];
    }
    grams.insert(std::move(key));
  }
  return grams;
}

std::unordered_map<std::string, std::uint64_t> ngram_multiset(std::span<const std::string> tokens,
                                                              int n) {
  std::unordered_map<std::string, std::uint64_t> grams;
  if (n <= 0 || tokens.size() < static_cast<std::size_t>(n)) return grams;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (int k = 1; k < n; ++k) {
      key.push_back(' ');
      key += tokens[i + k];
    }
    ++grams[key];
  }
  return grams;
}

struct CopyTally {
  std::uint64_t copied_distinct = 0;
  std::uint64_t total_distinct = 0;
  std::uint64_t copied_multiset = 0;
  std::uint64_t total_multiset = 0;
};

CopyTally copy_tally(std::span<const std::string> source, std::span<const std::string> target,
                     int n) {
  CopyTally tally;
  const auto source_grams = ngram_multiset(source, n);
  const auto target_grams = ngram_multiset(target, n);
  for (const auto& [gram, count] : target_grams) {
    ++tally.total_distinct;
    tally.total_multiset += count;
    auto it = source_grams.find(gram);
    if (it != source_grams.end()) {
      ++tally.copied_distinct;
      tally.copied_multiset += std::min(count, it->second);
    }
  }
  return tally;
}

}  // namespace

double copied_ngram_fraction(std::span<const std::string> source,
                             std::span<const std::string> target, int n, bool multiset) {
  const CopyTally tally = copy_tally(source, target, n);
  if (multiset) {
    return tally.total_multiset == 0
               ? 0.0
               : static_cast<double>(tally.copied_multiset) /
                     static_cast<double>(tally.total_multiset);
  }
  return tally.total_distinct == 0 ? 0.0
                                   : static_cast<double>(tally.copied_distinct) /
                                         static_cast<double>(tally.total_distinct);
}

void StatsAccumulator::add(const Document& doc, const GenConfig& config,
                           const KeywordTable& table, const GenOptions& options) {
  if (!doc.valid()) return;
  ++n_documents_;
  document_words_ += doc.body_word_count();
  summary_words_ += doc.summary_word_count();
  summary_sentences_ += doc.summary.size();

  const auto assignments = align_summary(doc, options.denominator);
  const auto examples = generate_examples(doc, config, table, options, assignments);
  n_examples_ += examples.size();
  for (const auto& ex : examples) {
    example_words_ += ex.source.size();
    target_words_ += ex.target.size();
  }
  tally_assignments(doc, table, assignments, assigned_counts_);

  std::vector<std::string> source;
  source.reserve(doc.body_word_count());
  for (const auto& sec : doc.sections) {
    for (const auto& sent : sec.sentences)
      source.insert(source.end(), sent.tokens.begin(), sent.tokens.end());
  }
  const std::vector<std::string> target = concat_tokens(doc.summary);
  for (int n = 1; n <= 4; ++n) {
    const CopyTally tally = copy_tally(source, target, n);
    copied_distinct_[n - 1] += tally.copied_distinct;
    total_distinct_[n - 1] += tally.total_distinct;
    copied_multiset_[n - 1] += tally.copied_multiset;
    total_multiset_[n - 1] += tally.total_multiset;
  }
}

void StatsAccumulator::merge(const StatsAccumulator& other) {
  n_documents_ += other.n_documents_;
  n_examples_ += other.n_examples_;
  document_words_ += other.document_words_;
  summary_words_ += other.summary_words_;
  summary_sentences_ += other.summary_sentences_;
  example_words_ += other.example_words_;
  target_words_ += other.target_words_;
  for (std::size_t i = 0; i < assigned_counts_.size(); ++i)
    assigned_counts_[i] += other.assigned_counts_[i];
  for (std::size_t i = 0; i < 4; ++i) {
    copied_distinct_[i] += other.copied_distinct_[i];
    total_distinct_[i] += other.total_distinct_[i];
    copied_multiset_[i] += other.copied_multiset_[i];
    total_multiset_[i] += other.total_multiset_[i];
  }
}

CorpusStats StatsAccumulator::corpus() const {
  CorpusStats stats;
  stats.n_documents = n_documents_;
  stats.n_examples = n_examples_;
  if (n_documents_ > 0) {
    stats.avg_document_words =
        static_cast<double>(document_words_) / static_cast<double>(n_documents_);
    stats.avg_summary_words =
        static_cast<double>(summary_words_) / static_cast<double>(n_documents_);
    stats.avg_summary_sentences =
        static_cast<double>(summary_sentences_) / static_cast<double>(n_documents_);
  }
  if (n_examples_ > 0) {
    stats.avg_example_words = static_cast<double>(example_words_) / static_cast<double>(n_examples_);
    stats.avg_target_words = static_cast<double>(target_words_) / static_cast<double>(n_examples_);
  }
  stats.section_distribution = distribution_from_counts(assigned_counts_);
  return stats;
}

CopyStats StatsAccumulator::copied(bool multiset) const {
  CopyStats stats;
  for (int n = 1; n <= 4; ++n) {
    const std::uint64_t copied = multiset ? copied_multiset_[n - 1] : copied_distinct_[n - 1];
    const std::uint64_t total = multiset ? total_multiset_[n - 1] : total_distinct_[n - 1];
    stats.per_n[n] = total == 0 ? 0.0 : static_cast<double>(copied) / static_cast<double>(total);
  }
  return stats;
}

namespace {

struct PairScores {
  RougeScore r1, r2, rl;
};

PairScores score_pair(const std::vector<std::string>& candidate,
                      const std::vector<std::string>& reference) {
  PairScores s;
  s.r1 = rouge_score(candidate, reference, RougeVariant::ngram(1));
  s.r2 = rouge_score(candidate, reference, RougeVariant::ngram(2));
  s.rl = rouge_score(candidate, reference, RougeVariant::lcs());
  return s;
}

VariantReport summarize_variant(const std::vector<RougeScore>& scores, const EvalOptions& options) {
  VariantReport report;
  std::vector<double> f1s;
  f1s.reserve(scores.size());
  for (const auto& s : scores) {
    report.mean.precision += s.precision;
    report.mean.recall += s.recall;
    report.mean.f1 += s.f1;
    f1s.push_back(s.f1);
  }
  const double n = static_cast<double>(scores.size());
  report.mean.precision /= n;
  report.mean.recall /= n;
  report.mean.f1 /= n;
  auto [lo, hi] = bootstrap_ci(f1s, options.resamples, options.confidence, options.seed);
  report.ci_lower = lo;
  report.ci_upper = hi;
  return report;
}

}  // namespace

EvalReport evaluate(const std::vector<SummaryHypothesis>& hypotheses,
                    const std::vector<Document>& references, const EvalOptions& options) {
  std::unordered_map<std::string, const SummaryHypothesis*> by_id;
  by_id.reserve(hypotheses.size());
  for (const auto& hyp : hypotheses) by_id.emplace(hyp.doc_id, &hyp);

  EvalReport report;
  std::vector<const Document*> joined_refs;
  std::vector<const SummaryHypothesis*> joined_hyps;
  std::unordered_set<std::string> matched;
  for (const auto& ref : references) {
    auto it = by_id.find(ref.doc_id);
    if (it == by_id.end()) {
      report.unmatched_references.push_back(ref.doc_id);
      continue;
    }
    matched.insert(ref.doc_id);
    joined_refs.push_back(&ref);
    joined_hyps.push_back(it->second);
  }
  for (const auto& hyp : hypotheses) {
    if (!matched.count(hyp.doc_id)) report.unmatched_hypotheses.push_back(hyp.doc_id);
  }
  if (joined_refs.empty()) throw std::runtime_error("evaluate: no hypothesis matches any reference");

  report.n_pairs = joined_refs.size();
  std::vector<PairScores> scores(joined_refs.size());
  const std::size_t workers = std::max<std::size_t>(options.workers, 1);
  auto score_at = [&](std::size_t i) {
    std::vector<std::string> candidate = tokenize(joined_hyps[i]->final);
    std::vector<std::string> reference = concat_tokens(joined_refs[i]->summary);
    if (options.stemming) {
      candidate = stem_tokens(candidate);
      reference = stem_tokens(reference);
    }
    scores[i] = score_pair(candidate, reference);
  };
  if (workers <= 1) {
    for (std::size_t i = 0; i < scores.size(); ++i) score_at(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < std::min(workers, scores.size()); ++w) {
      threads.emplace_back([&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= scores.size()) break;
          score_at(i);
        }
      });
    }
    for (auto& th : threads) th.join();
  }

  std::vector<RougeScore> r1, r2, rl;
  r1.reserve(scores.size());
  r2.reserve(scores.size());
  rl.reserve(scores.size());
  for (const auto& s : scores) {
    r1.push_back(s.r1);
    r2.push_back(s.r2);
    rl.push_back(s.rl);
  }
  report.variants["rouge-1"] = summarize_variant(r1, options);
  report.variants["rouge-2"] = summarize_variant(r2, options);
  report.variants["rouge-l"] = summarize_variant(rl, options);
  return report;
}

nlohmann::json to_json(const CorpusStats& stats) {
  nlohmann::json j;
  j["n_documents"] = stats.n_documents;
  j["n_examples"] = stats.n_examples;
  j["avg_document_words"] = stats.avg_document_words;
  j["avg_summary_words"] = stats.avg_summary_words;
  j["avg_example_words"] = stats.avg_example_words;
  j["avg_target_words"] = stats.avg_target_words;
  j["avg_summary_sentences"] = stats.avg_summary_sentences;
  nlohmann::json dist;
  for (const auto& [type, fraction] : stats.section_distribution)
    dist[std::string(to_string(type))] = fraction;
  j["section_distribution"] = std::move(dist);
  return j;
}

nlohmann::json to_json(const CopyStats& stats) {
  nlohmann::json j;
  for (const auto& [n, fraction] : stats.per_n) j[std::to_string(n)] = fraction;
  return j;
}

nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json j;
  j["n_pairs"] = report.n_pairs;
  nlohmann::json variants;
  for (const auto& [name, variant] : report.variants) {
    nlohmann::json v;
    v["precision"] = variant.mean.precision;
    v["recall"] = variant.mean.recall;
    v["f1"] = variant.mean.f1;
    v["f1_ci_lower"] = variant.ci_lower;
    v["f1_ci_upper"] = variant.ci_upper;
    variants[name] = std::move(v);
  }
  j["variants"] = std::move(variants);
  j["unmatched_hypotheses"] = report.unmatched_hypotheses;
  j["unmatched_references"] = report.unmatched_references;
  return j;
}

namespace {

std::string fixed(double value, int digits) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(digits);
  out << value;
  return out.str();
}

}  // namespace

std::string render_text(const CorpusStats& stats) {
  std::ostringstream out;
  out << "documents             " << stats.n_documents << '\n'
      << "examples              " << stats.n_examples << '\n'
      << "avg document words    " << fixed(stats.avg_document_words, 2) << '\n'
      << "avg summary words     " << fixed(stats.avg_summary_words, 2) << '\n'
      << "avg summary sentences " << fixed(stats.avg_summary_sentences, 2) << '\n'
      << "avg example words     " << fixed(stats.avg_example_words, 2) << '\n'
      << "avg target words      " << fixed(stats.avg_target_words, 2) << '\n'
      << "summary sentences per section type:\n";
  for (const auto& [type, fraction] : stats.section_distribution) {
    out << "  " << to_string(type);
    for (std::size_t pad = to_string(type).size(); pad < 14; ++pad) out << ' ';
    out << fixed(100.0 * fraction, 2) << "%\n";
  }
  return out.str();
}

std::string render_text(const CopyStats& stats) {
  std::ostringstream out;
  out << "copied n-grams (target n-grams found in source):\n";
  for (const auto& [n, fraction] : stats.per_n)
    out << "  " << n << "-grams  " << fixed(100.0 * fraction, 2) << "%\n";
  return out.str();
}

std::string render_text(const EvalReport& report) {
  std::ostringstream out;
  out << "pairs evaluated: " << report.n_pairs << '\n';
  if (!report.unmatched_hypotheses.empty())
    out << "unmatched hypotheses: " << report.unmatched_hypotheses.size() << '\n';
  if (!report.unmatched_references.empty())
    out << "unmatched references: " << report.unmatched_references.size() << '\n';
  out << "metric    precision   recall       f1     CI (f1)\n";
  for (const auto& [name, variant] : report.variants) {
    out << name;
    for (std::size_t pad = name.size(); pad < 10; ++pad) out << ' ';
    out << fixed(100.0 * variant.mean.precision, 2) << "       "
        << fixed(100.0 * variant.mean.recall, 2) << "    " << fixed(100.0 * variant.mean.f1, 2)
        << "    [" << fixed(100.0 * variant.ci_lower, 2) << ", "
        << fixed(100.0 * variant.ci_upper, 2) << "]\n";
  }
  return out.str();
}

}  // namespace dancer
