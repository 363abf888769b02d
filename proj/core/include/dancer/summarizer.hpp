#pragma once

#include <array>
#include <chrono>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "dancer/corpus.hpp"

namespace dancer {

struct SummarizerSpec {
  enum class Kind { Lead, LexRank, SumBasic, External };

  Kind kind = Kind::Lead;
  std::size_t max_sentences = 10;  // lead n / extractive top-k
  double threshold = 0.1;          // lexrank similarity cutoff
  double damping = 0.85;           // lexrank random-jump factor
  std::string command;             // external adapter command line
  std::chrono::milliseconds timeout{30000};
  bool trigram_block = false;

  // "lead:10" | "lexrank[:k]" | "sumbasic[:k]" | "external:CMD".
  // Throws std::invalid_argument on anything else.
  static SummarizerSpec parse(std::string_view text);
};

// Runs a built-in extractive engine over one section. Selected sentences
// come back in source order. External specs are driven by the adapter pool
// in the compose module, not here.
std::vector<Sentence> summarize_section(std::span<const Sentence> source,
                                        const SummarizerSpec& spec);

// Power-iteration centrality over the TF-cosine sentence graph, edges at
// similarity >= threshold. Exposed for the oracle tests.
std::vector<double> lexrank_scores(std::span<const Sentence> source, double threshold,
                                   double damping);

// Tracks the trigrams of an emitted token prefix. allows() is a pure query;
// push() appends a token and records the new trailing trigram.
class TrigramBlocker {
 public:
  bool allows(const std::string& token) const;
  void push(const std::string& token);

  std::size_t emitted() const { return emitted_; }
  const std::unordered_set<std::string>& seen() const { return seen_; }

 private:
  std::unordered_set<std::string> seen_;  // space-joined trigrams
  std::array<std::string, 2> last_two_;
  std::size_t emitted_ = 0;
};

// Greedy filter: keeps each token unless it would repeat an emitted trigram.
std::vector<std::string> apply_trigram_blocking(std::span<const std::string> tokens);

}  // namespace dancer
