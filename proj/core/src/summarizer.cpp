#include "dancer/summarizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace dancer {

namespace {

std::vector<Sentence> pick_in_source_order(std::span<const Sentence> source,
                                           std::vector<std::size_t> chosen) {
  std::sort(chosen.begin(), chosen.end());
  std::vector<Sentence> out;
  out.reserve(chosen.size());
  for (std::size_t i : chosen) out.push_back(source[i]);
  return out;
}

std::vector<Sentence> lead(std::span<const Sentence> source, std::size_t n) {
  const std::size_t take = std::min(n, source.size());
  return {source.begin(), source.begin() + take};
}

std::vector<Sentence> lexrank(std::span<const Sentence> source, const SummarizerSpec& spec) {
  const auto scores = lexrank_scores(source, spec.threshold, spec.damping);
  std::vector<std::size_t> order(source.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  order.resize(std::min(spec.max_sentences, order.size()));
  return pick_in_source_order(source, std::move(order));
}

std::vector<Sentence> sumbasic(std::span<const Sentence> source, std::size_t k) {
  std::unordered_map<std::string, double> prob;
  std::size_t total = 0;
  for (const auto& s : source) {
    for (const auto& t : s.tokens) {
      prob[t] += 1.0;
      ++total;
    }
  }
  if (total == 0) return {};
  for (auto& [_, p] : prob) p /= static_cast<double>(total);

  std::vector<bool> selected(source.size(), false);
  std::vector<std::size_t> chosen;
  const std::size_t want = std::min(k, source.size());
  while (chosen.size() < want) {
    double best = -1.0;
    std::size_t best_idx = source.size();
    for (std::size_t i = 0; i < source.size(); ++i) {
      if (selected[i] || source[i].tokens.empty()) continue;
      double sum = 0.0;
      for (const auto& t : source[i].tokens) sum += prob[t];
      const double avg = sum / static_cast<double>(source[i].tokens.size());
      if (avg > best) {
        best = avg;
        best_idx = i;
      }
    }
    if (best_idx == source.size()) break;
    selected[best_idx] = true;
    chosen.push_back(best_idx);
    // Squaring demotes the words just covered.
    for (const auto& t : source[best_idx].tokens) prob[t] *= prob[t];
  }
  return pick_in_source_order(source, std::move(chosen));
}

}  // namespace

std::vector<double> lexrank_scores(std::span<const Sentence> source, double threshold,
                                   double damping) {
  const std::size_t n = source.size();
  std::vector<double> scores(n, n ? 1.0 / static_cast<double>(n) : 0.0);
  if (n <= 1) return scores;

  // TF vectors and norms.
  std::vector<std::unordered_map<std::string, double>> tf(n);
  std::vector<double> norm(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& t : source[i].tokens) tf[i][t] += 1.0;
    for (const auto& [_, c] : tf[i]) norm[i] += c * c;
    norm[i] = std::sqrt(norm[i]);
  }
  auto cosine = [&](std::size_t a, std::size_t b) {
    if (norm[a] == 0.0 || norm[b] == 0.0) return 0.0;
    const auto& small = tf[a].size() <= tf[b].size() ? tf[a] : tf[b];
    const auto& large = tf[a].size() <= tf[b].size() ? tf[b] : tf[a];
    double dot = 0.0;
    for (const auto& [t, c] : small) {
      auto it = large.find(t);
      if (it != large.end()) dot += c * it->second;
    }
    return dot / (norm[a] * norm[b]);
  };

  std::vector<std::vector<double>> weight(n, std::vector<double>(n, 0.0));
  std::vector<double> row_sum(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double sim = cosine(i, j);
      if (sim >= threshold) {
        weight[i][j] = sim;
        weight[j][i] = sim;
        row_sum[i] += sim;
        row_sum[j] += sim;
      }
    }
  }

  const double jump = (1.0 - damping) / static_cast<double>(n);
  std::vector<double> next(n, 0.0);
  for (int iter = 0; iter < 100; ++iter) {
    std::fill(next.begin(), next.end(), jump);
    for (std::size_t i = 0; i < n; ++i) {
      if (row_sum[i] == 0.0) {
        // Dangling sentence: spread its mass uniformly.
        const double share = damping * scores[i] / static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j) next[j] += share;
      } else {
        const double scale = damping * scores[i] / row_sum[i];
        for (std::size_t j = 0; j < n; ++j) {
          if (weight[i][j] > 0.0) next[j] += scale * weight[i][j];
        }
      }
    }
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) delta += std::abs(next[i] - scores[i]);
    scores.swap(next);
    if (delta < 1e-6) break;
  }
  return scores;
}

std::vector<Sentence> summarize_section(std::span<const Sentence> source,
                                        const SummarizerSpec& spec) {
  if (source.empty()) return {};
  switch (spec.kind) {
    case SummarizerSpec::Kind::Lead:
      return lead(source, spec.max_sentences);
    case SummarizerSpec::Kind::LexRank:
      return lexrank(source, spec);
    case SummarizerSpec::Kind::SumBasic:
      return sumbasic(source, spec.max_sentences);
    case SummarizerSpec::Kind::External:
      throw std::logic_error("external summarizers run through the adapter pool");
  }
  return {};
}

bool TrigramBlocker::allows(const std::string& token) const {
  if (emitted_ < 2) return true;
  std::string key = last_two_[0];
  key.push_back(' ');
  key += last_two_[1];
  key.push_back(' ');
  key += token;
  return !seen_.count(key);
}

void TrigramBlocker::push(const std::string& token) {
  if (emitted_ >= 2) {
    std::string key = last_two_[0];
    key.push_back(' ');
    key += last_two_[1];
    key.push_back(' ');
    key += token;
    seen_.insert(std::move(key));
  }
  last_two_[0] = std::move(last_two_[1]);
  last_two_[1] = token;
  ++emitted_;
}

std::vector<std::string> apply_trigram_blocking(std::span<const std::string> tokens) {
  TrigramBlocker blocker;
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& token : tokens) {
    if (!blocker.allows(token)) continue;
    blocker.push(token);
    out.push_back(token);
  }
  return out;
}

SummarizerSpec SummarizerSpec::parse(std::string_view text) {
  SummarizerSpec spec;
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  const std::string_view arg =
      colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);

  auto parse_count = [&](std::size_t fallback) {
    if (arg.empty()) return fallback;
    std::size_t value = 0;
    for (char c : arg) {
      if (c < '0' || c > '9')
        throw std::invalid_argument("summarizer spec: bad sentence count '" + std::string(arg) + "'");
      value = value * 10 + static_cast<std::size_t>(c - '0');
    }
    if (value == 0) throw std::invalid_argument("summarizer spec: sentence count must be positive");
    return value;
  };

  if (name == "lead") {
    spec.kind = Kind::Lead;
    spec.max_sentences = parse_count(10);
  } else if (name == "lexrank") {
    spec.kind = Kind::LexRank;
    spec.max_sentences = parse_count(10);
  } else if (name == "sumbasic") {
    spec.kind = Kind::SumBasic;
    spec.max_sentences = parse_count(10);
  } else if (name == "external") {
    if (arg.empty()) throw std::invalid_argument("summarizer spec: external needs a command");
    spec.kind = Kind::External;
    spec.command = std::string(arg);
  } else {
    throw std::invalid_argument("summarizer spec: unknown kind '" + std::string(name) +
                                "' (expected lead|lexrank|sumbasic|external)");
  }
  return spec;
}

}  // namespace dancer
