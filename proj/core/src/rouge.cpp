#include "dancer/rouge.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace dancer {

std::size_t lcs_length(std::span<const std::string> x, std::span<const std::string> y) {
  return detail::lcs_length_impl(x, y);
}

std::size_t lcs_length(std::span<const int> x, std::span<const int> y) {
  return detail::lcs_length_impl(x, y);
}

double rouge_l_precision(std::span<const std::string> x, std::span<const std::string> y) {
  if (y.empty()) return 0.0;
  return static_cast<double>(lcs_length(x, y)) / static_cast<double>(y.size());
}

namespace {

double f1_of(double p, double r) { return (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

// N-grams are keyed by their space-joined form; tokens never contain spaces.
std::unordered_map<std::string, int> ngram_counts(std::span<const std::string> tokens, int n) {
  std::unordered_map<std::string, int> counts;
  if (n <= 0 || tokens.size() < static_cast<std::size_t>(n)) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (int k = 1; k < n; ++k) {
      key.push_back(' ');
      key += tokens[i + k];
    }
    ++counts[key];
  }
  return counts;
}

}  // namespace

RougeScore rouge_score(std::span<const std::string> candidate,
                       std::span<const std::string> reference, RougeVariant variant) {
  RougeScore score;
  if (candidate.empty() || reference.empty()) return score;

  if (variant.kind == RougeVariant::Kind::Lcs) {
    const double lcs = static_cast<double>(lcs_length(reference, candidate));
    score.precision = lcs / static_cast<double>(candidate.size());
    score.recall = lcs / static_cast<double>(reference.size());
  } else {
    const auto cand = ngram_counts(candidate, variant.n);
    const auto ref = ngram_counts(reference, variant.n);
    if (cand.empty() || ref.empty()) return score;
    std::size_t cand_total = 0, ref_total = 0, overlap = 0;
    for (const auto& [gram, count] : cand) {
      cand_total += count;
      auto it = ref.find(gram);
      if (it != ref.end()) overlap += std::min(count, it->second);
    }
    for (const auto& [gram, count] : ref) ref_total += count;
    score.precision = static_cast<double>(overlap) / static_cast<double>(cand_total);
    score.recall = static_cast<double>(overlap) / static_cast<double>(ref_total);
  }
  score.f1 = f1_of(score.precision, score.recall);
  return score;
}

std::pair<double, double> bootstrap_ci(std::span<const double> per_doc_scores, int resamples,
                                       double confidence, std::uint64_t seed) {
  if (per_doc_scores.empty()) throw std::invalid_argument("bootstrap_ci: empty sample");
  if (resamples < 1) throw std::invalid_argument("bootstrap_ci: resamples must be positive");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw std::invalid_argument("bootstrap_ci: confidence must lie in (0, 1)");

  const std::size_t n = per_doc_scores.size();
  std::mt19937_64 rng(seed);
  std::vector<double> means(static_cast<std::size_t>(resamples));
  for (auto& mean : means) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += per_doc_scores[rng() % n];
    mean = sum / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());

  auto quantile = [&](double p) {
    const double pos = p * static_cast<double>(means.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
    const double frac = pos - static_cast<double>(lo);
    return means[lo] * (1.0 - frac) + means[hi] * frac;
  };
  const double alpha = (1.0 - confidence) / 2.0;
  return {quantile(alpha), quantile(1.0 - alpha)};
}

std::vector<std::string> stem_tokens(const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(porter_stem(t));
  return out;
}

}  // namespace dancer
