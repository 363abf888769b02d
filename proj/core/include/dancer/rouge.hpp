#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dancer {

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// N-gram overlap (n = 1, 2, ...) or longest-common-subsequence scoring.
struct RougeVariant {
  enum class Kind { NGram, Lcs };
  Kind kind = Kind::NGram;
  int n = 1;

  static RougeVariant ngram(int n) { return {Kind::NGram, n}; }
  static RougeVariant lcs() { return {Kind::Lcs, 0}; }
};

namespace detail {

template <typename T>
std::size_t lcs_length_impl(std::span<const T> x, std::span<const T> y) {
  const std::size_t nx = x.size(), ny = y.size();
  if (nx == 0 || ny == 0) return 0;
  std::vector<std::size_t> prev(ny + 1, 0), cur(ny + 1, 0);
  for (std::size_t i = 1; i <= nx; ++i) {
    for (std::size_t j = 1; j <= ny; ++j) {
      if (x[i - 1] == y[j - 1]) {
        cur[j] = prev[j - 1] + 1;
      } else {
        cur[j] = std::max(prev[j], cur[j - 1]);
      }
    }
    std::swap(prev, cur);
  }
  return prev[ny];
}

}  // namespace detail

std::size_t lcs_length(std::span<const std::string> x, std::span<const std::string> y);
std::size_t lcs_length(std::span<const int> x, std::span<const int> y);

// LCS(x, y) / |y|, with y as the candidate. Empty y scores 0.
double rouge_l_precision(std::span<const std::string> x, std::span<const std::string> y);

// Clipped multiset overlap for the n-gram kinds; LCS ratios otherwise.
// Degenerate inputs (either side empty, or shorter than n) score all zeros.
RougeScore rouge_score(std::span<const std::string> candidate,
                       std::span<const std::string> reference, RougeVariant variant);

inline constexpr std::uint64_t kDefaultBootstrapSeed = 12345;

// Percentile bootstrap of the sample mean. Throws std::invalid_argument on an
// empty sample or a confidence outside (0, 1).
std::pair<double, double> bootstrap_ci(std::span<const double> per_doc_scores, int resamples,
                                       double confidence,
                                       std::uint64_t seed = kDefaultBootstrapSeed);

// Porter (1980) stemmer over a lowercase ASCII word.
std::string porter_stem(std::string_view word);

std::vector<std::string> stem_tokens(const std::vector<std::string>& tokens);

}  // namespace dancer
