#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace posttitle {

// Normalized word tokens. Never holds an empty token.
class TokenSeq {
 public:
  TokenSeq() = default;
  // Throws InvalidArg if any token is empty.
  explicit TokenSeq(std::vector<std::string> tokens);

  std::span<const std::string> tokens() const noexcept { return tokens_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }
  const std::string& operator[](std::size_t i) const { return tokens_[i]; }

  auto begin() const noexcept { return tokens_.begin(); }
  auto end() const noexcept { return tokens_.end(); }

  friend bool operator==(const TokenSeq&, const TokenSeq&) = default;

 private:
  std::vector<std::string> tokens_;
};

// Lowercases ASCII letters, splits on Unicode whitespace, strips leading and
// trailing ASCII punctuation from each token and drops empty tokens.
TokenSeq tokenize(std::string_view text);

struct RougeScore {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;

  // Harmonic mean of the two ratios; 0 when both are 0.
  static RougeScore from_ratios(double recall, double precision);
};

// Clipped n-gram overlap: each distinct n-gram contributes
// min(count in gold, count in generated).
std::size_t ngram_overlap(const TokenSeq& gold, const TokenSeq& generated,
                          std::size_t n);

// ROUGE-N. A side without any n-gram yields a 0 ratio. Throws InvalidArg
// when n < 1.
RougeScore rouge_n(const TokenSeq& gold, const TokenSeq& generated, int n);

std::size_t lcs_length(const TokenSeq& a, const TokenSeq& b);

// ROUGE-L over the longest common subsequence of the two token sequences.
RougeScore rouge_l(const TokenSeq& gold, const TokenSeq& generated);

struct RougeTriple {
  RougeScore rouge1;
  RougeScore rouge2;
  RougeScore rougeL;
};

RougeTriple rouge_all(std::string_view gold, std::string_view generated);

}  // namespace posttitle
