#include "posttitle/rouge.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "posttitle/error.hpp"

namespace posttitle {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

// Decodes one code point starting at text[i] and advances i. Malformed
// sequences consume one byte and decode as U+FFFD.
char32_t next_code_point(std::string_view text, std::size_t& i) {
  const auto lead = static_cast<unsigned char>(text[i]);
  std::size_t extra = 0;
  char32_t cp = 0;
  if (lead < 0x80) {
    ++i;
    return lead;
  } else if ((lead & 0xE0) == 0xC0) {
    extra = 1;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    extra = 2;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    extra = 3;
    cp = lead & 0x07;
  } else {
    ++i;
    return kReplacement;
  }
  if (i + extra >= text.size()) {
    ++i;
    return kReplacement;
  }
  for (std::size_t k = 1; k <= extra; ++k) {
    const auto cont = static_cast<unsigned char>(text[i + k]);
    if ((cont & 0xC0) != 0x80) {
      ++i;
      return kReplacement;
    }
    cp = (cp << 6) | (cont & 0x3F);
  }
  i += 1 + extra;
  return cp;
}

bool is_unicode_space(char32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

bool is_ascii_punct(char c) {
  return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
         (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
}

void push_token(std::string_view raw, std::vector<std::string>& out) {
  std::size_t first = 0;
  std::size_t last = raw.size();
  while (first < last && is_ascii_punct(raw[first])) ++first;
  while (last > first && is_ascii_punct(raw[last - 1])) --last;
  if (first == last) return;
  std::string token(raw.substr(first, last - first));
  for (auto& c : token) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  out.push_back(std::move(token));
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::size_t ngram_count(std::size_t length, std::size_t n) {
  return length >= n ? length - n + 1 : 0;
}

using NgramCounts = std::map<std::span<const std::string>, std::size_t,
                             bool (*)(std::span<const std::string>,
                                      std::span<const std::string>)>;

bool span_less(std::span<const std::string> a, std::span<const std::string> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

NgramCounts count_ngrams(const TokenSeq& seq, std::size_t n) {
  NgramCounts counts(&span_less);
  const auto tokens = seq.tokens();
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[tokens.subspan(i, n)];
  }
  return counts;
}

}  // namespace

TokenSeq::TokenSeq(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  for (const auto& t : tokens_) {
    if (t.empty()) throw InvalidArg("token sequence contains an empty token");
  }
}

TokenSeq tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    const std::size_t at = i;
    const char32_t cp = next_code_point(text, i);
    if (is_unicode_space(cp)) {
      if (at > start) push_token(text.substr(start, at - start), tokens);
      start = i;
    }
  }
  if (text.size() > start) push_token(text.substr(start), tokens);
  return TokenSeq(std::move(tokens));
}

RougeScore RougeScore::from_ratios(double recall, double precision) {
  RougeScore s;
  s.recall = recall;
  s.precision = precision;
  const double sum = recall + precision;
  s.f1 = sum == 0.0 ? 0.0 : 2.0 * recall * precision / sum;
  return s;
}

std::size_t ngram_overlap(const TokenSeq& gold, const TokenSeq& generated,
                          std::size_t n) {
  if (n == 0) throw InvalidArg("n-gram order must be >= 1");
  const auto gold_counts = count_ngrams(gold, n);
  const auto gen_counts = count_ngrams(generated, n);
  std::size_t overlap = 0;
  for (const auto& [gram, count] : gen_counts) {
    const auto it = gold_counts.find(gram);
    if (it != gold_counts.end()) overlap += std::min(count, it->second);
  }
  return overlap;
}

RougeScore rouge_n(const TokenSeq& gold, const TokenSeq& generated, int n) {
  if (n < 1) throw InvalidArg("rouge_n: n must be >= 1, got " + std::to_string(n));
  const auto order = static_cast<std::size_t>(n);
  const auto overlap = ngram_overlap(gold, generated, order);
  return RougeScore::from_ratios(ratio(overlap, ngram_count(gold.size(), order)),
                                 ratio(overlap, ngram_count(generated.size(), order)));
}

std::size_t lcs_length(const TokenSeq& a, const TokenSeq& b) {
  if (a.empty() || b.empty()) return 0;
  // Two-row DP over the shorter sequence.
  const TokenSeq& outer = a.size() >= b.size() ? a : b;
  const TokenSeq& inner = a.size() >= b.size() ? b : a;
  std::vector<std::size_t> prev(inner.size() + 1, 0);
  std::vector<std::size_t> cur(inner.size() + 1, 0);
  for (std::size_t i = 1; i <= outer.size(); ++i) {
    for (std::size_t j = 1; j <= inner.size(); ++j) {
      cur[j] = outer[i - 1] == inner[j - 1] ? prev[j - 1] + 1
                                            : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[inner.size()];
}

RougeScore rouge_l(const TokenSeq& gold, const TokenSeq& generated) {
  const auto lcs = lcs_length(gold, generated);
  return RougeScore::from_ratios(ratio(lcs, gold.size()),
                                 ratio(lcs, generated.size()));
}

RougeTriple rouge_all(std::string_view gold, std::string_view generated) {
  const auto g = tokenize(gold);
  const auto h = tokenize(generated);
  return {rouge_n(g, h, 1), rouge_n(g, h, 2), rouge_l(g, h)};
}

}  // namespace posttitle
