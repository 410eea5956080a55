#pragma once

// Free-monoid combinatorics on d letters: words, the graded-lex index, and
// the reduction of L^{a*} L^b under L_k^* L_j = delta_kj I.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "ncmeasure/errors.hpp"

namespace ncm {

/// A word over the letters {1..d}; the empty word is the unit.
class Word {
 public:
  using Letter = std::uint8_t;

  Word() = default;
  Word(std::initializer_list<int> letters) {
    letters_.reserve(letters.size());
    for (int l : letters) push_back(l);
  }
  explicit Word(std::span<const int> letters) {
    letters_.reserve(letters.size());
    for (int l : letters) push_back(l);
  }

  /// Repeated letter: letter^n.
  static Word power(int letter, std::size_t n) {
    Word w;
    w.letters_.assign(n, checked(letter));
    return w;
  }

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  int operator[](std::size_t i) const { return letters_[i]; }
  const std::vector<Letter>& letters() const { return letters_; }

  void push_back(int letter) { letters_.push_back(checked(letter)); }

  /// Largest letter used, 0 for the unit word.
  int max_letter() const {
    return letters_.empty() ? 0 : *std::max_element(letters_.begin(), letters_.end());
  }

  /// Concatenation.
  friend Word operator*(const Word& a, const Word& b) {
    Word w;
    w.letters_.reserve(a.size() + b.size());
    w.letters_.insert(w.letters_.end(), a.letters_.begin(), a.letters_.end());
    w.letters_.insert(w.letters_.end(), b.letters_.begin(), b.letters_.end());
    return w;
  }

  Word prepend(int letter) const {
    Word w;
    w.letters_.reserve(size() + 1);
    w.letters_.push_back(checked(letter));
    w.letters_.insert(w.letters_.end(), letters_.begin(), letters_.end());
    return w;
  }

  /// Reversal (the transpose of the word).
  Word transpose() const {
    Word w = *this;
    std::reverse(w.letters_.begin(), w.letters_.end());
    return w;
  }

  bool starts_with(const Word& prefix) const {
    return prefix.size() <= size() && std::equal(prefix.letters_.begin(), prefix.letters_.end(), letters_.begin());
  }

  /// Suffix starting at position `from`.
  Word drop(std::size_t from) const {
    Word w;
    if (from < size()) w.letters_.assign(letters_.begin() + static_cast<std::ptrdiff_t>(from), letters_.end());
    return w;
  }

  std::string to_string() const {
    if (empty()) return "()";
    std::string s = "(";
    for (std::size_t i = 0; i < size(); ++i) {
      if (i) s += ',';
      s += std::to_string(letters_[i]);
    }
    return s + ")";
  }

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word& a, const Word& b) {
    if (auto c = a.size() <=> b.size(); c != 0) return c;
    return a.letters_ <=> b.letters_;
  }

 private:
  static Letter checked(int letter) {
    if (letter < 1 || letter > 255) throw SpecError("word letter out of range: " + std::to_string(letter));
    return static_cast<Letter>(letter);
  }

  std::vector<Letter> letters_;
};

/// Number of words of length <= n over d letters.
inline std::size_t word_count(int d, int n) {
  if (d < 1 || n < 0) return n < 0 ? 0 : 1;
  if (d == 1) return static_cast<std::size_t>(n) + 1;
  std::size_t total = 0, layer = 1;
  for (int k = 0; k <= n; ++k, layer *= static_cast<std::size_t>(d)) total += layer;
  return total;
}

/// Graded lexicographic enumeration of all words of length <= N.
///
/// Index arithmetic is closed form: words of length k start at
/// offset(k) = word_count(d, k - 1) and are ordered as base-d numerals.
class WordIndex {
 public:
  WordIndex(int d, int max_degree) : d_(d), n_(max_degree) {
    if (d < 1) throw SpecError("alphabet size must be at least 1");
    if (max_degree < 0) throw SpecError("degree must be non-negative");
    words_.reserve(word_count(d, max_degree));
    words_.emplace_back();
    for (std::size_t begin = 0, len = 0; len < static_cast<std::size_t>(max_degree); ++len) {
      const std::size_t end = words_.size();
      for (std::size_t i = begin; i < end; ++i) {
        for (int k = 1; k <= d; ++k) {
          Word w = words_[i];
          w.push_back(k);
          words_.push_back(std::move(w));
        }
      }
      begin = end;
    }
    powers_.assign(static_cast<std::size_t>(max_degree) + 2, 1);
    for (std::size_t k = 1; k < powers_.size(); ++k) powers_[k] = powers_[k - 1] * static_cast<std::size_t>(d);
  }

  int alphabet() const { return d_; }
  int degree() const { return n_; }
  std::size_t size() const { return words_.size(); }

  const Word& operator[](std::size_t i) const { return words_[i]; }
  const std::vector<Word>& words() const { return words_; }

  /// First index of the words of length `len`.
  std::size_t offset(std::size_t len) const { return len == 0 ? 0 : word_count(d_, static_cast<int>(len) - 1); }

  /// Number of words of length <= `deg` (a leading block of the index).
  std::size_t block(int deg) const { return word_count(d_, deg); }

  std::size_t index_of(const Word& w) const {
    if (w.size() > static_cast<std::size_t>(n_))
      throw BudgetError("word " + w.to_string() + " exceeds degree " + std::to_string(n_));
    std::size_t rank = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] > d_) throw SpecError("letter exceeds alphabet in " + w.to_string());
      rank = rank * static_cast<std::size_t>(d_) + static_cast<std::size_t>(w[i] - 1);
    }
    return offset(w.size()) + rank;
  }

  bool contains(const Word& w) const { return w.size() <= static_cast<std::size_t>(n_) && w.max_letter() <= d_; }

  /// Index of k·w given the index of w (|w| < N).
  std::size_t prepend_index(int letter, std::size_t idx) const {
    const std::size_t len = words_[idx].size();
    return offset(len + 1) + static_cast<std::size_t>(letter - 1) * powers_[len] + (idx - offset(len));
  }

  /// Index of w·k given the index of w (|w| < N).
  std::size_t append_index(std::size_t idx, int letter) const {
    const std::size_t len = words_[idx].size();
    return offset(len + 1) + (idx - offset(len)) * static_cast<std::size_t>(d_) + static_cast<std::size_t>(letter - 1);
  }

 private:
  int d_;
  int n_;
  std::vector<Word> words_;
  std::vector<std::size_t> powers_;
};

inline WordIndex enumerate(int d, int max_degree) { return WordIndex(d, max_degree); }

/// L^{a*} L^b in reduced form: zero, L^g (b = a g) or L^{g*} (a = b g).
struct Reduction {
  enum class Kind { Zero, Right, Left };
  Kind kind = Kind::Zero;
  Word word;

  friend bool operator==(const Reduction&, const Reduction&) = default;
};

inline Reduction reduce(const Word& alpha, const Word& beta) {
  if (beta.starts_with(alpha)) return {Reduction::Kind::Right, beta.drop(alpha.size())};
  if (alpha.starts_with(beta)) return {Reduction::Kind::Left, alpha.drop(beta.size())};
  return {};
}

}  // namespace ncm
