#pragma once

// Words over the alphabet {1..d}: the index set of free power series
// coefficients and of the truncated Fock basis.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncfa {

// A finite word in the letters {1,...,d}. The empty word is the monoid unit.
class Word {
 public:
  explicit Word(int d) : d_(d) { check_d(d); }
  Word(int d, std::vector<int> letters) : d_(d), letters_(std::move(letters)) {
    check_d(d);
    for (int a : letters_)
      if (a < 1 || a > d_) throw std::invalid_argument("word: letter out of range");
  }

  int d() const { return d_; }
  int length() const { return static_cast<int>(letters_.size()); }
  bool empty() const { return letters_.empty(); }
  const std::vector<int>& letters() const { return letters_; }
  int letter(int i) const { return letters_.at(static_cast<std::size_t>(i)); }

  Word concat(const Word& rhs) const {
    if (d_ != rhs.d_) throw std::invalid_argument("word_concat: alphabet size mismatch");
    std::vector<int> out = letters_;
    out.insert(out.end(), rhs.letters_.begin(), rhs.letters_.end());
    return Word(d_, std::move(out));
  }

  Word transpose() const {
    std::vector<int> out(letters_.rbegin(), letters_.rend());
    return Word(d_, std::move(out));
  }

  // Position of this word among all words of the same length, in
  // lexicographic order: the base-d expansion with the most significant
  // letter first. Fixes the canonical basis ordering used everywhere.
  std::uint64_t lex_index() const {
    std::uint64_t idx = 0;
    for (int a : letters_) idx = idx * static_cast<std::uint64_t>(d_) + static_cast<std::uint64_t>(a - 1);
    return idx;
  }

  static Word from_lex_index(int d, int length, std::uint64_t idx) {
    check_d(d);
    std::vector<int> letters(static_cast<std::size_t>(length));
    for (int i = length - 1; i >= 0; --i) {
      letters[static_cast<std::size_t>(i)] = static_cast<int>(idx % static_cast<std::uint64_t>(d)) + 1;
      idx /= static_cast<std::uint64_t>(d);
    }
    if (idx != 0) throw std::invalid_argument("from_lex_index: index out of range");
    return Word(d, std::move(letters));
  }

  // Canonical text form: concatenated decimal letters, "e" for the empty
  // word. Only alphabets with d <= 9 have an unambiguous encoding.
  std::string encode() const {
    if (d_ > 9) throw std::invalid_argument("word encoding requires d <= 9");
    if (letters_.empty()) return "e";
    std::string s;
    s.reserve(letters_.size());
    for (int a : letters_) s.push_back(static_cast<char>('0' + a));
    return s;
  }

  static Word decode(int d, const std::string& text) {
    check_d(d);
    if (d > 9) throw std::invalid_argument("word encoding requires d <= 9");
    if (text == "e") return Word(d);
    std::vector<int> letters;
    letters.reserve(text.size());
    for (char c : text) {
      if (c < '1' || c > '0' + d) throw std::invalid_argument("word decode: bad letter '" + std::string(1, c) + "'");
      letters.push_back(c - '0');
    }
    return Word(d, std::move(letters));
  }

  friend bool operator==(const Word& a, const Word& b) {
    return a.d_ == b.d_ && a.letters_ == b.letters_;
  }
  friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }

 private:
  static void check_d(int d) {
    if (d < 1) throw std::invalid_argument("word: alphabet size must be >= 1");
  }
  int d_;
  std::vector<int> letters_;
};

// d^length, guarding against 64-bit overflow.
inline std::uint64_t words_of_length(int d, int length) {
  std::uint64_t n = 1;
  for (int i = 0; i < length; ++i) {
    if (n > UINT64_MAX / static_cast<std::uint64_t>(d)) throw std::overflow_error("words_of_length: d^l overflows");
    n *= static_cast<std::uint64_t>(d);
  }
  return n;
}

// All d^length words of the given length, lexicographically ordered.
inline std::vector<Word> enumerate_words(int d, int length) {
  if (d < 1) throw std::invalid_argument("enumerate_words: d must be >= 1");
  if (length < 0) throw std::invalid_argument("enumerate_words: length must be >= 0");
  std::uint64_t count = words_of_length(d, length);
  std::vector<Word> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(Word::from_lex_index(d, length, i));
  return out;
}

inline Word word_concat(const Word& a, const Word& b) { return a.concat(b); }
inline Word word_transpose(const Word& w) { return w.transpose(); }

}  // namespace ncfa
