#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace lmplan {

using FactId = std::uint32_t;
using ActionId = std::uint32_t;

/// Fixed-universe bitset over fact ids.
///
/// All sets belonging to one task share the same universe size, so binary
/// operations assume equal word counts.
class FactSet {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  FactSet() = default;
  explicit FactSet(std::size_t universe)
      : universe_(universe), words_((universe + kWordBits - 1) / kWordBits, 0) {}

  static std::size_t words_for(std::size_t universe) {
    return (universe + kWordBits - 1) / kWordBits;
  }

  std::size_t universe() const { return universe_; }
  std::span<const Word> words() const { return words_; }
  std::span<Word> words() { return words_; }

  bool test(FactId f) const {
    return (words_[f / kWordBits] >> (f % kWordBits)) & 1u;
  }
  void set(FactId f) { words_[f / kWordBits] |= Word{1} << (f % kWordBits); }
  void reset(FactId f) { words_[f / kWordBits] &= ~(Word{1} << (f % kWordBits)); }
  void clear() { std::fill(words_.begin(), words_.end(), Word{0}); }

  std::size_t count() const {
    std::size_t n = 0;
    for (Word w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  bool empty() const {
    for (Word w : words_)
      if (w) return false;
    return true;
  }

  bool subset_of(const FactSet& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~other.words_[i]) return false;
    return true;
  }
  bool intersects(const FactSet& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & other.words_[i]) return true;
    return false;
  }

  FactSet& operator|=(const FactSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  FactSet& operator&=(const FactSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  /// Set difference.
  FactSet& operator-=(const FactSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }

  friend FactSet operator|(FactSet a, const FactSet& b) { return a |= b; }
  friend FactSet operator&(FactSet a, const FactSet& b) { return a &= b; }
  friend FactSet operator-(FactSet a, const FactSet& b) { return a -= b; }
  friend bool operator==(const FactSet&, const FactSet&) = default;

  /// Calls fn(FactId) for each member in ascending order.
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      Word w = words_[i];
      while (w) {
        const int bit = std::countr_zero(w);
        fn(static_cast<FactId>(i * kWordBits + static_cast<std::size_t>(bit)));
        w &= w - 1;
      }
    }
  }

  std::vector<FactId> to_vector() const {
    std::vector<FactId> out;
    for_each([&](FactId f) { out.push_back(f); });
    return out;
  }

  std::size_t hash() const {
    std::size_t h = 0xcbf29ce484222325ull;
    for (Word w : words_) {
      h ^= static_cast<std::size_t>(w);
      h *= 0x100000001b3ull;
      h ^= h >> 29;
    }
    return h;
  }

 private:
  std::size_t universe_ = 0;
  std::vector<Word> words_;
};

}  // namespace lmplan

template <>
struct std::hash<lmplan::FactSet> {
  std::size_t operator()(const lmplan::FactSet& s) const noexcept { return s.hash(); }
};
