#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace beliefnet {

inline constexpr std::size_t kMaxFrameSize = 16;

/// Subset of a frame of discernment, bit i set iff class i is a member.
struct FocalSet {
  std::uint32_t bits = 0;

  constexpr FocalSet() = default;
  constexpr explicit FocalSet(std::uint32_t b) : bits(b) {}

  static constexpr FocalSet empty() { return FocalSet{}; }
  static constexpr FocalSet singleton(std::size_t index) {
    return FocalSet{std::uint32_t{1} << index};
  }

  constexpr bool is_empty() const { return bits == 0; }
  constexpr int cardinality() const { return std::popcount(bits); }
  constexpr bool is_singleton() const { return cardinality() == 1; }
  constexpr bool contains(std::size_t index) const { return (bits >> index) & 1u; }
  constexpr bool is_subset_of(FocalSet other) const { return (bits & ~other.bits) == 0; }

  friend constexpr FocalSet operator&(FocalSet a, FocalSet b) { return FocalSet{a.bits & b.bits}; }
  friend constexpr FocalSet operator|(FocalSet a, FocalSet b) { return FocalSet{a.bits | b.bits}; }
  friend constexpr auto operator<=>(FocalSet, FocalSet) = default;
};

/// Ordered list of distinct class labels. Copies share the label storage.
class Frame {
 public:
  Frame() = default;
  /// Throws std::invalid_argument on duplicate/empty labels or more than 16 classes.
  explicit Frame(std::vector<std::string> labels);

  std::size_t size() const { return labels_ ? labels_->size() : 0; }
  const std::vector<std::string>& labels() const;
  const std::string& label(std::size_t index) const { return labels().at(index); }

  /// Index of `name`, or -1 when absent.
  int find(std::string_view name) const;
  /// Index of `name`; throws std::invalid_argument when absent.
  std::size_t index_of(std::string_view name) const;

  FocalSet full() const { return FocalSet{(std::uint32_t{1} << size()) - 1u}; }
  FocalSet singleton(std::string_view name) const { return FocalSet::singleton(index_of(name)); }
  bool owns(FocalSet s) const { return (s.bits & ~full().bits) == 0; }
  FocalSet complement(FocalSet s) const { return FocalSet{full().bits & ~s.bits}; }

  /// All singletons in frame order.
  std::vector<FocalSet> singletons() const;

  /// "A|B" in frame order, "{}" for the empty set.
  std::string format(FocalSet s) const;
  /// Inverse of format; labels may come in any order. Throws on unknown labels.
  FocalSet parse(std::string_view text) const;

  friend bool operator==(const Frame& a, const Frame& b);

 private:
  std::shared_ptr<const std::vector<std::string>> labels_;
};

}  // namespace beliefnet
