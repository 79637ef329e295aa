#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace coklab {

/// A weakly decreasing list of positive integers. The empty partition is the
/// type of the trivial group.
class Partition {
 public:
  Partition() = default;

  /// Throws InvalidArgument unless parts are positive and weakly decreasing.
  explicit Partition(std::vector<int> parts);

  /// Sorts descending and drops zeros; never throws.
  static Partition from_unsorted(std::vector<int> parts);

  /// Accepts "[2 1]", "[]", "2 1", "2,1" and "(2,1)".
  static Partition parse(std::string_view text);

  const std::vector<int>& parts() const noexcept { return parts_; }
  int length() const noexcept { return static_cast<int>(parts_.size()); }
  int size() const noexcept;
  int largest() const noexcept { return parts_.empty() ? 0 : parts_.front(); }
  bool empty() const noexcept { return parts_.empty(); }

  /// Part i (zero-based); zero past the end.
  int operator[](std::size_t i) const noexcept { return i < parts_.size() ? parts_[i] : 0; }

  /// Componentwise containment: (*this)_i <= other_i for all i.
  bool fits_inside(const Partition& other) const noexcept;

  /// Parts clamped to at most `cap`.
  Partition truncated(int cap) const;

  std::string to_string() const;

  friend bool operator==(const Partition&, const Partition&) = default;
  friend std::strong_ordering operator<=>(const Partition& a, const Partition& b) {
    return a.parts_ <=> b.parts_;
  }

 private:
  std::vector<int> parts_;
};

Partition conjugate(const Partition& lambda);

/// All partitions with parts <= max_part and at most max_length parts, ordered
/// by size and then lexicographically. Every partition precedes the ones that
/// contain it.
std::vector<Partition> partitions_in_box(int max_part, int max_length);

/// All partitions of total size <= max_size.
std::vector<Partition> partitions_up_to(int max_size);

}  // namespace coklab
