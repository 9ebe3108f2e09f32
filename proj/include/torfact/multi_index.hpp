#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>

namespace torfact {

/// Exponent j of the character x -> exp(2 pi i j.x) on the torus T^k.
///
/// Stored inline (no heap) for k <= kMaxDim. The defaulted three-way
/// comparison orders first by dimension and then lexicographically, which is
/// the group order used for the plus/minus splitting.
class MultiIndex {
 public:
  static constexpr std::size_t kMaxDim = 8;

  MultiIndex() = default;
  explicit MultiIndex(std::size_t dim);
  MultiIndex(std::initializer_list<int> entries);
  explicit MultiIndex(std::span<const int> entries);

  static MultiIndex unit(std::size_t dim, std::size_t axis, int value = 1);

  std::size_t dim() const noexcept { return dim_; }
  int operator[](std::size_t i) const noexcept { return entries_[i]; }
  int& operator[](std::size_t i) noexcept { return entries_[i]; }
  std::span<const int> entries() const noexcept { return {entries_.data(), dim_}; }

  bool is_zero() const noexcept;
  /// Sign of the first nonzero entry (0 for the zero index).
  int lex_sign() const noexcept;
  int max_abs() const noexcept;

  MultiIndex operator-() const;
  MultiIndex& operator+=(const MultiIndex& other);
  MultiIndex& operator-=(const MultiIndex& other);
  friend MultiIndex operator+(MultiIndex a, const MultiIndex& b) { return a += b; }
  friend MultiIndex operator-(MultiIndex a, const MultiIndex& b) { return a -= b; }
  MultiIndex scaled(int factor) const;

  auto operator<=>(const MultiIndex&) const = default;
  bool operator==(const MultiIndex&) const = default;

  std::string to_string() const;

 private:
  std::uint8_t dim_ = 0;
  std::array<int, kMaxDim> entries_{};
};

std::ostream& operator<<(std::ostream& os, const MultiIndex& j);

}  // namespace torfact
