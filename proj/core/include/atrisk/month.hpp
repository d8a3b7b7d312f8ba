#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace atrisk {

/// A calendar month, stored as a flat index (year * 12 + month - 1) so that
/// adjacent months differ by exactly one.
struct Month {
  int index = 0;

  Month() = default;
  Month(int year, int month);

  int year() const { return index / 12; }
  int month() const { return index % 12 + 1; }

  Month operator+(int months) const { return from_index(index + months); }
  Month operator-(int months) const { return from_index(index - months); }
  int operator-(Month other) const { return index - other.index; }
  Month& operator++() { ++index; return *this; }

  auto operator<=>(const Month&) const = default;

  /// "YYYY-MM".
  std::string str() const;

  static Month from_index(int idx) { Month m; m.index = idx; return m; }

  /// Accepts "YYYY-MM", "YYYY-MM-DD", and "M/D/YYYY" (the FRED-MD CSV style).
  /// Throws ParseError otherwise.
  static Month parse(std::string_view text);
};

}  // namespace atrisk
