#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace speller {

// Character matrix. Characters are indexed row-major: index = row * cols + col.
class GridLayout {
 public:
  GridLayout(int rows, int cols);
  GridLayout(int rows, int cols, std::vector<std::string> labels);

  // 8 x 9, 72 characters.
  static GridLayout standard() { return GridLayout(8, 9); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int size() const { return rows_ * cols_; }
  const std::vector<std::string>& labels() const { return labels_; }

  int index(int row, int col) const { return row * cols_ + col; }
  int rowOf(int character) const { return character / cols_; }
  int colOf(int character) const { return character % cols_; }

  bool operator==(const GridLayout&) const = default;

 private:
  int rows_;
  int cols_;
  std::vector<std::string> labels_;
};

// A set of characters presented together, over a universe of M characters.
// Members are kept sorted and unique.
class FlashGroup {
 public:
  FlashGroup(int universe, std::vector<int> members);

  static FlashGroup fromMask(std::span<const std::uint8_t> mask);

  int universe() const { return universe_; }
  int size() const { return static_cast<int>(members_.size()); }
  const std::vector<int>& members() const { return members_; }

  bool contains(int character) const;

  // Dense 0/1 membership vector of length universe().
  std::vector<std::uint8_t> mask() const;

  bool operator==(const FlashGroup&) const = default;

 private:
  int universe_;
  std::vector<int> members_;
};

FlashGroup rowGroup(const GridLayout& grid, int row);
FlashGroup columnGroup(const GridLayout& grid, int col);

}  // namespace speller
