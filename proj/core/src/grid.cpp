#include "speller/grid.hpp"

#include <algorithm>
#include <string_view>

#include "speller/errors.hpp"

namespace speller {
namespace {

constexpr std::string_view kSymbols =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789.,!?-_'\"()";

std::vector<std::string> defaultLabels(int count) {
  std::vector<std::string> labels;
  labels.reserve(count);
  for (int i = 0; i < count; ++i) {
    if (i < static_cast<int>(kSymbols.size())) {
      labels.emplace_back(1, kSymbols[i]);
    } else {
      labels.push_back("#" + std::to_string(i));
    }
  }
  return labels;
}

}  // namespace

GridLayout::GridLayout(int rows, int cols)
    : GridLayout(rows, cols, rows > 0 && cols > 0 ? defaultLabels(rows * cols)
                                                  : std::vector<std::string>{}) {}

GridLayout::GridLayout(int rows, int cols, std::vector<std::string> labels)
    : rows_(rows), cols_(cols), labels_(std::move(labels)) {
  if (rows < 1 || cols < 1) {
    throw InvalidArgument("grid rows and cols must be positive");
  }
  if (rows * cols < 2) {
    throw InvalidArgument("grid must hold at least 2 characters");
  }
  if (static_cast<int>(labels_.size()) != rows * cols) {
    throw InvalidArgument("grid needs exactly rows*cols labels");
  }
}

FlashGroup::FlashGroup(int universe, std::vector<int> members)
    : universe_(universe), members_(std::move(members)) {
  if (universe < 1) throw InvalidArgument("flash group universe must be positive");
  std::sort(members_.begin(), members_.end());
  if (members_.empty()) throw InvalidArgument("flash group must not be empty");
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
    throw InvalidArgument("flash group members must be unique");
  }
  if (members_.front() < 0 || members_.back() >= universe) {
    throw InvalidArgument("flash group member out of range");
  }
}

FlashGroup FlashGroup::fromMask(std::span<const std::uint8_t> mask) {
  std::vector<int> members;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] > 1) throw InvalidArgument("flash mask entries must be 0 or 1");
    if (mask[i]) members.push_back(static_cast<int>(i));
  }
  return FlashGroup(static_cast<int>(mask.size()), std::move(members));
}

bool FlashGroup::contains(int character) const {
  return std::binary_search(members_.begin(), members_.end(), character);
}

std::vector<std::uint8_t> FlashGroup::mask() const {
  std::vector<std::uint8_t> out(universe_, 0);
  for (int m : members_) out[m] = 1;
  return out;
}

FlashGroup rowGroup(const GridLayout& grid, int row) {
  if (row < 0 || row >= grid.rows()) throw InvalidArgument("row out of range");
  std::vector<int> members;
  for (int c = 0; c < grid.cols(); ++c) members.push_back(grid.index(row, c));
  return FlashGroup(grid.size(), std::move(members));
}

FlashGroup columnGroup(const GridLayout& grid, int col) {
  if (col < 0 || col >= grid.cols()) throw InvalidArgument("column out of range");
  std::vector<int> members;
  for (int r = 0; r < grid.rows(); ++r) members.push_back(grid.index(r, col));
  return FlashGroup(grid.size(), std::move(members));
}

}  // namespace speller
