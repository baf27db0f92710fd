#include "latvar/lattice.hpp"

#include <ostream>
#include <stdexcept>
#include <string>

namespace latvar {

long long LatticeSpec::state_count() const {
  long long count = 1;
  for (int d = 0; d < dimension; ++d) count *= side;
  return count;
}

void LatticeSpec::validate() const {
  if (dimension < 1 || dimension > 3) {
    throw std::invalid_argument("LatticeSpec: dimension must be 1, 2 or 3, got " +
                                std::to_string(dimension));
  }
  if (side < 1) {
    throw std::invalid_argument("LatticeSpec: side must be >= 1, got " +
                                std::to_string(side));
  }
}

ModifiedLaplacian::ModifiedLaplacian(long long size, int diagonal,
                                     std::vector<Entry> sorted_entries)
    : size_(size), diagonal_(diagonal), entries_(std::move(sorted_entries)) {
  row_off_begin_.assign(static_cast<std::size_t>(size_), 0);
  row_off_end_.assign(static_cast<std::size_t>(size_), 0);
  std::size_t i = 0;
  for (long long row = 0; row < size_; ++row) {
    row_off_begin_[static_cast<std::size_t>(row)] = i;
    while (i < entries_.size() && entries_[i].row == row && entries_[i].col < row) ++i;
    row_off_end_[static_cast<std::size_t>(row)] = i;
    if (i < entries_.size() && entries_[i].row == row && entries_[i].col == row) ++i;
  }
}

std::span<const ModifiedLaplacian::Entry> ModifiedLaplacian::row_off_diagonal(
    long long row) const {
  const auto r = static_cast<std::size_t>(row);
  return {entries_.data() + row_off_begin_[r], row_off_end_[r] - row_off_begin_[r]};
}

void ModifiedLaplacian::write_triplets(std::ostream& out) const {
  for (const Entry& e : entries_) {
    out << e.row + 1 << ' ' << e.col + 1 << ' ' << e.value << '\n';
  }
}

ModifiedLaplacian build_laplacian(const LatticeSpec& spec) {
  spec.validate();
  const long long n = spec.state_count();
  const long long side = spec.side;

  // Strides of the three axes under the row-major linearization; axis 1 is
  // outermost. A node's in-neighbors sit one step back along each axis.
  std::array<long long, 3> stride{0, 0, 0};
  long long s = 1;
  for (int axis = spec.dimension - 1; axis >= 0; --axis) {
    stride[static_cast<std::size_t>(axis)] = s;
    s *= side;
  }

  std::vector<ModifiedLaplacian::Entry> entries;
  entries.reserve(static_cast<std::size_t>(n) * (spec.dimension + 1));

  std::array<long long, 3> coord{1, 1, 1};
  for (long long row = 0; row < n; ++row) {
    // Axis 0 has the largest stride, so predecessors come out in ascending
    // column order and the whole triplet list stays sorted by (row, col).
    for (int axis = 0; axis < spec.dimension; ++axis) {
      if (coord[static_cast<std::size_t>(axis)] > 1) {
        entries.push_back({row, row - stride[static_cast<std::size_t>(axis)], -1.0});
      }
    }
    entries.push_back({row, row, static_cast<double>(spec.dimension)});

    // Advance the coordinate (last axis fastest).
    for (int axis = spec.dimension - 1; axis >= 0; --axis) {
      auto& c = coord[static_cast<std::size_t>(axis)];
      if (++c <= side) break;
      c = 1;
    }
  }
  return ModifiedLaplacian(n, spec.dimension, std::move(entries));
}

long long coordinate_to_index(const LatticeSpec& spec, const Coordinate& coord) {
  spec.validate();
  long long index = 0;
  for (int axis = 0; axis < spec.dimension; ++axis) {
    const long long c = coord.index[static_cast<std::size_t>(axis)];
    if (c < 1 || c > spec.side) {
      throw std::invalid_argument("coordinate_to_index: axis " + std::to_string(axis + 1) +
                                  " value " + std::to_string(c) + " outside [1, " +
                                  std::to_string(spec.side) + "]");
    }
    index = index * spec.side + (c - 1);
  }
  return index + 1;
}

Coordinate index_to_coordinate(const LatticeSpec& spec, long long index) {
  spec.validate();
  if (index < 1 || index > spec.state_count()) {
    throw std::invalid_argument("index_to_coordinate: index " + std::to_string(index) +
                                " outside [1, " + std::to_string(spec.state_count()) + "]");
  }
  Coordinate coord;
  long long rem = index - 1;
  for (int axis = spec.dimension - 1; axis >= 0; --axis) {
    coord.index[static_cast<std::size_t>(axis)] = rem % spec.side + 1;
    rem /= spec.side;
  }
  return coord;
}

int degree_of(const LatticeSpec& spec, const Coordinate& coord) {
  // Validates the coordinate; the grounded diagonal is uniform because the
  // leader absorbs every edge a boundary node is missing.
  (void)coordinate_to_index(spec, coord);
  return spec.dimension;
}

}  // namespace latvar
