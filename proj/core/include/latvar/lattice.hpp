#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace latvar {

/// Follower grid: dimension D in {1,2,3}, side length N, N^D states.
struct LatticeSpec {
  int dimension = 1;
  long long side = 1;

  [[nodiscard]] long long state_count() const;
  void validate() const;
};

/// 1-based lattice coordinate; only the first `dimension` entries are used.
/// Axis 1 is the outermost axis of the row-major linearization, matching the
/// stacked state vector [x_1^T ... x_N^T]^T.
struct Coordinate {
  std::array<long long, 3> index{1, 1, 1};

  [[nodiscard]] static Coordinate of(long long n) { return {{n, 1, 1}}; }
  [[nodiscard]] static Coordinate of(long long n, long long m) { return {{n, m, 1}}; }
  [[nodiscard]] static Coordinate of(long long n, long long m, long long l) {
    return {{n, m, l}};
  }
};

/// Grounded Laplacian of the directed lattice: lower triangular, diagonal D
/// everywhere (the leader supplies the missing in-neighbors on the boundary),
/// -1 per in-neighbor. Stored as CSR over (row, col) sorted triplets; the
/// leader itself is never a state.
class ModifiedLaplacian {
 public:
  struct Entry {
    long long row;  // 0-based; the text export is 1-based
    long long col;
    double value;
  };

  ModifiedLaplacian(long long size, int diagonal, std::vector<Entry> sorted_entries);

  [[nodiscard]] long long size() const { return size_; }
  [[nodiscard]] int diagonal() const { return diagonal_; }
  [[nodiscard]] const std::vector<Entry>& entries() const { return entries_; }

  /// Off-diagonal entries of one row (all have col < row).
  [[nodiscard]] std::span<const Entry> row_off_diagonal(long long row) const;

  /// One "row col value" triple per line, 1-based indices.
  void write_triplets(std::ostream& out) const;

 private:
  long long size_;
  int diagonal_;
  std::vector<Entry> entries_;               // sorted by (row, col), diagonal included
  std::vector<std::size_t> row_off_begin_;   // per-row slice of off-diagonal entries
  std::vector<std::size_t> row_off_end_;
};

[[nodiscard]] ModifiedLaplacian build_laplacian(const LatticeSpec& spec);

/// Row-major linearization, 1-based: (1,1,..) -> 1, last coordinate fastest.
[[nodiscard]] long long coordinate_to_index(const LatticeSpec& spec, const Coordinate& coord);
[[nodiscard]] Coordinate index_to_coordinate(const LatticeSpec& spec, long long index);

/// Diagonal entry at any coordinate; always the lattice dimension.
[[nodiscard]] int degree_of(const LatticeSpec& spec, const Coordinate& coord);

}  // namespace latvar
