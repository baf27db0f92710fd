#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <sstream>

#include "latvar/lattice.hpp"

using namespace latvar;

namespace {

std::map<std::pair<long long, long long>, double> dense(const ModifiedLaplacian& lap) {
  std::map<std::pair<long long, long long>, double> m;
  for (const auto& e : lap.entries()) m[{e.row, e.col}] = e.value;
  return m;
}

}  // namespace

TEST_CASE("1D N=2 matrix") {
  const auto lap = build_laplacian({1, 2});
  const auto m = dense(lap);
  CHECK(lap.size() == 2);
  REQUIRE(m.size() == 3);
  CHECK(m.at({0, 0}) == 1.0);
  CHECK(m.at({1, 0}) == -1.0);
  CHECK(m.at({1, 1}) == 1.0);
}

TEST_CASE("2D N=1 single follower keeps both leader edges on the diagonal") {
  const auto lap = build_laplacian({2, 1});
  const auto m = dense(lap);
  CHECK(lap.size() == 1);
  REQUIRE(m.size() == 1);
  CHECK(m.at({0, 0}) == 2.0);
}

TEST_CASE("3D N=2 matrix matches the hand-built 8x8") {
  const auto lap = build_laplacian({3, 2});
  const auto m = dense(lap);
  CHECK(lap.size() == 8);
  // Diagonal all 3.
  for (long long i = 0; i < 8; ++i) CHECK(m.at({i, i}) == 3.0);
  // Predecessors at offsets 4 (axis 1), 2 (axis 2), 1 (axis 3) where the
  // coordinate permits.
  const std::map<std::pair<long long, long long>, double> expected_off{
      {{1, 0}, -1.0}, {{2, 0}, -1.0}, {{3, 2}, -1.0}, {{3, 1}, -1.0},
      {{4, 0}, -1.0}, {{5, 4}, -1.0}, {{5, 1}, -1.0}, {{6, 4}, -1.0},
      {{6, 2}, -1.0}, {{7, 6}, -1.0}, {{7, 5}, -1.0}, {{7, 3}, -1.0},
  };
  CHECK(m.size() == 8 + expected_off.size());
  for (const auto& [rc, v] : expected_off) {
    REQUIRE(m.count(rc) == 1);
    CHECK(m.at(rc) == v);
  }
}

TEST_CASE("entries are sorted, lower triangular, at most D off-diagonals of -1") {
  for (const LatticeSpec spec : {LatticeSpec{1, 7}, LatticeSpec{2, 5}, LatticeSpec{3, 4}}) {
    const auto lap = build_laplacian(spec);
    const auto& es = lap.entries();
    for (std::size_t i = 1; i < es.size(); ++i) {
      const bool sorted = es[i - 1].row < es[i].row ||
                          (es[i - 1].row == es[i].row && es[i - 1].col < es[i].col);
      CHECK(sorted);
    }
    for (const auto& e : es) {
      CHECK(e.row >= e.col);
      if (e.row == e.col) {
        CHECK(e.value == static_cast<double>(spec.dimension));
      } else {
        CHECK(e.value == -1.0);
      }
    }
    for (long long r = 0; r < lap.size(); ++r) {
      CHECK(lap.row_off_diagonal(r).size() <= static_cast<std::size_t>(spec.dimension));
    }
  }
}

TEST_CASE("row sums: zero interior, leader-edge count on the boundary") {
  const LatticeSpec spec{3, 4};
  const auto lap = build_laplacian(spec);
  std::vector<double> row_sum(static_cast<std::size_t>(lap.size()), 0.0);
  for (const auto& e : lap.entries()) row_sum[static_cast<std::size_t>(e.row)] += e.value;
  for (long long i = 1; i <= lap.size(); ++i) {
    const auto c = index_to_coordinate(spec, i);
    int leader_edges = 0;
    for (int a = 0; a < spec.dimension; ++a) {
      if (c.index[static_cast<std::size_t>(a)] == 1) ++leader_edges;
    }
    CHECK(row_sum[static_cast<std::size_t>(i - 1)] == static_cast<double>(leader_edges));
  }
}

TEST_CASE("2D block Toeplitz structure") {
  const long long N = 5;
  const auto lap = build_laplacian({2, N});
  const auto m = dense(lap);
  // Diagonal blocks all equal the N=1-row block; subdiagonal blocks are -I.
  for (long long b = 0; b < N; ++b) {
    for (long long r = 0; r < N; ++r) {
      for (long long c = 0; c < N; ++c) {
        const auto it = m.find({b * N + r, b * N + c});
        const double v = (it == m.end()) ? 0.0 : it->second;
        const auto it0 = m.find({r, c});
        const double v0 = (it0 == m.end()) ? 0.0 : it0->second;
        CHECK(v == v0);
        if (b > 0) {
          const auto its = m.find({b * N + r, (b - 1) * N + c});
          const double vs = (its == m.end()) ? 0.0 : its->second;
          CHECK(vs == (r == c ? -1.0 : 0.0));
        }
      }
    }
  }
}

TEST_CASE("coordinate linearization examples and round trip") {
  const LatticeSpec s23{2, 3};
  CHECK(coordinate_to_index(s23, Coordinate::of(1, 1)) == 1);
  CHECK(coordinate_to_index(s23, Coordinate::of(2, 1)) == 4);
  const LatticeSpec s32{3, 2};
  CHECK(coordinate_to_index(s32, Coordinate::of(2, 2, 2)) == 8);

  for (const LatticeSpec spec : {LatticeSpec{1, 9}, LatticeSpec{2, 6}, LatticeSpec{3, 3}}) {
    for (long long i = 1; i <= spec.state_count(); ++i) {
      CHECK(coordinate_to_index(spec, index_to_coordinate(spec, i)) == i);
    }
  }
}

TEST_CASE("degree is the dimension everywhere") {
  CHECK(degree_of({1, 5}, Coordinate::of(3)) == 1);
  CHECK(degree_of({2, 5}, Coordinate::of(1, 1)) == 2);
  CHECK(degree_of({3, 5}, Coordinate::of(4, 4, 4)) == 3);
}

TEST_CASE("rejects invalid specs and coordinates") {
  CHECK_THROWS_AS((void)build_laplacian({1, 0}), std::invalid_argument);
  CHECK_THROWS_AS((void)build_laplacian({4, 2}), std::invalid_argument);
  CHECK_THROWS_AS((void)coordinate_to_index({2, 3}, Coordinate::of(0, 1)), std::invalid_argument);
  CHECK_THROWS_AS((void)coordinate_to_index({2, 3}, Coordinate::of(1, 4)), std::invalid_argument);
  CHECK_THROWS_AS((void)index_to_coordinate({2, 3}, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)index_to_coordinate({2, 3}, 10), std::invalid_argument);
}

TEST_CASE("triplet export is 1-based") {
  std::ostringstream os;
  build_laplacian({1, 2}).write_triplets(os);
  CHECK(os.str() == "1 1 1\n2 1 -1\n2 2 1\n");
}
