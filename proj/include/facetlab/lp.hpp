#ifndef FACETLAB_LP_HPP
#define FACETLAB_LP_HPP

#include <functional>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "facetlab/digraph.hpp"
#include "facetlab/rng.hpp"

namespace facetlab::lp {

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  mpq_class& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const mpq_class& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<mpq_class> data_;
};

// min c^T x subject to Ax = b, x >= 0.
struct StdFormLP {
  Matrix A;
  std::vector<mpq_class> b;
  std::vector<mpq_class> c;

  std::size_t num_rows() const { return A.rows(); }
  std::size_t num_cols() const { return A.cols(); }
};

// Ordered column indices; position r of the basis owns row r of x_B.
using Basis = std::vector<int>;

// Solves M x = rhs exactly (M square) by fraction-free elimination.
std::vector<mpq_class> solve_exact(const Matrix& M, const std::vector<mpq_class>& rhs);

struct BasicSolution {
  std::vector<mpq_class> x;  // length num_cols, zero outside the basis
  bool feasible = false;
};
BasicSolution basic_solution(const StdFormLP& lp, const Basis& basis);

struct ReducedCosts {
  std::vector<mpq_class> cbar;  // per column
  std::vector<mpq_class> y;     // per row
};
ReducedCosts reduced_costs(const StdFormLP& lp, const Basis& basis);

mpq_class objective_value(const StdFormLP& lp, const std::vector<mpq_class>& x);

struct PivotStep {
  Basis basis;
  int leaving = -1;
};
// Enters column i (requires cbar_i < 0 and a feasible basis).
PivotStep pivot_lp(const StdFormLP& lp, const Basis& basis, int entering);

struct ShortestPathLP {
  StdFormLP lp;
  // Column j is edge j. Rows are the non-target vertices.
  std::vector<int> row_of_vertex;  // -1 at the target
  std::vector<VertexId> vertex_of_row;
};
ShortestPathLP sp_to_lp(const Digraph& g);
Basis basis_from_policy(const ShortestPathLP& sp, const Policy& b);
Policy policy_from_basis(const Digraph& g, const Basis& basis);

struct LpRun {
  Basis basis;
  std::uint64_t pivots = 0;
  std::vector<std::pair<int, int>> pivot_log;  // (entering, leaving) columns
};

using LpPivotObserver = std::function<void(const Basis& after, int entering, int leaving)>;

// Random-Facet on the columns in F (sorted or not), choosing the k-th
// smallest column of F minus the basis with k uniform; this matches the
// graph engine's choice for the same seed.
LpRun random_facet_lp(const StdFormLP& lp, const std::vector<int>& F, const Basis& basis,
                      Rng& rng, const LpPivotObserver& observer = {});

}  // namespace facetlab::lp

#endif
