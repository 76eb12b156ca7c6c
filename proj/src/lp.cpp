#include "facetlab/lp.hpp"

#include <algorithm>
#include <optional>
#include <string>

#include "facetlab/common.hpp"
#include "facetlab/rational.hpp"

namespace facetlab::lp {

namespace {

// Scales a rational row to integers by the lcm of its denominators.
void integerize_row(std::vector<mpz_class>& out, const std::vector<mpq_class>& row) {
  mpz_class l = 1;
  for (const auto& q : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  out.resize(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) out[j] = row[j].get_num() * (l / row[j].get_den());
}

Matrix basis_matrix(const StdFormLP& lp, const Basis& basis, bool transpose) {
  const std::size_t m = lp.num_rows();
  if (basis.size() != m) throw SingularBasis("basis size differs from row count");
  Matrix M(m, m);
  for (std::size_t k = 0; k < m; ++k) {
    const int col = basis[k];
    if (col < 0 || static_cast<std::size_t>(col) >= lp.num_cols())
      throw SingularBasis("basis column out of range");
    for (std::size_t r = 0; r < m; ++r) {
      if (transpose)
        M.at(k, r) = lp.A.at(r, static_cast<std::size_t>(col));
      else
        M.at(r, k) = lp.A.at(r, static_cast<std::size_t>(col));
    }
  }
  return M;
}

std::vector<mpq_class> column(const StdFormLP& lp, int col) {
  std::vector<mpq_class> a(lp.num_rows());
  for (std::size_t r = 0; r < lp.num_rows(); ++r) a[r] = lp.A.at(r, static_cast<std::size_t>(col));
  return a;
}

}  // namespace

std::vector<mpq_class> solve_exact(const Matrix& M, const std::vector<mpq_class>& rhs) {
  const std::size_t n = M.rows();
  if (M.cols() != n || rhs.size() != n) throw SingularBasis("solve_exact needs a square system");
  // Augmented integer matrix; scaling a row and its right-hand side by the
  // same positive integer leaves the solution unchanged.
  std::vector<std::vector<mpz_class>> a(n);
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<mpq_class> row(n + 1);
    for (std::size_t c = 0; c < n; ++c) row[c] = M.at(r, c);
    row[n] = rhs[r];
    integerize_row(a[r], row);
  }
  mpz_class prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a[p][k] == 0) ++p;
    if (p == n) throw SingularBasis("basis matrix is singular");
    std::swap(a[p], a[k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j <= n; ++j) {
        a[i][j] = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  std::vector<mpq_class> x(n);
  for (std::size_t k = n; k-- > 0;) {
    mpq_class acc = a[k][n];
    for (std::size_t j = k + 1; j < n; ++j) acc -= mpq_class(a[k][j]) * x[j];
    x[k] = acc / mpq_class(a[k][k]);
  }
  return x;
}

BasicSolution basic_solution(const StdFormLP& lp, const Basis& basis) {
  std::vector<mpq_class> xb = solve_exact(basis_matrix(lp, basis, false), lp.b);
  BasicSolution out;
  out.x.assign(lp.num_cols(), 0);
  out.feasible = true;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    out.x[static_cast<std::size_t>(basis[k])] = xb[k];
    if (sgn(xb[k]) < 0) out.feasible = false;
  }
  return out;
}

ReducedCosts reduced_costs(const StdFormLP& lp, const Basis& basis) {
  std::vector<mpq_class> cb(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) cb[k] = lp.c[static_cast<std::size_t>(basis[k])];
  ReducedCosts out;
  out.y = solve_exact(basis_matrix(lp, basis, true), cb);
  out.cbar.resize(lp.num_cols());
  for (std::size_t j = 0; j < lp.num_cols(); ++j) {
    mpq_class v = lp.c[j];
    for (std::size_t r = 0; r < lp.num_rows(); ++r) {
      const mpq_class& a = lp.A.at(r, j);
      if (sgn(a) != 0) v -= out.y[r] * a;
    }
    out.cbar[j] = v;
  }
  return out;
}

mpq_class objective_value(const StdFormLP& lp, const std::vector<mpq_class>& x) {
  mpq_class total = 0;
  for (std::size_t j = 0; j < x.size(); ++j) total += lp.c[j] * x[j];
  return total;
}

PivotStep pivot_lp(const StdFormLP& lp, const Basis& basis, int entering) {
  if (entering < 0 || static_cast<std::size_t>(entering) >= lp.num_cols())
    throw PreconditionViolation("entering column out of range");
  if (std::find(basis.begin(), basis.end(), entering) != basis.end())
    throw PreconditionViolation("entering column is already basic");
  ReducedCosts rc = reduced_costs(lp, basis);
  if (sgn(rc.cbar[static_cast<std::size_t>(entering)]) >= 0)
    throw PreconditionViolation("entering column has non-negative reduced cost");
  Matrix B = basis_matrix(lp, basis, false);
  std::vector<mpq_class> xb = solve_exact(B, lp.b);
  std::vector<mpq_class> d = solve_exact(B, column(lp, entering));
  std::optional<std::size_t> best;
  mpq_class best_ratio;
  bool tie = false;
  for (std::size_t r = 0; r < d.size(); ++r) {
    if (sgn(xb[r]) < 0) throw PreconditionViolation("pivot from an infeasible basis");
    if (sgn(d[r]) <= 0) continue;
    mpq_class ratio = xb[r] / d[r];
    if (!best || ratio < best_ratio) {
      best = r;
      best_ratio = ratio;
      tie = false;
    } else if (ratio == best_ratio) {
      tie = true;
    }
  }
  if (!best) throw Unbounded("no leaving variable for column " + std::to_string(entering));
  if (tie || sgn(best_ratio) == 0)
    throw Degenerate("degenerate ratio test entering column " + std::to_string(entering));
  PivotStep step{basis, basis[*best]};
  step.basis[*best] = entering;
  return step;
}

ShortestPathLP sp_to_lp(const Digraph& g) {
  ShortestPathLP sp;
  sp.row_of_vertex.assign(g.num_vertices(), -1);
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (static_cast<VertexId>(v) == g.target()) continue;
    sp.row_of_vertex[v] = static_cast<int>(sp.vertex_of_row.size());
    sp.vertex_of_row.push_back(static_cast<VertexId>(v));
  }
  const std::size_t m = sp.vertex_of_row.size();
  sp.lp.A = Matrix(m, g.num_edges());
  sp.lp.b.assign(m, 1);
  sp.lp.c.resize(g.num_edges());
  for (std::size_t j = 0; j < g.num_edges(); ++j) {
    const Edge& e = g.edge(static_cast<EdgeId>(j));
    sp.lp.A.at(static_cast<std::size_t>(sp.row_of_vertex[static_cast<std::size_t>(e.tail)]), j) = 1;
    int head_row = sp.row_of_vertex[static_cast<std::size_t>(e.head)];
    if (head_row >= 0) sp.lp.A.at(static_cast<std::size_t>(head_row), j) = -1;
    sp.lp.c[j] = make_ratio(mpz_class(static_cast<long>(e.cost)), mpz_class(static_cast<long>(g.scale())));
  }
  return sp;
}

Basis basis_from_policy(const ShortestPathLP& sp, const Policy& b) {
  Basis basis;
  for (VertexId v : sp.vertex_of_row) basis.push_back(b.at(v));
  return basis;
}

Policy policy_from_basis(const Digraph& g, const Basis& basis) {
  std::vector<EdgeId> edges(basis.begin(), basis.end());
  return Policy::from_edges(g, edges);
}

namespace {

class FacetRunner {
 public:
  FacetRunner(const StdFormLP& lp, Rng& rng, const LpPivotObserver& observer)
      : lp_(lp), rng_(rng), observer_(observer) {}

  Basis run(std::vector<int> F, Basis basis) {
    std::sort(F.begin(), F.end());
    std::vector<int> candidates;
    for (int j : F) {
      if (std::find(basis.begin(), basis.end(), j) == basis.end()) candidates.push_back(j);
    }
    if (candidates.empty()) return basis;
    const int i = candidates[rng_.uniform_index(candidates.size())];
    std::vector<int> smaller;
    for (int j : F) {
      if (j != i) smaller.push_back(j);
    }
    Basis left = run(std::move(smaller), std::move(basis));
    ReducedCosts rc = reduced_costs(lp_, left);
    if (sgn(rc.cbar[static_cast<std::size_t>(i)]) >= 0) return left;
    PivotStep step = pivot_lp(lp_, left, i);
    ++result.pivots;
    result.pivot_log.emplace_back(i, step.leaving);
    if (observer_) observer_(step.basis, i, step.leaving);
    return run(std::move(F), std::move(step.basis));
  }

  LpRun result;

 private:
  const StdFormLP& lp_;
  Rng& rng_;
  const LpPivotObserver& observer_;
};

}  // namespace

LpRun random_facet_lp(const StdFormLP& lp, const std::vector<int>& F, const Basis& basis,
                      Rng& rng, const LpPivotObserver& observer) {
  for (int j : basis) {
    if (std::find(F.begin(), F.end(), j) == F.end())
      throw InvalidStart("basis column " + std::to_string(j) + " is not in F");
  }
  if (!basic_solution(lp, basis).feasible) throw InvalidStart("start basis is infeasible");
  FacetRunner runner(lp, rng, observer);
  Basis final_basis = runner.run(F, basis);
  runner.result.basis = std::move(final_basis);
  return std::move(runner.result);
}

}  // namespace facetlab::lp
