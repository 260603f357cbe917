#pragma once

#include "tracestokes/types.hpp"

#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

namespace tracestokes {

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Square sparse matrix in compressed-row storage with sorted, unique column
/// indices per row.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  explicit SparseMatrix(Index n);  // zero matrix

  /// Sums duplicate entries. The result does not depend on triplet order up
  /// to floating-point summation of duplicates, which happens in input order.
  [[nodiscard]] static SparseMatrix from_triplets(Index n, std::vector<Triplet> triplets);
  [[nodiscard]] static SparseMatrix identity(Index n);

  [[nodiscard]] Index size() const { return n_; }
  [[nodiscard]] std::size_t nonzeros() const { return values_.size(); }

  [[nodiscard]] std::span<const Index> row_offsets() const { return row_ptr_; }
  [[nodiscard]] std::span<const Index> column_indices() const { return cols_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }

  /// Entry (i, j), zero if not stored.
  [[nodiscard]] double coeff(Index i, Index j) const;

  [[nodiscard]] double max_abs() const;
  /// max |A - A^T| over all entries.
  [[nodiscard]] double symmetry_defect() const;

  void scale(double alpha);

 private:
  Index n_ = 0;
  std::vector<Index> row_ptr_{0};
  std::vector<Index> cols_;
  std::vector<double> values_;
};

/// y = A x. Throws InputError on dimension mismatch.
[[nodiscard]] std::vector<double> matvec(const SparseMatrix& a, std::span<const double> x);
void matvec(const SparseMatrix& a, std::span<const double> x, std::span<double> y);

/// alpha A + beta B.
[[nodiscard]] SparseMatrix add(const SparseMatrix& a, double alpha, const SparseMatrix& b, double beta);

[[nodiscard]] double dot(std::span<const double> a, std::span<const double> b);
[[nodiscard]] double norm2(std::span<const double> a);

/// Block matrix term: rows of block `row_block`, columns of `col_block`.
struct BlockTerm {
  int row_block;
  int col_block;
  const SparseMatrix* matrix;
  double scale = 1.0;
};

/// Lagrange-multiplier constraint c^T x_block = 0.
struct BlockConstraint {
  int block;
  std::span<const double> vector;
};

/// Symmetric block system with bordered mean-value constraints.
///
/// Layout: unknown blocks in order, then one multiplier per constraint.
struct SaddleSystem {
  SparseMatrix matrix;
  std::vector<double> rhs;
  std::vector<Index> block_offsets;  // size num_blocks + 1
  Index num_constraints = 0;

  [[nodiscard]] Index dimension() const { return matrix.size(); }
  [[nodiscard]] std::span<const double> block(std::span<const double> x, int b) const;
  [[nodiscard]] double multiplier(std::span<const double> x, Index q) const;
};

/// Terms on off-diagonal blocks are used as given; callers pass both (i, j)
/// and (j, i) for symmetry.
[[nodiscard]] SaddleSystem assemble_saddle(std::span<const Index> block_sizes, std::span<const BlockTerm> terms,
                                           std::span<const BlockConstraint> constraints,
                                           std::span<const std::vector<double>> block_rhs);

enum class SolverMethod { Direct, Minres };

struct SolverOptions {
  double tol = 1e-10;
  /// 0 means 20 x dimension.
  Index max_iter = 0;
  SolverMethod method = SolverMethod::Direct;
};

struct SolveStats {
  double relative_residual = 0.0;
  Index iterations = 0;
};

/// Solver for one symmetric matrix and any number of right-hand sides. The
/// direct path factorizes once in the constructor (sparse LDL^T with AMD
/// ordering, falling back to sparse LU when that fails or is inaccurate).
/// Keeps a reference to `a`.
class SymmetricSolver {
 public:
  SymmetricSolver(const SparseMatrix& a, SolverOptions options = {});
  ~SymmetricSolver();
  SymmetricSolver(SymmetricSolver&&) noexcept;
  SymmetricSolver& operator=(SymmetricSolver&&) noexcept;

  /// Throws SolverError when ||b - A x|| / ||b|| > tol.
  [[nodiscard]] std::vector<double> solve(std::span<const double> b, SolveStats* stats = nullptr) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct ConstrainedSolution {
  std::vector<double> x;
  double multiplier = 0.0;
};

/// Solves A x + c lam = b, c^T x = 0 for symmetric A whose kernel is the
/// constants (sum(c) != 0). Direct: one dof pinned, then the c-mean is
/// removed. MINRES: the bordered system. Keeps a reference to `a`.
class ConstrainedSolver {
 public:
  ConstrainedSolver(const SparseMatrix& a, std::span<const double> c, SolverOptions options = {});
  ~ConstrainedSolver();
  ConstrainedSolver(ConstrainedSolver&&) noexcept;
  ConstrainedSolver& operator=(ConstrainedSolver&&) noexcept;

  /// Throws SolverError when the bordered residual exceeds tol relative to |b|.
  [[nodiscard]] ConstrainedSolution solve(std::span<const double> b, SolveStats* stats = nullptr) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

[[nodiscard]] std::vector<double> solve_symmetric(const SaddleSystem& system, const SolverOptions& options = {},
                                                  SolveStats* stats = nullptr);

/// Preconditioned MINRES with |diag(A)| scaling. Returns the iterate;
/// convergence is reported through stats (no throw).
[[nodiscard]] std::vector<double> minres(const SparseMatrix& a, std::span<const double> b, double tol,
                                         Index max_iter, SolveStats* stats = nullptr);

/// MatrixMarket coordinate export (general real).
void write_matrix_market(std::ostream& out, const SparseMatrix& a);

}  // namespace tracestokes
