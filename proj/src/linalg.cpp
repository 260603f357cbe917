#include "tracestokes/linalg.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <numeric>
#include <ostream>
#include <string>

namespace tracestokes {

SparseMatrix::SparseMatrix(Index n) : n_(n), row_ptr_(static_cast<std::size_t>(n) + 1, 0) {}

SparseMatrix SparseMatrix::from_triplets(Index n, std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n) {
      throw InputError("triplet index out of range");
    }
  }
  std::stable_sort(triplets.begin(), triplets.end(),
                   [](const Triplet& a, const Triplet& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
  SparseMatrix m(n);
  m.cols_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  std::size_t k = 0;
  for (Index row = 0; row < n; ++row) {
    while (k < triplets.size() && triplets[k].row == row) {
      const Index col = triplets[k].col;
      double sum = 0.0;
      while (k < triplets.size() && triplets[k].row == row && triplets[k].col == col) {
        sum += triplets[k].value;
        ++k;
      }
      m.cols_.push_back(col);
      m.values_.push_back(sum);
    }
    m.row_ptr_[static_cast<std::size_t>(row) + 1] = static_cast<Index>(m.cols_.size());
  }
  return m;
}

SparseMatrix SparseMatrix::identity(Index n) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    t.push_back({i, i, 1.0});
  }
  return from_triplets(n, std::move(t));
}

double SparseMatrix::coeff(Index i, Index j) const {
  const auto begin = cols_.begin() + row_ptr_[static_cast<std::size_t>(i)];
  const auto end = cols_.begin() + row_ptr_[static_cast<std::size_t>(i) + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) {
    return 0.0;
  }
  return values_[static_cast<std::size_t>(it - cols_.begin())];
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (const double v : values_) {
    m = std::max(m, std::abs(v));
  }
  return m;
}

double SparseMatrix::symmetry_defect() const {
  double defect = 0.0;
  for (Index i = 0; i < n_; ++i) {
    for (Index k = row_ptr_[static_cast<std::size_t>(i)]; k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k) {
      const Index j = cols_[static_cast<std::size_t>(k)];
      defect = std::max(defect, std::abs(values_[static_cast<std::size_t>(k)] - coeff(j, i)));
    }
  }
  return defect;
}

void SparseMatrix::scale(double alpha) {
  for (double& v : values_) {
    v *= alpha;
  }
}

void matvec(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
  const auto n = static_cast<std::size_t>(a.size());
  if (x.size() != n || y.size() != n) {
    throw InputError("matvec dimension mismatch: matrix " + std::to_string(n) + ", vector " +
                     std::to_string(x.size()));
  }
  const auto rp = a.row_offsets();
  const auto ci = a.column_indices();
  const auto va = a.values();
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (auto k = static_cast<std::size_t>(rp[i]); k < static_cast<std::size_t>(rp[i + 1]); ++k) {
      s += va[k] * x[static_cast<std::size_t>(ci[k])];
    }
    y[i] = s;
  }
}

std::vector<double> matvec(const SparseMatrix& a, std::span<const double> x) {
  std::vector<double> y(static_cast<std::size_t>(a.size()));
  matvec(a, x, y);
  return y;
}

SparseMatrix add(const SparseMatrix& a, double alpha, const SparseMatrix& b, double beta) {
  if (a.size() != b.size()) {
    throw InputError("matrix sum dimension mismatch");
  }
  std::vector<Triplet> t;
  t.reserve(a.nonzeros() + b.nonzeros());
  for (const auto& [m, s] : {std::pair{&a, alpha}, std::pair{&b, beta}}) {
    const auto rp = m->row_offsets();
    const auto ci = m->column_indices();
    const auto va = m->values();
    for (Index i = 0; i < m->size(); ++i) {
      for (auto k = rp[static_cast<std::size_t>(i)]; k < rp[static_cast<std::size_t>(i) + 1]; ++k) {
        t.push_back({i, ci[static_cast<std::size_t>(k)], s * va[static_cast<std::size_t>(k)]});
      }
    }
  }
  return SparseMatrix::from_triplets(a.size(), std::move(t));
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InputError("dot product dimension mismatch");
  }
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

std::span<const double> SaddleSystem::block(std::span<const double> x, int b) const {
  const auto begin = static_cast<std::size_t>(block_offsets[static_cast<std::size_t>(b)]);
  const auto end = static_cast<std::size_t>(block_offsets[static_cast<std::size_t>(b) + 1]);
  return x.subspan(begin, end - begin);
}

double SaddleSystem::multiplier(std::span<const double> x, Index q) const {
  return x[static_cast<std::size_t>(block_offsets.back() + q)];
}

SaddleSystem assemble_saddle(std::span<const Index> block_sizes, std::span<const BlockTerm> terms,
                             std::span<const BlockConstraint> constraints,
                             std::span<const std::vector<double>> block_rhs) {
  SaddleSystem sys;
  sys.block_offsets.assign(block_sizes.size() + 1, 0);
  for (std::size_t b = 0; b < block_sizes.size(); ++b) {
    sys.block_offsets[b + 1] = sys.block_offsets[b] + block_sizes[b];
  }
  sys.num_constraints = static_cast<Index>(constraints.size());
  const Index n = sys.block_offsets.back() + sys.num_constraints;

  std::vector<Triplet> t;
  for (const auto& term : terms) {
    const Index r0 = sys.block_offsets[static_cast<std::size_t>(term.row_block)];
    const Index c0 = sys.block_offsets[static_cast<std::size_t>(term.col_block)];
    const SparseMatrix& m = *term.matrix;
    if (m.size() != block_sizes[static_cast<std::size_t>(term.row_block)] ||
        m.size() != block_sizes[static_cast<std::size_t>(term.col_block)]) {
      throw InputError("block term size does not match the block layout");
    }
    const auto rp = m.row_offsets();
    const auto ci = m.column_indices();
    const auto va = m.values();
    for (Index i = 0; i < m.size(); ++i) {
      for (auto k = rp[static_cast<std::size_t>(i)]; k < rp[static_cast<std::size_t>(i) + 1]; ++k) {
        t.push_back({r0 + i, c0 + ci[static_cast<std::size_t>(k)], term.scale * va[static_cast<std::size_t>(k)]});
      }
    }
  }
  for (std::size_t q = 0; q < constraints.size(); ++q) {
    const auto& c = constraints[q];
    const Index off = sys.block_offsets[static_cast<std::size_t>(c.block)];
    if (static_cast<Index>(c.vector.size()) != block_sizes[static_cast<std::size_t>(c.block)]) {
      throw InputError("constraint vector size does not match its block");
    }
    const Index row = sys.block_offsets.back() + static_cast<Index>(q);
    for (std::size_t i = 0; i < c.vector.size(); ++i) {
      if (c.vector[i] != 0.0) {
        t.push_back({row, off + static_cast<Index>(i), c.vector[i]});
        t.push_back({off + static_cast<Index>(i), row, c.vector[i]});
      }
    }
  }
  sys.matrix = SparseMatrix::from_triplets(n, std::move(t));

  sys.rhs.assign(static_cast<std::size_t>(n), 0.0);
  for (std::size_t b = 0; b < block_rhs.size() && b < block_sizes.size(); ++b) {
    if (block_rhs[b].empty()) {
      continue;
    }
    if (static_cast<Index>(block_rhs[b].size()) != block_sizes[b]) {
      throw InputError("right-hand side size does not match its block");
    }
    std::copy(block_rhs[b].begin(), block_rhs[b].end(), sys.rhs.begin() + sys.block_offsets[b]);
  }
  return sys;
}

namespace {

double relative_residual(const SparseMatrix& a, std::span<const double> x, std::span<const double> b,
                         std::vector<double>& r) {
  r.resize(b.size());
  matvec(a, x, r);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = b[i] - r[i];
  }
  const double bn = norm2(b);
  return bn == 0.0 ? norm2(r) : norm2(r) / bn;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

std::vector<double> minres(const SparseMatrix& a, std::span<const double> b, double tol, Index max_iter,
                           SolveStats* stats) {
  const auto n = static_cast<std::size_t>(a.size());
  if (b.size() != n) {
    throw InputError("right-hand side dimension mismatch");
  }
  std::vector<double> x(n, 0.0);
  std::vector<double> inv_diag(n, 1.0);
  for (Index i = 0; i < a.size(); ++i) {
    const double d = std::abs(a.coeff(i, i));
    if (d > 0.0) {
      inv_diag[static_cast<std::size_t>(i)] = 1.0 / d;
    }
  }
  auto precondition = [&](const std::vector<double>& in, std::vector<double>& out) {
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = inv_diag[i] * in[i];
    }
  };

  std::vector<double> r1(b.begin(), b.end());
  std::vector<double> r2 = r1;
  std::vector<double> y(n);
  std::vector<double> v(n);
  std::vector<double> w(n, 0.0);
  std::vector<double> w1(n, 0.0);
  std::vector<double> w2(n, 0.0);
  std::vector<double> residual;
  precondition(r1, y);
  const double beta1 = std::sqrt(std::max(0.0, dot(r1, y)));
  SolveStats local;
  if (beta1 == 0.0) {
    if (stats != nullptr) {
      *stats = local;
    }
    return x;
  }
  double oldb = 0.0;
  double beta = beta1;
  double dbar = 0.0;
  double epsln = 0.0;
  double phibar = beta1;
  double cs = -1.0;
  double sn = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();

  Index itn = 0;
  local.relative_residual = 1.0;
  while (itn < max_iter) {
    ++itn;
    const double s = 1.0 / beta;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = s * y[i];
    }
    matvec(a, v, y);
    if (itn >= 2) {
      const double f = beta / oldb;
      for (std::size_t i = 0; i < n; ++i) {
        y[i] -= f * r1[i];
      }
    }
    const double alfa = dot(v, y);
    const double f = alfa / beta;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] -= f * r2[i];
    }
    std::swap(r1, r2);
    r2 = y;
    precondition(r2, y);
    oldb = beta;
    beta = std::sqrt(std::max(0.0, dot(r2, y)));

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::max(std::hypot(gbar, beta), eps);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    std::swap(w1, w2);
    std::swap(w2, w);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) / gamma;
      x[i] += phi * w[i];
    }
    if (phibar / beta1 <= tol || beta == 0.0) {
      local.relative_residual = relative_residual(a, x, b, residual);
      if (local.relative_residual <= tol || beta == 0.0) {
        break;
      }
    }
  }
  if (itn >= max_iter) {
    local.relative_residual = relative_residual(a, x, b, residual);
  }
  local.iterations = itn;
  if (stats != nullptr) {
    *stats = local;
  }
  return x;
}

using EigenSparse = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using EigenVec = Eigen::VectorXd;

struct SymmetricSolver::Impl {
  const SparseMatrix* matrix = nullptr;
  SolverOptions options;
  EigenSparse eigen_matrix;
  Eigen::SimplicialLDLT<EigenSparse> ldlt;
  std::unique_ptr<Eigen::SparseLU<EigenSparse>> lu;

  [[nodiscard]] EigenVec apply(const EigenVec& b) const { return lu ? EigenVec(lu->solve(b)) : EigenVec(ldlt.solve(b)); }

  void factor_lu() {
    lu = std::make_unique<Eigen::SparseLU<EigenSparse>>();
    lu->compute(eigen_matrix);
    if (lu->info() != Eigen::Success) {
      throw SolverError("sparse LU factorization failed (singular matrix)");
    }
  }

  // Direct solve plus a few refinement steps.
  double direct(std::span<const double> b, std::vector<double>& x, SolveStats& stats) const {
    const auto n = static_cast<std::size_t>(b.size());
    const EigenVec sol = apply(Eigen::Map<const EigenVec>(b.data(), static_cast<Eigen::Index>(n)));
    x.assign(sol.data(), sol.data() + n);
    std::vector<double> r;
    double res = relative_residual(*matrix, x, b, r);
    stats.iterations = 0;
    for (int step = 0; step < 3 && res > options.tol && std::isfinite(res); ++step) {
      const EigenVec corr = apply(Eigen::Map<const EigenVec>(r.data(), static_cast<Eigen::Index>(n)));
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += corr[static_cast<Eigen::Index>(i)];
      }
      res = relative_residual(*matrix, x, b, r);
      stats.iterations = step + 1;
    }
    stats.relative_residual = res;
    return res;
  }
};

SymmetricSolver::SymmetricSolver(const SparseMatrix& a, SolverOptions options) : impl_(std::make_unique<Impl>()) {
  impl_->matrix = &a;
  impl_->options = options;
  if (impl_->options.max_iter <= 0) {
    impl_->options.max_iter = 20 * std::max<Index>(a.size(), 1);
  }
  if (options.method != SolverMethod::Direct) {
    return;
  }
  if (a.size() > std::numeric_limits<int>::max() / 2) {
    throw ResourceError("system too large for the direct solver");
  }
  std::vector<Eigen::Triplet<double, int>> t;
  t.reserve(static_cast<std::size_t>(a.nonzeros()));
  const auto rp = a.row_offsets();
  const auto ci = a.column_indices();
  const auto va = a.values();
  for (Index i = 0; i < a.size(); ++i) {
    for (auto k = rp[static_cast<std::size_t>(i)]; k < rp[static_cast<std::size_t>(i) + 1]; ++k) {
      t.emplace_back(static_cast<int>(i), static_cast<int>(ci[static_cast<std::size_t>(k)]),
                     va[static_cast<std::size_t>(k)]);
    }
  }
  impl_->eigen_matrix.resize(static_cast<int>(a.size()), static_cast<int>(a.size()));
  impl_->eigen_matrix.setFromTriplets(t.begin(), t.end());
  impl_->eigen_matrix.makeCompressed();
  // LDL^T without pivoting first; indefinite matrices may need LU.
  impl_->ldlt.compute(impl_->eigen_matrix);
  if (impl_->ldlt.info() != Eigen::Success) {
    impl_->factor_lu();
  }
}

SymmetricSolver::~SymmetricSolver() = default;
SymmetricSolver::SymmetricSolver(SymmetricSolver&&) noexcept = default;
SymmetricSolver& SymmetricSolver::operator=(SymmetricSolver&&) noexcept = default;

std::vector<double> SymmetricSolver::solve(std::span<const double> b, SolveStats* stats) const {
  const SparseMatrix& a = *impl_->matrix;
  if (static_cast<Index>(b.size()) != a.size()) {
    throw InputError("right-hand side dimension mismatch");
  }
  const double tol = impl_->options.tol;
  SolveStats local;
  std::vector<double> x;
  if (impl_->options.method == SolverMethod::Minres) {
    x = minres(a, b, tol, impl_->options.max_iter, &local);
  } else {
    const double res = impl_->direct(b, x, local);
    if (!(res <= tol) && !impl_->lu) {
      impl_->factor_lu();
      impl_->direct(b, x, local);
    }
  }
  if (stats != nullptr) {
    *stats = local;
  }
  if (!(local.relative_residual <= tol)) {
    throw SolverError("linear solve did not reach tolerance: relative residual " +
                      format_double(local.relative_residual) + " after " + std::to_string(local.iterations) +
                      " iterations (tol " + format_double(tol) + ")");
  }
  return x;
}

std::vector<double> solve_symmetric(const SaddleSystem& system, const SolverOptions& options, SolveStats* stats) {
  const SymmetricSolver solver(system.matrix, options);
  return solver.solve(system.rhs, stats);
}

struct ConstrainedSolver::Impl {
  SolverOptions options;
  const SparseMatrix* a = nullptr;
  std::vector<double> c;
  double c_sum = 0.0;
  Index pin = 0;
  SparseMatrix reduced;  // pinned (direct) or bordered (MINRES)
  std::unique_ptr<SymmetricSolver> solver;
};

ConstrainedSolver::ConstrainedSolver(const SparseMatrix& a, std::span<const double> c, SolverOptions options)
    : impl_(std::make_unique<Impl>()) {
  const Index n = a.size();
  if (static_cast<Index>(c.size()) != n || n == 0) {
    throw InputError("constraint vector dimension mismatch");
  }
  Impl& m = *impl_;
  m.options = options;
  m.a = &a;
  m.c.assign(c.begin(), c.end());
  m.c_sum = std::accumulate(c.begin(), c.end(), 0.0);
  if (!(std::abs(m.c_sum) > 0.0)) {
    throw InputError("constraint vector has zero sum; constants are not excluded");
  }

  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(a.nonzeros() + 2 * n));
  const auto rp = a.row_offsets();
  const auto ci = a.column_indices();
  const auto va = a.values();
  if (options.method == SolverMethod::Direct) {
    // Pin the dof with the largest diagonal; the kernel is the constants.
    double best = -1.0;
    for (Index i = 0; i < n; ++i) {
      const double d = a.coeff(i, i);
      if (d > best) {
        best = d;
        m.pin = i;
      }
    }
    for (Index i = 0; i < n; ++i) {
      for (auto k = rp[static_cast<std::size_t>(i)]; k < rp[static_cast<std::size_t>(i) + 1]; ++k) {
        const Index j = ci[static_cast<std::size_t>(k)];
        if ((i == m.pin || j == m.pin) && i != j) continue;
        t.push_back({i, j, va[static_cast<std::size_t>(k)]});
      }
    }
    m.reduced = SparseMatrix::from_triplets(n, std::move(t));
  } else {
    for (Index i = 0; i < n; ++i) {
      for (auto k = rp[static_cast<std::size_t>(i)]; k < rp[static_cast<std::size_t>(i) + 1]; ++k) {
        t.push_back({i, ci[static_cast<std::size_t>(k)], va[static_cast<std::size_t>(k)]});
      }
      if (m.c[static_cast<std::size_t>(i)] != 0.0) {
        t.push_back({i, n, m.c[static_cast<std::size_t>(i)]});
        t.push_back({n, i, m.c[static_cast<std::size_t>(i)]});
      }
    }
    m.reduced = SparseMatrix::from_triplets(n + 1, std::move(t));
  }
  m.solver = std::make_unique<SymmetricSolver>(m.reduced, options);
}

ConstrainedSolver::~ConstrainedSolver() = default;
ConstrainedSolver::ConstrainedSolver(ConstrainedSolver&&) noexcept = default;
ConstrainedSolver& ConstrainedSolver::operator=(ConstrainedSolver&&) noexcept = default;

ConstrainedSolution ConstrainedSolver::solve(std::span<const double> b, SolveStats* stats) const {
  const Impl& m = *impl_;
  const auto n = static_cast<std::size_t>(m.a->size());
  if (b.size() != n) {
    throw InputError("right-hand side dimension mismatch");
  }
  ConstrainedSolution out;
  SolveStats local;
  if (m.options.method == SolverMethod::Direct) {
    // A 1 = 0 fixes the multiplier; the rest is a consistent singular solve.
    out.multiplier = std::accumulate(b.begin(), b.end(), 0.0) / m.c_sum;
    std::vector<double> r(b.begin(), b.end());
    for (std::size_t i = 0; i < n; ++i) {
      r[i] -= m.c[i] * out.multiplier;
    }
    r[static_cast<std::size_t>(m.pin)] = 0.0;
    out.x = m.solver->solve(r, &local);
    const double shift = dot(m.c, out.x) / m.c_sum;
    for (double& v : out.x) {
      v -= shift;
    }
  } else {
    std::vector<double> rhs(b.begin(), b.end());
    rhs.push_back(0.0);
    std::vector<double> y = m.solver->solve(rhs, &local);
    out.multiplier = y.back();
    y.pop_back();
    out.x = std::move(y);
  }

  // Residual of the bordered system.
  std::vector<double> r = matvec(*m.a, out.x);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] += m.c[i] * out.multiplier - b[i];
  }
  const double bn = norm2(b);
  const double rc = dot(m.c, out.x);
  local.relative_residual = std::sqrt(dot(r, r) + rc * rc) / (bn > 0.0 ? bn : 1.0);
  if (stats != nullptr) {
    *stats = local;
  }
  if (!(local.relative_residual <= m.options.tol)) {
    throw SolverError("constrained solve did not reach tolerance: relative residual " +
                      format_double(local.relative_residual) + " (tol " + format_double(m.options.tol) + ")");
  }
  return out;
}

void write_matrix_market(std::ostream& out, const SparseMatrix& a) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.size() << ' ' << a.size() << ' ' << a.nonzeros() << '\n';
  out.precision(17);
  const auto rp = a.row_offsets();
  const auto ci = a.column_indices();
  const auto va = a.values();
  for (Index i = 0; i < a.size(); ++i) {
    for (auto k = rp[static_cast<std::size_t>(i)]; k < rp[static_cast<std::size_t>(i) + 1]; ++k) {
      out << i + 1 << ' ' << ci[static_cast<std::size_t>(k)] + 1 << ' ' << va[static_cast<std::size_t>(k)] << '\n';
    }
  }
}

}  // namespace tracestokes
