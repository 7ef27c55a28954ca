#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "specmix/complexes.hpp"

namespace specmix {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Skew-symmetric function on oriented (d-1)-cells, stored as one value per
/// canonical (ascending) cell in lexicographic order; the value on the
/// reversed orientation is the negation.
struct Cochain {
  const SimplicialComplex* complex = nullptr;
  Vector values;
};

enum class OperatorKind {
  boundary,           // (d-1)-cochains -> (d-2)-cochains
  adjacency,          // A: signed top-cell adjacency
  all_pairs,          // J: signed all-pairs with diagonal d
  degree,             // D
  up_laplacian,       // D - A
  alpha_shift,        // alpha*I - (D - A)
  centered_adjacency  // A - c*J + c*d*I  (zero diagonal)
};

struct DenseOperator {
  OperatorKind kind = OperatorKind::adjacency;
  Matrix m;
  int n = 0;
  int d = 1;
  double alpha = 0.0;  // parameter of alpha_shift / centered_adjacency
};

struct KernelBasis {
  Matrix q;  // orthonormal columns spanning ker(boundary)
  double tol = 1e-10;
};

/// Signed incidence of (d-1)-cells on (d-2)-cells. For a complete skeleton the
/// summation runs over every vertex outside the lower cell. Row/column order
/// is the lexicographic order of canonical cells. For d = 1 the unique
/// (-1)-cell is the empty set and the matrix is the all-ones row.
inline DenseOperator boundary_matrix(const SimplicialComplex& x) {
  const auto cols = all_subsets(x.n, x.d);
  const std::int64_t rows = binomial(x.n, x.d - 1);
  DenseOperator op;
  op.kind = OperatorKind::boundary;
  op.n = x.n;
  op.d = x.d;
  op.m = Matrix::Zero(rows, static_cast<std::int64_t>(cols.size()));
  std::vector<int> tau(x.d - 1);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const auto& sigma = cols[c];
    for (int pos = 0; pos < x.d; ++pos) {
      int w = 0;
      for (int j = 0; j < x.d; ++j)
        if (j != pos) tau[w++] = sigma[j];
      const auto r = subset_rank(tau, x.n);
      // presenting sigma as (v, tau...) costs `pos` transpositions
      op.m(r, static_cast<std::int64_t>(c)) = (pos % 2 == 0) ? 1.0 : -1.0;
    }
  }
  return op;
}

/// Orthonormal basis of ker(boundary) via SVD; singular values below
/// tol * (largest singular value) count as zero.
inline KernelBasis kernel_basis(const SimplicialComplex& x, double tol = 1e-10) {
  const DenseOperator b = boundary_matrix(x);
  Eigen::BDCSVD<Matrix> svd(b.m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = (sv.size() > 0 ? sv(0) : 0.0) * tol;
  std::int64_t rank = 0;
  for (std::int64_t i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  KernelBasis k;
  k.tol = tol;
  k.q = svd.matrixV().rightCols(b.m.cols() - rank);
  return k;
}

namespace detail {

// Fills entries for every pair of d-subsets of eta with union eta.
inline void scatter_union_signs(const std::vector<int>& eta, int n, double scale,
                                Matrix& m) {
  const int s = static_cast<int>(eta.size());
  std::vector<int> a(s - 1), b(s - 1);
  for (int i = 0; i < s; ++i) {
    int wa = 0;
    for (int j = 0; j < s; ++j)
      if (j != i) a[wa++] = eta[j];
    const auto ra = subset_rank(a, n);
    for (int j = i + 1; j < s; ++j) {
      int wb = 0;
      for (int l = 0; l < s; ++l)
        if (l != j) b[wb++] = eta[l];
      const auto rb = subset_rank(b, n);
      const double v = scale * orientation_sign(a, b);
      m(ra, rb) = v;
      m(rb, ra) = v;
    }
  }
}

}  // namespace detail

/// Square operators on (d-1)-cochains, entries per the canonical-orientation
/// matrix formulas: A has sgn(pi) where the union of the two cells is a top
/// cell, J has sgn(pi) on every union of size d+1 plus diagonal d, D is the
/// degree diagonal. centered_adjacency(c) = A - c*J + c*d*I requires a
/// regular complex.
inline DenseOperator operator_matrix(const SimplicialComplex& x,
                                     OperatorKind kind, double alpha = 0.0) {
  const std::int64_t dim = binomial(x.n, x.d);
  DenseOperator op;
  op.kind = kind;
  op.n = x.n;
  op.d = x.d;
  op.alpha = alpha;
  op.m = Matrix::Zero(dim, dim);

  auto adjacency = [&]() {
    Matrix a = Matrix::Zero(dim, dim);
    for (const auto& f : x.facets) detail::scatter_union_signs(f, x.n, 1.0, a);
    return a;
  };
  auto all_pairs = [&]() {
    Matrix j = Matrix::Identity(dim, dim) * static_cast<double>(x.d);
    for (const auto& eta : all_subsets(x.n, x.d + 1))
      detail::scatter_union_signs(eta, x.n, 1.0, j);
    return j;
  };
  auto degree = [&]() {
    Matrix dm = Matrix::Zero(dim, dim);
    const auto prof = degree_profile(x);
    for (std::int64_t i = 0; i < dim; ++i)
      dm(i, i) = static_cast<double>(prof.degrees[static_cast<std::size_t>(i)]);
    return dm;
  };

  switch (kind) {
    case OperatorKind::adjacency:
      op.m = adjacency();
      break;
    case OperatorKind::all_pairs:
      op.m = all_pairs();
      break;
    case OperatorKind::degree:
      op.m = degree();
      break;
    case OperatorKind::up_laplacian:
      op.m = degree() - adjacency();
      break;
    case OperatorKind::alpha_shift:
      op.m = alpha * Matrix::Identity(dim, dim) - (degree() - adjacency());
      break;
    case OperatorKind::centered_adjacency: {
      const auto prof = degree_profile(x);
      if (!prof.regular)
        throw std::invalid_argument(
            "centered_adjacency needs a regular complex; degrees span " +
            std::to_string(prof.min_degree) + ".." +
            std::to_string(prof.max_degree));
      op.m = adjacency() - alpha * all_pairs() +
             (alpha * x.d) * Matrix::Identity(dim, dim);
      break;
    }
    case OperatorKind::boundary:
      throw std::invalid_argument("use boundary_matrix for the boundary");
  }
  return op;
}

/// Largest singular value of M composed with the inclusion of the kernel
/// basis; 0 when the basis is empty.
inline double restricted_norm(const DenseOperator& m, const KernelBasis& basis) {
  if (basis.q.cols() == 0) return 0.0;
  if (m.m.cols() != basis.q.rows())
    throw std::invalid_argument("restricted_norm: dimension mismatch");
  Eigen::BDCSVD<Matrix> svd(m.m * basis.q);
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

/// Largest singular value of a dense matrix (spectral norm).
inline double dense_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

inline Vector row_l1_norms(const DenseOperator& m) {
  return m.m.cwiseAbs().rowwise().sum();
}

}  // namespace specmix
