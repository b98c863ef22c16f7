#pragma once

// Weighted lattice graphs, their Cartesian products, box operators with
// diagonal noise, and a dense cyclic Jacobi eigensolver.

#include "q1dlab/core.hpp"
#include "q1dlab/random.hpp"
#include "q1dlab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace q1dlab {

inline constexpr int kDefaultMaxDim = 10'000;

/// Dense real symmetric matrix: an adjacency matrix G, a box rG x Z_n, or a
/// box operator with its diagonal potential.
class SymmetricOperator {
 public:
  /// Accepts matrices that are symmetric up to `tol` (relative to the largest
  /// entry) and stores the exactly symmetric upper-triangle mirror.
  explicit SymmetricOperator(Matrix entries, double tol = 1e-12) : entries_(std::move(entries)) {
    if (entries_.rows() < 1 || entries_.rows() != entries_.cols())
      throw DimensionError("symmetric operator must be square with dim >= 1, got " +
                           std::to_string(entries_.rows()) + "x" + std::to_string(entries_.cols()));
    const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
    const Eigen::Index n = entries_.rows();
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) {
        if (std::abs(entries_(i, j) - entries_(j, i)) > tol * scale)
          throw DimensionError("matrix is not symmetric at (" + std::to_string(i) + "," +
                               std::to_string(j) + ")");
        entries_(j, i) = entries_(i, j);
      }
  }

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }

  friend bool operator==(const SymmetricOperator& a, const SymmetricOperator& b) {
    return a.entries_.rows() == b.entries_.rows() && a.entries_ == b.entries_;
  }

 private:
  Matrix entries_;
};

/// Eigen-decomposition G = O diag(d) O^T. Column j of O is the unit
/// eigenvector for d[j]; d is sorted descending and the first component of
/// absolute value > 1e-12 of every eigenvector is positive.
struct Diagonalization {
  Matrix O;
  Vector d;

  int dim() const { return static_cast<int>(d.size()); }
  Matrix reconstruct() const { return O * d.asDiagonal() * O.transpose(); }
};

struct JacobiOptions {
  double threshold = 1e-14;  // off-diagonal Frobenius norm, relative to ||A||_F
  int max_sweeps = 100;
};

namespace detail {

struct JacobiResult {
  Vector values;
  Matrix vectors;  // empty when not requested
};

inline JacobiResult cyclic_jacobi(Matrix a, bool want_vectors, const JacobiOptions& opts) {
  const Eigen::Index n = a.rows();
  Matrix v;
  if (want_vectors) v = Matrix::Identity(n, n);
  const double norm = a.norm();
  const double target = opts.threshold * norm;

  auto off_norm = [&] {
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  bool converged = false;
  for (int sweep = 0; sweep <= opts.max_sweeps; ++sweep) {
    if (off_norm() <= target) {
      converged = true;
      break;
    }
    if (sweep == opts.max_sweeps) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p), aqq = a(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        double t = std::abs(theta) > 1e150 ? 0.5 / std::abs(theta)
                                           : 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p), arq = a(r, q);
          const double np = c * arp - s * arq;
          const double nq = s * arp + c * arq;
          a(r, p) = np;
          a(p, r) = np;
          a(r, q) = nq;
          a(q, r) = nq;
        }
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        if (want_vectors) {
          for (Eigen::Index r = 0; r < n; ++r) {
            const double vrp = v(r, p), vrq = v(r, q);
            v(r, p) = c * vrp - s * vrq;
            v(r, q) = s * vrp + c * vrq;
          }
        }
      }
    }
  }
  if (!converged)
    throw NumericError("Jacobi eigensolver did not converge within " +
                       std::to_string(opts.max_sweeps) + " sweeps");
  return {a.diagonal(), std::move(v)};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Graph construction

/// Adjacency matrix of the path 1 - 2 - ... - m.
inline SymmetricOperator path_graph(int m) {
  if (m < 1) throw DimensionError("path graph needs m >= 1, got " + std::to_string(m));
  Matrix a = Matrix::Zero(m, m);
  for (int i = 0; i + 1 < m; ++i) a(i, i + 1) = a(i + 1, i) = 1.0;
  return SymmetricOperator(std::move(a));
}

inline SymmetricOperator scale(const SymmetricOperator& g, double r) {
  return SymmetricOperator(r * g.entries());
}

/// (A x B)_{(i,i'),(j,j')} = 1{i'=j'} A_ij + 1{i=j} B_i'j'. Flat index
/// i * dim(B) + i', so the B-index runs fastest.
inline SymmetricOperator cartesian_product(const SymmetricOperator& a, const SymmetricOperator& b,
                                           int max_dim = kDefaultMaxDim) {
  const long long total = static_cast<long long>(a.dim()) * b.dim();
  if (total > max_dim)
    throw SizeError("product dimension " + std::to_string(total) + " exceeds the maximum " +
                    std::to_string(max_dim));
  const int na = a.dim(), nb = b.dim();
  Matrix out = Matrix::Zero(total, total);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j) {
      const double aij = a(i, j);
      if (aij == 0.0) continue;
      for (int k = 0; k < nb; ++k) out(i * nb + k, j * nb + k) += aij;
    }
  for (int i = 0; i < na; ++i)
    out.block(i * nb, i * nb, nb, nb) += b.entries();
  return SymmetricOperator(std::move(out));
}

// ---------------------------------------------------------------------------
// Diagonalization

inline Diagonalization diagonalize(const SymmetricOperator& g, const JacobiOptions& opts = {}) {
  auto res = detail::cyclic_jacobi(g.entries(), true, opts);
  const int n = g.dim();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return res.values[x] > res.values[y]; });
  Diagonalization out{Matrix(n, n), Vector(n)};
  for (int j = 0; j < n; ++j) {
    out.d[j] = res.values[order[j]];
    Vector col = res.vectors.col(order[j]);
    col.normalize();
    for (int k = 0; k < n; ++k) {
      if (std::abs(col[k]) > 1e-12) {
        if (col[k] < 0.0) col = -col;
        break;
      }
    }
    out.O.col(j) = col;
  }
  return out;
}

/// Eigenvalues of a symmetric operator, ascending.
inline SpectrumSample direct_spectrum(const SymmetricOperator& m, const JacobiOptions& opts = {}) {
  auto res = detail::cyclic_jacobi(m.entries(), false, opts);
  return SpectrumSample(std::vector<double>(res.values.begin(), res.values.end()),
                        Provenance::direct);
}

/// gram(i, j) = <|O_i|^2, |O_j|^2>: inner product of the squared components of
/// eigenvectors i and j.
inline Matrix overlap_gram(const Diagonalization& diag) {
  const Matrix sq = diag.O.array().square().matrix();
  Matrix g = sq.transpose() * sq;
  return 0.5 * (g + g.transpose());
}

// ---------------------------------------------------------------------------
// Boxes rG x Z_n + diagonal noise

/// n slices of m i.i.d. samples from `noise`, drawn slice by slice from the
/// stream `noise.seed`. Slice k (0-based) holds the potential on G x {k+1}.
inline std::vector<Vector> draw_slices(const NoiseSpec& noise, int m, int n) {
  Rng rng(noise.seed);
  std::vector<Vector> slices(n, Vector(m));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < m; ++j) slices[k][j] = noise.draw(rng);
  return slices;
}

/// Slices multiplied by the prefactor that assemble_box applies (sigma / sqrt(n)).
inline std::vector<Vector> box_slices(const NoiseSpec& noise, int m, int n, double prefactor) {
  auto slices = draw_slices(noise, m, n);
  for (auto& s : slices) s *= prefactor;
  return slices;
}

/// rG x Z_n + prefactor * diag(V), with V drawn by draw_slices.
inline SymmetricOperator assemble_box(const SymmetricOperator& g, double r, int n,
                                      const NoiseSpec& noise, double prefactor,
                                      int max_dim = kDefaultMaxDim) {
  if (n < 1) throw DimensionError("box length n must be >= 1, got " + std::to_string(n));
  SymmetricOperator base = cartesian_product(scale(g, r), path_graph(n), max_dim);
  if (prefactor == 0.0) return base;
  Matrix entries = base.entries();
  const int m = g.dim();
  const auto slices = draw_slices(noise, m, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < m; ++j) entries(j * n + k, j * n + k) += prefactor * slices[k][j];
  return SymmetricOperator(std::move(entries));
}

/// 2cos(j pi / (m+1)), j = 1..m: the path-graph spectrum, descending.
inline Vector path_eigenvalues(int m) {
  if (m < 1) throw DimensionError("path graph needs m >= 1");
  Vector d(m);
  for (int j = 1; j <= m; ++j) d[j - 1] = 2.0 * std::cos(j * kPi / (m + 1));
  return d;
}

}  // namespace q1dlab
