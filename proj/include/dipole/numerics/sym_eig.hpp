#pragma once

// Dense symmetric eigensolver: Householder tridiagonalization followed by implicit QL
// with Wilkinson-style shifts (the EISPACK tred2/tql2 pair).

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "dipole/errors.hpp"
#include "dipole/matrix.hpp"

namespace dipole::numerics {

struct SymmetricEigResult {
  std::vector<double> eigenvalues;  // ascending
  Matrix eigenvectors;              // column k pairs with eigenvalues[k]; empty if not requested
};

enum class EigMode { values_only, with_vectors };

namespace detail {

// Implicit QL on the tridiagonal (d, e) where e[i] couples i-1 and i (e[0] unused).
// z holds ncomp components of each of the n vectors, vector i at z[i*ncomp .. +ncomp).
// Rotations are applied to z; ncomp may be 0 (values only) or 1 (first components only).
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z,
                           std::size_t ncomp) {
  const std::size_t n = d.size();
  if (n == 0) return;
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::ldexp(1.0, -52);
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m == n) m = n - 1;

    if (m > l) {
      int iter = 0;
      do {
        if (++iter > 300) throw convergence_error("tridiagonal_ql: no convergence after 300 sweeps");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          if (ncomp > 0) {
            double* zi = z.data() + ii * ncomp;
            double* zi1 = z.data() + (ii + 1) * ncomp;
            for (std::size_t k = 0; k < ncomp; ++k) {
              const double t = zi1[k];
              zi1[k] = s * zi[k] + c * t;
              zi[k] = c * zi[k] - s * t;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

// Householder reduction to tridiagonal form. v is the symmetric input in row-major order;
// because of symmetry it is read as its own transpose, so that V(k, j) = v[j*n + k] and
// every inner loop runs over contiguous memory. On return d/e hold the tridiagonal and,
// if accumulate is set, row j of v holds the j-th column of the orthogonal transform.
inline void householder_tridiagonalize(std::vector<double>& v, std::size_t n, std::vector<double>& d,
                                       std::vector<double>& e, bool accumulate) {
  auto V = [&](std::size_t k, std::size_t j) -> double& { return v[j * n + k]; };
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) d[j] = V(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = V(i - 1, j);
        V(i, j) = 0.0;
        V(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        V(j, i) = f;
        g = e[j] + V(j, j) * f;
        const double* col = &V(0, j);
        for (std::size_t k = j + 1; k < i; ++k) {
          g += col[k] * d[k];
          e[k] += col[k] * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        double* col = &V(0, j);
        for (std::size_t k = j; k < i; ++k) col[k] -= (f * e[k] + g * d[k]);
        d[j] = V(i - 1, j);
        V(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  if (!accumulate) {
    for (std::size_t j = 0; j < n; ++j) d[j] = V(j, j);
    e[0] = 0.0;
    return;
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    V(n - 1, i) = V(i, i);
    V(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = V(k, i + 1) / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double g = 0.0;
        const double* ci1 = &V(0, i + 1);
        double* cj = &V(0, j);
        for (std::size_t k = 0; k <= i; ++k) g += ci1[k] * cj[k];
        for (std::size_t k = 0; k <= i; ++k) cj[k] -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) V(k, i + 1) = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = V(n - 1, j);
    V(n - 1, j) = 0.0;
  }
  V(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

}  // namespace detail

/// Full spectrum of a dense real symmetric matrix, ascending.
///
/// Rejects inputs whose asymmetry exceeds 1e-12 of the largest entry.
inline SymmetricEigResult sym_eig(const Matrix& a, EigMode mode = EigMode::with_vectors) {
  if (a.rows() != a.cols()) throw config_error("sym_eig: matrix must be square");
  const std::size_t n = a.rows();
  SymmetricEigResult out;
  if (n == 0) return out;

  const double scale = a.max_abs();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(a(i, j) - a(j, i)) > 1e-12 * scale)
        throw config_error("sym_eig: matrix is not symmetric");

  const bool vectors = mode == EigMode::with_vectors;
  std::vector<double> v(a.flat().begin(), a.flat().end());
  std::vector<double> d, e;
  detail::householder_tridiagonalize(v, n, d, e, vectors);
  if (!vectors) v.clear();
  detail::tridiagonal_ql(d, e, v, vectors ? n : 0);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return d[x] < d[y]; });

  out.eigenvalues.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.eigenvalues[k] = d[order[k]];
  if (vectors) {
    out.eigenvectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      const double* src = v.data() + order[k] * n;
      for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = src[i];
    }
  }
  return out;
}

}  // namespace dipole::numerics
