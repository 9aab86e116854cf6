#include "encdec/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace encdec {

namespace {

double offdiag_norm(const CMatrix& a) {
  double s = 0.0;
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c)
      if (r != c) s += std::norm(a(r, c));
  return std::sqrt(s);
}

}  // namespace

HermEig herm_eig(const CMatrix& m, double herm_tol) {
  m.require_hermitian(herm_tol);
  const int n = m.rows();

  // Symmetrize so the working diagonal is exactly real.
  CMatrix a(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) a(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));

  CMatrix v = CMatrix::identity(n);
  const double stop = 1e-14 * std::max(1.0, a.frob_norm());
  const int max_sweeps = 100;

  for (int sweep = 0; sweep < max_sweeps && offdiag_norm(a) > stop; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq_abs = std::abs(a(p, q));
        if (apq_abs <= 1e-300) continue;
        const cplx phase = a(p, q) / apq_abs;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * apq_abs);
        double t;
        if (tau >= 0)
          t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
        else
          t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx se = s * phase;

        // A <- R^dag A R with R = I except R(p,p)=c, R(p,q)=s*e, R(q,p)=-s*conj(e), R(q,q)=c.
        for (int i = 0; i < n; ++i) {  // columns p, q
          const cplx aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - std::conj(se) * aiq;
          a(i, q) = se * aip + c * aiq;
        }
        for (int j = 0; j < n; ++j) {  // rows p, q
          const cplx apj = a(p, j), aqj = a(q, j);
          a(p, j) = c * apj - se * aqj;
          a(q, j) = std::conj(se) * apj + c * aqj;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = cplx(a(p, p).real(), 0.0);
        a(q, q) = cplx(a(q, q).real(), 0.0);
        for (int i = 0; i < n; ++i) {  // accumulate V <- V R
          const cplx vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - std::conj(se) * viq;
          v(i, q) = se * vip + c * viq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

  HermEig out;
  out.eigenvalues.resize(n);
  out.vectors = CMatrix(n, n);
  for (int k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (int i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

std::vector<std::vector<int>> cluster_indices(const std::vector<double>& sorted_vals,
                                              double cluster_tol) {
  std::vector<std::vector<int>> clusters;
  for (int i = 0; i < static_cast<int>(sorted_vals.size()); ++i) {
    if (clusters.empty() || sorted_vals[i] - sorted_vals[clusters.back().back()] > cluster_tol)
      clusters.push_back({i});
    else
      clusters.back().push_back(i);
  }
  return clusters;
}

std::vector<double> cluster_values(std::vector<double> sorted_vals, double cluster_tol) {
  std::sort(sorted_vals.begin(), sorted_vals.end());
  std::vector<double> out;
  for (const auto& cl : cluster_indices(sorted_vals, cluster_tol)) {
    double mean = 0.0;
    for (int i : cl) mean += sorted_vals[i];
    out.push_back(mean / cl.size());
  }
  return out;
}

SpectrumSet spectrum(const CMatrix& m, double cluster_tol) {
  SpectrumSet s;
  s.cluster_tol = cluster_tol;
  s.values = cluster_values(herm_eig(m).eigenvalues, cluster_tol);
  return s;
}

double hausdorff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  auto one_sided = [&](const std::vector<double>& x, const std::vector<double>& y) {
    for (double xv : x) {
      double best = std::numeric_limits<double>::infinity();
      for (double yv : y) best = std::min(best, std::abs(xv - yv));
      d = std::max(d, best);
    }
  };
  one_sided(a, b);
  one_sided(b, a);
  return d;
}

CMatrix Rng::matrix(int rows, int cols) {
  CMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = gaussian_cplx();
  return m;
}

CMatrix Rng::hermitian(int n) {
  CMatrix g = matrix(n, n);
  CMatrix h(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) h(r, c) = 0.5 * (g(r, c) + std::conj(g(c, r)));
  return h;
}

CMatrix Rng::unitary(int n) {
  CMatrix g = matrix(n, n);
  // Modified Gram-Schmidt on columns; the implicit R diagonal (column norms)
  // is real positive, which fixes the phase gauge.
  for (int j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (int k = 0; k < j; ++k) {
        cplx proj = 0.0;
        for (int i = 0; i < n; ++i) proj += std::conj(g(i, k)) * g(i, j);
        for (int i = 0; i < n; ++i) g(i, j) -= proj * g(i, k);
      }
    }
    double nrm = 0.0;
    for (int i = 0; i < n; ++i) nrm += std::norm(g(i, j));
    nrm = std::sqrt(nrm);
    for (int i = 0; i < n; ++i) g(i, j) /= nrm;
  }
  return g;
}

CMatrix random_unitary(int dim, uint64_t seed) {
  Rng rng(seed);
  return rng.unitary(dim);
}

}  // namespace encdec
