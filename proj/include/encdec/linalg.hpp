#pragma once

#include <random>
#include <vector>

#include "encdec/cmatrix.hpp"

namespace encdec {

inline constexpr double kHermTol = 1e-12;
inline constexpr double kDefaultClusterTol = 1e-8;

struct HermEig {
  std::vector<double> eigenvalues;  // ascending
  CMatrix vectors;                  // unitary, columns are eigenvectors
};

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// vectors^dag * m * vectors is diagonal with the returned eigenvalues.
HermEig herm_eig(const CMatrix& m, double herm_tol = kHermTol);

/// Set of distinct eigenvalues of a Hermitian matrix: sorted, eigenvalues
/// closer than cluster_tol merged to their mean, multiplicities dropped.
struct SpectrumSet {
  std::vector<double> values;  // strictly increasing
  double cluster_tol = kDefaultClusterTol;
};

SpectrumSet spectrum(const CMatrix& m, double cluster_tol = kDefaultClusterTol);

/// Cluster an ascending list by absolute gap; returns one mean per cluster.
std::vector<double> cluster_values(std::vector<double> sorted_vals, double cluster_tol);

/// Groups an ascending eigenvalue list into clusters of indices.
std::vector<std::vector<int>> cluster_indices(const std::vector<double>& sorted_vals,
                                              double cluster_tol);

/// Hausdorff distance between two finite sets of reals.
double hausdorff(const std::vector<double>& a, const std::vector<double>& b);

/// Deterministic seeded RNG for matrix test data.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  double gaussian() { return normal_(gen_); }
  double uniform() { return uniform_(gen_); }
  cplx gaussian_cplx() {
    double re = gaussian();
    double im = gaussian();
    return cplx(re, im) / std::sqrt(2.0);
  }

  CMatrix matrix(int rows, int cols);
  CMatrix hermitian(int n);
  CMatrix unitary(int n);

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Haar-like random unitary: QR of a complex Gaussian matrix with the
/// R diagonal kept real positive. Deterministic for a fixed seed.
CMatrix random_unitary(int dim, uint64_t seed);

}  // namespace encdec
