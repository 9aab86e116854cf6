#pragma once

#include "encdec/cmatrix.hpp"

namespace encdec::kernels {

/// Serial reference matrix product. Kept as the ground truth the parallel
/// kernel is tested and benchmarked against.
CMatrix matmul_serial(const CMatrix& a, const CMatrix& b);

/// Optimized matrix product: split real/imaginary planes with vectorizable
/// inner loops, rows distributed across OpenMP threads. Accumulation order
/// per entry matches the serial kernel; agreement is asserted in tests.
CMatrix matmul_omp(const CMatrix& a, const CMatrix& b);

/// Dispatch: OpenMP above this dimension, serial below.
CMatrix matmul(const CMatrix& a, const CMatrix& b);

/// Minimum matrix dimension before matmul() goes parallel.
inline constexpr int kParallelCutoff = 48;

}  // namespace encdec::kernels
