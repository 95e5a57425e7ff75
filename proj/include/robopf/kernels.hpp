#pragma once
#include <cstddef>

namespace robopf {

// Rank-1 elimination step of the dense simplex tableau: subtract multiples of
// pivot row r from every other row so column q becomes a unit column. The
// tableau is row-major with n_rows rows of width w; the pivot row must already
// be scaled so T[r][q] == 1. The parallel variant distributes rows across
// OpenMP threads; per-row arithmetic is identical to the serial reference, so
// results are bit-for-bit equal regardless of thread count.
void eliminate_column_serial(double* tab, int n_rows, int w, int r, int q);
void eliminate_column_parallel(double* tab, int n_rows, int w, int r, int q);

} // namespace robopf
