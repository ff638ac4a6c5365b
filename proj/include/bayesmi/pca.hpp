#pragma once

#include "bayesmi/matrix.hpp"

namespace bayesmi {

// Projects mean-centered rows onto the top-2 principal axes of the sample
// covariance (Jacobi eigendecomposition). Component signs are fixed by
// making the largest-magnitude loading of each axis positive; axes whose
// eigenvalue is negligible relative to the leading one produce an all-zero
// output column.
Matrix pca_projection(const Matrix& features);

}  // namespace bayesmi
