#pragma once

#include <vector>

namespace oddcycle {

// Eigenvalues of a dense real symmetric matrix (row-major n x n), ascending.
// Cyclic Jacobi; sizes here stay small (<= 64), accuracy ~1e-12.
std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n);

}  // namespace oddcycle
