#pragma once

// Cyclic Jacobi eigensolver for dense real symmetric matrices.
// Dependency-free and deterministic: fixed (p,q) sweep order, so repeated
// eigenvalues always come out with the same basis.

#include <vector>

#include "su2geom/linalg.hpp"

namespace su2 {

// A is n x n row-major, symmetric; destroyed during the solve.
// Eigenvalues are returned ascending.  If evecs != nullptr it receives the
// matrix whose COLUMNS are the corresponding eigenvectors (row-major n x n).
// Convergence: off-diagonal Frobenius norm below tol * ||A||_F.
void jacobi_eigensymm(std::vector<double>& A, int n, std::vector<double>& evals,
                      std::vector<double>* evecs, double tol = 1e-14);

struct Eig3 {
  Vec3 values;   // ascending
  Mat3 vectors;  // columns are eigenvectors
};

Eig3 jacobi_eig3(const Mat3& m, double tol = 1e-14);

// Implicit-shift QL for symmetric tridiagonal matrices, eigenvalues only
// (classical tql1).  diag has length n, off has length n-1 (subdiagonal).
// Returns the eigenvalues ascending.  O(n^2), used for the per-irrep
// Laplacian blocks, which are exactly tridiagonal in the parity sublattices.
std::vector<double> tridiag_eigenvalues(std::vector<double> diag,
                                        std::vector<double> off);

}  // namespace su2
