// linalg.hpp — Hermitian density matrices, a deterministic cyclic-Jacobi
// eigensolver, and a degeneracy-aware distance between eigenbases.
//
// The Jacobi sweep stops when the off-diagonal Frobenius mass falls below
// 1e-13 * ||A||_F (at most 100 sweeps). Eigenvalues are returned in
// descending order; each eigenvector is gauge-fixed by making its
// largest-magnitude component real positive, so results are reproducible
// bit for bit.

#pragma once

#include <Eigen/Dense>
#include <cstddef>

#include "decolab/common.hpp"

namespace decolab::linalg {

struct DensityMatrix {
    Eigen::MatrixXcd entries;

    std::size_t dim() const { return static_cast<std::size_t>(entries.rows()); }

    // Hermitian to 1e-12, unit trace after normalize(), eigenvalues above
    // -1e-10 (checked by the eigensolver callers that need it).
    void check_hermitian(double tol = 1e-12) const;
    void normalize_trace();

    static DensityMatrix from_pure(const Eigen::VectorXcd& state);
};

struct EigenBasis {
    Eigen::VectorXd eigenvalues;   // descending
    Eigen::MatrixXcd eigenvectors; // orthonormal columns, gauge-fixed
};

struct JacobiOptions {
    double off_diagonal_threshold = 1e-13;  // relative to ||A||_F
    int max_sweeps = 100;
};

// Full spectrum of a Hermitian matrix by cyclic Jacobi rotations.
// Throws numeric_error on non-Hermitian input or non-convergence.
EigenBasis hermitian_eigendecomposition(const Eigen::MatrixXcd& a,
                                        const JacobiOptions& opts = {});

inline EigenBasis hermitian_eigendecomposition(const DensityMatrix& rho,
                                               const JacobiOptions& opts = {}) {
    return hermitian_eigendecomposition(rho.entries, opts);
}

// Maximum over matched eigenvalue clusters of ||P1 - P2||_F / sqrt(2), where
// the clusters are the finest grouping compatible with both spectra at
// degeneracy_tol (a split happens only where BOTH spectra show a gap larger
// than the tolerance). Zero iff the clustered eigenspaces coincide; 1 for
// disjoint subspaces.
double basis_distance(const EigenBasis& b1, const EigenBasis& b2,
                      double degeneracy_tol = 1e-8);

// Frobenius norm of the off-diagonal part of rho expressed in the frame
// given by the columns of basis.
double off_diagonal_norm(const Eigen::MatrixXcd& rho,
                         const Eigen::MatrixXcd& basis);

}  // namespace decolab::linalg
