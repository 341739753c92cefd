#include "decolab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace decolab::linalg {

void DensityMatrix::check_hermitian(double tol) const {
    const double dev = (entries - entries.adjoint()).norm();
    if (dev > tol * std::max(1.0, entries.norm())) {
        throw numeric_error("DensityMatrix: not Hermitian within tolerance");
    }
}

void DensityMatrix::normalize_trace() {
    const double tr = entries.trace().real();
    if (!(tr > 0.0)) {
        throw numeric_error("DensityMatrix: nonpositive trace");
    }
    entries /= tr;
}

DensityMatrix DensityMatrix::from_pure(const Eigen::VectorXcd& state) {
    const double n2 = state.squaredNorm();
    if (!(n2 > 0.0)) {
        throw numeric_error("DensityMatrix: zero state vector");
    }
    DensityMatrix rho;
    rho.entries = state * state.adjoint() / n2;
    return rho;
}

EigenBasis hermitian_eigendecomposition(const Eigen::MatrixXcd& input,
                                        const JacobiOptions& opts) {
    const Eigen::Index n = input.rows();
    if (n == 0 || input.cols() != n) {
        throw numeric_error("hermitian_eigendecomposition: matrix must be square");
    }
    const double scale = input.norm();
    if ((input - input.adjoint()).norm() > 1e-12 * std::max(1.0, scale)) {
        throw numeric_error("hermitian_eigendecomposition: input not Hermitian");
    }
    // Work on the Hermitian average so the rotations see an exactly
    // Hermitian matrix.
    Eigen::MatrixXcd a = 0.5 * (input + input.adjoint());
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(n, n);

    auto off_norm = [&]() {
        double s = 0.0;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) s += 2.0 * std::norm(a(p, q));
        }
        return std::sqrt(s);
    };

    const double stop = opts.off_diagonal_threshold * std::max(scale, 1e-300);
    int sweep = 0;
    while (off_norm() > stop) {
        if (++sweep > opts.max_sweeps) {
            throw numeric_error("hermitian_eigendecomposition: Jacobi sweeps "
                                "exhausted without convergence");
        }
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag <= stop / (static_cast<double>(n) * 10.0)) continue;
                // Unitary 2x2 rotation annihilating a(p,q). With the phase
                // e^{i phi} = apq/|apq| folded in, the problem reduces to the
                // real symmetric Jacobi angle.
                const Complex phase = apq / mag;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0)
                                     ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                     : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const Complex sp = s * phase;
                // Columns: [p q] <- [p q] * [[c, sp], [-conj(sp), c]]
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = c * akp - std::conj(sp) * akq;
                    a(k, q) = sp * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = c * apk - sp * aqk;
                    a(q, k) = std::conj(sp) * apk + c * aqk;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Complex vkp = v(k, p);
                    const Complex vkq = v(k, q);
                    v(k, p) = c * vkp - std::conj(sp) * vkq;
                    v(k, q) = sp * vkp + c * vkq;
                }
                a(p, q) = Complex{0.0, 0.0};
                a(q, p) = Complex{0.0, 0.0};
            }
        }
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index i, Eigen::Index j) {
                         return a(i, i).real() > a(j, j).real();
                     });

    EigenBasis basis;
    basis.eigenvalues.resize(n);
    basis.eigenvectors.resize(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        const Eigen::Index src = order[static_cast<std::size_t>(c)];
        basis.eigenvalues(c) = a(src, src).real();
        Eigen::VectorXcd col = v.col(src);
        // Gauge: largest-magnitude component real positive (ties: lowest
        // index wins through strict >).
        Eigen::Index imax = 0;
        double best = -1.0;
        for (Eigen::Index k = 0; k < n; ++k) {
            const double m = std::abs(col(k));
            if (m > best) {
                best = m;
                imax = k;
            }
        }
        if (best > 0.0) {
            col *= std::conj(col(imax)) / best;
        }
        basis.eigenvectors.col(c) = col;
    }
    return basis;
}

namespace {

// Cluster boundaries of the joint spectrum: split after index i only where
// both spectra exhibit a gap larger than the tolerance.
std::vector<std::size_t> common_cluster_ends(const Eigen::VectorXd& e1,
                                             const Eigen::VectorXd& e2,
                                             double tol) {
    const Eigen::Index n = e1.size();
    std::vector<std::size_t> ends;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const bool gap1 = (e1(i) - e1(i + 1)) > tol;
        const bool gap2 = (e2(i) - e2(i + 1)) > tol;
        if (gap1 && gap2) ends.push_back(static_cast<std::size_t>(i));
    }
    ends.push_back(static_cast<std::size_t>(n - 1));
    return ends;
}

}  // namespace

double basis_distance(const EigenBasis& b1, const EigenBasis& b2,
                      double degeneracy_tol) {
    const Eigen::Index n = b1.eigenvalues.size();
    if (n != b2.eigenvalues.size()) {
        throw numeric_error("basis_distance: dimension mismatch");
    }
    const auto ends = common_cluster_ends(b1.eigenvalues, b2.eigenvalues,
                                          degeneracy_tol);
    double worst = 0.0;
    std::size_t begin = 0;
    for (std::size_t end : ends) {
        const Eigen::Index lo = static_cast<Eigen::Index>(begin);
        const Eigen::Index len = static_cast<Eigen::Index>(end - begin + 1);
        const Eigen::MatrixXcd v1 = b1.eigenvectors.middleCols(lo, len);
        const Eigen::MatrixXcd v2 = b2.eigenvectors.middleCols(lo, len);
        const Eigen::MatrixXcd p1 = v1 * v1.adjoint();
        const Eigen::MatrixXcd p2 = v2 * v2.adjoint();
        worst = std::max(worst, (p1 - p2).norm() / std::sqrt(2.0));
        begin = end + 1;
    }
    return worst;
}

double off_diagonal_norm(const Eigen::MatrixXcd& rho,
                         const Eigen::MatrixXcd& basis) {
    if (rho.rows() != basis.rows()) {
        throw numeric_error("off_diagonal_norm: dimension mismatch");
    }
    const Eigen::MatrixXcd m = basis.adjoint() * rho * basis;
    double s = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (i != j) s += std::norm(m(i, j));
        }
    }
    return std::sqrt(s);
}

}  // namespace decolab::linalg
