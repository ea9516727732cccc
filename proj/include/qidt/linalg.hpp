// Copyright 2026 The qidt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "qidt/config.hpp"
#include "qidt/errors.hpp"
#include "qidt/rng.hpp"

namespace qidt {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Small helpers
// ---------------------------------------------------------------------------

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline double hermiticity_residual(const Matrix& m) { return max_abs(m - m.adjoint()); }

inline bool all_finite(const Matrix& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        const cplx z = m.data()[i];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
    return true;
}

inline void require_square(const Matrix& m, const char* what) {
    if (m.rows() != m.cols()) {
        fail(ErrorKind::NonSquare, std::string(what) + " is " + std::to_string(m.rows()) + "x" +
                                       std::to_string(m.cols()));
    }
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

inline Matrix identity(int d) { return Matrix::Identity(d, d); }

/// max |U†U - I|.
inline double unitarity_residual(const Matrix& u) {
    return max_abs(u.adjoint() * u - Matrix::Identity(u.cols(), u.cols()));
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition and functions of positive operators
// ---------------------------------------------------------------------------

struct EigenDecomposition {
    RealVector values;  // ascending
    Matrix vectors;     // columns, unitary
};

/// Symmetrizes first; ascending eigenvalues; each eigenvector rotated so its
/// largest-magnitude entry (lowest index on ties) is real and positive.
inline EigenDecomposition herm_eig(const Matrix& h, const Tolerances& tol = kDefaultTolerances) {
    require_square(h, "herm_eig input");
    const double residual = hermiticity_residual(h);
    if (residual > tol.symmetrize_max) {
        fail(ErrorKind::NonHermitian, "max |H - H^dagger| = " + std::to_string(residual));
    }
    const Matrix sym = (h + h.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) fail(ErrorKind::InternalError, "eigensolver failed");
    EigenDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
    for (Eigen::Index c = 0; c < out.vectors.cols(); ++c) {
        Eigen::Index best = 0;
        double best_abs = -1.0;
        for (Eigen::Index r = 0; r < out.vectors.rows(); ++r) {
            const double a = std::abs(out.vectors(r, c));
            if (a > best_abs + 1e-14) {
                best_abs = a;
                best = r;
            }
        }
        if (best_abs > 0.0) {
            const cplx z = out.vectors(best, c);
            out.vectors.col(c) *= std::conj(z) / std::abs(z);
        }
    }
    return out;
}

inline Matrix from_eigen(const EigenDecomposition& e, const RealVector& f) {
    return e.vectors * f.cast<cplx>().asDiagonal() * e.vectors.adjoint();
}

namespace detail {
inline EigenDecomposition psd_eig(const Matrix& p, const Tolerances& tol) {
    EigenDecomposition e = herm_eig(p, tol);
    if (e.values.size() > 0 && e.values(0) < -tol.psd_slack) {
        fail(ErrorKind::NotPositive, "min eigenvalue " + std::to_string(e.values(0)));
    }
    return e;
}
}  // namespace detail

inline double min_eigenvalue(const Matrix& h) {
    return h.size() == 0 ? 0.0 : herm_eig(h).values(0);
}

namespace detail {
// sqrt of a PSD spectrum with eigenvalues at the round-off floor
// (n * eps-scale relative to the largest) set to zero, since their square
// roots would otherwise be amplified to ~1e-8.
inline RealVector floored_sqrt(const RealVector& v) {
    const auto n = v.size();
    const double top = n > 0 ? std::max(0.0, v.maxCoeff()) : 0.0;
    const double floor = static_cast<double>(n) * top * 1e-14;
    RealVector out(n);
    for (Eigen::Index i = 0; i < n; ++i) out(i) = v(i) > floor ? std::sqrt(v(i)) : 0.0;
    return out;
}
}  // namespace detail

/// Positive square root; eigenvalues in [-psd_slack, 0) and at the
/// round-off floor map to 0.
inline Matrix mat_sqrt(const Matrix& p, const Tolerances& tol = kDefaultTolerances) {
    const auto e = detail::psd_eig(p, tol);
    return from_eigen(e, detail::floored_sqrt(e.values));
}

/// Square root of the generalized inverse: lambda^{-1/2} on eigenvalues
/// above d * lambda_max * 1e-12, zero on the rest.
inline Matrix gen_inv_sqrt(const Matrix& p, const Tolerances& tol = kDefaultTolerances) {
    const auto e = detail::psd_eig(p, tol);
    const auto n = e.values.size();
    if (n == 0) return Matrix(0, 0);
    const double lambda_max = std::max(0.0, e.values(n - 1));
    const double threshold = static_cast<double>(n) * lambda_max * 1e-12;
    RealVector f(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        f(i) = e.values(i) > threshold && e.values(i) > 0.0 ? 1.0 / std::sqrt(e.values(i)) : 0.0;
    }
    return from_eigen(e, f);
}

struct PolarDecomposition {
    Matrix unitary;   // full unitary extending the partial isometry
    Matrix positive;  // sqrt(A^dagger A)
};

namespace detail {
// Extends an orthonormal family (columns of basis) by Gram-Schmidt over the
// standard basis vectors in index order until it has `want` columns.
inline Matrix complete_basis(const Matrix& basis, Eigen::Index dim, Eigen::Index want) {
    std::vector<Vector> cols;
    for (Eigen::Index c = 0; c < basis.cols(); ++c) cols.push_back(basis.col(c));
    const std::size_t have = cols.size();
    for (Eigen::Index k = 0; k < dim && static_cast<Eigen::Index>(cols.size()) < want; ++k) {
        Vector v = Vector::Unit(dim, k);
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& u : cols) v -= u * u.dot(v);
        const double n = v.norm();
        if (n > 1e-8) cols.push_back(v / n);
    }
    Matrix out(dim, static_cast<Eigen::Index>(cols.size() - have));
    for (std::size_t c = have; c < cols.size(); ++c) out.col(static_cast<Eigen::Index>(c - have)) = cols[c];
    return out;
}
}  // namespace detail

/// A = U P with P = sqrt(A^dagger A). On the support of P, U is fixed by A;
/// the kernel of P is mapped onto the orthocomplement of A's range, both
/// completed deterministically from the standard basis.
inline PolarDecomposition polar_decompose(const Matrix& a, const Tolerances& tol = kDefaultTolerances) {
    require_square(a, "polar_decompose input");
    const Eigen::Index d = a.rows();
    const Matrix ata = a.adjoint() * a;
    const auto e = detail::psd_eig((ata + ata.adjoint()) / 2.0, tol);
    // Rank is decided on A^dagger A, where round-off sits at eps * lambda_max.
    const double lmax = d > 0 ? std::max(0.0, e.values.maxCoeff()) : 0.0;
    const double cut = std::max(1e-300, static_cast<double>(d) * lmax * 1e-12);
    std::vector<Eigen::Index> support;
    RealVector sigma = RealVector::Zero(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        if (e.values(i) > cut) {
            support.push_back(i);
            sigma(i) = std::sqrt(e.values(i));
        }
    }
    const Matrix positive = from_eigen(e, sigma);

    const auto r = static_cast<Eigen::Index>(support.size());
    Matrix domain(d, r), range(d, r);
    for (Eigen::Index k = 0; k < r; ++k) {
        const Vector v = e.vectors.col(support[static_cast<std::size_t>(k)]);
        domain.col(k) = v;
        range.col(k) = a * v / sigma(support[static_cast<std::size_t>(k)]);
    }
    Matrix unitary = range * domain.adjoint();
    if (r < d) {
        const Matrix kernel = detail::complete_basis(domain, d, d);
        const Matrix corange = detail::complete_basis(range, d, d);
        unitary += corange * kernel.adjoint();
    }
    return {unitary, positive};
}

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

/// Unit vector in C^d.
class PureState {
  public:
    static PureState from_amplitudes(Vector amplitudes) {
        if (amplitudes.size() < 1) fail(ErrorKind::Validation, "pure state needs dim >= 1");
        const double n2 = amplitudes.squaredNorm();
        if (!std::isfinite(n2) || std::abs(n2 - 1.0) >= 1e-12) {
            fail(ErrorKind::Validation, "pure state not normalized: |norm^2 - 1| = " +
                                            std::to_string(std::abs(n2 - 1.0)));
        }
        return PureState(std::move(amplitudes));
    }

    /// Normalizes v; v must be nonzero.
    static PureState normalized(const Vector& v) {
        const double n = v.norm();
        if (!(n > 0.0) || !std::isfinite(n)) fail(ErrorKind::Validation, "cannot normalize zero vector");
        return PureState(v / n);
    }

    static PureState basis(int d, int index) {
        if (index < 0 || index >= d) fail(ErrorKind::IndexOutOfRange, "basis index out of range");
        return PureState(Vector::Unit(d, index));
    }

    int dim() const { return static_cast<int>(amps_.size()); }
    const Vector& amplitudes() const { return amps_; }
    Matrix projector() const { return amps_ * amps_.adjoint(); }

    /// <this|op|this>
    cplx expectation(const Matrix& op) const { return amps_.dot(op * amps_); }

  private:
    explicit PureState(Vector v) : amps_(std::move(v)) {}
    Vector amps_;
};

/// Hermitian, positive, unit-trace operator.
class DensityOperator {
  public:
    static DensityOperator from_matrix(const Matrix& m, const Tolerances& tol = kDefaultTolerances) {
        require_square(m, "density operator");
        if (!all_finite(m)) fail(ErrorKind::Validation, "density operator has non-finite entries");
        const double herm = hermiticity_residual(m);
        if (herm > 1e-12) fail(ErrorKind::NonHermitian, "density operator not Hermitian: " + std::to_string(herm));
        const Matrix sym = (m + m.adjoint()) / 2.0;
        const double tr = sym.trace().real();
        if (std::abs(tr - 1.0) > tol.algebraic) {
            fail(ErrorKind::Validation, "density operator trace " + std::to_string(tr));
        }
        if (min_eigenvalue(sym) < -tol.psd_slack) fail(ErrorKind::NotPositive, "density operator not positive");
        return DensityOperator(sym);
    }

    static DensityOperator pure(const PureState& psi) { return DensityOperator(psi.projector()); }
    static DensityOperator maximally_mixed(int d) { return DensityOperator(identity(d) / static_cast<double>(d)); }

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const { return m_; }

  private:
    explicit DensityOperator(Matrix m) : m_(std::move(m)) {}
    Matrix m_;
};

// ---------------------------------------------------------------------------
// Fidelity
// ---------------------------------------------------------------------------

/// (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 for PSD rho; sigma may be
/// trace-deficient (unnormalized instrument branches). Pure rho takes the
/// shortcut <psi|sigma|psi>.
inline double fidelity_psd(const Matrix& rho, const Matrix& sigma) {
    require_square(rho, "fidelity argument");
    require_square(sigma, "fidelity argument");
    if (rho.rows() != sigma.rows()) fail(ErrorKind::DimMismatch, "fidelity arguments differ in dimension");
    const auto e = herm_eig(rho);
    const auto n = e.values.size();
    const double top = e.values(n - 1);
    const double rest = e.values.sum() - top;
    if (std::abs(rest) < 1e-13 && top > 0.0) {
        const Vector psi = e.vectors.col(n - 1);
        return std::max(0.0, top * psi.dot(sigma * psi).real());
    }
    const Matrix root = from_eigen(e, detail::floored_sqrt(e.values));
    const Matrix inner = root * sigma * root;
    const double t = detail::floored_sqrt(herm_eig((inner + inner.adjoint()) / 2.0).values).sum();
    return t * t;
}

/// Uhlmann fidelity of density operators
inline double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
    return std::clamp(fidelity_psd(rho.matrix(), sigma.matrix()), 0.0, 1.0);
}

/// Same formula without the pure-state shortcut; used as a cross-check.
inline double fidelity_general(const Matrix& rho, const Matrix& sigma) {
    require_square(rho, "fidelity argument");
    require_square(sigma, "fidelity argument");
    if (rho.rows() != sigma.rows()) fail(ErrorKind::DimMismatch, "fidelity arguments differ in dimension");
    const auto e = detail::psd_eig(rho, kDefaultTolerances);
    const Matrix root = from_eigen(e, detail::floored_sqrt(e.values));
    const Matrix inner = root * sigma * root;
    const double t = detail::floored_sqrt(herm_eig((inner + inner.adjoint()) / 2.0).values).sum();
    return t * t;
}

// ---------------------------------------------------------------------------
// Haar sampling
// ---------------------------------------------------------------------------

inline cplx complex_gaussian(Rng& rng) {
    const double re = rng.normal();
    const double im = rng.normal();
    return {re * M_SQRT1_2, im * M_SQRT1_2};
}

inline Matrix gaussian_matrix(int rows, int cols, Rng& rng) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = complex_gaussian(rng);
    return m;
}

/// Unitarily invariant random pure state.
inline PureState haar_state(int d, Rng& rng) {
    if (d < 1) fail(ErrorKind::RangeError, "dimension must be >= 1");
    Vector v(d);
    for (int i = 0; i < d; ++i) v(i) = complex_gaussian(rng);
    return PureState::normalized(v);
}

/// Haar unitary: QR of a Ginibre matrix with R's diagonal phases moved into Q.
inline Matrix haar_unitary(int d, Rng& rng) {
    if (d < 1) fail(ErrorKind::RangeError, "dimension must be >= 1");
    const Matrix z = gaussian_matrix(d, d, rng);
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ() * Matrix::Identity(d, d);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i) {
        const cplx rii = r(i, i);
        const double a = std::abs(rii);
        q.col(i) *= a > 0.0 ? rii / a : cplx(1.0, 0.0);
    }
    return q;
}

/// Random positive operator X X^dagger with complex Gaussian X (d x rank).
inline Matrix random_psd(int d, int rank, Rng& rng) {
    const Matrix x = gaussian_matrix(d, rank, rng);
    Matrix p = x * x.adjoint();
    return (p + p.adjoint()) / 2.0;
}

inline DensityOperator random_density(int d, Rng& rng) {
    Matrix p = random_psd(d, d, rng);
    p /= p.trace().real();
    return DensityOperator::from_matrix(p);
}

}  // namespace qidt
