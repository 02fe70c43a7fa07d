// Copyright 2026 The qka authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qka/errors.hpp"

namespace qka {

using Complex = std::complex<double>;

/// Absolute tolerance below which a matrix counts as Hermitian. All operators
/// in this library are constructed, not measured, so the tolerance is tight.
inline constexpr double kHermitianTol = 1e-12;

/// Eigenvalues below this cutoff are treated as zero when forming
/// pseudo-inverses (inverse square roots on rank-deficient operators).
inline constexpr double kPseudoInverseCutoff = 1e-12;

/// Dense complex matrix, row-major. Sized for desk-scale quantum operators
/// (dimension 2 to 8); no attempt at sparsity or blocking.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {}

    Matrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        if (entries_.size() != rows_ * cols_) {
            throw std::invalid_argument(
                "Matrix: entries length must equal rows*cols (got " +
                std::to_string(entries_.size()) + ", expected " +
                std::to_string(rows_ * cols_) + ")");
        }
    }

    static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_ && rows_ > 0; }

    Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    const std::vector<Complex>& entries() const { return entries_; }

    Matrix& operator+=(const Matrix& o) {
        require_same_shape(o, "operator+=");
        for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
        return *this;
    }

    Matrix& operator-=(const Matrix& o) {
        require_same_shape(o, "operator-=");
        for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
        return *this;
    }

    Matrix& operator*=(Complex s) {
        for (auto& e : entries_) e *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Complex s, Matrix m) { return m *= s; }
    friend Matrix operator*(Matrix m, Complex s) { return m *= s; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) {
            throw std::invalid_argument("Matrix multiply: inner dimensions differ (" +
                                        std::to_string(a.cols_) + " vs " +
                                        std::to_string(b.rows_) + ")");
        }
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Complex aik = a(i, k);
                if (aik == Complex{}) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        }
        return c;
    }

    /// Conjugate transpose.
    Matrix adjoint() const {
        Matrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    Complex trace() const {
        require_square("trace");
        Complex t = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& e : entries_) m = std::max(m, std::abs(e));
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& e : entries_) s += std::norm(e);
        return std::sqrt(s);
    }

    bool is_hermitian(double tol = kHermitianTol) const {
        if (!is_square()) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i; j < cols_; ++j)
                if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
        return true;
    }

    void require_square(const char* who) const {
        if (!is_square()) {
            throw std::invalid_argument(std::string(who) + ": matrix must be square");
        }
    }

    void require_hermitian(const char* who, double tol = kHermitianTol) const {
        if (!is_hermitian(tol)) {
            throw std::invalid_argument(std::string(who) +
                                        ": matrix must be Hermitian within 1e-12");
        }
    }

private:
    void require_same_shape(const Matrix& o, const char* who) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            throw std::invalid_argument(std::string(who) + ": shape mismatch");
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

/// Kronecker product. Dimensions multiply; (a otimes b)(c otimes d) = ac otimes bd.
inline Matrix tensor_product(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return out;
}

/// Eigendecomposition of a Hermitian matrix: eigenvalues sorted descending,
/// eigenvectors as orthonormal columns in the same order.
struct EigenSystem {
    std::vector<double> eigenvalues;
    Matrix eigenvectors;
};

/// Hermitian eigensolver via cyclic Jacobi with complex phase rotations.
/// Converges quadratically; at dimension <= 8 a handful of sweeps suffices.
inline EigenSystem hermitian_eig(const Matrix& m) {
    m.require_square("hermitian_eig");
    m.require_hermitian("hermitian_eig");
    const std::size_t n = m.rows();

    // Work on the exactly Hermitian part; input asymmetry is below 1e-12.
    Matrix a = 0.5 * (m + m.adjoint());
    Matrix v = Matrix::identity(n);

    const double scale = std::max(a.max_abs(), 1e-300);
    const double stop = 1e-15 * static_cast<double>(n) * scale;
    const double skip = 1e-18 * scale;

    bool converged = (n == 1);
    for (int sweep = 0; sweep < 128 && !converged; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        if (std::sqrt(off) <= stop) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double g = std::abs(a(p, q));
                if (g <= skip) continue;
                // Phase factor turning a(p,q) real, then a real Jacobi rotation
                // annihilating it: J = D(d) * R(theta) acting on columns p, q.
                const Complex d = std::conj(a(p, q)) / g;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * g);
                const double t = (tau >= 0.0) ? 1.0 / (tau + std::hypot(1.0, tau))
                                              : 1.0 / (tau - std::hypot(1.0, tau));
                const double c = 1.0 / std::hypot(1.0, t);
                const double s = t * c;

                Matrix j = Matrix::identity(n);
                j(p, p) = c;
                j(p, q) = s;
                j(q, p) = -d * s;
                j(q, q) = d * c;

                a = j.adjoint() * a * j;
                v = v * j;
            }
        }
    }
    if (!converged) {
        throw std::runtime_error("hermitian_eig: Jacobi iteration failed to converge");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a(x, x).real() > a(y, y).real();
    });

    EigenSystem out;
    out.eigenvalues.resize(n);
    out.eigenvectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
    }
    return out;
}

/// V f(diag) V^dagger for a Hermitian matrix and a real scalar map f.
template <typename F>
Matrix herm_matrix_function(const Matrix& m, F&& f) {
    const EigenSystem es = hermitian_eig(m);
    const std::size_t n = m.rows();
    Matrix scaled = es.eigenvectors;  // columns scaled by f(lambda)
    for (std::size_t k = 0; k < n; ++k) {
        const double fk = f(es.eigenvalues[k]);
        for (std::size_t i = 0; i < n; ++i) scaled(i, k) *= fk;
    }
    return scaled * es.eigenvectors.adjoint();
}

/// Pseudo-inverse square root: eigenvalues at or below `cutoff` map to zero,
/// so the result is well-defined on rank-deficient operators.
inline Matrix inverse_sqrt(const Matrix& m, double cutoff = kPseudoInverseCutoff) {
    return herm_matrix_function(
        m, [cutoff](double x) { return x > cutoff ? 1.0 / std::sqrt(x) : 0.0; });
}

/// Sum of absolute eigenvalues (Schatten 1-norm restricted to Hermitian input).
inline double trace_norm(const Matrix& m) {
    const EigenSystem es = hermitian_eig(m);
    double s = 0.0;
    for (double lambda : es.eigenvalues) s += std::abs(lambda);
    return s;
}

}  // namespace qka
