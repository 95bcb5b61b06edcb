// Copyright 2026 The esdlab Authors
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

/**
 * @file qmatrix.hpp
 * @brief Fixed-size dense complex matrices for one- and two-qubit operators.
 *
 * Two-qubit operators act on the ordered basis |11>, |10>, |01>, |00>, where
 * the first label is qubit 1 and "1" is the excited level. Single-qubit
 * matrices use the matching order |1>, |0>, so sigma^z = diag(1, -1) and
 * sigma^+ = |1><0| is the upper-right entry.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <utility>

#include "esdlab/error.hpp"

namespace esdlab {

using complex = std::complex<double>;

template <std::size_t N>
class Matrix {
public:
    static constexpr std::size_t dim = N;

    constexpr Matrix() = default;

    /// Row-major literal; missing trailing entries are zero.
    Matrix(std::initializer_list<complex> entries) {
        std::copy_n(entries.begin(), std::min(entries.size(), N * N), data_.begin());
    }

    static Matrix zero() { return Matrix{}; }

    static Matrix identity() {
        Matrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix diagonal(const std::array<complex, N>& d) {
        Matrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = d[i];
        return m;
    }

    complex& operator()(std::size_t r, std::size_t c) { return data_[r * N + c]; }
    const complex& operator()(std::size_t r, std::size_t c) const { return data_[r * N + c]; }

    const std::array<complex, N * N>& data() const { return data_; }

    Matrix& operator+=(const Matrix& o) {
        for (std::size_t i = 0; i < N * N; ++i) data_[i] += o.data_[i];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        for (std::size_t i = 0; i < N * N; ++i) data_[i] -= o.data_[i];
        return *this;
    }
    Matrix& operator*=(complex s) {
        for (auto& v : data_) v *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, complex s) { return a *= s; }
    friend Matrix operator*(complex s, Matrix a) { return a *= s; }
    friend Matrix operator*(double s, Matrix a) { return a *= complex(s, 0.0); }
    friend Matrix operator*(Matrix a, double s) { return a *= complex(s, 0.0); }
    friend Matrix operator-(Matrix a) { return a *= complex(-1.0, 0.0); }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        Matrix out;
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t k = 0; k < N; ++k) {
                const complex aik = a(i, k);
                if (aik == complex{}) continue;
                for (std::size_t j = 0; j < N; ++j) out(i, j) += aik * b(k, j);
            }
        }
        return out;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

    Matrix adjoint() const {
        Matrix out;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) out(j, i) = std::conj((*this)(i, j));
        return out;
    }

    Matrix conj() const {
        Matrix out;
        for (std::size_t i = 0; i < N * N; ++i) out.data_[i] = std::conj(data_[i]);
        return out;
    }

    complex trace() const {
        complex t{};
        for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
        return t;
    }

    /// Largest entry magnitude.
    double max_abs() const {
        double m = 0.0;
        for (const auto& v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    double frobenius() const {
        double s = 0.0;
        for (const auto& v : data_) s += std::norm(v);
        return std::sqrt(s);
    }

    /// max |M - M^dagger| over entries.
    double hermiticity_defect() const {
        double m = 0.0;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = i; j < N; ++j)
                m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return m;
    }

    bool all_finite() const {
        return std::all_of(data_.begin(), data_.end(), [](const complex& v) {
            return std::isfinite(v.real()) && std::isfinite(v.imag());
        });
    }

private:
    std::array<complex, N * N> data_{};
};

using ComplexMatrix2 = Matrix<2>;
using ComplexMatrix4 = Matrix<4>;

/// Commutator [A, B].
template <std::size_t N>
Matrix<N> commutator(const Matrix<N>& a, const Matrix<N>& b) {
    return a * b - b * a;
}

enum class PauliAxis { x, y, z, plus, minus };

inline ComplexMatrix2 pauli(PauliAxis axis) {
    const complex i(0.0, 1.0);
    switch (axis) {
    case PauliAxis::x: return {0.0, 1.0, 1.0, 0.0};
    case PauliAxis::y: return {0.0, -i, i, 0.0};
    case PauliAxis::z: return {1.0, 0.0, 0.0, -1.0};
    case PauliAxis::plus: return {0.0, 1.0, 0.0, 0.0};
    case PauliAxis::minus: return {0.0, 0.0, 1.0, 0.0};
    }
    return {};
}

/// Kronecker product, qubit 1 (A) as the slow index.
inline ComplexMatrix4 tensor(const ComplexMatrix2& a, const ComplexMatrix2& b) {
    ComplexMatrix4 out;
    for (std::size_t r1 = 0; r1 < 2; ++r1)
        for (std::size_t c1 = 0; c1 < 2; ++c1)
            for (std::size_t r2 = 0; r2 < 2; ++r2)
                for (std::size_t c2 = 0; c2 < 2; ++c2)
                    out(2 * r1 + r2, 2 * c1 + c2) = a(r1, c1) * b(r2, c2);
    return out;
}

enum class Qubit { first = 1, second = 2 };

inline ComplexMatrix4 embed(const ComplexMatrix2& op, Qubit qubit) {
    return qubit == Qubit::first ? tensor(op, ComplexMatrix2::identity())
                                 : tensor(ComplexMatrix2::identity(), op);
}

inline ComplexMatrix4 embed_pauli(PauliAxis axis, Qubit qubit) { return embed(pauli(axis), qubit); }

// ---------------------------------------------------------------------------
// Hermitian eigensolver (cyclic complex Jacobi)
// ---------------------------------------------------------------------------

inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kPsdClampTolerance = 1e-9;

struct HermitianEigen {
    std::array<double, 4> values{};  ///< descending
    ComplexMatrix4 vectors;          ///< column k is the eigenvector of values[k]
};

namespace detail {

inline double off_diagonal_norm(const ComplexMatrix4& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

inline void require_hermitian(const ComplexMatrix4& m) {
    const double defect = m.hermiticity_defect();
    if (!(defect <= kHermitianTolerance))
        throw Error(ErrorCode::NotHermitian, "max |M - M^dagger| = " + std::to_string(defect));
}

} // namespace detail

/// Full eigendecomposition of a Hermitian 4x4 matrix.
inline HermitianEigen herm_eig(const ComplexMatrix4& m) {
    detail::require_hermitian(m);

    // Symmetrize so the rotations act on an exactly Hermitian matrix.
    ComplexMatrix4 a = 0.5 * (m + m.adjoint());
    ComplexMatrix4 v = ComplexMatrix4::identity();
    const double scale = std::max(1.0, a.frobenius());

    for (int sweep = 0; sweep < 64 && detail::off_diagonal_norm(a) >= 1e-14 * scale; ++sweep) {
        for (std::size_t p = 0; p < 3; ++p) {
            for (std::size_t q = p + 1; q < 4; ++q) {
                const complex apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag < 1e-300) continue;
                const complex phase = apq / mag;
                const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // J = diag(1, e^{-i phi}) on (p,q) followed by a real rotation;
                // only rows and columns p, q change under A <- J^dagger A J.
                const complex jpp = c, jpq = s;
                const complex jqp = -s * std::conj(phase), jqq = c * std::conj(phase);
                auto rotate_columns = [&](ComplexMatrix4& x) {
                    for (std::size_t r = 0; r < 4; ++r) {
                        const complex xp = x(r, p), xq = x(r, q);
                        x(r, p) = xp * jpp + xq * jqp;
                        x(r, q) = xp * jpq + xq * jqq;
                    }
                };
                rotate_columns(a);
                for (std::size_t col = 0; col < 4; ++col) {
                    const complex xp = a(p, col), xq = a(q, col);
                    a(p, col) = std::conj(jpp) * xp + std::conj(jqp) * xq;
                    a(q, col) = std::conj(jpq) * xp + std::conj(jqq) * xq;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                rotate_columns(v);
            }
        }
    }

    std::array<std::size_t, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return a(x, x).real() > a(y, y).real(); });

    HermitianEigen out;
    for (std::size_t k = 0; k < 4; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < 4; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

inline std::array<double, 4> herm_eigvals(const ComplexMatrix4& m) { return herm_eig(m).values; }

/// Hermitian positive square root; eigenvalues in [-1e-9, 0) are clamped to zero.
inline ComplexMatrix4 psd_sqrt(const ComplexMatrix4& m) {
    const HermitianEigen eig = herm_eig(m);
    if (eig.values[3] < -kPsdClampTolerance)
        throw Error(ErrorCode::NotPositive, "min eigenvalue " + std::to_string(eig.values[3]));

    ComplexMatrix4 out;
    for (std::size_t k = 0; k < 4; ++k) {
        const double root = std::sqrt(std::max(0.0, eig.values[k]));
        if (root == 0.0) continue;
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 4; ++c)
                out(r, c) += root * eig.vectors(r, k) * std::conj(eig.vectors(c, k));
    }
    return out;
}

} // namespace esdlab
