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

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qka/matrix.hpp"

namespace qka {

inline constexpr double kNormTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-10;

/// Pure n-qubit state. Qubit 0 is the leftmost tensor factor, i.e. the most
/// significant bit of the amplitude index (particle a, then b, then c).
class StateVector {
public:
    /// |0...0> on num_qubits qubits.
    explicit StateVector(std::size_t num_qubits)
        : num_qubits_(num_qubits), amps_(std::size_t{1} << num_qubits) {
        amps_[0] = 1.0;
    }

    StateVector(std::size_t num_qubits, std::vector<Complex> amplitudes)
        : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
        if (amps_.size() != (std::size_t{1} << num_qubits_)) {
            throw std::invalid_argument("StateVector: expected 2^n amplitudes");
        }
        if (std::abs(norm() - 1.0) > kNormTol) {
            throw std::invalid_argument("StateVector: amplitudes must have unit norm");
        }
    }

    static StateVector computational_basis(std::size_t num_qubits, std::size_t index) {
        StateVector s(num_qubits);
        s.amps_[0] = 0.0;
        s.amps_.at(index) = 1.0;
        return s;
    }

    std::size_t num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return amps_.size(); }
    const std::vector<Complex>& amplitudes() const { return amps_; }
    Complex amplitude(std::size_t i) const { return amps_.at(i); }

    double norm() const {
        double s = 0.0;
        for (const auto& a : amps_) s += std::norm(a);
        return std::sqrt(s);
    }

    bool is_real(double tol = kNormTol) const {
        for (const auto& a : amps_)
            if (std::abs(a.imag()) > tol) return false;
        return true;
    }

    /// Column-matrix view |psi>.
    Matrix as_column() const { return Matrix(dim(), 1, amps_); }

    /// Projector |psi><psi|.
    Matrix projector() const {
        const std::size_t d = dim();
        Matrix p(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) p(i, j) = amps_[i] * std::conj(amps_[j]);
        return p;
    }

private:
    friend StateVector normalized(std::size_t num_qubits, std::vector<Complex> amps);

    StateVector(std::size_t num_qubits, std::vector<Complex> amps, int /*unchecked*/)
        : num_qubits_(num_qubits), amps_(std::move(amps)) {}

    std::size_t num_qubits_;
    std::vector<Complex> amps_;
};

/// Normalize raw amplitudes into a StateVector; rejects (near-)zero vectors.
inline StateVector normalized(std::size_t num_qubits, std::vector<Complex> amps) {
    if (amps.size() != (std::size_t{1} << num_qubits)) {
        throw std::invalid_argument("normalized: expected 2^n amplitudes");
    }
    double s = 0.0;
    for (const auto& a : amps) s += std::norm(a);
    if (s < 1e-24) {
        throw std::invalid_argument("normalized: cannot normalize a zero vector");
    }
    const double inv = 1.0 / std::sqrt(s);
    for (auto& a : amps) a *= inv;
    return StateVector(num_qubits, std::move(amps), 0);
}

/// <a|b>.
inline Complex inner_product(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("inner_product: dimension mismatch");
    }
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        s += std::conj(a.amplitude(i)) * b.amplitude(i);
    return s;
}

/// |<a|b>|. States are physically equal iff this is 1; amplitude-wise
/// comparison is never meaningful because of global phase.
inline double fidelity(const StateVector& a, const StateVector& b) {
    return std::abs(inner_product(a, b));
}

inline StateVector tensor_product(const StateVector& a, const StateVector& b) {
    std::vector<Complex> amps(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j)
            amps[i * b.dim() + j] = a.amplitude(i) * b.amplitude(j);
    return StateVector(a.num_qubits() + b.num_qubits(), std::move(amps));
}

inline Matrix sigma_x() { return Matrix(2, 2, {0.0, 1.0, 1.0, 0.0}); }
inline Matrix sigma_z() { return Matrix(2, 2, {1.0, 0.0, 0.0, -1.0}); }

enum class Bell { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

inline constexpr std::array<Bell, 4> kBellLabels = {Bell::PhiPlus, Bell::PhiMinus,
                                                    Bell::PsiPlus, Bell::PsiMinus};

inline std::string to_string(Bell b) {
    switch (b) {
        case Bell::PhiPlus: return "Phi+";
        case Bell::PhiMinus: return "Phi-";
        case Bell::PsiPlus: return "Psi+";
        case Bell::PsiMinus: return "Psi-";
    }
    throw std::logic_error("to_string(Bell): bad label");
}

/// The four Bell states. Psi- is the singlet (|01> - |10>)/sqrt(2).
inline StateVector make_bell(Bell label) {
    const double r = 1.0 / std::sqrt(2.0);
    switch (label) {
        case Bell::PhiPlus: return StateVector(2, {r, 0.0, 0.0, r});
        case Bell::PhiMinus: return StateVector(2, {r, 0.0, 0.0, -r});
        case Bell::PsiPlus: return StateVector(2, {0.0, r, r, 0.0});
        case Bell::PsiMinus: return StateVector(2, {0.0, r, -r, 0.0});
    }
    throw std::logic_error("make_bell: bad label");
}

namespace detail {

/// Bit of qubit q inside an amplitude index (qubit 0 = most significant).
inline std::size_t qubit_bit(std::size_t index, std::size_t qubit, std::size_t num_qubits) {
    return (index >> (num_qubits - 1 - qubit)) & 1u;
}

inline void check_targets(std::size_t num_qubits, const std::vector<std::size_t>& targets,
                          const char* who) {
    if (targets.empty()) {
        throw std::invalid_argument(std::string(who) + ": target list must be non-empty");
    }
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i] >= num_qubits) {
            throw std::invalid_argument(std::string(who) + ": qubit index " +
                                        std::to_string(targets[i]) + " out of range");
        }
        for (std::size_t j = i + 1; j < targets.size(); ++j) {
            if (targets[i] == targets[j]) {
                throw std::invalid_argument(std::string(who) + ": duplicate qubit index " +
                                            std::to_string(targets[i]));
            }
        }
    }
}

/// Apply an arbitrary (not necessarily unitary) operator on the given target
/// qubits, identity elsewhere. Returns unnormalized amplitudes.
inline std::vector<Complex> apply_operator(const StateVector& state, const Matrix& op,
                                           const std::vector<std::size_t>& targets) {
    const std::size_t n = state.num_qubits();
    const std::size_t k = targets.size();
    const std::size_t sub_dim = std::size_t{1} << k;
    if (!op.is_square() || op.rows() != sub_dim) {
        throw std::invalid_argument("apply_operator: operator dimension must be 2^#targets");
    }

    std::vector<Complex> out(state.dim());
    for (std::size_t i = 0; i < state.dim(); ++i) {
        // Sub-index of i over the targets, in target order.
        std::size_t row = 0;
        for (std::size_t t = 0; t < k; ++t)
            row = (row << 1) | qubit_bit(i, targets[t], n);

        Complex acc = 0.0;
        for (std::size_t col = 0; col < sub_dim; ++col) {
            const Complex g = op(row, col);
            if (g == Complex{}) continue;
            // Replace the target bits of i with `col`.
            std::size_t src = i;
            for (std::size_t t = 0; t < k; ++t) {
                const std::size_t pos = n - 1 - targets[t];
                const std::size_t bit = (col >> (k - 1 - t)) & 1u;
                src = (src & ~(std::size_t{1} << pos)) | (bit << pos);
            }
            acc += g * state.amplitude(src);
        }
        out[i] = acc;
    }
    return out;
}

}  // namespace detail

/// Apply a unitary gate on the target qubits (identity on the rest).
inline StateVector apply_gate(const StateVector& state, const Matrix& gate,
                              const std::vector<std::size_t>& targets) {
    detail::check_targets(state.num_qubits(), targets, "apply_gate");
    gate.require_square("apply_gate");
    const Matrix gram = gate.adjoint() * gate;
    if ((gram - Matrix::identity(gate.rows())).max_abs() > kUnitaryTol) {
        throw std::invalid_argument("apply_gate: gate is not unitary within 1e-10");
    }
    return normalized(state.num_qubits(), detail::apply_operator(state, gate, targets));
}

/// Real orthogonal complement of a real single-qubit state: (x, y) -> (-y, x).
inline StateVector orthogonal_complement(const StateVector& psi) {
    if (psi.num_qubits() != 1) {
        throw std::invalid_argument("orthogonal_complement: expected a single qubit");
    }
    if (!psi.is_real()) {
        throw std::invalid_argument("orthogonal_complement: expected real amplitudes");
    }
    const double x = psi.amplitude(0).real();
    const double y = psi.amplitude(1).real();
    return StateVector(1, {-y, x});
}

}  // namespace qka
