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

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qka/matrix.hpp"
#include "qka/states.hpp"

namespace qka {

inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;

/// Hermitian, positive semidefinite, unit-trace operator on n qubits.
/// Validated on construction; once built, it is a legal quantum state.
class DensityMatrix {
public:
    static DensityMatrix from_operator(std::size_t num_qubits, Matrix op) {
        if (!op.is_square() || op.rows() != (std::size_t{1} << num_qubits)) {
            throw std::invalid_argument("DensityMatrix: operator dimension must be 2^n");
        }
        op.require_hermitian("DensityMatrix");
        if (std::abs(op.trace().real() - 1.0) > kTraceTol ||
            std::abs(op.trace().imag()) > kTraceTol) {
            throw std::invalid_argument("DensityMatrix: trace must be 1 within 1e-10");
        }
        const EigenSystem es = hermitian_eig(op);
        if (es.eigenvalues.back() < -kPsdTol) {
            throw std::invalid_argument(
                "DensityMatrix: operator has eigenvalue below -1e-10 (not PSD)");
        }
        return DensityMatrix(num_qubits, std::move(op));
    }

    std::size_t num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return op_.rows(); }
    const Matrix& op() const { return op_; }

private:
    DensityMatrix(std::size_t num_qubits, Matrix op)
        : num_qubits_(num_qubits), op_(std::move(op)) {}

    std::size_t num_qubits_;
    Matrix op_;
};

/// Partial trace of |psi><psi| keeping the listed qubits (output qubit j is
/// input qubit keep[j]).
inline DensityMatrix reduced_density(const StateVector& state,
                                     const std::vector<std::size_t>& keep) {
    detail::check_targets(state.num_qubits(), keep, "reduced_density");
    const std::size_t n = state.num_qubits();
    const std::size_t k = keep.size();

    std::vector<std::size_t> rest;
    for (std::size_t q = 0; q < n; ++q) {
        bool kept = false;
        for (std::size_t t : keep) kept = kept || (t == q);
        if (!kept) rest.push_back(q);
    }

    const auto assemble = [&](std::size_t sub, std::size_t env) {
        // Build a full index from the kept sub-index and environment index.
        std::size_t idx = 0;
        for (std::size_t t = 0; t < k; ++t) {
            const std::size_t bit = (sub >> (k - 1 - t)) & 1u;
            idx |= bit << (n - 1 - keep[t]);
        }
        for (std::size_t r = 0; r < rest.size(); ++r) {
            const std::size_t bit = (env >> (rest.size() - 1 - r)) & 1u;
            idx |= bit << (n - 1 - rest[r]);
        }
        return idx;
    };

    const std::size_t sub_dim = std::size_t{1} << k;
    const std::size_t env_dim = std::size_t{1} << rest.size();
    Matrix rho(sub_dim, sub_dim);
    for (std::size_t i = 0; i < sub_dim; ++i)
        for (std::size_t j = 0; j < sub_dim; ++j) {
            Complex acc = 0.0;
            for (std::size_t e = 0; e < env_dim; ++e)
                acc += state.amplitude(assemble(i, e)) * std::conj(state.amplitude(assemble(j, e)));
            rho(i, j) = acc;
        }
    return DensityMatrix::from_operator(k, std::move(rho));
}

/// Sum p_i |psi_i><psi_i| over an ensemble of pure states.
inline DensityMatrix ensemble_density(
    const std::vector<std::pair<double, StateVector>>& members) {
    if (members.empty()) {
        throw std::invalid_argument("ensemble_density: ensemble must be non-empty");
    }
    const std::size_t nq = members.front().second.num_qubits();
    double total = 0.0;
    for (const auto& [p, psi] : members) {
        if (p < 0.0) {
            throw std::invalid_argument("ensemble_density: probabilities must be >= 0");
        }
        if (psi.num_qubits() != nq) {
            throw std::invalid_argument("ensemble_density: states must share one dimension");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > kTraceTol) {
        throw std::invalid_argument("ensemble_density: probabilities must sum to 1 within 1e-10");
    }
    Matrix rho(std::size_t{1} << nq, std::size_t{1} << nq);
    for (const auto& [p, psi] : members) rho += p * psi.projector();
    return DensityMatrix::from_operator(nq, std::move(rho));
}

/// (1/2) ||a - b||_1. Zero iff no measurement can tell a from b.
inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("trace_distance: dimension mismatch");
    }
    return 0.5 * trace_norm(a.op() - b.op());
}

/// Extract the pure state of a rank-1 density matrix. The returned state has
/// its first significant amplitude rotated real-positive, which pins the
/// otherwise arbitrary global phase of an eigenvector.
inline StateVector pure_state(const DensityMatrix& rho, double purity_tol = 1e-9) {
    const EigenSystem es = hermitian_eig(rho.op());
    if (es.eigenvalues.front() < 1.0 - purity_tol) {
        throw SelfCheckError("pure_state: density matrix is not pure (top eigenvalue " +
                             std::to_string(es.eigenvalues.front()) + ")");
    }
    std::vector<Complex> amps(rho.dim());
    for (std::size_t i = 0; i < rho.dim(); ++i) amps[i] = es.eigenvectors(i, 0);

    for (const auto& a : amps) {
        if (std::abs(a) > 1e-12) {
            const Complex phase = std::conj(a) / std::abs(a);
            for (auto& x : amps) x *= phase;
            break;
        }
    }
    return normalized(rho.num_qubits(), std::move(amps));
}

}  // namespace qka
