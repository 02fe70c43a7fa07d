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
#include "qka/random.hpp"
#include "qka/states.hpp"

namespace qka {

/// Finite set of Hermitian PSD operators summing to identity, the most
/// general quantum measurement. Validated on construction.
class Povm {
public:
    explicit Povm(std::vector<Matrix> elements) : elements_(std::move(elements)) {
        if (elements_.empty()) {
            throw std::invalid_argument("Povm: element list must be non-empty");
        }
        const std::size_t d = elements_.front().rows();
        Matrix sum(d, d);
        for (const auto& e : elements_) {
            if (!e.is_square() || e.rows() != d) {
                throw std::invalid_argument("Povm: elements must be square, same dimension");
            }
            e.require_hermitian("Povm element");
            const EigenSystem es = hermitian_eig(e);
            if (es.eigenvalues.back() < -kPovmPsdTol) {
                throw std::invalid_argument("Povm: element has eigenvalue below -1e-10");
            }
            sum += e;
        }
        if ((sum - Matrix::identity(d)).max_abs() > kCompletenessTol) {
            throw std::invalid_argument("Povm: elements must sum to identity within 1e-10");
        }
    }

    /// Rank-1 projective measurement onto the given orthonormal basis states.
    static Povm projective(const std::vector<StateVector>& basis) {
        std::vector<Matrix> elems;
        elems.reserve(basis.size());
        for (const auto& s : basis) elems.push_back(s.projector());
        return Povm(std::move(elems));
    }

    const std::vector<Matrix>& elements() const { return elements_; }
    std::size_t size() const { return elements_.size(); }
    std::size_t dim() const { return elements_.front().rows(); }

    /// True when every element is a projector (E^2 = E within tol).
    bool is_projective(double tol = 1e-10) const {
        for (const auto& e : elements_)
            if ((e * e - e).max_abs() > tol) return false;
        return true;
    }

    static constexpr double kPovmPsdTol = 1e-10;
    static constexpr double kCompletenessTol = 1e-10;

private:
    std::vector<Matrix> elements_;
};

/// The Bell basis {Phi+, Phi-, Psi+, Psi-} as a projective POVM; outcome k
/// corresponds to kBellLabels[k].
inline Povm bell_povm() {
    return Povm::projective({make_bell(Bell::PhiPlus), make_bell(Bell::PhiMinus),
                             make_bell(Bell::PsiPlus), make_bell(Bell::PsiMinus)});
}

inline Bell bell_outcome_label(std::size_t outcome) { return kBellLabels.at(outcome); }

/// One measurement branch: outcome index, its exact Born probability, and the
/// normalized post-measurement state.
struct Measurement {
    std::size_t outcome;
    double probability;
    StateVector post_state;
};

/// Exact Born probabilities tr((I ⊗ E_k)|psi><psi|) of every POVM outcome on
/// the target qubits. Works for any POVM; no sampling, no post-states.
inline std::vector<double> born_probabilities(const StateVector& state, const Povm& povm,
                                              const std::vector<std::size_t>& targets) {
    detail::check_targets(state.num_qubits(), targets, "born_probabilities");
    if (povm.dim() != (std::size_t{1} << targets.size())) {
        throw std::invalid_argument("born_probabilities: POVM dimension must be 2^#targets");
    }
    std::vector<double> probs;
    probs.reserve(povm.size());
    for (const auto& e : povm.elements()) {
        const std::vector<Complex> applied = detail::apply_operator(state, e, targets);
        Complex acc = 0.0;
        for (std::size_t i = 0; i < applied.size(); ++i)
            acc += std::conj(state.amplitude(i)) * applied[i];
        probs.push_back(std::max(0.0, acc.real()));
    }
    return probs;
}

/// Deterministic enumeration of all realizable branches of a projective
/// measurement (outcomes of probability ~0 are omitted because they have no
/// post-state). Sampling in measure() draws from exactly this list.
inline std::vector<Measurement> measure_branches(const StateVector& state, const Povm& povm,
                                                 const std::vector<std::size_t>& targets) {
    detail::check_targets(state.num_qubits(), targets, "measure_branches");
    if (povm.dim() != (std::size_t{1} << targets.size())) {
        throw std::invalid_argument("measure_branches: POVM dimension must be 2^#targets");
    }
    if (!povm.is_projective()) {
        throw std::invalid_argument(
            "measure_branches: post-measurement states require a projective POVM");
    }
    std::vector<Measurement> branches;
    for (std::size_t k = 0; k < povm.size(); ++k) {
        std::vector<Complex> projected =
            detail::apply_operator(state, povm.elements()[k], targets);
        double p = 0.0;
        for (const auto& a : projected) p += std::norm(a);
        if (p <= 1e-14) continue;
        const double inv = 1.0 / std::sqrt(p);
        for (auto& a : projected) a *= inv;
        branches.push_back(
            {k, p, StateVector(state.num_qubits(), std::move(projected))});
    }
    return branches;
}

/// Sample one projective measurement outcome. The reported probability is the
/// exact Born probability of the sampled outcome, not an empirical frequency.
inline Measurement measure(const StateVector& state, const Povm& povm,
                           const std::vector<std::size_t>& targets, RandomSource& rng) {
    const std::vector<Measurement> branches = measure_branches(state, povm, targets);
    const double u = rng.uniform();
    double cum = 0.0;
    for (const auto& b : branches) {
        cum += b.probability;
        if (u < cum) return b;
    }
    return branches.back();  // u landed in the rounding gap below 1
}

}  // namespace qka
