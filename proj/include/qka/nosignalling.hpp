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

//
// Remote-steering experiment on the shared singlet: Bob measures his half in
// one of two bases built from the protocol's candidate states, and Alice's
// marginal is computed for each choice. Both marginals come out maximally
// mixed, so no device on Alice's side (in particular no inner-product
// device) can reveal which basis Bob picked.
//

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qka/density.hpp"
#include "qka/discrimination.hpp"
#include "qka/measurement.hpp"
#include "qka/protocol.hpp"
#include "qka/states.hpp"

namespace qka {

enum class BasisLabel { M1, M2 };

inline std::string to_string(BasisLabel b) {
    return b == BasisLabel::M1 ? "M1" : "M2";
}

/// Bob's two-outcome measurement basis: M1 projects onto {phi1, phi4},
/// M2 onto {phi2, phi3}. Both pairs are orthonormal for real amplitudes.
struct BasisChoice {
    BasisLabel label;
    Povm projectors;
};

inline BasisChoice basis_choice(BasisLabel label, const ProtocolParams& p) {
    const auto cands = candidate_states(p);
    if (label == BasisLabel::M1) {
        return {label, Povm::projective({cands[0], cands[3]})};
    }
    return {label, Povm::projective({cands[1], cands[2]})};
}

/// The singlet written in the basis {psi, psi_perp}:
/// (|psi>|psi_perp> - |psi_perp>|psi>)/sqrt(2). For every real single-qubit
/// basis this is the same physical state as (|01> - |10>)/sqrt(2), which is
/// the basis-invariance the steering argument rests on.
inline StateVector singlet_in_basis(const StateVector& psi) {
    if (psi.num_qubits() != 1) {
        throw std::invalid_argument("singlet_in_basis: expected a single qubit");
    }
    if (std::abs(psi.norm() - 1.0) > kNormTol) {
        throw std::invalid_argument("singlet_in_basis: state must have unit norm");
    }
    if (!psi.is_real()) {
        throw std::invalid_argument("singlet_in_basis: expected real amplitudes");
    }
    const StateVector bar = orthogonal_complement(psi);
    std::vector<Complex> amps(4);
    const double r = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            amps[2 * i + j] = r * (psi.amplitude(i) * bar.amplitude(j) -
                                   bar.amplitude(i) * psi.amplitude(j));
    return normalized(2, std::move(amps));
}

/// Alice's density matrix after Bob measures his half of the singlet in the
/// given basis: the Born-weighted ensemble of her conditional states. Comes
/// out I/2 for every basis: Bob's choice leaves no local trace.
inline DensityMatrix remote_ensemble(const BasisChoice& basis) {
    const StateVector singlet = make_bell(Bell::PsiMinus);  // Alice qubit 0, Bob qubit 1
    const std::vector<Measurement> branches = measure_branches(singlet, basis.projectors, {1});
    std::vector<std::pair<double, StateVector>> members;
    members.reserve(branches.size());
    for (const auto& b : branches) {
        members.emplace_back(b.probability, pure_state(reduced_density(b.post_state, {0})));
    }
    return ensemble_density(members);
}

struct NoSignalReport {
    double theta;
    double trace_distance;     // between Alice's two conditional marginals
    double helstrom_success;   // best distinguishing probability (1/2 = guessing)
    std::string device_implication;
    std::string verdict;
};

/// Contrast what quantum mechanics allows with what the hypothetical device
/// would do: the marginals' trace distance (0) and Helstrom success (1/2)
/// against a four-state discriminator that would name Bob's basis every time.
inline NoSignalReport nosignal_report(const ProtocolParams& p) {
    const DensityMatrix rho14 = remote_ensemble(basis_choice(BasisLabel::M1, p));
    const DensityMatrix rho23 = remote_ensemble(basis_choice(BasisLabel::M2, p));

    NoSignalReport r;
    r.theta = p.theta();
    r.trace_distance = trace_distance(rho14, rho23);
    r.helstrom_success = helstrom_success(rho14, rho23, 0.5);
    r.device_implication =
        "a perfect four-state discriminator would identify Bob's basis with certainty";
    r.verdict = "no signalling upheld; hypothetical device would signal";
    return r;
}

}  // namespace qka
