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
// Teleportation-based two-party key agreement (Zhou/Zeng/Xiong 2004 scheme):
// Alice shares a singlet with Bob, Bob Bell-measures his half together with a
// fresh qubit |phi_c> = alpha|0> + beta|1>, and the outcome teleports one of
// four Pauli variants of |phi_c> into Alice's lab. Both sides then read a
// two-bit key off the outcome table. Alice's side of the table requires the
// raw inner product <phi_a|phi_d>, which no physical device can produce; the
// oracle here computes it from the simulator's god's-eye amplitudes and is
// flagged unphysical in every transcript it touches.
//

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qka/density.hpp"
#include "qka/matrix.hpp"
#include "qka/measurement.hpp"
#include "qka/random.hpp"
#include "qka/states.hpp"

namespace qka {

/// Minimum separation between the four key-table values {1, a^2-b^2, 2ab, 0};
/// also the default matching tolerance when Alice decodes a key.
inline constexpr double kTableSeparation = 1e-6;

/// Bob's preparation |phi_c> = alpha|0> + beta|1> with real amplitudes.
/// Construct through validate_params or params_from_theta.
struct ProtocolParams {
    double alpha;
    double beta;

    double theta() const { return std::atan2(beta, alpha); }
};

/// Two classical key bits.
enum class KeyBits : std::uint8_t { k00 = 0, k01 = 1, k10 = 2, k11 = 3 };

inline constexpr std::array<KeyBits, 4> kAllKeys = {KeyBits::k00, KeyBits::k01, KeyBits::k10,
                                                    KeyBits::k11};

inline std::string to_string(KeyBits k) {
    switch (k) {
        case KeyBits::k00: return "00";
        case KeyBits::k01: return "01";
        case KeyBits::k10: return "10";
        case KeyBits::k11: return "11";
    }
    throw std::logic_error("to_string(KeyBits): bad value");
}

inline KeyBits key_from_string(const std::string& s) {
    for (KeyBits k : kAllKeys)
        if (to_string(k) == s) return k;
    throw std::invalid_argument("key_from_string: expected one of 00, 01, 10, 11 (got \"" + s +
                                "\")");
}

/// Outcome -> key: Psi- 00, Psi+ 01, Phi- 10, Phi+ 11.
inline KeyBits key_for_outcome(Bell outcome) {
    switch (outcome) {
        case Bell::PsiMinus: return KeyBits::k00;
        case Bell::PsiPlus: return KeyBits::k01;
        case Bell::PhiMinus: return KeyBits::k10;
        case Bell::PhiPlus: return KeyBits::k11;
    }
    throw std::logic_error("key_for_outcome: bad label");
}

inline Bell outcome_for_key(KeyBits key) {
    switch (key) {
        case KeyBits::k00: return Bell::PsiMinus;
        case KeyBits::k01: return Bell::PsiPlus;
        case KeyBits::k10: return Bell::PhiMinus;
        case KeyBits::k11: return Bell::PhiPlus;
    }
    throw std::logic_error("outcome_for_key: bad value");
}

/// The inner product Alice's table expects for each Bell outcome:
/// Psi- -> 1, Psi+ -> alpha^2 - beta^2, Phi- -> 2 alpha beta, Phi+ -> 0.
inline double table_value(Bell outcome, const ProtocolParams& p) {
    switch (outcome) {
        case Bell::PsiMinus: return 1.0;
        case Bell::PsiPlus: return p.alpha * p.alpha - p.beta * p.beta;
        case Bell::PhiMinus: return 2.0 * p.alpha * p.beta;
        case Bell::PhiPlus: return 0.0;
    }
    throw std::logic_error("table_value: bad label");
}

inline double table_value_for_key(KeyBits key, const ProtocolParams& p) {
    return table_value(outcome_for_key(key), p);
}

/// Check Bob's choice of alpha, beta: real normalized amplitudes whose four
/// table values stay pairwise separated, so key decoding is unambiguous.
inline ProtocolParams validate_params(double alpha, double beta) {
    if (!std::isfinite(alpha) || !std::isfinite(beta)) {
        throw std::invalid_argument("validate_params: alpha and beta must be finite reals");
    }
    if (std::abs(alpha * alpha + beta * beta - 1.0) > kNormTol) {
        throw std::invalid_argument(
            "validate_params: alpha^2 + beta^2 must equal 1 within 1e-10");
    }
    const ProtocolParams p{alpha, beta};
    const std::array<double, 4> values = {
        std::abs(table_value(Bell::PsiMinus, p)), std::abs(table_value(Bell::PsiPlus, p)),
        std::abs(table_value(Bell::PhiMinus, p)), std::abs(table_value(Bell::PhiPlus, p))};
    static const std::array<const char*, 4> names = {"1", "alpha^2-beta^2", "2*alpha*beta", "0"};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
            if (std::abs(values[i] - values[j]) < kTableSeparation) {
                throw std::invalid_argument(
                    std::string("validate_params: table values ") + names[i] + " and " +
                    names[j] + " collide (separation below 1e-6); choose alpha, beta with "
                    "alpha^2-beta^2 != 2*alpha*beta != 0, 1");
            }
    return p;
}

/// alpha = cos(theta), beta = sin(theta). Normalization is automatic; the
/// table-separation constraints still apply (theta = pi/4 fails, for one).
inline ProtocolParams params_from_theta(double theta) {
    return validate_params(std::cos(theta), std::sin(theta));
}

/// The four states Alice's qubit can land in after Bob's Bell measurement:
/// phi1 = phi_c, phi2 = X phi_c, phi3 = Z phi_c, phi4 = ZX phi_c.
inline std::array<StateVector, 4> candidate_states(const ProtocolParams& p) {
    const StateVector phi_c(1, {p.alpha, p.beta});
    const StateVector phi2 = apply_gate(phi_c, sigma_x(), {0});
    const StateVector phi3 = apply_gate(phi_c, sigma_z(), {0});
    const StateVector phi4 = apply_gate(phi2, sigma_z(), {0});
    return {phi_c, phi2, phi3, phi4};
}

/// Candidate state selected by each Bell outcome (Psi- -> phi1, Psi+ -> phi3,
/// Phi- -> phi2, Phi+ -> phi4), phases fixed as in candidate_states.
inline StateVector candidate_for_outcome(Bell outcome, const ProtocolParams& p) {
    const auto cands = candidate_states(p);
    switch (outcome) {
        case Bell::PsiMinus: return cands[0];
        case Bell::PsiPlus: return cands[2];
        case Bell::PhiMinus: return cands[1];
        case Bell::PhiPlus: return cands[3];
    }
    throw std::logic_error("candidate_for_outcome: bad label");
}

/// Pauli correction that restores |phi_c> (up to global phase) from Alice's
/// post-measurement state for the given outcome.
inline Matrix pauli_correction(Bell outcome) {
    switch (outcome) {
        case Bell::PsiMinus: return Matrix::identity(2);
        case Bell::PsiPlus: return sigma_z();
        case Bell::PhiMinus: return sigma_x();
        case Bell::PhiPlus: return sigma_x() * sigma_z();  // inverse of ZX
    }
    throw std::logic_error("pauli_correction: bad label");
}

/// Full record of one protocol run.
struct Transcript {
    ProtocolParams params;
    Bell bell_outcome;
    double outcome_probability;  // exact Born probability of the outcome
    StateVector alice_state;     // Alice's qubit after teleportation
    double oracle_value;         // unphysical inner-product device output
    KeyBits bob_key;
    KeyBits alice_key;
    bool malicious;
    std::uint64_t seed;
};

/// The inner product <phi_a|phi_d> of two real single-qubit states, computed
/// from the simulator's amplitude access. No physical device can implement
/// this map (it would discriminate four states in dimension two); it exists
/// here precisely to run the protocol as written, and every transcript marks
/// its output unphysical.
inline double oracle_inner_product(const StateVector& alice_state, const StateVector& phi_d) {
    if (alice_state.num_qubits() != 1 || phi_d.num_qubits() != 1) {
        throw std::invalid_argument("oracle_inner_product: expected single-qubit states");
    }
    if (!alice_state.is_real() || !phi_d.is_real()) {
        throw std::invalid_argument("oracle_inner_product: expected real amplitudes");
    }
    return inner_product(alice_state, phi_d).real();
}

/// Decode a key from the oracle value: nearest table entry within tol, with
/// |v| matching to absorb the global-phase sign of the raw inner product.
inline KeyBits key_from_value(double v, const ProtocolParams& p,
                              double tol = kTableSeparation) {
    double best = 1e30, second = 1e30;
    KeyBits best_key = KeyBits::k00;
    for (Bell outcome : kBellLabels) {
        const double d = std::abs(std::abs(v) - std::abs(table_value(outcome, p)));
        if (d < best) {
            second = best;
            best = d;
            best_key = key_for_outcome(outcome);
        } else if (d < second) {
            second = d;
        }
    }
    if (best > tol) {
        throw std::runtime_error("key_from_value: inconclusive, value " + std::to_string(v) +
                                 " matches no table entry within tolerance");
    }
    if (second <= tol) {
        throw std::runtime_error("key_from_value: ambiguous, value " + std::to_string(v) +
                                 " matches two table entries within tolerance");
    }
    return best_key;
}

namespace detail {

/// |Psi->_ab (x) |phi_c>, qubits ordered a=0, b=1, c=2.
inline StateVector composite_state(const ProtocolParams& p) {
    return tensor_product(make_bell(Bell::PsiMinus), StateVector(1, {p.alpha, p.beta}));
}

/// Alice's qubit after a Bell-measurement branch: trace out (b, c) and pin
/// the global phase (first significant amplitude real-positive), which makes
/// the extracted state literally equal to the key-table column.
inline StateVector alice_state_of_branch(const StateVector& post) {
    return pure_state(reduced_density(post, {0}));
}

inline Transcript finish_honest(const ProtocolParams& p, const Measurement& branch,
                                std::uint64_t seed) {
    const Bell outcome = bell_outcome_label(branch.outcome);
    const StateVector alice = alice_state_of_branch(branch.post_state);
    const StateVector phi_d(1, {p.alpha, p.beta});  // identical to phi_c by protocol
    const double value = oracle_inner_product(alice, phi_d);
    return Transcript{p,
                      outcome,
                      branch.probability,
                      alice,
                      value,
                      key_for_outcome(outcome),
                      key_from_value(value, p),
                      false,
                      seed};
}

}  // namespace detail

/// All four honest branches of the protocol, one per Bell outcome, each with
/// its exact Born probability. Deterministic; run_honest samples from these.
inline std::array<Transcript, 4> honest_branches(const ProtocolParams& p,
                                                 std::uint64_t seed = 0) {
    const StateVector composite = detail::composite_state(p);
    const std::vector<Measurement> branches = measure_branches(composite, bell_povm(), {1, 2});
    if (branches.size() != 4) {
        throw SelfCheckError("honest_branches: expected 4 realizable Bell outcomes, got " +
                             std::to_string(branches.size()));
    }
    return {detail::finish_honest(p, branches[0], seed), detail::finish_honest(p, branches[1], seed),
            detail::finish_honest(p, branches[2], seed), detail::finish_honest(p, branches[3], seed)};
}

/// One honest protocol run: singlet + |phi_c> composite, Bell measurement on
/// (b, c), keys from the outcome table on Bob's side and from the oracle value
/// on Alice's. Honest transcripts always satisfy bob_key == alice_key.
inline Transcript run_honest(const ProtocolParams& p, RandomSource& rng) {
    const StateVector composite = detail::composite_state(p);
    const Measurement m = measure(composite, bell_povm(), {1, 2}, rng);
    return detail::finish_honest(p, m, rng.seed());
}

/// The malicious-participant attack (Tsai/Hwang 2009): Bob Bell-measures
/// first, learns Alice's exact state, and sends phi_d' = v*phi_a +
/// sqrt(1-v^2)*phi_a_perp where v is the table value of his target key. The
/// oracle then returns v no matter which Bell outcome occurred, so Alice
/// derives Bob's pre-defined key in every run.
inline Transcript run_malicious_bob(const ProtocolParams& p, KeyBits target,
                                    RandomSource& rng) {
    const StateVector composite = detail::composite_state(p);
    const Measurement m = measure(composite, bell_povm(), {1, 2}, rng);
    const Bell outcome = bell_outcome_label(m.outcome);
    const StateVector alice = detail::alice_state_of_branch(m.post_state);

    const double v = table_value_for_key(target, p);
    const StateVector perp = orthogonal_complement(alice);
    std::vector<Complex> amps(2);
    for (std::size_t i = 0; i < 2; ++i)
        amps[i] = v * alice.amplitude(i) + std::sqrt(std::max(0.0, 1.0 - v * v)) * perp.amplitude(i);
    const StateVector phi_d_prime(1, std::move(amps));

    const double value = oracle_inner_product(alice, phi_d_prime);
    return Transcript{p,
                      outcome,
                      m.probability,
                      alice,
                      value,
                      target,
                      key_from_value(value, p),
                      true,
                      rng.seed()};
}

}  // namespace qka
