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

#include <cmath>
#include <vector>

#include <doctest.h>

#include "qka/states.hpp"
#include "test_helpers.hpp"

using namespace qka;
using qka::testing::random_state;
using qka::testing::random_unitary;

TEST_CASE("StateVector construction enforces the unit-norm invariant") {
    CHECK_THROWS_AS(StateVector(1, {1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(StateVector(2, {1.0, 0.0}), std::invalid_argument);
    const StateVector s(2);
    CHECK(s.dim() == 4);
    CHECK(s.amplitude(0) == Complex(1.0));
}

TEST_CASE("make_bell uses the protocol's sign conventions") {
    const double r = 1.0 / std::sqrt(2.0);

    const StateVector psi_minus = make_bell(Bell::PsiMinus);
    CHECK(psi_minus.amplitude(0) == Complex(0.0));
    CHECK(psi_minus.amplitude(1) == Complex(r));
    CHECK(psi_minus.amplitude(2) == Complex(-r));
    CHECK(psi_minus.amplitude(3) == Complex(0.0));

    const StateVector phi_plus = make_bell(Bell::PhiPlus);
    CHECK(phi_plus.amplitude(0) == Complex(r));
    CHECK(phi_plus.amplitude(3) == Complex(r));

    SUBCASE("the four Bell states are pairwise orthonormal") {
        for (Bell a : kBellLabels) {
            for (Bell b : kBellLabels) {
                const Complex ip = inner_product(make_bell(a), make_bell(b));
                if (a == b) {
                    CHECK(std::abs(ip - Complex(1.0)) <= 1e-12);
                } else {
                    CHECK(std::abs(ip) <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("apply_gate") {
    const double alpha = std::cos(0.3);
    const double beta = std::sin(0.3);
    const StateVector phi_c(1, {alpha, beta});

    SUBCASE("sigma_x swaps amplitudes") {
        const StateVector out = apply_gate(phi_c, sigma_x(), {0});
        CHECK(out.amplitude(0).real() == doctest::Approx(beta));
        CHECK(out.amplitude(1).real() == doctest::Approx(alpha));
    }

    SUBCASE("sigma_z flips the |1> sign") {
        const StateVector out = apply_gate(phi_c, sigma_z(), {0});
        CHECK(out.amplitude(0).real() == doctest::Approx(alpha));
        CHECK(out.amplitude(1).real() == doctest::Approx(-beta));
    }

    SUBCASE("identity leaves any state unchanged") {
        RandomSource rng(5);
        const StateVector s = random_state(rng, 2);
        const StateVector out = apply_gate(s, Matrix::identity(4), {0, 1});
        CHECK(fidelity(s, out) == doctest::Approx(1.0));
    }

    SUBCASE("qubit 0 is the leftmost factor") {
        const StateVector s(2);  // |00>
        const StateVector on1 = apply_gate(s, sigma_x(), {1});
        CHECK(std::abs(on1.amplitude(1) - Complex(1.0)) <= 1e-12);  // |01>
        const StateVector on0 = apply_gate(s, sigma_x(), {0});
        CHECK(std::abs(on0.amplitude(2) - Complex(1.0)) <= 1e-12);  // |10>
    }

    SUBCASE("two-qubit gate respects target order") {
        // Swap realized as a permutation matrix on (q0, q1) vs (q1, q0).
        const Matrix swap(4, 4,
                          {1.0, 0.0, 0.0, 0.0,  //
                           0.0, 0.0, 1.0, 0.0,  //
                           0.0, 1.0, 0.0, 0.0,  //
                           0.0, 0.0, 0.0, 1.0});
        const StateVector s = apply_gate(StateVector(2), sigma_x(), {1});  // |01>
        const StateVector swapped = apply_gate(s, swap, {0, 1});
        CHECK(std::abs(swapped.amplitude(2) - Complex(1.0)) <= 1e-12);  // |10>
    }

    SUBCASE("norm is preserved on random states and unitaries") {
        RandomSource rng(13);
        for (int rep = 0; rep < 50; ++rep) {
            const StateVector s = random_state(rng, 3);
            const Matrix u = random_unitary(rng, 2);
            const std::size_t target = static_cast<std::size_t>(rng.uniform() * 3.0);
            const StateVector out = apply_gate(s, u, {target});
            CHECK(std::abs(out.norm() - 1.0) <= 1e-10);
        }
    }

    SUBCASE("non-unitary gates and bad indices are rejected") {
        const Matrix not_unitary(2, 2, {1.0, 0.0, 0.0, 2.0});
        CHECK_THROWS_AS(apply_gate(phi_c, not_unitary, {0}), std::invalid_argument);
        CHECK_THROWS_AS(apply_gate(phi_c, sigma_x(), {1}), std::invalid_argument);
        CHECK_THROWS_AS(apply_gate(StateVector(2), Matrix::identity(4), {0, 0}),
                        std::invalid_argument);
    }
}

TEST_CASE("tensor_product on states multiplies dimensions") {
    const StateVector a(1);
    const StateVector b(2);
    CHECK(tensor_product(a, b).dim() == 8);
    CHECK(tensor_product(a, b).num_qubits() == 3);
}

TEST_CASE("orthogonal_complement") {
    const StateVector psi(1, {0.6, 0.8});
    const StateVector perp = orthogonal_complement(psi);
    CHECK(std::abs(inner_product(psi, perp)) <= 1e-12);
    CHECK_THROWS_AS(orthogonal_complement(StateVector(1, {Complex(0, 1), 0.0})),
                    std::invalid_argument);
    CHECK_THROWS_AS(orthogonal_complement(StateVector(2)), std::invalid_argument);
}

TEST_CASE("RandomSource is reproducible and splittable") {
    RandomSource a(42);
    RandomSource b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());

    RandomSource parent(7);
    RandomSource fresh(7);
    (void)parent.uniform();
    (void)fresh.uniform();
    RandomSource child = parent.child(3);
    RandomSource child_again = RandomSource(7).child(3);
    CHECK(child.uniform() == child_again.uniform());
    CHECK(parent.uniform() == fresh.uniform());  // deriving a child does not advance the parent
    CHECK(RandomSource(7).child(3).seed() != RandomSource(7).child(4).seed());
}
