// Copyright 2026 The qldyn Authors
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

#include <doctest.h>

#include <cmath>

#include "qldyn/errors.hpp"
#include "qldyn/semigroup.hpp"

using namespace qldyn;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Region chain(int n) {
  std::vector<Site> sites;
  for (int x = 0; x < n; ++x) sites.push_back(site(x));
  return make_region(std::move(sites));
}

Matrix pauli(char which) {
  Matrix m(2, 2);
  switch (which) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    default:  m << 1, 0, 0, -1; break;
  }
  return m;
}

}  // namespace

TEST_CASE("model catalog resolves names, defaults, and rejects junk") {
  const LindbladModel deph = make_model("dephasing", {});
  CHECK(deph.params.at("kappa") == 0.5);
  CHECK(deph.hamiltonian.empty());
  REQUIRE(deph.jumps.size() == 1);
  CHECK(deph.jumps[0].label == "Z");

  const LindbladModel ising = make_model("ising_damping", {{"J", 2.0}});
  CHECK(ising.params.at("J") == 2.0);
  CHECK(ising.params.at("h") == 0.8);
  CHECK(ising.params.at("kappa") == 0.5);
  CHECK(ising.jumps[0].label == "lower");
  CHECK_FALSE(ising.hamiltonian.empty());

  CHECK(model_catalog().size() == 4);
  CHECK_THROWS_AS(make_model("modle", {}), InvalidArgument);
  CHECK_THROWS_AS(make_model("dephasing", {{"J", 1.0}}), InvalidArgument);
  CHECK_THROWS_AS(make_model("dephasing", {{"kappa", -1.0}}), InvalidArgument);
}

TEST_CASE("build_generator assembles the advertised action") {
  // All rates zero: the zero generator.
  Rng rng(41);
  const Generator zero =
      build_generator(make_model("dephasing", {{"kappa", 0.0}}), chain(2));
  CHECK(max_abs(zero.apply(random_hermitian(4, rng))) == 0.0);

  // Single-site dephasing kappa = 0.5: X -> kappa (Z X Z - X) - ... = -X.
  const Generator deph =
      build_generator(make_model("dephasing", {}), chain(1));
  CHECK(max_abs(deph.apply(pauli('X')) + pauli('X')) < 1e-14);

  // Ising with h = 0 commutes with single-site Z.
  const Generator ising = build_generator(
      make_model("ising_dephasing", {{"h", 0.0}, {"kappa", 0.0}}), chain(2));
  const Matrix z_embedded = kron(pauli('Z'), Matrix::Identity(2, 2));
  CHECK(max_abs(ising.apply(z_embedded)) < 1e-14);

  // Patterns that never fit are an error.
  CHECK_THROWS_AS(build_generator(make_model("ising_dephasing", {}), chain(1)),
                  InvalidArgument);
}

TEST_CASE("generators annihilate the identity and preserve hermiticity") {
  Rng rng(42);
  for (const auto& name : model_catalog()) {
    const Generator g = build_generator(make_model(name, {}), chain(3));
    CHECK(max_abs(g.apply(Matrix::Identity(8, 8))) <= 1e-12);

    const Matrix a = random_hermitian(8, rng);
    const Matrix la = g.apply(a);
    CHECK(max_abs(la - la.adjoint()) < 1e-12);
  }
}

TEST_CASE("apply, apply_into, apply_adjoint, and superoperator are one map") {
  Rng rng(43);
  const Generator g = build_generator(make_model("ising_damping", {}), chain(2));
  const Matrix a = ginibre(4, 4, rng);

  Matrix out, scratch;
  g.apply_into(a, out, scratch);
  CHECK(max_abs(out - g.apply(a)) == 0.0);

  // Superoperator acts as vec of the direct action.
  const Matrix s = Matrix(g.superoperator());
  CHECK(max_abs(unvec(s * vec(a), 4) - g.apply(a)) < 1e-13);

  // Frobenius adjointness: <X, L(A)> = <L'(X), A>.
  const Matrix x = ginibre(4, 4, rng);
  const Complex lhs = (x.adjoint() * g.apply(a)).trace();
  const Complex rhs = (g.apply_adjoint(x).adjoint() * a).trace();
  CHECK(std::abs(lhs - rhs) < 1e-12);

  // The norm estimate bounds the true norm with bounded slack.
  const double truth = spectral_norm(s);
  CHECK(g.norm_estimate() >= truth * (1.0 - 1e-9));
  CHECK(g.norm_estimate() <= truth * 1.2);
}

TEST_CASE("evolve_exact reproduces closed forms") {
  const Generator deph = build_generator(make_model("dephasing", {}), chain(1));

  const QuantumChannel at0 = evolve_exact(deph, 0.0);
  CHECK(max_abs(at0.superoperator().mat - Matrix::Identity(4, 4)) == 0.0);

  // kappa = 0.5, t = 1: X decays by exactly e^{-2 kappa t} = e^{-1}.
  const QuantumChannel at1 = evolve_exact(deph, 1.0);
  const Matrix image = at1.apply(pauli('X'));
  CHECK(max_abs(image - Matrix(std::exp(-1.0) * pauli('X'))) < 1e-12);
  CHECK(check_normalization(at1, 1e-10).pass);
  CHECK(is_completely_positive(at1, 1e-9).cp);

  CHECK_THROWS_AS(evolve_exact(deph, -1.0), InvalidArgument);
  const Generator big = build_generator(make_model("dephasing", {}), chain(7));
  CHECK_THROWS_WITH_AS(evolve_exact(big, 1.0, ExactParams{64}),
                       doctest::Contains("ODE"), CapacityError);
}

TEST_CASE("the semigroup law holds for two-site models") {
  for (const auto& name : {"ising_dephasing", "ising_damping"}) {
    const Generator g = build_generator(make_model(name, {}), chain(2));
    const Matrix s03 = evolve_exact(g, 0.3).superoperator().mat;
    const Matrix s07 = evolve_exact(g, 0.7).superoperator().mat;
    const Matrix s10 = evolve_exact(g, 1.0).superoperator().mat;
    CHECK(spectral_norm(Matrix(s10 - s07 * s03)) < 1e-9);
  }
}

TEST_CASE("evolved channels contract the norm and preserve hermiticity") {
  Rng rng(44);
  const Generator g = build_generator(make_model("ising_damping", {}), chain(2));
  const QuantumChannel c = evolve_exact(g, 0.7);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix a = ginibre(4, 4, rng);
    CHECK(spectral_norm(c.apply(a)) <= spectral_norm(a) * (1.0 + 1e-9));
    CHECK(max_abs(c.apply(Matrix(a.adjoint())) - c.apply(a).adjoint()) < 1e-10);
  }
}

TEST_CASE("evolve_action_exact matches the materialized channel") {
  Rng rng(45);
  const Generator g = build_generator(make_model("ising_dephasing", {}), chain(2));
  const Matrix a = random_hermitian(4, rng);
  const QuantumChannel c = evolve_exact(g, 0.6);
  CHECK(max_abs(evolve_action_exact(g, a, 0.6) - c.apply(a)) < 1e-11);
}

TEST_CASE("evolve_ode integrates to the exact answer") {
  const Generator deph = build_generator(make_model("dephasing", {}), chain(1));
  const LocalOperator x = site_operator("X", site(0));

  const LocalOperator unchanged = evolve_ode(deph, x, 0.0);
  CHECK(max_abs(unchanged.matrix - x.matrix) == 0.0);

  const LocalOperator decayed = evolve_ode(deph, x, 1.0);
  CHECK(max_abs(decayed.matrix - Matrix(std::exp(-1.0) * pauli('X'))) <= 1e-8);

  // Cross-backend agreement on a three-site chain.
  const Generator g = build_generator(make_model("ising_dephasing", {}), chain(3));
  const LocalOperator z_mid = site_operator("Z", site(1));
  const LocalOperator via_ode = evolve_ode(g, z_mid, 0.5);
  const Matrix via_exact =
      evolve_action_exact(g, embed(z_mid, g.region()).matrix, 0.5);
  CHECK(operator_norm(Matrix(via_ode.matrix - via_exact)) <= 1e-8);

  OdeParams tight;
  tight.tol = 1e-12;
  tight.max_steps = 10;
  CHECK_THROWS_AS(evolve_ode(g, z_mid, 1.0, tight), CapacityError);
}

TEST_CASE("duality_check pairs the two pictures") {
  Rng rng(46);
  const Generator deph = build_generator(make_model("dephasing", {}), chain(1));

  Rng rng0(47);
  CHECK(duality_check(deph, 0.0, 5, rng0).max_pairing_defect <= 1e-12);

  const DualityReport r1 = duality_check(deph, 1.0, 20, rng);
  CHECK(r1.max_pairing_defect <= 1e-10);

  const Generator g = build_generator(make_model("ising_damping", {}), chain(2));
  const DualityReport r2 = duality_check(g, 0.5, 20, rng);
  CHECK(r2.max_pairing_defect <= 1e-10);
  CHECK(r2.dual_trace_defect <= 1e-10);
  CHECK(r2.dual_min_choi_eigenvalue >= -1e-9);
}
