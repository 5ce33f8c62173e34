// Copyright 2026 The holocnot Authors
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

#include "holocnot/hilbert.hpp"

#include <gtest/gtest.h>

#include <random>

namespace holocnot {
namespace {

Operator random_operator(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  Operator a(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) a(r, c) = cplx(d(rng), d(rng));
  }
  return a;
}

TEST(Annihilation, TwoLevel) {
  const Operator a = annihilation(2);
  EXPECT_EQ(a(0, 1), cplx(1.0));
  EXPECT_EQ(a(0, 0), cplx(0.0));
  EXPECT_EQ(a(1, 0), cplx(0.0));
  EXPECT_EQ(a(1, 1), cplx(0.0));
}

TEST(Annihilation, LowersTwoPhotons) {
  Vector two = Vector::Zero(3);
  two(2) = 1.0;
  const Vector out = annihilation(3) * two;
  EXPECT_NEAR(std::abs(out(1) - std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_EQ(out(0), cplx(0.0));
  EXPECT_EQ(out(2), cplx(0.0));
}

TEST(Annihilation, NumberOperator) {
  const Operator a = annihilation(6);
  const Operator n = a.adjoint() * a;
  for (int k = 0; k < 6; ++k) EXPECT_NEAR(n(k, k).real(), k, 1e-14);
  EXPECT_NEAR((n - Operator(n.diagonal().asDiagonal())).norm(), 0.0, 1e-14);
}

TEST(Annihilation, TruncatedCommutator) {
  const int f = 5;
  const Operator a = annihilation(f);
  Operator expected = identity(f);
  expected(f - 1, f - 1) -= static_cast<double>(f);
  EXPECT_NEAR((a * a.adjoint() - a.adjoint() * a - expected).norm(), 0.0, 1e-13);
}

TEST(Annihilation, RejectsSingleLevel) { EXPECT_THROW(annihilation(1), DimensionError); }

TEST(QutritTransition, SingleEntry) {
  const Operator eg = qutrit_transition(3, Level::g, Level::e);
  EXPECT_EQ(eg(1, 0), cplx(1.0));
  EXPECT_NEAR(eg.cwiseAbs().sum(), 1.0, 0.0);
  EXPECT_EQ(Operator(eg.adjoint()), qutrit_transition(3, Level::e, Level::g));
}

TEST(QutritTransition, RejectsOutOfRange) { EXPECT_THROW(qutrit_transition(3, Level::f, Level::h), DimensionError); }

TEST(QutritTransition, LadderTakesFToHWithRootThree) {
  Vector f = Vector::Zero(4);
  f(2) = 1.0;
  const Vector out = ladder_raise(4) * f;
  EXPECT_NEAR(out(3).real(), std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(out.norm(), std::sqrt(3.0), 1e-15);
}

TEST(HilbertSpace, DimensionAndIndexing) {
  const HilbertSpace s{4, 3, 5};
  EXPECT_EQ(s.dim(), 60);
  for (int i = 0; i < s.dim(); ++i) {
    const auto l = s.labels(i);
    EXPECT_EQ(s.index(l[0], l[1], l[2]), i);
    EXPECT_EQ(s.excitations(i), l[0] + l[1] + l[2]);
  }
  EXPECT_THROW((HilbertSpace{2, 4, 4}.validate()), DimensionError);
  EXPECT_THROW((HilbertSpace{4, 4, 1}.validate()), DimensionError);
}

TEST(Embed, IdentityAndTrace) {
  const HilbertSpace s{4, 4, 4};
  EXPECT_NEAR((embed(identity(4), Subsystem::q1, s) - identity(s.dim())).norm(), 0.0, 0.0);
  std::mt19937_64 rng(3);
  const Operator a = random_operator(4, rng);
  for (Subsystem sub : {Subsystem::q1, Subsystem::q2, Subsystem::resonator}) {
    const cplx tr = embed(a, sub, s).trace();
    EXPECT_NEAR(std::abs(tr - a.trace() * 16.0), 0.0, 1e-12);
  }
  EXPECT_THROW(embed(identity(3), Subsystem::q1, s), DimensionError);
}

TEST(Embed, DisjointSubsystemsCommute) {
  const HilbertSpace s{4, 3, 4};
  std::mt19937_64 rng(11);
  const std::array<Subsystem, 3> subs{Subsystem::q1, Subsystem::q2, Subsystem::resonator};
  for (int trial = 0; trial < 20; ++trial) {
    const int i = trial % 3;
    const int j = (i + 1 + trial % 2) % 3;
    const Operator a = embed(random_operator(s.local_dim(subs[i]), rng), subs[i], s);
    const Operator b = embed(random_operator(s.local_dim(subs[j]), rng), subs[j], s);
    EXPECT_LE((a * b - b * a).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Embed, Linear) {
  const HilbertSpace s{};
  std::mt19937_64 rng(5);
  const Operator a = random_operator(4, rng);
  const Operator b = random_operator(4, rng);
  EXPECT_EQ(embed(Operator(a + b), Subsystem::q2, s), embed(a, Subsystem::q2, s) + embed(b, Subsystem::q2, s));
}

TEST(Embed, OrderingIsQubitOneFirst) {
  const HilbertSpace s{3, 3, 2};
  const Operator raise = embed(qutrit_transition(3, Level::g, Level::e), Subsystem::q1, s);
  const Vector out = raise * s.basis(Level::g, Level::f, 1);
  EXPECT_NEAR((out - s.basis(Level::e, Level::f, 1)).norm(), 0.0, 0.0);
}

TEST(TraceOutResonator, ProductState) {
  const HilbertSpace s{3, 3, 3};
  std::mt19937_64 rng(9);
  Operator q = random_operator(9, rng);
  q = q * q.adjoint();
  q /= q.trace();
  Operator r = random_operator(3, rng);
  r = r * r.adjoint();
  r /= r.trace();
  const Operator reduced = trace_out_resonator(kron(q, r), s);
  EXPECT_NEAR((reduced - q).norm(), 0.0, 1e-13);
}

TEST(DensityMatrixTest, Checks) {
  Vector psi = Vector::Zero(2);
  psi(0) = 1.0;
  EXPECT_EQ(DensityMatrix::pure(psi).check(), "");
  Operator bad = Operator::Zero(2, 2);
  bad(0, 1) = 1.0;
  EXPECT_EQ(DensityMatrix(bad).check(), "not Hermitian");
  Operator neg = Operator::Identity(2, 2);
  neg(1, 1) = -0.5;
  EXPECT_EQ(DensityMatrix(neg).check(), "negative eigenvalue");
  EXPECT_EQ(DensityMatrix(Operator(2.0 * Operator::Identity(2, 2))).check(), "trace outside (0, 1]");
  EXPECT_EQ(DensityMatrix(Operator(0.3 * Operator::Identity(2, 2))).check(), "");
}

}  // namespace
}  // namespace holocnot
