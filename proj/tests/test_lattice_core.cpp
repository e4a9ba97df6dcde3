#include <gtest/gtest.h>

#include "support.hpp"

using namespace mdsp;
using namespace testing_support;

namespace {

MDSPInstance e1() { return MDSPInstance(vec({0, 2}), {vec({1, 1})}); }

}  // namespace

TEST(Instance, Validation) {
  EXPECT_THROW(MDSPInstance(vec({0, 0}), {vec({1, 1})}), DegenerateFixedVector);
  EXPECT_THROW(MDSPInstance(vec({1, 1}), {vec({2, 2})}), DependentInput);
  EXPECT_THROW(MDSPInstance(vec({1, 1}), {vec({2, 2, 1})}), LengthMismatch);
  auto inst = MDSPInstance::from_rows(QMatrix::from_rows({vec({1, 1}), vec({0, 2})}), 1);
  EXPECT_EQ(inst.fixed(), vec({0, 2}));
  EXPECT_EQ(inst.rest().front(), vec({1, 1}));
  EXPECT_THROW(MDSPInstance::from_rows(QMatrix::from_rows({vec({1, 1}), vec({0, 2})}), 2), IndexOutOfRange);
}

TEST(ApplyShift, Examples) {
  EXPECT_EQ(apply_shift(e1(), ivec({0})).vectors, std::vector<QVector>{vec({1, 1})});
  EXPECT_EQ(apply_shift(e1(), ivec({-1})).vectors, std::vector<QVector>{vec({1, -1})});
  EXPECT_EQ(apply_shift(e1(), ivec({3})).vectors, std::vector<QVector>{vec({1, 7})});
  EXPECT_THROW(apply_shift(e1(), ivec({1, 2})), LengthMismatch);
}

TEST(SameLattice, Examples) {
  auto id = QMatrix::identity(2);
  auto r = same_lattice(id, id);
  EXPECT_TRUE(r.same);
  EXPECT_EQ(*r.witness, id);
  EXPECT_TRUE(same_lattice(id, QMatrix::from_rows({vec({1, 1}), vec({0, 1})})).same);
  auto no = same_lattice(id, QMatrix::from_rows({vec({2, 0}), vec({0, 1})}));
  EXPECT_FALSE(no.same);
  EXPECT_FALSE(no.witness.has_value());
  EXPECT_THROW(same_lattice(id, QMatrix::from_rows({vec({1, 2}), vec({2, 4})})), SingularMatrix);
}

TEST(SameLattice, ShiftedBasesWithWitness) {
  Rng rng(29);
  for (int it = 0; it < 80; ++it) {
    const std::size_t n = 1 + it % 4;  // ambient dims 2..5
    auto inst = rng.instance(n, 9);
    auto x = rng.shift(n, 6);
    std::vector<QVector> cols{inst.fixed()};
    auto bx = apply_shift(inst, x).vectors;
    cols.insert(cols.end(), bx.begin(), bx.end());
    const QMatrix a = inst.as_columns();
    const QMatrix b = QMatrix::from_columns(cols);
    auto r = same_lattice(a, b);
    ASSERT_TRUE(r.same);
    EXPECT_TRUE(is_unimodular(*r.witness));
    EXPECT_EQ(a * *r.witness, b);
  }
}

TEST(SameLattice, RectangularInputs) {
  // two vectors in Q^3
  QMatrix a = QMatrix::from_columns({vec({1, 0, 1}), vec({0, 1, 1})});
  QMatrix b = QMatrix::from_columns({vec({1, 1, 2}), vec({0, 1, 1})});
  EXPECT_TRUE(same_lattice(a, b).same);
  QMatrix c = QMatrix::from_columns({vec({2, 0, 2}), vec({0, 1, 1})});
  EXPECT_FALSE(same_lattice(a, c).same);
  QMatrix d = QMatrix::from_columns({vec({1, 0, 0}), vec({0, 1, 1})});
  EXPECT_FALSE(same_lattice(a, d).same);  // different span
}

TEST(Certificate, Examples) {
  EXPECT_TRUE(verify_dmdsp_certificate(DMDSPQuery::from_gamma(e1(), q(1, 2)), ivec({0})));
  EXPECT_FALSE(verify_dmdsp_certificate(DMDSPQuery::from_gamma(e1(), q(1)), ivec({0})));
  MDSPInstance orth(vec({0, 1}), {vec({1, 0})});
  EXPECT_TRUE(verify_dmdsp_certificate(DMDSPQuery::from_gamma(orth, q(1)), ivec({0})));
  EXPECT_THROW(verify_dmdsp_certificate(DMDSPQuery::from_gamma(e1(), q(1, 2)), ivec({0, 0})), LengthMismatch);
}

TEST(Certificate, GammaRange) {
  EXPECT_THROW(DMDSPQuery::from_gamma(e1(), q(0)), InvalidArgument);
  EXPECT_THROW(DMDSPQuery::from_gamma(e1(), q(3, 2)), InvalidArgument);
  EXPECT_THROW(DMDSPQuery(e1(), q(-1)), InvalidArgument);
  // gamma^2 = 1/2 is irrational gamma, still posed exactly
  EXPECT_TRUE(verify_dmdsp_certificate(DMDSPQuery(e1(), q(1, 2)), ivec({0})));
  EXPECT_FALSE(verify_dmdsp_certificate(DMDSPQuery(e1(), q(1, 2) + q(1, 1000)), ivec({0})));
}

TEST(CertificateBounds, Examples) {
  auto cb = certificate_bounds(e1());
  EXPECT_EQ(cb.k0, 1);
  EXPECT_EQ(cb.dk, std::vector<Rational>{2});
  EXPECT_EQ(cb.big_d, 2);
  EXPECT_EQ(cb.big_e, 8);
  MDSPInstance frac(QVector{q(0), q(2, 3)}, {vec({1, 1})});
  EXPECT_EQ(certificate_bounds(frac).k0, 3);
  // l = bits of 0,1 | 2,1 | 1,1 | 1,1
  EXPECT_EQ(cb.input_bit_size, 1u + 1 + 2 + 1 + 1 + 1 + 1 + 1);
  EXPECT_EQ(cb.per_coordinate_bound_sq, std::vector<Rational>{Rational(64 * 4 * 2)});
}

TEST(CertificateBounds, LogBoundsOnRandomInstances) {
  Rng rng(31);
  for (int it = 0; it < 120; ++it) {
    const std::size_t n = 1 + it % 4;
    std::vector<QVector> vs;
    while (true) {
      vs.clear();
      for (std::size_t i = 0; i <= n; ++i) {
        QVector v;
        for (std::size_t k = 0; k <= n; ++k) v.push_back(rng.rational(9, it % 3 ? 1 : 5));
        vs.push_back(v);
      }
      if (naive_gram_det(vs) != 0) break;
    }
    QVector v = vs.front();
    vs.erase(vs.begin());
    MDSPInstance inst(v, vs);
    auto cb = certificate_bounds(inst);
    EXPECT_TRUE(cb.d_within_bound());
    EXPECT_TRUE(cb.e_within_bound());
    const auto gs = gram_schmidt(inst.rest());
    Rational prod = 1;
    for (std::size_t k = 0; k < n; ++k) {
      EXPECT_EQ(cb.dk[k], naive_gram_det(std::vector<QVector>(vs.begin(), vs.begin() + k + 1)));
      prod *= cb.dk[k];
    }
    EXPECT_EQ(cb.big_d, prod);
    EXPECT_EQ(cb.big_e, prod * prod * cb.dk.back());
  }
}

TEST(DetIdentity, RandomInstances) {
  Rng rng(37);
  for (int it = 0; it < 100; ++it) {
    auto inst = rng.instance(1 + it % 4, 9);
    const Rational d = naive_det([&] {
      std::vector<std::vector<Rational>> rows;
      for (const auto& c : inst.all_vectors()) rows.push_back(c);
      return rows;
    }());
    EXPECT_EQ(d * d, rel_volume_sq(inst.rest()) * dist_sq_to_span(inst.fixed(), inst.rest()));
  }
}

TEST(DistanceBound, NeverExceedsNormOfV) {
  Rng rng(41);
  for (int it = 0; it < 60; ++it) {
    auto inst = rng.instance(1 + it % 3, 7);
    auto x = rng.shift(inst.n(), 5);
    auto bx = apply_shift(inst, x).vectors;
    const Rational d = dist_sq_to_span(inst.fixed(), bx);
    EXPECT_LE(d, norm_sq(inst.fixed()));
    bool orth = true;
    for (const auto& b : bx) orth = orth && dot(b, inst.fixed()) == 0;
    EXPECT_EQ(d == norm_sq(inst.fixed()), orth);
  }
}

TEST(Minkowski, Examples) {
  EXPECT_EQ(minkowski_bound_sq(LatticeBasis{{vec({1, 0}), vec({0, 1})}}), 2);
  EXPECT_EQ(minkowski_bound_sq(LatticeBasis{{vec({2, 0}), vec({0, 2})}}), 8);
  EXPECT_EQ(minkowski_bound_sq(LatticeBasis{{vec({1, 1}), vec({0, 1})}}), 2);
  EXPECT_THROW(minkowski_bound_sq(LatticeBasis{{vec({1, 0, 0}), vec({0, 1, 0})}}), NonSquare);
}

TEST(Minkowski, EnclosureIsUpperBound) {
  // det 2 in dim 3: 3 * 2^{2/3}, irrational
  LatticeBasis b{{vec({2, 0, 0}), vec({0, 1, 0}), vec({0, 0, 1})}};
  Rational m = minkowski_bound_sq(b);
  // (m/3)^3 >= 4 and (m/3 - 1)^3 < 4
  Rational r = m / 3;
  EXPECT_GE(r * r * r, 4);
  EXPECT_LT((r - 1) * (r - 1) * (r - 1), 4);
}
