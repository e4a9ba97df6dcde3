#include <gtest/gtest.h>

#include "support.hpp"

using namespace mdsp;
using namespace testing_support;

TEST(Rational, CanonicalForm) {
  Rational a = make_rational(6, -4);
  EXPECT_EQ(a.get_num(), -3);
  EXPECT_EQ(a.get_den(), 2);
  EXPECT_EQ(to_string(a), "-3/2");
  EXPECT_EQ(to_string(make_rational(4, 2)), "2");
}

TEST(Rational, ParseTokens) {
  EXPECT_EQ(*parse_rational("7"), Rational(7));
  EXPECT_EQ(*parse_rational("-3"), Rational(-3));
  EXPECT_EQ(*parse_rational("+3"), Rational(3));
  EXPECT_EQ(*parse_rational("6/4"), make_rational(3, 2));
  EXPECT_EQ(*parse_rational("-1/2"), make_rational(-1, 2));
  EXPECT_FALSE(parse_rational("1/0"));
  EXPECT_FALSE(parse_rational("x"));
  EXPECT_FALSE(parse_rational("1.5"));
  EXPECT_FALSE(parse_rational(""));
  EXPECT_FALSE(parse_rational("1/"));
}

TEST(Rational, FloorCeilRound) {
  EXPECT_EQ(floor_of(make_rational(-1, 2)), -1);
  EXPECT_EQ(ceil_of(make_rational(-1, 2)), 0);
  EXPECT_EQ(round_of(make_rational(1, 2)), 1);
  EXPECT_EQ(round_of(make_rational(-1, 2)), 0);
  EXPECT_EQ(floor_of(Rational(3)), 3);
  EXPECT_EQ(ceil_of(Rational(3)), 3);
}

TEST(Rational, IntegersWithinIsExact) {
  Rng rng(11);
  for (int it = 0; it < 300; ++it) {
    Rational c = rng.rational(20, 7);
    Rational r = abs_of(rng.rational(30, 5));
    auto [lo, hi] = integers_within(c, r);
    for (long j = -60; j <= 60; ++j) {
      Rational d = Rational(j) - c;
      bool inside = d * d <= r;
      EXPECT_EQ(inside, Integer(j) >= lo && Integer(j) <= hi) << c << " " << r << " " << j;
    }
  }
}

TEST(Rational, SqrtEnclosure) {
  auto [lo, hi] = sqrt_enclosure(Rational(9, 4), 20);
  EXPECT_EQ(lo, make_rational(3, 2));
  EXPECT_EQ(hi, make_rational(3, 2));
  auto [l2, h2] = sqrt_enclosure(Rational(2), 40);
  EXPECT_LT(l2 * l2, 2);
  EXPECT_GT(h2 * h2, 2);
  EXPECT_LT(h2 - l2, Rational(1, 1L << 30));
}

TEST(GramSchmidt, AlreadyOrthogonal) {
  auto gs = gram_schmidt({vec({1, 0}), vec({0, 1})});
  EXPECT_EQ(gs.bstar[0], vec({1, 0}));
  EXPECT_EQ(gs.bstar[1], vec({0, 1}));
  EXPECT_EQ(gs.mu(1, 0), 0);
}

TEST(GramSchmidt, HandExample) {
  auto gs = gram_schmidt({vec({1, 1}), vec({0, 1})});
  EXPECT_EQ(gs.bstar[0], vec({1, 1}));
  EXPECT_EQ(gs.bstar[1], (QVector{q(-1, 2), q(1, 2)}));
  EXPECT_EQ(gs.mu(1, 0), q(1, 2));
  EXPECT_EQ(gs.dk[0], 2);
  EXPECT_EQ(gs.dk[1], 1);
}

TEST(GramSchmidt, Collinear) {
  EXPECT_THROW(gram_schmidt({vec({1, 1}), vec({2, 2})}), DependentInput);
}

// mu and |b*|^2 must agree with the LDL^T factors of the Gram matrix.
TEST(GramSchmidt, MatchesLdlOfGram) {
  Rng rng(3);
  for (int it = 0; it < 40; ++it) {
    const std::size_t n = 1 + it % 6;
    auto b = rng.independent(n, n, 9);
    auto gs = gram_schmidt(b);
    auto ldl = ldl_decompose(gram_matrix(b));
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_EQ(ldl.diag[i], gs.bstar_sq[i]);
      for (std::size_t j = 0; j < i; ++j) EXPECT_EQ(ldl.lower(i, j), gs.mu(i, j));
    }
  }
}

TEST(GramSchmidt, OrthogonalAndReconstructs) {
  Rng rng(5);
  for (int it = 0; it < 60; ++it) {
    const std::size_t n = 1 + it % 6;
    auto b = rng.independent(n, n, 9);
    auto gs = gram_schmidt(b);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) EXPECT_EQ(dot(gs.bstar[i], gs.bstar[j]), 0);
    for (std::size_t i = 0; i < n; ++i) {
      QVector r = gs.bstar[i];
      for (std::size_t j = 0; j < i; ++j) axpy(r, gs.mu(i, j), gs.bstar[j]);
      EXPECT_EQ(r, b[i]);
    }
    Rational prod = 1;
    for (std::size_t i = 0; i < n; ++i) {
      prod *= gs.bstar_sq[i];
      EXPECT_EQ(gs.dk[i], prod);
    }
    EXPECT_EQ(rel_volume_sq(b), prod);
    EXPECT_EQ(rel_volume_sq(b), naive_gram_det(b));
  }
}

TEST(Projection, Examples) {
  EXPECT_EQ(project_onto_span(vec({0, 2}), {vec({1, 1})}), vec({1, 1}));
  EXPECT_EQ(project_onto_span(vec({3, 4}), {vec({1, 0}), vec({0, 1})}), vec({3, 4}));
  EXPECT_EQ(project_onto_span(vec({5, 7}), {}), vec({0, 0}));
  EXPECT_EQ(dist_sq_to_span(vec({0, 2}), {vec({1, 1})}), 2);
  EXPECT_EQ(dist_sq_to_span(vec({1, 0}), {vec({1, 0})}), 0);
  EXPECT_EQ(dist_sq_to_span(vec({0, 2}), {}), 4);
  EXPECT_THROW(project_onto_span(vec({1, 2}), {vec({1, 1}), vec({2, 2})}), DependentInput);
}

TEST(Projection, ResidualOrthogonal) {
  Rng rng(8);
  for (int it = 0; it < 50; ++it) {
    const std::size_t dim = 2 + it % 5;
    auto b = rng.independent(1 + it % (dim - 1), dim, 9);
    QVector v = rng.vector(dim, 9);
    QVector p = project_onto_span(v, b);
    for (const auto& bi : b) EXPECT_EQ(dot(v - p, bi), 0);
    EXPECT_EQ(dist_sq_to_span(v, b), norm_sq(v - p));
  }
}

TEST(Projection, NestedLaw) {
  Rng rng(9);
  for (int it = 0; it < 60; ++it) {
    const std::size_t dim = 2 + it % 5;
    const std::size_t k = 1 + it % (dim - 1);
    auto s = rng.independent(k + 1, dim, 9);
    std::vector<QVector> s1(s.begin(), s.begin() + 1 + it % k);
    QVector v = rng.vector(dim, 9);
    EXPECT_EQ(project_onto_span(v, s1), project_onto_span(project_onto_span(v, s), s1));
  }
}

TEST(RelVolume, Examples) {
  EXPECT_EQ(rel_volume_sq({vec({1, 0}), vec({0, 1})}), 1);
  EXPECT_EQ(rel_volume_sq({vec({1, 1})}), 2);
  EXPECT_EQ(rel_volume_sq({vec({1, 1}), vec({0, 1})}), 1);
  EXPECT_EQ(rel_volume_sq({}), 1);
  EXPECT_THROW(rel_volume_sq({vec({1, 1}), vec({2, 2})}), DependentInput);
}

TEST(Matrix, DeterminantInverseUnimodular) {
  for (std::size_t n = 1; n <= 4; ++n) {
    EXPECT_EQ(determinant(QMatrix::identity(n)), 1);
    EXPECT_TRUE(is_unimodular(QMatrix::identity(n)));
  }
  QMatrix d = QMatrix::from_rows({vec({2, 0}), vec({0, 1})});
  EXPECT_EQ(determinant(d), 2);
  EXPECT_FALSE(is_unimodular(d));
  QMatrix s = QMatrix::from_rows({vec({1, 1}), vec({0, 1})});
  EXPECT_EQ(determinant(s), 1);
  EXPECT_TRUE(is_unimodular(s));
  EXPECT_EQ(inverse(s), QMatrix::from_rows({vec({1, -1}), vec({0, 1})}));
  EXPECT_THROW(inverse(QMatrix::from_rows({vec({1, 2}), vec({2, 4})})), SingularMatrix);
  EXPECT_THROW(determinant(QMatrix(2, 3)), NonSquare);
  EXPECT_THROW(is_unimodular(QMatrix(2, 3)), NonSquare);
  EXPECT_FALSE(is_unimodular(QMatrix::from_rows({QVector{q(1, 2), q(0)}, QVector{q(0), q(2)}})));
}

TEST(Matrix, DeterminantMatchesNaive) {
  Rng rng(13);
  for (int it = 0; it < 80; ++it) {
    const std::size_t n = 1 + it % 6;
    std::vector<std::vector<Rational>> a(n);
    QMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        Rational x = rng.rational(9, it % 2 ? 4 : 1);
        a[r].push_back(x);
        m(r, c) = x;
      }
    EXPECT_EQ(determinant(m), naive_det(a));
  }
}

TEST(Matrix, InverseAndUnimodularClosure) {
  Rng rng(17);
  for (int it = 0; it < 60; ++it) {
    const std::size_t n = 1 + it % 5;
    QMatrix m = QMatrix::from_rows(rng.independent(n, n, 9));
    EXPECT_EQ(inverse(m) * m, QMatrix::identity(n));
    EXPECT_EQ(m * inverse(m), QMatrix::identity(n));
    // random unimodular: product of elementary integer shears
    QMatrix u = QMatrix::identity(n);
    for (int s = 0; s < 6 && n > 1; ++s) {
      std::size_t i = rng.uniform(0, n - 1), j = rng.uniform(0, n - 1);
      if (i == j) continue;
      QMatrix e = QMatrix::identity(n);
      e(i, j) = rng.uniform(-3, 3);
      u = u * e;
    }
    ASSERT_TRUE(is_unimodular(u));
    EXPECT_TRUE(is_unimodular(inverse(u)));
  }
}

TEST(Ldl, Examples) {
  auto id = ldl_decompose(QMatrix::identity(3));
  EXPECT_EQ(id.lower, QMatrix::identity(3));
  EXPECT_EQ(id.diag, (std::vector<Rational>{1, 1, 1}));
  auto e = ldl_decompose(QMatrix::from_rows({vec({2, 1}), vec({1, 1})}));
  EXPECT_EQ(e.lower, QMatrix::from_rows({QVector{q(1), q(0)}, QVector{q(1, 2), q(1)}}));
  EXPECT_EQ(e.diag, (std::vector<Rational>{2, q(1, 2)}));
  EXPECT_THROW(ldl_decompose(QMatrix::from_rows({vec({1, 2}), vec({2, 1})})), NotSPD);
}

TEST(Ldl, ExactReconstruction) {
  Rng rng(19);
  for (int it = 0; it < 50; ++it) {
    const std::size_t n = 1 + it % 6;
    QMatrix g = gram_matrix(rng.independent(n, n + it % 2, 9));
    auto ldl = ldl_decompose(g);
    QMatrix d(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_GT(ldl.diag[i], 0);
      d(i, i) = ldl.diag[i];
    }
    EXPECT_EQ(ldl.lower * d * ldl.lower.transposed(), g);
  }
}

TEST(Adjugate, MatchesInverseTimesDet) {
  Rng rng(23);
  for (int it = 0; it < 40; ++it) {
    const std::size_t n = 1 + it % 6;
    QMatrix g = gram_matrix(rng.independent(n, n, 9));
    std::vector<Integer> flat;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) flat.push_back(g(r, c).get_num());
    auto [adj, det] = detail::adjugate_no_pivot(flat, n);
    EXPECT_EQ(Rational(det), determinant(g));
    QMatrix inv = inverse(g);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) EXPECT_EQ(Rational(adj[r * n + c]), inv(r, c) * Rational(det));
  }
}
