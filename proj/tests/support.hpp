#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mdsp/mdsp.hpp"

namespace testing_support {

using mdsp::Integer;
using mdsp::IntVector;
using mdsp::QVector;
using mdsp::Rational;

inline Rational q(long p, long d = 1) { return mdsp::make_rational(p, d); }

inline QVector vec(std::initializer_list<long> xs) {
  QVector out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

inline IntVector ivec(std::initializer_list<long> xs) {
  IntVector out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

// Textbook Gaussian elimination on a copy, no fraction-free tricks.
inline Rational naive_det(std::vector<std::vector<Rational>> a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a[p][k] == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      std::swap(a[p], a[k]);
      det = -det;
    }
    det *= a[k][k];
    for (std::size_t r = k + 1; r < n; ++r) {
      const Rational f = a[r][k] / a[k][k];
      for (std::size_t c = k; c < n; ++c) a[r][c] -= f * a[k][c];
    }
  }
  return det;
}

inline Rational naive_gram_det(const std::vector<QVector>& vs) {
  std::vector<std::vector<Rational>> g(vs.size(), std::vector<Rational>(vs.size()));
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j < vs.size(); ++j) {
      Rational s = 0;
      for (std::size_t k = 0; k < vs[i].size(); ++k) s += vs[i][k] * vs[j][k];
      g[i][j] = s;
    }
  return naive_det(g);
}

// dist^2(v, <B>) as a ratio of Gram determinants.
inline Rational oracle_dist_sq(const QVector& v, const std::vector<QVector>& b) {
  std::vector<QVector> all{v};
  all.insert(all.end(), b.begin(), b.end());
  return naive_gram_det(all) / naive_gram_det(b);
}

inline std::vector<QVector> shifted(const QVector& v, const std::vector<QVector>& b, const IntVector& x) {
  std::vector<QVector> out = b;
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t k = 0; k < v.size(); ++k) out[i][k] += Rational(x[i]) * v[k];
  return out;
}

// Calls f(x) for every x in [lo, hi]^n, lexicographic order.
template <class F>
void for_each_point(std::size_t n, long lo, long hi, F&& f) {
  IntVector x(n, Integer(lo));
  while (true) {
    f(x);
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (x[k] < hi) {
        x[k] += 1;
        for (std::size_t j = k + 1; j < n; ++j) x[j] = lo;
        break;
      }
      if (k == 0) return;
    }
    if (n == 0) return;
  }
}

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(eng); }
  QVector vector(std::size_t dim, long bound) {
    QVector v;
    for (std::size_t i = 0; i < dim; ++i) v.emplace_back(uniform(-bound, bound));
    return v;
  }
  Rational rational(long bound, long den_bound) {
    return mdsp::make_rational(uniform(-bound, bound), uniform(1, den_bound));
  }
  // k independent vectors in dimension dim with entries in [-bound, bound]
  std::vector<QVector> independent(std::size_t k, std::size_t dim, long bound) {
    while (true) {
      std::vector<QVector> vs;
      for (std::size_t i = 0; i < k; ++i) vs.push_back(vector(dim, bound));
      if (naive_gram_det(vs) != 0) return vs;
    }
  }
  // Square MDSP instance of size n+1
  mdsp::MDSPInstance instance(std::size_t n, long bound) {
    auto vs = independent(n + 1, n + 1, bound);
    QVector v = vs.front();
    vs.erase(vs.begin());
    return mdsp::MDSPInstance(std::move(v), std::move(vs));
  }
  IntVector shift(std::size_t n, long bound) {
    IntVector x;
    for (std::size_t i = 0; i < n; ++i) x.emplace_back(uniform(-bound, bound));
    return x;
  }
};

}  // namespace testing_support
