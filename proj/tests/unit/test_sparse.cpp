#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "skiprec/error.hpp"
#include "skiprec/kernels.hpp"
#include "skiprec/sparse.hpp"

using namespace skiprec;

TEST_CASE("from_entries sorts, drops zeros and rejects bad input") {
  auto s = SparseMatrix::from_entries(2, 3, {{1, 2, 4.0}, {0, 1, 2.0}, {0, 0, 0.0}, {1, 0, 1.0}});
  CHECK(s.nnz() == 3);
  CHECK(s.at(0, 1) == 2.0);
  CHECK(s.at(1, 0) == 1.0);
  CHECK(s.at(1, 2) == 4.0);
  CHECK(s.at(0, 0) == 0.0);
  CHECK(s.row_cols(1)[0] == 0);
  CHECK(s.row_cols(1)[1] == 2);
  CHECK_THROWS_AS(SparseMatrix::from_entries(2, 2, {{0, 0, 1.0}, {0, 0, 2.0}}), DataError);
  CHECK_THROWS_AS(SparseMatrix::from_entries(2, 2, {{2, 0, 1.0}}), DataError);
  CHECK_THROWS_AS(SparseMatrix::from_entries(2, 2, {{0, 0, std::nan("")}}), NumericalError);
}

TEST_CASE("transpose and dense round trip") {
  std::mt19937_64 rng(3);
  auto pairs = testutil::random_pairs(7, 5, 0.4, rng);
  std::vector<SparseEntry> e;
  for (const auto& p : pairs) e.push_back({p.user, p.video, 1.0 + p.video});
  const auto s = SparseMatrix::from_entries(7, 5, e);
  const auto d = s.to_dense();
  const auto t = s.transpose();
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 5; ++j) CHECK(t.at(j, i) == d(i, j));
  CHECK(t.transpose() == s);
}

TEST_CASE("spmm and dense products match naive loops") {
  std::mt19937_64 rng(5);
  for (auto backend : {kernels::Backend::Scalar, kernels::Backend::Avx2}) {
    if (!kernels::backend_available(backend)) continue;
    kernels::set_backend(backend);
    auto pairs = testutil::random_pairs(6, 9, 0.3, rng);
    std::vector<SparseEntry> e;
    for (const auto& p : pairs) e.push_back({p.user, p.video, 0.5 + 0.1 * p.user});
    const auto s = SparseMatrix::from_entries(6, 9, e);
    const auto m = testutil::random_matrix(9, 4, rng);
    const auto out = spmm(s, m);
    const auto dense = s.to_dense();
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        double ref = 0.0;
        for (std::size_t k = 0; k < 9; ++k) ref += dense(i, k) * m(k, j);
        CHECK(out(i, j) == doctest::Approx(ref).epsilon(1e-13));
      }

    const auto a = testutil::random_matrix(5, 3, rng);
    const auto b = testutil::random_matrix(3, 4, rng);
    const auto c = testutil::random_matrix(5, 4, rng);
    const auto ab = matmul(a, b);
    const auto atc = matmul_tn(a, c);
    const auto cbt = matmul_nt(c, b);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        double ref = 0.0;
        for (std::size_t k = 0; k < 3; ++k) ref += a(i, k) * b(k, j);
        CHECK(ab(i, j) == doctest::Approx(ref).epsilon(1e-13));
      }
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        double ref = 0.0;
        for (std::size_t k = 0; k < 5; ++k) ref += a(k, i) * c(k, j);
        CHECK(atc(i, j) == doctest::Approx(ref).epsilon(1e-13));
      }
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        double ref = 0.0;
        for (std::size_t k = 0; k < 4; ++k) ref += c(i, k) * b(j, k);
        CHECK(cbt(i, j) == doctest::Approx(ref).epsilon(1e-13));
      }
    CHECK_THROWS_AS(matmul(a, c), DataError);
    CHECK_THROWS_AS(spmm(s, a), DataError);
  }
}
