#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "anisogeo/sigma.hpp"

using namespace anisogeo;

TEST_CASE("representation dimension formula") {
  CHECK(sigma_dimension(1) == 1);
  CHECK(sigma_dimension(2) == 2);
  CHECK(sigma_dimension(3) == 2);
  CHECK(sigma_dimension(4) == 4);
  CHECK(sigma_dimension(5) == 4);
  CHECK(sigma_dimension(6) == 8);
  CHECK(sigma_dimension(7) == 8);
  CHECK(sigma_dimension(8) == 16);
}

TEST_CASE("anticommutation exact for all balanced systems up to n = 8") {
  for (int n = 1; n <= 8; ++n) {
    SigmaSystem S = sigma_system_default(n);
    CHECK(S.N == S.formula_N);
    CHECK_FALSE(S.escalated);
    CHECK(anticommutation_residual(S) == 0.0);
  }
}

TEST_CASE("anticommutation exact for arbitrary signatures") {
  std::vector<std::vector<int>> diags = {
      {1},       {-1},          {1, 1},         {1, -1},          {-1, -1},
      {1, 1, 1}, {-1, 1, -1},   {1, 1, 1, 1},   {-1, -1, -1, -1}, {1, -1, 1, -1, 1},
      {1, 1, 1, 1, 1, 1},       {-1, 1, 1, 1, 1, 1, 1, 1}};
  for (const auto& d : diags) {
    SigmaSystem S = sigma_system(static_cast<int>(d.size()), d);
    CHECK(anticommutation_residual(S) == 0.0);
  }
}

TEST_CASE("escalation beyond the formula dimension is reported") {
  // a single generator with G = +1 needs sigma^2 = -1/2: no real 1x1 solution
  std::vector<int> plus{1};
  SigmaSystem S = sigma_system(1, plus);
  CHECK(S.N == 2);
  CHECK(S.escalated);
  std::vector<int> minus{-1};
  SigmaSystem S2 = sigma_system(1, minus);
  CHECK(S2.N == 1);
  CHECK_FALSE(S2.escalated);
  // two generators squaring to +1/2 exist at the formula size over the reals
  std::vector<int> mm{-1, -1};
  SigmaSystem S3 = sigma_system(2, mm);
  CHECK(S3.N == 2);
  CHECK_FALSE(S3.escalated);
}

TEST_CASE("the exact sigma matrices satisfy the scaled relation") {
  SigmaSystem S = sigma_system_default(3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      MatQ2 sa = S.sigma_matrix(a), sb = S.sigma_matrix(b);
      for (int i = 0; i < S.N; ++i)
        for (int j = 0; j < S.N; ++j) {
          Q2 acc{0, 0};
          for (int k = 0; k < S.N; ++k)
            acc = acc + sa(i, k) * sb(k, j) + sb(i, k) * sa(k, j);
          double want = (i == j && a == b) ? -static_cast<double>(S.metric_diag[a]) : 0.0;
          CHECK(acc.r == want);
          CHECK(acc.s == 0.0);
        }
    }
}

TEST_CASE("epsilon sums: vanishing pattern and rank-1 factorization") {
  for (int n = 1; n <= 6; ++n) {
    SigmaSystem S = sigma_system_default(n);
    EpsilonReport e = epsilon_objects(S);
    if (n % 4 == 1) {
      CHECK(e.plus_zero);
      CHECK_FALSE(e.minus_zero);
    } else if (n % 4 == 3) {
      CHECK(e.minus_zero);
      CHECK_FALSE(e.plus_zero);
    } else {
      CHECK_FALSE(e.plus_zero);
      CHECK_FALSE(e.minus_zero);
    }
    if (!e.plus_zero) CHECK(e.rank1_residual_plus < 1e-10);
    if (!e.minus_zero) CHECK(e.rank1_residual_minus < 1e-10);
    // the factors reproduce the nonzero sum up to the stored scale
    CHECK(e.chosen_sign != 0);
  }
}

TEST_CASE("mod-8 symmetry table") {
  CHECK(symmetry_class(3, 1) == PairSymmetry::Symmetric);       // n-2q = 1
  CHECK(symmetry_class(5, 1) == PairSymmetry::Antisymmetric);   // n-2q = 3
  CHECK(symmetry_class(4, 2) == PairSymmetry::Symmetric);       // n-2q = 0
  CHECK(symmetry_class(3, 0) == PairSymmetry::Antisymmetric);   // n-2q = 3
  CHECK(symmetry_class(1, 0) == PairSymmetry::Symmetric);       // n-2q = 1
  CHECK(symmetry_class(4, 0) == PairSymmetry::Antisymmetric);   // n-2q = 4
  CHECK(symmetry_class(2, 0) == PairSymmetry::MixedAntisymmetric);  // n+2q = 2
  CHECK(symmetry_class(4, 1) == PairSymmetry::MixedSymmetric);  // n+2q = 6
}

TEST_CASE("mod-8 table against the explicit construction") {
  for (int n = 1; n <= 4; ++n) {
    auto rows = symmetry_class_explicit_check(n);
    CHECK(rows.size() == static_cast<std::size_t>(n + 1));
    for (const auto& r : rows) {
      INFO("n=", n, " q=", r.q, " residual=", r.residual);
      CHECK(r.agrees);
    }
  }
}

TEST_CASE("fundamental spinor check") {
  // below dimension seven every nonzero spinor is fundamental
  for (int n = 1; n <= 6; ++n) {
    SigmaSystem S = sigma_system_default(n);
    std::vector<double> xi(S.N, 0.0);
    xi[0] = 1.0;
    FundamentalSpinorReport r = fundamental_spinor_check(n, xi);
    CHECK(r.fundamental);
    // the zero spinor has all bilinears vanish and is not fundamental
    std::vector<double> zero(S.N, 0.0);
    FundamentalSpinorReport rz = fundamental_spinor_check(n, zero);
    CHECK_FALSE(rz.fundamental);
    for (double v : rz.bilinear_norm) CHECK(v == 0.0);
  }
  // a generic spinor in three dimensions: bilinear table consistent with the
  // allowed set
  SigmaSystem S3 = sigma_system_default(3);
  std::vector<double> xi{1.0, -0.7};
  FundamentalSpinorReport r3 = fundamental_spinor_check(3, xi);
  CHECK(r3.fundamental);
  for (int q = 0; q <= 3; ++q) {
    int rmod = ((3 - 2 * q) % 8 + 8) % 8;
    bool allowed = rmod == 0 || rmod == 1 || rmod == 7;
    CHECK(r3.allowed[q] == allowed);
    if (!allowed) CHECK(r3.bilinear_norm[q] < 1e-12);
  }
}
