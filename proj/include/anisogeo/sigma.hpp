#pragma once

#include <span>
#include <vector>

#include "anisogeo/linalg.hpp"

namespace anisogeo {

struct SigmaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact arithmetic in Z[1/2][sqrt(2)]: value = r + s*sqrt(2) with dyadic
// rational parts carried by doubles.  All entries appearing in the sigma
// systems stay within this ring, so equality tests are exact.
struct Q2 {
  double r = 0.0, s = 0.0;

  Q2() = default;
  Q2(double rr, double ss) : r(rr), s(ss) {}
  static Q2 of(double rr) { return {rr, 0.0}; }
  static Q2 sqrt2_over(double denom) { return {0.0, 1.0 / denom}; }

  double value() const { return r + s * 1.4142135623730950488; }
  friend Q2 operator+(Q2 a, Q2 b) { return {a.r + b.r, a.s + b.s}; }
  friend Q2 operator-(Q2 a, Q2 b) { return {a.r - b.r, a.s - b.s}; }
  friend Q2 operator*(Q2 a, Q2 b) {
    return {a.r * b.r + 2.0 * a.s * b.s, a.r * b.s + a.s * b.r};
  }
  Q2 operator-() const { return {-r, -s}; }
  friend bool operator==(Q2 a, Q2 b) { return a.r == b.r && a.s == b.s; }
};

using MatQ2 = Mat<Q2>;

// N x N from the irreducible-representation dimension formula:
// 2^{(n-1)/2} for odd n, 2^{n/2} for even n.
int sigma_dimension(int n);

// Matrices satisfying sigma_a sigma_b + sigma_b sigma_a = -G_ab I for a
// diagonal metric with +/-1 entries, realized over the reals.  `tau` holds
// the integer-entry matrices sqrt(2) * sigma, on which the anticommutation
// relation reads tau_a tau_b + tau_b tau_a = -2 G_ab I exactly.
struct SigmaSystem {
  int n = 0;
  std::vector<int> metric_diag;  // +/-1 per generator
  int N = 0;                     // realized matrix size
  int formula_N = 0;             // complex-irrep dimension
  bool escalated = false;        // N > formula_N
  std::vector<MatD> tau;         // integer entries
  MatQ2 sigma_matrix(int a) const;  // tau[a] / sqrt(2), exact
};

// engine bound n <= 8
SigmaSystem sigma_system(int n, std::span<const int> metric_diag);
// balanced default signature (-1 on the first ceil(n/2) slots) for which the
// real representation exists at the formula dimension
SigmaSystem sigma_system_default(int n);

// max |sigma_a sigma_b + sigma_b sigma_a + G_ab I| computed in exact
// arithmetic through the integer-scaled tau matrices; zero for every system
double anticommutation_residual(const SigmaSystem& S);

struct EpsilonReport {
  int n = 0, N = 0;
  // E(+-) as N^2 x N^2 matrices, rows (k, m), columns (i, j)
  MatD Eplus, Eminus;
  bool plus_zero = false, minus_zero = false;
  double rank1_residual_plus = 0, rank1_residual_minus = 0;
  // factors of the surviving sum (or of both for even n): E = scale eps eps
  MatD eps_lower, eps_upper;
  int chosen_sign = 0;  // which of E(+-) supplied the factors
};

// finite alternating sum over antisymmetrized sigma products and its
// factorization into spinor metrics; single-block systems only
EpsilonReport epsilon_objects(const SigmaSystem& S);

enum class PairSymmetry { Symmetric, Antisymmetric, MixedSymmetric, MixedAntisymmetric };

// mod-8 classification of the symmetry of (sigma_{i...j})^{kl} in its spinor
// index pair, q the number of antisymmetrized vector indices
PairSymmetry symmetry_class(int n, int q);

struct SymmetryCheckRow {
  int q = 0;
  PairSymmetry from_table;
  bool agrees = false;
  double residual = 0;  // deviation from the predicted (anti)symmetry
};

// explicit cross-check against constructed arrays; supported for n <= 4
std::vector<SymmetryCheckRow> symmetry_class_explicit_check(int n);

struct FundamentalSpinorReport {
  bool fundamental = false;
  std::vector<double> bilinear_norm;  // per q = 0..n
  std::vector<bool> allowed;          // per q, from the mod-8 conditions
};

// evaluates the spinor bilinears against all antisymmetrized sigma products;
// n <= 6
FundamentalSpinorReport fundamental_spinor_check(int n, std::span<const double> xi);

}  // namespace anisogeo
