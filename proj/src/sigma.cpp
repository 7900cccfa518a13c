#include "anisogeo/sigma.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>

namespace anisogeo {

namespace {

MatD mat2(double a, double b, double c, double d) {
  MatD m(2, 2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return m;
}

const MatD& P1() {  // squares to +I
  static MatD m = mat2(0, 1, 1, 0);
  return m;
}
const MatD& P2() {  // squares to +I
  static MatD m = mat2(1, 0, 0, -1);
  return m;
}
const MatD& P3() {  // squares to -I
  static MatD m = mat2(0, -1, 1, 0);
  return m;
}

MatD identity(int n) {
  MatD m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

MatD kron(const MatD& A, const MatD& B) {
  MatD C(A.rows * B.rows, A.cols * B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j)
      for (int k = 0; k < B.rows; ++k)
        for (int l = 0; l < B.cols; ++l)
          C(i * B.rows + k, j * B.cols + l) = A(i, j) * B(k, l);
  return C;
}

// left-multiplication matrices of the imaginary units of the Cayley-Dickson
// algebra of dimension dim (4: quaternions, 8: octonions)
std::vector<MatD> cayley_dickson_left(int dim) {
  // multiplication table built by doubling from the reals
  // basis elements indexed 0..dim-1; conj(e_0) = e_0, conj(e_i) = -e_i
  struct Table {
    int dim;
    // product e_i e_j = sum_k coeff[k] e_k has a single term
    std::vector<std::vector<std::pair<int, int>>> prod;  // (index, sign)
  };
  std::function<Table(int)> build = [&](int d) -> Table {
    if (d == 1) return {1, {{{0, 1}}}};
    Table half = build(d / 2);
    Table t;
    t.dim = d;
    t.prod.assign(static_cast<std::size_t>(d) * d, {});
    auto half_mul = [&](int i, int j) { return half.prod[i * half.dim + j][0]; };
    auto conj_sign = [&](int i) { return i == 0 ? 1 : -1; };
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        int a = i % (d / 2), ab = i / (d / 2);
        int c = j % (d / 2), cb = j / (d / 2);
        // (a, b)(c, e) = (a c - conj(e) b, e a + b conj(c))
        std::pair<int, int> r;
        if (ab == 0 && cb == 0) {
          r = half_mul(a, c);
          t.prod[i * d + j] = {{r.first, r.second}};
        } else if (ab == 0 && cb == 1) {
          // (a,0)(0,e) = (0, e a)
          r = half_mul(c, a);
          t.prod[i * d + j] = {{r.first + d / 2, r.second}};
        } else if (ab == 1 && cb == 0) {
          // (0,b)(c,0) = (0, b conj(c))
          r = half_mul(a, c);
          t.prod[i * d + j] = {{r.first + d / 2, r.second * conj_sign(c)}};
        } else {
          // (0,b)(0,e) = (-conj(e) b, 0)
          r = half_mul(c, a);
          t.prod[i * d + j] = {{r.first, -r.second * conj_sign(c)}};
        }
      }
    return t;
  };
  Table t = build(dim);
  std::vector<MatD> L;
  for (int i = 1; i < dim; ++i) {
    MatD m(dim, dim);
    for (int j = 0; j < dim; ++j) {
      auto [k, s] = t.prod[i * dim + j][0];
      m(k, j) = s;
    }
    L.push_back(std::move(m));
  }
  return L;
}

struct RealRep {
  int size = 1;
  std::vector<MatD> plus;   // square to +I
  std::vector<MatD> minus;  // square to -I
};

RealRep double_rep(const RealRep& r) {
  RealRep d;
  d.size = 2 * r.size;
  MatD I = identity(r.size);
  for (const auto& g : r.plus) d.plus.push_back(kron(P1(), g));
  for (const auto& g : r.minus) d.minus.push_back(kron(P1(), g));
  d.plus.push_back(kron(P2(), I));
  d.minus.push_back(kron(P3(), I));
  return d;
}

// pivot on a +I generator to flip the rest: {A0, A0 A_i}
RealRep pivot_rep(const RealRep& r) {
  RealRep out;
  out.size = r.size;
  const MatD& A0 = r.plus.front();
  out.plus.push_back(A0);
  auto flip = [&](const MatD& g, bool was_plus) {
    MatD p = matmul(A0, g);
    // (A0 g)^2 = -A0^2 g^2 = -(+1) s
    if (was_plus)
      out.minus.push_back(std::move(p));
    else
      out.plus.push_back(std::move(p));
  };
  for (std::size_t i = 1; i < r.plus.size(); ++i) flip(r.plus[i], true);
  for (const auto& g : r.minus) flip(g, false);
  return out;
}

RealRep build_rep(int a, int b) {
  if (a < 0 || b < 0) throw SigmaError("build_rep: negative counts");
  if (a == 0 && b == 0) return {1, {}, {}};
  if (a >= 1 && b >= 1) return double_rep(build_rep(a - 1, b - 1));
  if (b == 0) {
    if (a == 1) {
      RealRep r;
      r.size = 1;
      MatD one(1, 1);
      one(0, 0) = 1.0;
      r.plus.push_back(one);
      return r;
    }
    if (a == 2) return {2, {P1(), P2()}, {}};
    return pivot_rep(build_rep(1, a - 1));
  }
  // a == 0
  if (b == 1) return {2, {}, {P3()}};
  if (b <= 3) {
    auto L = cayley_dickson_left(4);
    RealRep r;
    r.size = 4;
    for (int i = 0; i < b; ++i) r.minus.push_back(L[i]);
    return r;
  }
  if (b <= 7) {
    auto L = cayley_dickson_left(8);
    RealRep r;
    r.size = 8;
    for (int i = 0; i < b; ++i) r.minus.push_back(L[i]);
    return r;
  }
  if (b == 8) {
    RealRep seven = build_rep(0, 7);
    RealRep r;
    r.size = 16;
    for (const auto& g : seven.minus) r.minus.push_back(kron(P1(), g));
    r.minus.push_back(kron(P3(), identity(8)));
    return r;
  }
  throw SigmaError("build_rep: dimension bound is 8");
}

bool anticommutes_to(const MatD& A, const MatD& B, double target_diag) {
  int N = A.rows;
  MatD AB = matmul(A, B), BA = matmul(B, A);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      double want = i == j ? target_diag : 0.0;
      if (AB(i, j) + BA(i, j) != want) return false;
    }
  return true;
}

}  // namespace

int sigma_dimension(int n) {
  if (n < 1) throw SigmaError("sigma_dimension: n >= 1");
  return n % 2 ? 1 << ((n - 1) / 2) : 1 << (n / 2);
}

MatQ2 SigmaSystem::sigma_matrix(int a) const {
  MatQ2 s(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) s(i, j) = Q2{0.0, tau[a](i, j) * 0.5};  // /sqrt(2)
  return s;
}

SigmaSystem sigma_system(int n, std::span<const int> metric_diag) {
  if (n < 1 || n > 8) throw SigmaError("sigma_system: engine bound is 1 <= n <= 8");
  if (static_cast<int>(metric_diag.size()) != n)
    throw SigmaError("sigma_system: metric_diag needs n entries");
  for (int v : metric_diag)
    if (v != 1 && v != -1) throw SigmaError("sigma_system: diag entries must be +-1");
  // G_aa = -1 needs tau^2 = +I, G_aa = +1 needs tau^2 = -I
  int a = 0, b = 0;
  for (int v : metric_diag) (v == -1 ? a : b)++;
  RealRep rep = build_rep(a, b);

  SigmaSystem S;
  S.n = n;
  S.metric_diag.assign(metric_diag.begin(), metric_diag.end());
  S.N = rep.size;
  S.formula_N = sigma_dimension(n);
  S.escalated = S.N != S.formula_N;
  S.tau.resize(n);
  std::size_t ip = 0, im = 0;
  for (int i = 0; i < n; ++i)
    S.tau[i] = metric_diag[i] == -1 ? rep.plus[ip++] : rep.minus[im++];

  // construction sanity: the scaled anticommutation relations hold exactly
  for (int x = 0; x < n; ++x)
    for (int y = x; y < n; ++y) {
      double target = x == y ? -2.0 * metric_diag[x] : 0.0;
      if (!anticommutes_to(S.tau[x], S.tau[y], target))
        throw SigmaError("sigma_system: construction failed the relations");
    }
  return S;
}

SigmaSystem sigma_system_default(int n) {
  std::vector<int> diag(n, 1);
  for (int i = 0; i < (n + 1) / 2; ++i) diag[i] = -1;
  return sigma_system(n, diag);
}

double anticommutation_residual(const SigmaSystem& S) {
  double worst = 0.0;
  for (int x = 0; x < S.n; ++x)
    for (int y = 0; y < S.n; ++y) {
      MatD AB = matmul(S.tau[x], S.tau[y]);
      MatD BA = matmul(S.tau[y], S.tau[x]);
      for (int i = 0; i < S.N; ++i)
        for (int j = 0; j < S.N; ++j) {
          // sigma relation scaled by 2: tau_x tau_y + tau_y tau_x = -2 G_xy
          double want = (i == j && x == y) ? -2.0 * S.metric_diag[x] : 0.0;
          worst = std::max(worst, std::abs(0.5 * (AB(i, j) + BA(i, j) - want)));
        }
    }
  return worst;
}

namespace {

// ordered products tau_{t1} ... tau_{tq} for every subset; for distinct
// anticommuting generators this equals the antisymmetrized product
std::vector<MatD> subset_products(const SigmaSystem& S) {
  int n = S.n;
  std::vector<MatD> prod(static_cast<std::size_t>(1) << n);
  prod[0] = identity(S.N);
  for (std::uint32_t mask = 1; mask < prod.size(); ++mask) {
    int low = std::countr_zero(mask);
    if (mask == (1u << low))
      prod[mask] = S.tau[low];
    else
      prod[mask] = matmul(S.tau[low], prod[mask & (mask - 1)]);
  }
  return prod;
}

// rank-1 factorization of an N^2 x N^2 grouping; returns the residual
double rank1_factor(const MatD& M, MatD& u, MatD& v, int N) {
  int r0 = 0, c0 = 0;
  double best = 0.0;
  for (int r = 0; r < M.rows; ++r)
    for (int c = 0; c < M.cols; ++c)
      if (std::abs(M(r, c)) > best) {
        best = std::abs(M(r, c));
        r0 = r;
        c0 = c;
      }
  u = MatD(N, N);
  v = MatD(N, N);
  if (best == 0.0) return 0.0;
  double piv = M(r0, c0);
  for (int r = 0; r < M.rows; ++r) u.a[r] = M(r, c0);
  for (int c = 0; c < M.cols; ++c) v.a[c] = M(r0, c) / piv;
  double worst = 0.0;
  for (int r = 0; r < M.rows; ++r)
    for (int c = 0; c < M.cols; ++c)
      worst = std::max(worst, std::abs(M(r, c) - u.a[r] * v.a[c]));
  return worst;
}

double max_abs_mat(const MatD& M) {
  double w = 0.0;
  for (double x : M.a) w = std::max(w, std::abs(x));
  return w;
}

}  // namespace

EpsilonReport epsilon_objects(const SigmaSystem& S) {
  int n = S.n, N = S.N;
  EpsilonReport rep;
  rep.n = n;
  rep.N = N;
  std::vector<MatD> prod = subset_products(S);

  // E(s)[ (k,m), (i,j) ] = sum_T s^|T| gsign(T) tau_T[k][i] tau_T[m][j];
  // the 2^q coefficient of the sum cancels against the sqrt(2) scaling of
  // the sigma matrices, leaving integer arithmetic
  auto assemble = [&](double s) {
    MatD E(N * N, N * N);
    for (std::uint32_t mask = 0; mask < prod.size(); ++mask) {
      int q = std::popcount(mask);
      double coeff = (q % 2 && s < 0) ? -1.0 : 1.0;
      int gsign = 1;
      for (std::uint32_t mm = mask; mm;) {
        int t = std::countr_zero(mm);
        gsign *= S.metric_diag[t];
        mm &= mm - 1;
      }
      double c = coeff * gsign;
      const MatD& P = prod[mask];
      for (int k = 0; k < N; ++k)
        for (int m = 0; m < N; ++m)
          for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
              E(k * N + m, i * N + j) += c * P(k, i) * P(m, j);
    }
    return E;
  };
  rep.Eplus = assemble(+1.0);
  rep.Eminus = assemble(-1.0);
  rep.plus_zero = max_abs_mat(rep.Eplus) == 0.0;
  rep.minus_zero = max_abs_mat(rep.Eminus) == 0.0;

  MatD ul, vu;
  rep.rank1_residual_plus = rep.plus_zero ? 0.0 : rank1_factor(rep.Eplus, ul, vu, N);
  if (!rep.plus_zero) {
    rep.eps_lower = ul;
    rep.eps_upper = vu;
    rep.chosen_sign = +1;
  }
  MatD ul2, vu2;
  rep.rank1_residual_minus =
      rep.minus_zero ? 0.0 : rank1_factor(rep.Eminus, ul2, vu2, N);
  if (rep.plus_zero && !rep.minus_zero) {
    rep.eps_lower = ul2;
    rep.eps_upper = vu2;
    rep.chosen_sign = -1;
  }
  return rep;
}

PairSymmetry symmetry_class(int n, int q) {
  if (q < 0 || q > n) throw SigmaError("symmetry_class: need 0 <= q <= n");
  int r = ((n - 2 * q) % 8 + 8) % 8;
  if (n % 2) {
    if (r == 1 || r == 7) return PairSymmetry::Symmetric;
    return PairSymmetry::Antisymmetric;  // r in {3, 5}
  }
  if (r == 0) return PairSymmetry::Symmetric;
  if (r == 4) return PairSymmetry::Antisymmetric;
  int t = ((n + 2 * q) % 8 + 8) % 8;
  if (t == 6) return PairSymmetry::MixedSymmetric;
  if (t == 2) return PairSymmetry::MixedAntisymmetric;
  throw SigmaError("symmetry_class: outside the printed tables");
}

namespace {

// change of basis diagonalizing the volume element for even n; columns are
// a basis of the +1 eigenspace followed by one of the -1 eigenspace
MatD chiral_basis(const SigmaSystem& S) {
  int N = S.N;
  MatD omega = identity(N);
  for (int i = 0; i < S.n; ++i) omega = matmul(omega, S.tau[i]);
  MatD om2 = matmul(omega, omega);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (om2(i, j) != (i == j ? 1.0 : 0.0))
        throw SigmaError("chiral split needs a volume element squaring to +I");
  MatD B(N, N);
  int col = 0;
  for (int sign = 0; sign < 2; ++sign) {
    double sg = sign == 0 ? 1.0 : -1.0;
    // greedy independent columns of (I + sg omega) / 2
    std::vector<std::vector<double>> rows;  // reduced rows for rank tracking
    for (int c = 0; c < N && col < (sign + 1) * N / 2; ++c) {
      std::vector<double> v(N);
      for (int r = 0; r < N; ++r) v[r] = 0.5 * ((r == c ? 1.0 : 0.0) + sg * omega(r, c));
      std::vector<double> w = v;
      for (const auto& u : rows) {
        double dot = 0, nn = 0;
        for (int r = 0; r < N; ++r) {
          dot += w[r] * u[r];
          nn += u[r] * u[r];
        }
        for (int r = 0; r < N; ++r) w[r] -= dot / nn * u[r];
      }
      double norm = 0;
      for (double x : w) norm += x * x;
      if (norm > 1e-9) {
        rows.push_back(w);
        for (int r = 0; r < N; ++r) B(r, col) = v[r];
        ++col;
      }
    }
  }
  if (col != N) throw SigmaError("chiral split: eigenspaces not half-dimensional");
  return B;
}

}  // namespace

std::vector<SymmetryCheckRow> symmetry_class_explicit_check(int n) {
  if (n < 1 || n > 4)
    throw SigmaError("symmetry_class_explicit_check: supported for n <= 4");
  SigmaSystem S = sigma_system_default(n);
  int N = S.N;

  // for even n move to the chiral basis so reduced components are blocks
  MatD B = identity(N), Binv = identity(N);
  if (n % 2 == 0) {
    B = chiral_basis(S);
    Binv = inverse(B);
    for (auto& t : S.tau) t = matmul(Binv, matmul(t, B));
  }
  EpsilonReport eps = epsilon_objects(S);
  MatD epsU = eps.eps_upper;

  std::vector<MatD> prod = subset_products(S);
  std::vector<SymmetryCheckRow> rows;
  int half = N / 2;
  for (int q = 0; q <= n; ++q) {
    PairSymmetry want = symmetry_class(n, q);
    double sym_res = 0, anti_res = 0, scale = 0;
    double mix_sym = 0, mix_anti = 0, diag_mag = 0, mix_mag = 0;
    for (std::uint32_t mask = 0; mask < prod.size(); ++mask) {
      if (std::popcount(mask) != q) continue;
      // raised array (sigma_T)^{kl} = eps^{km} (sigma_T)_m^{.l}
      MatD R(N, N);
      for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l) {
          double acc = 0;
          for (int m = 0; m < N; ++m) acc += epsU(k, m) * prod[mask](m, l);
          R(k, l) = acc;
        }
      for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l) {
          scale = std::max(scale, std::abs(R(k, l)));
          bool diag_block = (n % 2) || ((k < half) == (l < half));
          if (diag_block) {
            diag_mag = std::max(diag_mag, std::abs(R(k, l)));
            sym_res = std::max(sym_res, std::abs(R(k, l) - R(l, k)));
            anti_res = std::max(anti_res, std::abs(R(k, l) + R(l, k)));
          } else {
            mix_mag = std::max(mix_mag, std::abs(R(k, l)));
            mix_sym = std::max(mix_sym, std::abs(R(k, l) - R(l, k)));
            mix_anti = std::max(mix_anti, std::abs(R(k, l) + R(l, k)));
          }
        }
    }
    SymmetryCheckRow row;
    row.q = q;
    row.from_table = want;
    double tol = 1e-9 * std::max(1.0, scale);
    // the predicted symmetry must hold on its block and the remaining
    // reduced components must vanish
    switch (want) {
      case PairSymmetry::Symmetric:
        row.residual = std::max(sym_res, n % 2 ? 0.0 : mix_mag);
        break;
      case PairSymmetry::Antisymmetric:
        row.residual = std::max(anti_res, n % 2 ? 0.0 : mix_mag);
        break;
      case PairSymmetry::MixedSymmetric:
        row.residual = std::max(mix_sym, diag_mag);
        break;
      case PairSymmetry::MixedAntisymmetric:
        row.residual = std::max(mix_anti, diag_mag);
        break;
    }
    row.agrees = row.residual <= tol;
    rows.push_back(row);
  }
  return rows;
}

FundamentalSpinorReport fundamental_spinor_check(int n, std::span<const double> xi) {
  if (n < 1 || n > 6) throw SigmaError("fundamental_spinor_check: n <= 6");
  SigmaSystem S = sigma_system_default(n);
  int N = S.N;
  if (static_cast<int>(xi.size()) != N)
    throw SigmaError("fundamental_spinor_check: spinor needs N components");

  std::vector<double> chi(xi.begin(), xi.end());
  MatD B = identity(N);
  if (n % 2 == 0) {
    B = chiral_basis(S);
    MatD Binv = inverse(B);
    for (auto& t : S.tau) t = matmul(Binv, matmul(t, B));
    std::vector<double> c(N, 0.0);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) c[i] += Binv(i, j) * chi[j];
    chi = c;
  }
  EpsilonReport eps = epsilon_objects(S);
  std::vector<MatD> prod = subset_products(S);

  FundamentalSpinorReport rep;
  rep.bilinear_norm.assign(n + 1, 0.0);
  rep.allowed.assign(n + 1, false);
  int half = N / 2;
  for (int q = 0; q <= n; ++q) {
    int r = ((n - 2 * q) % 8 + 8) % 8;
    rep.allowed[q] = (r == 0 || r == 1 || r == 7);
    for (std::uint32_t mask = 0; mask < prod.size(); ++mask) {
      if (std::popcount(mask) != q) continue;
      // lowered array (sigma_T)_{kl} = eps_{km} (sigma_T)^{.l}_m contracted
      // against the symmetric xi xi, restricted to chiral blocks for even n
      double acc_full = 0, acc_pp = 0, acc_mm = 0;
      for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l) {
          double low = 0;
          for (int m = 0; m < N; ++m) low += eps.eps_lower(k, m) * prod[mask](m, l);
          double term = chi[k] * chi[l] * low;
          acc_full += term;
          if (k < half && l < half) acc_pp += term;
          if (k >= half && l >= half) acc_mm += term;
        }
      double v = n % 2 ? std::abs(acc_full)
                       : std::max(std::abs(acc_pp), std::abs(acc_mm));
      rep.bilinear_norm[q] = std::max(rep.bilinear_norm[q], v);
    }
  }
  bool nonzero = false;
  for (double x : chi) nonzero = nonzero || x != 0.0;
  bool ok = nonzero;
  double scale = 0;
  for (double v : rep.bilinear_norm) scale = std::max(scale, v);
  for (int q = 0; q <= n; ++q)
    if (!rep.allowed[q] && rep.bilinear_norm[q] > 1e-9 * std::max(1.0, scale))
      ok = false;
  rep.fundamental = ok;
  return rep;
}

}  // namespace anisogeo
