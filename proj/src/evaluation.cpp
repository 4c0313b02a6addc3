#include "cyfrob/evaluation.hpp"

#include <algorithm>
#include <exception>

#include "cyfrob/kernels.hpp"

namespace cyfrob {

namespace {

// below this many points Horner is cheaper than the transform
constexpr u64 kDftThreshold = 64;

u64 powmod(u64 a, u64 e, u64 m) {
  unsigned __int128 r = 1, x = a % m;
  while (e) {
    if (e & 1) r = r * x % m;
    x = x * x % m;
    e >>= 1;
  }
  return static_cast<u64>(r);
}

mpz_class balanced(const mpz_class& x, const mpz_class& m) { return balanced_lift(x, m); }

bool is_root_mod_p(const IntPoly& f, u64 x, u64 p) {
  if (f.empty()) return false;
  return poly_eval_mod(f, mpz_class(x), mpz_class(p)) == 0;
}

}  // namespace

u64 primitive_root(u64 p) {
  if (p == 2) return 1;
  std::vector<u64> factors;
  u64 n = p - 1;
  for (u64 q = 2; q * q <= n; ++q)
    if (n % q == 0) {
      factors.push_back(q);
      while (n % q == 0) n /= q;
    }
  if (n > 1) factors.push_back(n);
  for (u64 g = 2; g < p; ++g) {
    bool ok = true;
    for (u64 q : factors)
      if (powmod(g, (p - 1) / q, p) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  throw UsageError("no primitive root: modulus is not prime");
}

PointSet teichmuller_points(u64 p, int B) {
  if (p < 5) throw UsageError("points need p >= 5");
  PointSet s;
  s.p = p;
  s.B = B;
  s.g = primitive_root(p);
  s.omega = teichmuller_lift(s.g, p, B).value;
  const mpz_class m = pow_ui(p, B);
  s.phi.resize(p - 1);
  s.teich.resize(p - 1);
  mpz_class t = 1;
  u64 x = 1;
  for (u64 k = 0; k + 1 < p; ++k) {
    s.phi[k] = x;
    s.teich[k] = t;
    x = static_cast<u64>(static_cast<unsigned __int128>(x) * s.g % p);
    t *= s.omega;
    mpz_mod(t.get_mpz_t(), t.get_mpz_t(), m.get_mpz_t());
  }
  return s;
}

PointValues evaluate_numerators_all(const UNumerator& num, const PointSet& points, EvalStrategy strategy) {
  const int b = num.b;
  const mpz_class m = num.modulus();
  const std::size_t L = points.teich.size();
  if (strategy == EvalStrategy::automatic) strategy = L >= kDftThreshold ? EvalStrategy::dft : EvalStrategy::horner;
  PointValues out;
  out.values.assign(b, std::vector<ResidueArray>(b, ResidueArray(L, m)));
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < b; ++j) {
      const auto poly = num.entry(i, j);
      std::vector<mpz_class> v;
      switch (strategy) {
        case EvalStrategy::dft:
          v = kernels::eval_cyclic_dft(poly, points.omega, L, m);
          break;
        case EvalStrategy::horner_omp:
          v = kernels::eval_horner_omp(poly, points.teich, m);
          break;
        default:
          v = kernels::eval_horner(poly, points.teich, m);
      }
      for (std::size_t k = 0; k < L; ++k) out.values[i][j].set(k, v[k]);
    }
  out.denominator = ResidueArray(L, m);
  const auto d = kernels::eval_horner(num.denominator, points.teich, m);
  for (std::size_t k = 0; k < L; ++k) {
    mpz_class x = d[k];
    mpz_mod(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    out.denominator.set(k, x);
  }
  return out;
}

PointValues evaluate_numerators_at(const UNumerator& num, const std::vector<u64>& phi) {
  const int b = num.b;
  const mpz_class m = num.modulus();
  std::vector<mpz_class> pts;
  for (u64 x : phi) pts.push_back(teichmuller_lift(x % num.p, num.p, num.B).value);
  PointValues out;
  out.values.assign(b, std::vector<ResidueArray>(b, ResidueArray(pts.size(), m)));
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < b; ++j) {
      const auto v = kernels::eval_horner(num.entry(i, j), pts, m);
      for (std::size_t k = 0; k < pts.size(); ++k) out.values[i][j].set(k, v[k]);
    }
  out.denominator = ResidueArray(pts.size(), m);
  const auto d = kernels::eval_horner(num.denominator, pts, m);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    mpz_class x = d[k];
    mpz_mod(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    out.denominator.set(k, x);
  }
  return out;
}

bool weil_bounds_hold(const std::vector<mpz_class>& a, int b, u64 p) {
  // |a1| <= b p^{(b-1)/2}, |a2| <= C(b,2) p^{b-1}
  if (a.size() > 1) {
    const mpz_class lhs = a[1] * a[1];
    const mpz_class rhs = mpz_class(b * b) * pow_ui(p, b - 1);
    if (lhs > rhs) return false;
  }
  if (a.size() > 2) {
    const mpz_class bound = binomial(b, 2) * pow_ui(p, b - 1);
    if (abs(a[2]) > bound) return false;
  }
  return true;
}

EulerCoefficients euler_factor_from_U(const std::vector<std::vector<mpz_class>>& U, int b, u64 p, int B,
                                      bool check_weil) {
  const mpz_class m = pow_ui(p, B);
  // power sums Tr U^i
  std::vector<mpz_class> s(b + 1, 0);
  std::vector<std::vector<mpz_class>> P = U, T(b, std::vector<mpz_class>(b));
  for (int i = 1; i <= b; ++i) {
    mpz_class tr = 0;
    for (int d = 0; d < b; ++d) tr += P[d][d];
    mpz_mod(tr.get_mpz_t(), tr.get_mpz_t(), m.get_mpz_t());
    s[i] = tr;
    if (i == b) break;
    for (int r = 0; r < b; ++r)
      for (int c = 0; c < b; ++c) {
        mpz_class acc = 0;
        for (int l = 0; l < b; ++l) acc += P[r][l] * U[l][c];
        mpz_mod(acc.get_mpz_t(), acc.get_mpz_t(), m.get_mpz_t());
        T[r][c] = acc;
      }
    P.swap(T);
  }
  std::vector<mpz_class> a(b + 1, 0);
  a[0] = 1;
  for (int k = 1; k <= b; ++k) {
    mpz_class acc = 0;
    for (int i = 1; i <= k; ++i) acc += s[i] * a[k - i];
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), mpz_class(k).get_mpz_t(), m.get_mpz_t());
    acc = -acc * inv;
    mpz_mod(acc.get_mpz_t(), acc.get_mpz_t(), m.get_mpz_t());
    a[k] = acc;
  }

  EulerCoefficients out;
  out.newton.resize(b + 1);
  for (int k = 0; k <= b; ++k) out.newton[k] = balanced(a[k], m);
  auto congruent = [&](const mpz_class& x, const mpz_class& y) {
    mpz_class d = x - y;
    mpz_mod(d.get_mpz_t(), d.get_mpz_t(), m.get_mpz_t());
    return d == 0;
  };
  const mpz_class a1 = out.newton[1];
  out.completed.assign(b + 1, 0);
  out.completed[0] = 1;
  out.completed[1] = a1;
  if (b == 4) {
    out.completed[2] = out.newton[2];
    out.completed[3] = a1 * pow_ui(p, 3);
    out.completed[4] = pow_ui(p, 6);
    out.fe_sign = 1;
    out.fe_consistent = congruent(a[3], out.completed[3]) && congruent(a[4], out.completed[4]);
  } else if (b == 3) {
    const mpz_class pa1 = mpz_class(p) * a1;
    int eps = 1;
    bool determined = !congruent(pa1, 0);
    if (determined) {
      if (congruent(a[2], pa1))
        eps = 1;
      else if (congruent(a[2], -pa1))
        eps = -1;
      else
        out.fe_consistent = false;
    } else if (!congruent(a[2], 0)) {
      out.fe_consistent = false;
    }
    out.fe_sign = eps;
    out.completed[2] = eps * pa1;
    out.completed[3] = eps * pow_ui(p, 3);
    if (!congruent(a[3], out.completed[3])) out.fe_consistent = false;
  } else {
    throw UsageError("only orders 3 and 4 are supported");
  }
  out.weil_ok = weil_bounds_hold(out.completed, b, p);
  if (check_weil && !out.weil_ok)
    throw IntegrityError("Weil bound violated at p = " + std::to_string(p) + ": a1 = " + out.completed[1].get_str() +
                         ", a2 = " + out.completed[2].get_str());
  return out;
}

std::vector<mpz_class> truncated_period_mod_p(const RecurrenceTable& table, u64 p) {
  const auto run = run_truncated_recurrence(table, p, 1, static_cast<int>(p - 1), 1);
  std::vector<mpz_class> f(p);
  for (u64 n = 0; n < p; ++n) f[n] = run.raw(0, static_cast<int>(n));
  return f;
}

namespace {

std::optional<bool> hasse_witt_from_value(const EulerFactorRecord& r, const mpz_class& f0_value) {
  if (r.flag != PointFlag::good || r.coeffs.empty()) return std::nullopt;
  const mpz_class pp = r.p;
  mpz_class f = f0_value;
  mpz_mod(f.get_mpz_t(), f.get_mpz_t(), pp.get_mpz_t());
  if (f == 0) return std::nullopt;
  mpz_class d = r.coeffs[0] + f;
  mpz_mod(d.get_mpz_t(), d.get_mpz_t(), pp.get_mpz_t());
  return d == 0;
}

}  // namespace

std::optional<bool> hasse_witt_check(const RecurrenceTable& table, u64 p, const EulerFactorRecord& record) {
  const auto f = truncated_period_mod_p(table, p);
  return hasse_witt_from_value(record, poly_eval_mod(f, mpz_class(record.phi_star), mpz_class(p)));
}

std::vector<EulerFactorRecord> compute_records(const CYOperator& op, const RecurrenceTable& table,
                                               const UNumerator& num, const EvaluationOptions& options) {
  const u64 p = num.p;
  const int b = num.b, B = num.B;
  const mpz_class m = num.modulus();
  const int h = (b + 1) / 2;

  std::vector<u64> phi;
  PointValues vals;
  std::vector<mpz_class> f0vals;
  std::vector<mpz_class> f0;
  if (options.hasse_witt) f0 = truncated_period_mod_p(table, p);
  if (options.subset.empty()) {
    const auto pts = teichmuller_points(p, B);
    vals = evaluate_numerators_all(num, pts, options.strategy);
    phi = pts.phi;
    if (options.hasse_witt) {
      const bool dft = options.strategy == EvalStrategy::dft ||
                       (options.strategy == EvalStrategy::automatic && phi.size() >= kDftThreshold);
      if (dft) {
        f0vals = kernels::eval_cyclic_dft(f0, mpz_class(pts.g), p - 1, mpz_class(p));
      } else {
        std::vector<mpz_class> xs(phi.begin(), phi.end());
        f0vals = kernels::eval_horner(f0, xs, mpz_class(p));
      }
    }
  } else {
    for (u64 x : options.subset) {
      if (x % p == 0) throw UsageError("evaluation point must be a unit mod p");
      phi.push_back(x % p);
    }
    vals = evaluate_numerators_at(num, phi);
    if (options.hasse_witt) {
      std::vector<mpz_class> xs(phi.begin(), phi.end());
      f0vals = kernels::eval_horner(f0, xs, mpz_class(p));
    }
  }

  std::vector<EulerFactorRecord> recs(phi.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 64)
  for (std::size_t k = 0; k < phi.size(); ++k) {
    try {
      EulerFactorRecord& r = recs[k];
      r.p = p;
      r.phi_star = phi[k];
      if (is_root_mod_p(op.conifold_locus, phi[k], p))
        r.flag = PointFlag::conifold;
      else if (is_root_mod_p(op.apparent_sing_locus, phi[k], p) ||
               std::any_of(op.other_sing_loci.begin(), op.other_sing_loci.end(),
                           [&](const IntPoly& f) { return is_root_mod_p(f, phi[k], p); }))
        r.flag = PointFlag::other_singular;
      if (r.flag == PointFlag::other_singular) continue;

      mpz_class d = vals.denominator.get(k), dinv;
      if (!mpz_invert(dinv.get_mpz_t(), d.get_mpz_t(), m.get_mpz_t())) {
        if (r.flag == PointFlag::good) throw IntegrityError("denominator vanishes away from the singular loci");
        continue;
      }
      std::vector<std::vector<mpz_class>> U(b, std::vector<mpz_class>(b));
      for (int i = 0; i < b; ++i)
        for (int j = 0; j < b; ++j) {
          U[i][j] = vals.values[i][j].get(k) * dinv;
          mpz_mod(U[i][j].get_mpz_t(), U[i][j].get_mpz_t(), m.get_mpz_t());
        }
      const bool good = r.flag == PointFlag::good;
      const auto ef = euler_factor_from_U(U, b, p, B, good);
      if (good) {
        r.coeffs.assign(ef.completed.begin() + 1, ef.completed.begin() + 1 + h);
        r.completed = ef.completed;
        r.fe_sign = ef.fe_sign;
        r.fe_consistent = ef.fe_consistent;
        if (options.hasse_witt) r.hasse_witt = hasse_witt_from_value(r, f0vals[k]);
      } else {
        r.coeffs.assign(ef.newton.begin() + 1, ef.newton.begin() + 1 + h);
      }
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  std::sort(recs.begin(), recs.end(),
            [](const EulerFactorRecord& a, const EulerFactorRecord& b2) { return a.phi_star < b2.phi_star; });
  return recs;
}

}  // namespace cyfrob
