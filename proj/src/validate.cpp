#include <algorithm>
#include <sstream>

#include "cyfrob/operator.hpp"
#include "cyfrob/recurrence.hpp"

namespace cyfrob {

namespace {

// Laurent series sum_{e=lo}^{hi} c[e-lo] x^e, exact for exponents <= hi
struct Laurent {
  int lo = 0;
  int hi = -1;
  std::vector<mpq_class> c;

  mpq_class at(int e) const { return (e < lo || e > hi) ? mpq_class(0) : c[e - lo]; }
};

Laurent lmul(const Laurent& a, const Laurent& b) {
  Laurent r;
  r.lo = a.lo + b.lo;
  r.hi = std::min(a.lo + b.hi, a.hi + b.lo);
  r.c.assign(std::max(0, r.hi - r.lo + 1), 0);
  for (int i = a.lo; i <= a.hi; ++i) {
    const mpq_class& x = a.c[i - a.lo];
    if (x == 0) continue;
    for (int j = b.lo; j <= b.hi && i + j <= r.hi; ++j) r.c[i + j - r.lo] += x * b.c[j - b.lo];
  }
  return r;
}

Laurent ladd(const Laurent& a, const Laurent& b) {
  Laurent r;
  r.lo = std::min(a.lo, b.lo);
  r.hi = std::min(a.hi, b.hi);
  r.c.assign(std::max(0, r.hi - r.lo + 1), 0);
  for (int e = r.lo; e <= r.hi; ++e) r.c[e - r.lo] = a.at(e) + b.at(e);
  return r;
}

Laurent lscale(const Laurent& a, const mpq_class& s) {
  Laurent r = a;
  for (auto& x : r.c) x *= s;
  return r;
}

Laurent lderiv(const Laurent& a) {
  Laurent r;
  r.lo = a.lo - 1;
  r.hi = a.hi - 1;
  r.c.assign(std::max(0, r.hi - r.lo + 1), 0);
  for (int e = a.lo; e <= a.hi; ++e) r.c[e - 1 - r.lo] = a.c[e - a.lo] * e;
  return r;
}

Laurent lderiv(const Laurent& a, int k) {
  Laurent r = a;
  for (int i = 0; i < k; ++i) r = lderiv(r);
  return r;
}

// power series of P/Q with Q(0) = 1 through x^E, shifted by x^shift
Laurent ratio_series(const IntPoly& P, const IntPoly& Q, int E, int shift) {
  std::vector<mpq_class> inv(E + 1, 0);
  inv[0] = 1;
  for (int n = 1; n <= E; ++n) {
    mpq_class s = 0;
    for (int k = 1; k <= n && k < static_cast<int>(Q.size()); ++k) s += mpq_class(Q[k]) * inv[n - k];
    inv[n] = -s;
  }
  Laurent r;
  r.lo = shift;
  r.hi = E + shift;
  r.c.assign(E + 1, 0);
  for (int n = 0; n <= E; ++n)
    for (int k = 0; k <= n && k < static_cast<int>(P.size()); ++k) r.c[n] += mpq_class(P[k]) * inv[n - k];
  return r;
}

std::vector<std::vector<mpz_class>> stirling2(int n) {
  std::vector<std::vector<mpz_class>> s(n + 1, std::vector<mpz_class>(n + 1, 0));
  s[0][0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= i; ++j) s[i][j] = s[i - 1][j - 1] + mpz_class(j) * s[i - 1][j];
  return s;
}

ValidationCheck check_mum(const CYOperator& op) {
  ValidationCheck c{"mum_normalization", true, "ok"};
  const int b = op.order_b;
  if (b < 1 || static_cast<int>(op.coeffs.size()) != b + 1) return {"mum_normalization", false, "coefficient rows do not match the order"};
  for (int i = 0; i < b; ++i)
    if (!op.coeffs[i].empty() && op.coeffs[i][0] != 0) {
      c.passed = false;
      c.detail = "S_" + std::to_string(i) + "(0) != 0";
      return c;
    }
  if (op.coeffs[b].empty() || op.coeffs[b][0] != 1) {
    c.passed = false;
    c.detail = "S_" + std::to_string(b) + "(0) != 1";
  }
  return c;
}

ValidationCheck check_integrality(const CYOperator& op, int Nint, int depth) {
  ValidationCheck c{"n_integrality", true, ""};
  const auto c0 = run_exact_recurrence(derive_recurrence(op), 0, depth)[0];
  mpz_class Nm = 1;
  for (int m = 0; m <= depth; ++m) {
    const mpq_class x = c0[m] * mpq_class(Nm);
    if (x.get_den() != 1) {
      c.passed = false;
      c.detail = "N^m c_{0,m} not integral at m = " + std::to_string(m);
      return c;
    }
    Nm *= Nint;
  }
  c.detail = "N^m c_{0,m} integral for m <= " + std::to_string(depth);
  return c;
}

// L~ alpha = alpha (-1)^b L~* for the monic form L~ = d^b + sum A_j d^j,
// alpha = phi^{-(b-1)} g with g'/g = -(2/b) S_{b-1} / (phi S_b)
ValidationCheck check_self_duality(const CYOperator& op, int depth) {
  ValidationCheck c{"self_duality", true, ""};
  const int b = op.order_b;
  const int E = depth + 3 * b + 2;
  const auto s2 = stirling2(b);
  const IntPoly Sb = op.S(b);

  std::vector<Laurent> A(b + 1);
  for (int j = 0; j <= b; ++j) {
    IntPoly P;
    for (int i = j; i <= b; ++i) P = poly_add(P, poly_scale(op.S(i), s2[i][j]));
    A[j] = ratio_series(P, Sb, E, j - b);
  }

  // h = S_{b-1} / (phi S_b); S_{b-1}(0) = 0
  IntPoly Sb1 = op.S(b - 1);
  if (!Sb1.empty()) Sb1.erase(Sb1.begin());
  const Laurent h = ratio_series(Sb1, Sb, E, 0);
  std::vector<mpq_class> g(E + 1, 0);
  g[0] = 1;
  mpq_class k2b(-2, b);
  k2b.canonicalize();
  for (int n = 0; n < E; ++n) {
    mpq_class s = 0;
    for (int k = 0; k <= n; ++k) s += h.c[k] * g[n - k];
    g[n + 1] = k2b * s / (n + 1);
  }
  Laurent alpha;
  alpha.lo = -(b - 1);
  alpha.hi = E - (b - 1);
  alpha.c = g;

  std::vector<Laurent> dalpha(b + 1);
  dalpha[0] = alpha;
  for (int k = 1; k <= b; ++k) dalpha[k] = lderiv(dalpha[k - 1]);

  for (int m = 0; m <= b; ++m) {
    Laurent lhs, rhs;
    bool first = true;
    for (int i = m; i <= b; ++i) {
      const mpq_class bin(binomial(i, m));
      Laurent tl = lscale(lmul(A[i], dalpha[i - m]), bin);
      Laurent tr = lscale(lderiv(A[i], i - m), ((b + i) % 2 ? -1 : 1) * bin);
      if (first) {
        lhs = tl;
        rhs = tr;
        first = false;
      } else {
        lhs = ladd(lhs, tl);
        rhs = ladd(rhs, tr);
      }
    }
    rhs = lmul(alpha, rhs);
    const int top = std::min({depth, lhs.hi, rhs.hi});
    for (int e = std::min(lhs.lo, rhs.lo); e <= top; ++e)
      if (lhs.at(e) != rhs.at(e)) {
        std::ostringstream os;
        os << "coefficient of y^(" << m << ") differs at phi^" << e;
        c.passed = false;
        c.detail = os.str();
        return c;
      }
  }
  c.detail = "L alpha = alpha L* through phi^" + std::to_string(depth);
  return c;
}

}  // namespace

ValidationReport validate_operator(const CYOperator& op, int n_integrality_N, int check_depth) {
  ValidationReport rep;
  if (check_depth < 1) throw UsageError("check depth must be at least 1");
  rep.checks.push_back(check_mum(op));
  if (!rep.checks.back().passed) {
    rep.checks.push_back({"n_integrality", false, "skipped: operator is not MUM-normalized"});
    rep.checks.push_back({"self_duality", false, "skipped: operator is not MUM-normalized"});
    return rep;
  }
  rep.checks.push_back(check_integrality(op, n_integrality_N, check_depth));
  rep.checks.push_back(check_self_duality(op, check_depth));
  return rep;
}

}  // namespace cyfrob
