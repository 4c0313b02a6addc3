#include <doctest.h>

#include <algorithm>
#include <random>

#include "cyfrob/evaluation.hpp"

using namespace cyfrob;

namespace {

const std::vector<CYOperator>& db() {
  static const auto d = load_operator_db(CYFROB_DATA_DIR "/operators.db");
  return d;
}

using Mat = std::vector<std::vector<mpz_class>>;

mpz_class det(const Mat& a) {
  const std::size_t n = a.size();
  if (n == 1) return a[0][0];
  mpz_class s = 0;
  for (std::size_t j = 0; j < n; ++j) {
    Mat minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<mpz_class> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(a[i][k]);
      minor.push_back(row);
    }
    s += (j % 2 ? -1 : 1) * a[0][j] * det(minor);
  }
  return s;
}

// coefficient of T^j in det(I - T U) by principal minors
mpz_class charpoly_coeff(const Mat& u, int j) {
  const int n = static_cast<int>(u.size());
  mpz_class s = 0;
  for (int mask = 0; mask < (1 << n); ++mask) {
    if (__builtin_popcount(mask) != j) continue;
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1) idx.push_back(i);
    Mat m(j, std::vector<mpz_class>(j));
    for (int a = 0; a < j; ++a)
      for (int b = 0; b < j; ++b) m[a][b] = u[idx[a]][idx[b]];
    s += j == 0 ? mpz_class(1) : det(m);
  }
  return j % 2 ? mpz_class(-s) : s;
}

bool congruent(const mpz_class& a, const mpz_class& b, const mpz_class& m) {
  return mpz_divisible_p(mpz_class(a - b).get_mpz_t(), m.get_mpz_t());
}

}  // namespace

TEST_CASE("Teichmuller point sets") {
  auto pts = teichmuller_points(5, 2);
  std::vector<mpz_class> t = pts.teich;
  std::sort(t.begin(), t.end());
  CHECK(t == std::vector<mpz_class>{1, 7, 18, 24});
  pts = teichmuller_points(5, 1);
  t = pts.teich;
  std::sort(t.begin(), t.end());
  CHECK(t == std::vector<mpz_class>{1, 2, 3, 4});
  for (u64 p : {5, 7, 11, 101}) {
    const auto s = teichmuller_points(p, 4);
    const mpz_class m = pow_ui(p, 4);
    mpz_class prod = 1;
    for (std::size_t k = 0; k < s.teich.size(); ++k) {
      prod = prod * s.teich[k] % m;
      CHECK(s.teich[k] % p == s.phi[k]);
    }
    CHECK(prod == m - 1);
    CHECK(primitive_root(p) == s.g);
  }
}

TEST_CASE("evaluating the polynomial phi returns the points") {
  UNumerator num;
  num.p = 11;
  num.b = 1;
  num.B = 3;
  num.trunc_deg = 1;
  num.denominator = {1};
  ResidueArray e(2, pow_ui(11, 3));
  e.set(1, 1);
  num.entries = {{e}};
  const auto pts = teichmuller_points(11, 3);
  for (auto strat : {EvalStrategy::horner, EvalStrategy::horner_omp, EvalStrategy::dft}) {
    const auto v = evaluate_numerators_all(num, pts, strat);
    for (std::size_t k = 0; k < pts.teich.size(); ++k) CHECK(v.values[0][0].get(k) == pts.teich[k]);
  }
  const auto at = evaluate_numerators_at(num, {3, 5});
  CHECK(at.values[0][0].get(0) == teichmuller_lift(3, 11, 3).value);
  CHECK(at.values[0][0].get(1) == teichmuller_lift(5, 11, 3).value);
}

TEST_CASE("Newton identities") {
  Mat id(4, std::vector<mpz_class>(4, 0));
  for (int i = 0; i < 4; ++i) id[i][i] = 1;
  const auto e = euler_factor_from_U(id, 4, 7, 4, false);
  CHECK(e.newton[0] == 1);
  CHECK(e.newton[1] == -4);
  CHECK(e.newton[2] == 6);
  CHECK(e.newton[3] == -4);
  CHECK(e.newton[4] == 1);

  std::mt19937_64 rng(17);
  const mpz_class m = pow_ui(7, 4);
  for (int it = 0; it < 20; ++it) {
    Mat u(4, std::vector<mpz_class>(4));
    for (auto& row : u)
      for (auto& x : row) x = static_cast<long>(rng() % 2401);
    const auto r = euler_factor_from_U(u, 4, 7, 4, false);
    for (int j = 0; j <= 4; ++j) CHECK(congruent(r.newton[j], charpoly_coeff(u, j), m));
  }
}

TEST_CASE("functional equation completion for b = 4") {
  // diag(1, p, p^2, p^3) has det(I - TU) = (1-T)(1-pT)(1-p^2T)(1-p^3T)
  const u64 p = 7;
  Mat u(4, std::vector<mpz_class>(4, 0));
  for (int i = 0; i < 4; ++i) u[i][i] = pow_ui(p, i);
  const auto e = euler_factor_from_U(u, 4, p, 4, false);
  CHECK(e.completed[3] == e.completed[1] * pow_ui(p, 3));
  CHECK(e.completed[4] == pow_ui(p, 6));
  CHECK(e.completed[0] == 1);
}

TEST_CASE("quintic p = 7 records") {
  const auto& q = find_operator(db(), "4.1.1");
  const auto t = derive_recurrence(q);
  const auto num = assemble_U_numerator(q, t, 7);
  const auto recs = compute_records(q, t, num);
  REQUIRE(recs.size() == 6);
  int conifold = 0;
  for (const auto& r : recs) {
    if (r.flag == PointFlag::conifold) {
      ++conifold;
      CHECK(r.phi_star == 5);
      continue;
    }
    CHECK(r.completed[0] == 1);
    CHECK(weil_bounds_hold(r.completed, 4, 7));
    CHECK(r.fe_consistent);
    CHECK(r.completed[3] == r.completed[1] * 343);
    CHECK(r.completed[4] == pow_ui(7, 6));
    if (r.hasse_witt) CHECK(*r.hasse_witt);
  }
  CHECK(conifold == 1);
  // f_0^{[6]}(2) = 1 + 120*2 = 3 mod 7, so a1 = -3 mod 7
  const auto& r2 = recs[1];
  CHECK(r2.phi_star == 2);
  CHECK(mpz_class((r2.coeffs[0] % 7 + 7) % 7) == 4);
  CHECK(r2.hasse_witt.value_or(false));
  const auto f = truncated_period_mod_p(t, 7);
  CHECK(poly_eval_mod(f, 2, 7) == 3);

  EvaluationOptions sub;
  sub.subset = {2, 6};
  const auto two = compute_records(q, t, num, sub);
  REQUIRE(two.size() == 2);
  CHECK(two[0] == recs[1]);
  CHECK(two[1] == recs[5]);
}

TEST_CASE("K3 p = 7 Hasse-Witt at every ordinary point") {
  const auto& k3 = find_operator(db(), "k3.verrill");
  const auto t = derive_recurrence(k3);
  const auto recs = compute_records(k3, t, assemble_U_numerator(k3, t, 7));
  REQUIRE(recs.size() == 6);
  for (const auto& r : recs) {
    if (r.flag != PointFlag::good) continue;
    CHECK(r.fe_consistent);
    CHECK(std::abs(r.fe_sign) == 1);
    CHECK(r.completed[2] == r.fe_sign * 7 * r.completed[1]);
    CHECK(r.completed[3] == r.fe_sign * 343);
    if (r.hasse_witt) CHECK(*r.hasse_witt);
  }
}

TEST_CASE("evaluation strategies give the same records") {
  const auto& h = find_operator(db(), "4.2.5");
  const auto t = derive_recurrence(h);
  const auto num = assemble_U_numerator(h, t, 101);
  EvaluationOptions a, b, c;
  a.strategy = EvalStrategy::horner;
  b.strategy = EvalStrategy::dft;
  c.strategy = EvalStrategy::horner_omp;
  const auto ra = compute_records(h, t, num, a);
  CHECK(compute_records(h, t, num, b) == ra);
  CHECK(compute_records(h, t, num, c) == ra);
}

TEST_CASE("Weil bounds") {
  CHECK(weil_bounds_hold({1, 0, 0, 0, 1}, 4, 7));
  CHECK_FALSE(weil_bounds_hold({1, 200, 0, 0, 1}, 4, 7));
  CHECK_FALSE(weil_bounds_hold({1, 0, 6 * 343 + 1, 0, 1}, 4, 7));
}
