#include <doctest.h>

#include "cyfrob/assembly.hpp"

using namespace cyfrob;

namespace {

const std::vector<CYOperator>& db() {
  static const auto d = load_operator_db(CYFROB_DATA_DIR "/operators.db");
  return d;
}

}  // namespace

TEST_CASE("sigma") {
  const auto s3 = sigma_matrix(3);
  CHECK(s3 == std::vector<std::vector<int>>{{0, 0, 1}, {0, -1, 0}, {1, 0, 0}});
  const auto s4 = sigma_matrix(4);
  CHECK(s4[0][3] == -1);
  CHECK(s4[1][2] == 1);
  CHECK(s4[2][1] == -1);
  CHECK(s4[3][0] == 1);
}

TEST_CASE("E matrix from exact periods") {
  const auto& op = find_operator(db(), "4.1.1");
  const auto c = run_exact_recurrence(derive_recurrence(op), 3, 5);
  std::vector<RationalSeries> f(c.begin(), c.end());
  const auto E = build_E_rational(f);
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) CHECK(E[i][k][0] == (i == k ? 1 : 0));
  CHECK(E[0][1][1] == 120);
  for (int k = 0; k < 4; ++k)
    for (int n = 0; n <= 5; ++n) CHECK(E[0][k][n] == rs_theta(f[0], k)[n]);
}

TEST_CASE("W inverse at phi = 0 is sigma inverse") {
  for (const char* name : {"4.1.1", "k3.verrill"}) {
    const auto& op = find_operator(db(), name);
    const int b = op.order_b;
    const auto w = build_W_inverse(op, derive_recurrence(op), 7, 4, 1);
    CHECK(w.ord == 0);
    const auto s = sigma_matrix(b);
    const mpz_class m = pow_ui(7, 4);
    for (int i = 0; i < b; ++i)
      for (int k = 0; k < b; ++k) {
        mpz_class acc = 0;
        for (int j = 0; j < b; ++j) acc += s[i][j] * w.inverse[j][k].coefficient(0).representative().get_num();
        acc %= m;
        if (acc < 0) acc += m;
        CHECK(acc == (i == k ? 1 : 0));
      }
  }
}

TEST_CASE("U_p(0) symplectic constraint") {
  const auto& q = find_operator(db(), "4.1.1");
  for (long shift : {0L, 1L, -17L, 1000L}) {
    const auto alpha = alpha_vector(q, 13, 6, shift);
    CHECK(u0_symmetry_holds(build_U0(4, 13, 6, alpha), 13, 6));
  }
  for (long t : {0L, 3L, -5L}) {
    const mpz_class m = pow_ui(11, 5);
    const mpz_class half = reduce_rational(mpq_class(t * t, 2), m);
    CHECK(u0_symmetry_holds(build_U0(3, 11, 5, {1, t, half}), 11, 5));
    CHECK_FALSE(u0_symmetry_holds(build_U0(3, 11, 5, {1, t, half + 1}), 11, 5));
  }
  const auto u = build_U0(4, 7, 1, alpha_vector(q, 7, 1));
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m) CHECK(u[l][m] % 7 == (l == 0 && m == 0 ? 1 : 0));
}

TEST_CASE("termination of the numerator series") {
  const auto& q = find_operator(db(), "4.1.1");
  const auto tq = derive_recurrence(q);
  AssemblyOptions o;
  o.nadd = 3;
  o.acc = 8;
  const auto u = assemble_U_numerator(q, tq, 7, o);
  CHECK(u.nadd_ok);
  CHECK(u.trunc_deg <= 6);
  CHECK(u.accuracy_ok);
  CHECK_FALSE(u.warn());

  AssemblyOptions bad;
  bad.nadd = 5;
  bad.acc = 8;
  bad.alpha3_shift = 1;
  const auto v = assemble_U_numerator(q, tq, 13, bad);
  CHECK_FALSE(v.nadd_ok);
  CHECK(v.warn());

  const auto& k3 = find_operator(db(), "k3.verrill");
  AssemblyOptions ok3;
  ok3.nadd = 5;
  ok3.acc = 6;
  CHECK(assemble_U_numerator(k3, derive_recurrence(k3), 7, ok3).nadd_ok);
}

TEST_CASE("refused primes") {
  const auto& q = find_operator(db(), "4.1.1");
  const auto tq = derive_recurrence(q);
  CHECK_THROWS_AS(assemble_U_numerator(q, tq, 3), UsageError);
  const auto& h = find_operator(db(), "4.2.5");
  CHECK_THROWS_AS(assemble_U_numerator(h, derive_recurrence(h), 2), UsageError);
}

TEST_CASE("assembly modes agree entry by entry") {
  for (const auto& op : db()) {
    const auto t = derive_recurrence(op);
    for (u64 p : {7, 11, 13, 29, 41}) {
      AssemblyOptions a, b;
      b.mode = AssemblyMode::exact_rational;
      const auto ua = assemble_U_numerator(op, t, p, a);
      const auto ub = assemble_U_numerator(op, t, p, b);
      AssemblyOptions c;
      c.mode = AssemblyMode::truncated_rational;
      const auto uc = assemble_U_numerator(op, t, p, c);
      CHECK(ua.accuracy_ok);
      CHECK(ua.trunc_deg == ub.trunc_deg);
      CHECK(uc.trunc_deg == ub.trunc_deg);
      for (int i = 0; i < op.order_b; ++i)
        for (int j = 0; j < op.order_b; ++j) {
          CHECK(ua.entry(i, j) == ub.entry(i, j));
          CHECK(uc.entry(i, j) == ub.entry(i, j));
        }
    }
  }
}
