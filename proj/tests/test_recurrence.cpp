#include <doctest.h>

#include "cyfrob/primes.hpp"
#include "cyfrob/recurrence.hpp"

using namespace cyfrob;

namespace {

const std::vector<CYOperator>& db() {
  static const auto d = load_operator_db(CYFROB_DATA_DIR "/operators.db");
  return d;
}

int ord_diff(const mpq_class& x, const mpq_class& y, u64 p) {
  const mpq_class d = x - y;
  return d == 0 ? 1 << 20 : valuation(d, p);
}

}  // namespace

TEST_CASE("target accuracy B") {
  for (u64 p : {7, 11, 101, 1048573}) CHECK(target_accuracy_B(4, p) == 4);
  CHECK(target_accuracy_B(4, 5) == 5);
  for (u64 p : {5, 7, 13, 7919}) CHECK(target_accuracy_B(3, p) == 3);
}

TEST_CASE("accuracy bounds") {
  CHECK(accuracy_bound(4, mpq_class(4, 5), 4, 0, 0, BoundMode::universal) == 8);
  CHECK(accuracy_bound(4, mpq_class(4, 5), 4, 0, 0, BoundMode::sharp, 13) == 4);
  CHECK(accuracy_bound(3, 1, 3, 0, 0, BoundMode::universal) == 6);
  // valuations of W^{-1} and alpha raise the bound
  CHECK(accuracy_bound(4, mpq_class(4, 5), 4, -1, -2, BoundMode::universal) == 11);
  CHECK_THROWS_AS(accuracy_bound(4, mpq_class(4, 5), 4, 0, 0, BoundMode::sharp, 0), UsageError);
  CHECK(factorial_valuation(7, 6) == 0);
  CHECK(factorial_valuation(7, 49) == 8);
  CHECK(ceil_Cp(mpq_class(4, 5), 7) == 6);
  CHECK(ceil_Cp(mpq_class(3, 2), 11) == 17);
  // at M = ceil(Cp) < 2p the order-based bound matches the sharp one
  for (u64 p : {7, 11, 13, 97})
    CHECK(accuracy_for_order(4, p, ceil_Cp(mpq_class(4, 5), p), 4, 0, 0) ==
          accuracy_bound(4, mpq_class(4, 5), 4, 0, 0, BoundMode::sharp, p));
}

TEST_CASE("quintic p = 7 without division loss") {
  const auto t = derive_recurrence(find_operator(db(), "4.1.1"));
  const auto run = run_truncated_recurrence(t, 7, 8, 6);
  const mpz_class m = pow_ui(7, 8);
  mpz_class f5 = 1, f1 = 1;
  for (int n = 0; n <= 6; ++n) {
    if (n > 0) {
      for (long j = 5 * n - 4; j <= 5 * n; ++j) f5 *= j;
      f1 *= n;
    }
    const mpz_class exact = f5 / (f1 * f1 * f1 * f1 * f1);
    CHECK(run.coefficient(0, n).known_accuracy() == 8);
    CHECK(agrees_with(run.coefficient(0, n), mpq_class(exact)));
  }
  for (int i = 0; i < 4; ++i) CHECK(agrees_with(run.coefficient(i, 0), i == 0 ? 1 : 0));
}

TEST_CASE("ledger at multiples of p") {
  const auto t = derive_recurrence(find_operator(db(), "4.1.1"));
  const auto run = run_truncated_recurrence(t, 7, 8, 14);
  const auto exact = run_exact_recurrence(t, 3, 14);
  for (int i = 0; i < 4; ++i)
    for (int n : {6, 7, 13, 14}) {
      const int ledger = run.acc[i][n];
      CHECK(ledger >= predicted_accuracy(8, 4, i, 7, n));
      CHECK(ord_diff(run.coefficient(i, n).representative(), exact[i][n], 7) >= ledger);
    }
  CHECK(predicted_accuracy(8, 4, 0, 7, 7) == 4);
  CHECK(predicted_accuracy(8, 4, 3, 7, 14) == -6);
}

TEST_CASE("truncated recurrence within the ledger for every test operator") {
  for (const auto& op : db()) {
    const int b = op.order_b;
    const auto t = derive_recurrence(op);
    for (u64 p : primes_in_index_range(4, 25)) {
      if (mpz_class(p) <= ceil_q(op.trunc_const_C)) continue;
      const int B = target_accuracy_B(b, p);
      const int A = accuracy_bound(b, op.trunc_const_C, B, 0, 0, BoundMode::universal);
      const int M = ceil_Cp(op.trunc_const_C, p);
      const auto run = run_truncated_recurrence(t, p, A, M);
      const auto exact = run_exact_recurrence(t, b - 1, M);
      for (int i = 0; i < b; ++i)
        for (int n = 0; n <= M; ++n) {
          const int ledger = run.acc[i][n];
          CHECK(ledger >= predicted_accuracy(A, b, i, p, n));
          CHECK(ord_diff(run.coefficient(i, n).representative(), exact[i][n], p) >= ledger);
        }
    }
  }
}

TEST_CASE("truncating exact periods gives full accuracy") {
  const auto t = derive_recurrence(find_operator(db(), "k3.verrill"));
  const auto exact = run_exact_recurrence(t, 2, 20);
  const auto tr = truncate_exact(exact, 3, 11, 6, 20);
  for (int i = 0; i < 3; ++i)
    for (int n = 0; n <= 20; ++n) {
      CHECK(tr.acc[i][n] == 6);
      CHECK(agrees_with(tr.coefficient(i, n), exact[i][n]));
    }
  CHECK(run_exact_recurrence(t, 1, 3)[1][0] == 0);
  CHECK_THROWS_AS(run_truncated_recurrence(t, 11, 0, 5), UsageError);
}

TEST_CASE("row-0 integrality option") {
  const auto t = derive_recurrence(find_operator(db(), "4.1.1"));
  RecurrenceOptions o;
  o.row0_integrality = true;
  const auto run = run_truncated_recurrence(t, 7, 8, 30, -1, o);
  CHECK(run.row0_integral);
}
