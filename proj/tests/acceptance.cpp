// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include "cyfrob/analytics.hpp"
#include "cyfrob/memtrack.hpp"
#include "cyfrob/pipeline.hpp"
#include "cyfrob/primes.hpp"

using namespace cyfrob;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

const std::filesystem::path kOut = "acceptance_out";

std::vector<EulerFactorRecord> all_good;  // every good record computed anywhere below

void collect(const std::vector<EulerFactorRecord>& recs) {
  for (const auto& r : recs)
    if (r.flag == PointFlag::good) all_good.push_back(r);
}

PrimeResult run(const CYOperator& op, const RecurrenceTable& t, u64 p, AssemblyMode mode,
                std::vector<u64> subset = {}) {
  PrimeOptions o;
  o.mode = mode;
  o.eval.subset = std::move(subset);
  return compute_prime(op, t, p, o);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1: truncated recurrence against exact rational periods, every point, 7 <= p <= 97
Verdict sweep(const std::vector<CYOperator>& db) {
  int primes = 0, points = 0;
  std::ostringstream bad;
  for (const char* name : {"4.1.1", "k3.verrill"}) {
    const auto& op = find_operator(db, name);
    const auto t = derive_recurrence(op);
    for (u64 p : primes_up_to(97)) {
      if (p < 7) continue;
      const auto a = run(op, t, p, AssemblyMode::truncated_recurrence);
      const auto e = run(op, t, p, AssemblyMode::exact_rational);
      if (a.skipped != e.skipped || a.records != e.records || !a.accuracy_ok) {
        bad << ' ' << name << '@' << p;
        continue;
      }
      if (a.skipped) continue;
      ++primes;
      points += static_cast<int>(a.records.size());
      collect(a.records);
    }
  }
  const std::string b = bad.str();
  return {b.empty() && primes == 2 * 22,
          std::to_string(primes) + " prime/operator pairs, " + std::to_string(points) + " points" +
              (b.empty() ? "" : ", mismatch:" + b)};
}

// 2: the quintic at p = 2^20 - 3, phi = -1
Verdict anchor(const std::vector<CYOperator>& db) {
  const auto& q = find_operator(db, "4.1.1");
  const auto t = derive_recurrence(q);
  const u64 p = (1u << 20) - 3;
  const auto t0 = std::chrono::steady_clock::now();
  const auto res = run(q, t, p, AssemblyMode::truncated_recurrence, {p - 1});
  const double secs = seconds_since(t0);
  if (res.records.size() != 1 || res.records[0].flag != PointFlag::good) return {false, "no good record"};
  collect(res.records);
  const auto& c = res.records[0].coeffs;
  const bool ok = c[0] == -1576492860 && c[1] == mpz_class(2672053179370) * p;
  std::ostringstream os;
  os << "a1 = " << c[0] << ", a2 = " << c[1] << " = " << mpz_class(c[1] / p) << " p, " << secs << " s";
  return {ok, os.str()};
}

// 3: B, universal A and sharp A
Verdict bounds(const std::vector<CYOperator>& db) {
  bool ok = true;
  for (u64 p : primes_up_to(2000))
    if (p >= 7 && target_accuracy_B(4, p) != 4) ok = false;
  const auto& q = find_operator(db, "4.1.1");
  const auto t = derive_recurrence(q);
  const u64 p = 13;
  const int B = target_accuracy_B(4, p);
  const int ordW = build_W_inverse(q, t, p, B + 1, ceil_Cp(q.trunc_const_C, p) / static_cast<int>(p)).ord;
  const int ordA = min_ord_alpha(alpha_vector(q, p, B), p);
  const int A = accuracy_bound(4, q.trunc_const_C, B, ordW, ordA, BoundMode::universal);
  const int As = accuracy_bound(4, q.trunc_const_C, B, ordW, ordA, BoundMode::sharp, p);
  ok = ok && A == 8 && As == 4;
  return {ok, "B = 4 for 7 <= p < 2000, A = " + std::to_string(A) + " universal, A = " + std::to_string(As) +
                  " sharp at p = 13"};
}

// 4: numerator degree with nadd = 5, and the broken alpha_3
Verdict termination(const std::vector<CYOperator>& db) {
  std::vector<u64> ps;
  const auto all = primes_up_to(500);
  std::vector<u64> pool;
  for (u64 p : all)
    if (p >= 7) pool.push_back(p);
  for (int i = 0; i < 20; ++i) ps.push_back(pool[i * (pool.size() - 1) / 19]);
  int checked = 0;
  std::ostringstream bad;
  for (const char* name : {"4.1.1", "k3.verrill"}) {
    const auto& op = find_operator(db, name);
    const auto t = derive_recurrence(op);
    for (u64 p : ps) {
      AssemblyOptions o;
      o.nadd = 5;
      const auto u = assemble_U_numerator(op, t, p, o);
      ++checked;
      if (!(u.nadd_ok && u.trunc_deg <= ceil_Cp(op.trunc_const_C, p) && u.accuracy_ok)) bad << ' ' << name << '@' << p;
    }
  }
  const auto& q = find_operator(db, "4.1.1");
  AssemblyOptions broken;
  broken.nadd = 5;
  broken.alpha3_shift = 1;
  const auto v = assemble_U_numerator(q, derive_recurrence(q), 13, broken);
  const bool detected = !v.nadd_ok && v.trunc_deg > ceil_Cp(q.trunc_const_C, 13);
  const std::string b = bad.str();
  return {b.empty() && checked == 40 && detected,
          std::to_string(checked) + " numerators within ceil(Cp) (p = " + std::to_string(ps.front()) + ".." +
              std::to_string(ps.back()) + "), alpha3+1 at p = 13 gives degree " + std::to_string(v.trunc_deg) +
              (b.empty() ? "" : ", failed:" + b)};
}

// 6: K3 factors split over the first 100 good primes
Verdict k3_split(const std::vector<CYOperator>& db) {
  const auto& k = find_operator(db, "k3.verrill");
  const auto t = derive_recurrence(k);
  int good_primes = 0, factors = 0;
  std::ostringstream bad;
  for (int idx = 3; good_primes < 100; ++idx) {
    const u64 p = nth_prime(idx);
    const auto res = run(k, t, p, AssemblyMode::truncated_recurrence);
    if (res.skipped) continue;
    ++good_primes;
    collect(res.records);
    const mpz_class P = p;
    for (const auto& r : res.records) {
      if (r.flag != PointFlag::good) continue;
      ++factors;
      const auto& a = r.completed;
      const int s = a[3] > 0 ? 1 : -1;
      const mpz_class c = a[1] - s * P;
      // (1 + s p T)(1 + c T + p^2 T^2)
      const bool split = a[0] == 1 && a[1] == c + s * P && a[2] == s * P * c + P * P && a[3] == s * P * P * P;
      if (!split || abs(c) > 2 * P || !r.fe_consistent) bad << " [" << p << ", " << r.phi_star << ']';
    }
  }
  const std::string b = bad.str();
  return {b.empty(), std::to_string(factors) + " good factors over " + std::to_string(good_primes) + " primes" +
                         (b.empty() ? "" : ", not split:" + b)};
}

// 7: Sato-Tate classes of the K3 at four points over the first 1000 primes
Verdict sato_tate(const std::vector<CYOperator>& db) {
  const auto& k = find_operator(db, "k3.verrill");
  const auto t = derive_recurrence(k);
  struct Pt {
    long r, s;
    DistributionKind want;
  };
  const std::vector<Pt> pts{{1, 1, DistributionKind::FlyingBatman},
                            {1, 8, DistributionKind::ShiftedSemicircle},
                            {3, 1, DistributionKind::Batman},
                            {2, 7, DistributionKind::Wing}};
  std::vector<EulerFactorRecord> recs;
  const auto t0 = std::chrono::steady_clock::now();
  for (int idx = 3; idx <= 1060; ++idx) {
    const u64 p = nth_prime(idx);
    std::vector<u64> subset;
    for (const auto& pt : pts) {
      if (static_cast<u64>(pt.s) % p == 0) continue;
      mpz_class inv;
      mpz_invert(inv.get_mpz_t(), mpz_class(pt.s).get_mpz_t(), mpz_class(p).get_mpz_t());
      const u64 x = mpz_class(mpz_class(pt.r * inv) % p).get_ui();
      if (x != 0 && std::find(subset.begin(), subset.end(), x) == subset.end()) subset.push_back(x);
    }
    const auto res = run(k, t, p, AssemblyMode::truncated_recurrence, subset);
    collect(res.records);
    recs.insert(recs.end(), res.records.begin(), res.records.end());
  }
  bool ok = true;
  std::ostringstream os;
  for (const auto& pt : pts) {
    const auto tr = gather_traces(recs, pt.r, pt.s, 1000);
    const auto cls = classify_distribution(compute_moments(tr, 3));
    const bool hit = tr.size() == 1000 && cls.kind == pt.want;
    ok = ok && hit;
    os << pt.r << '/' << pt.s << " -> " << to_string(cls.kind) << " (d = " << cls.distance << ", n = " << tr.size()
       << "); ";
  }
  os << seconds_since(t0) << " s";
  return {ok, os.str()};
}

// 8: moments of the densities
Verdict moments() {
  double worst = 0;
  for (auto kind : all_distributions()) {
    const auto got = density_moments(kind);
    const auto want = target_moments(kind);
    for (int j = 0; j < 6; ++j) worst = std::max(worst, std::fabs(got[j] - want[j]));
  }
  std::ostringstream os;
  os << "max moment error " << worst;
  return {worst < 1e-6, os.str()};
}

// 9: AESZ 4.2.5 at phi = -1
Verdict hecke(const std::vector<CYOperator>& db) {
  const auto& h = find_operator(db, "4.2.5");
  const auto t = derive_recurrence(h);
  const mpz_class disc = poly_eval(h.conifold_locus, -1);
  std::vector<EulerFactorRecord> recs;
  std::vector<u64> skipped;
  bool integral = true;
  for (int idx = 3; recs.size() < 100; ++idx) {
    const u64 p = nth_prime(idx);
    const auto res = run(h, t, p, AssemblyMode::truncated_recurrence, {p - 1});
    if (res.skipped || res.records.empty() || res.records[0].flag != PointFlag::good) {
      skipped.push_back(p);
      continue;
    }
    collect(res.records);
    try {
      hecke_eigenvalues(res.records[0]);
    } catch (const IntegrityError&) {
      integral = false;
    }
    recs.push_back(res.records[0]);
  }
  std::filesystem::create_directories(kOut);
  const auto path = (kOut / "hecke_4.2.5.txt").string();
  if (integral) export_records(recs, ExportFormat::hecke, path);
  std::ostringstream os;
  os << "Delta(-1) = " << disc << ", " << recs.size() << " primes " << recs.front().p << ".." << recs.back().p
     << (integral ? " integral" : " NOT integral") << ", skipped";
  for (u64 p : skipped) os << ' ' << p;
  os << ", lambdas in " << path;
  return {disc == 79 && integral, os.str()};
}

// 10: peak heap of the truncated recurrence against exact rationals
Verdict memory(const std::vector<CYOperator>& db) {
  const auto& q = find_operator(db, "4.1.1");
  std::vector<u64> ps;
  for (int idx = 5; idx <= 200; ++idx) ps.push_back(nth_prime(idx));
  const BenchProbe probe{[] { memtrack::reset_peak(); }, [] { return memtrack::peak_bytes(); },
                         [] { return memtrack::current_bytes(); }};
  EvaluationOptions eval;
  eval.subset = {1};
  const auto rep = run_bench(q, ps, {AssemblyMode::truncated_recurrence, AssemblyMode::exact_rational}, probe, eval);
  std::filesystem::create_directories(kOut);
  rep.write_csv((kOut / "memory_4.1.1.csv").string());
  std::map<u64, std::size_t> tr, ex;
  for (const auto& r : rep.rows) {
    if (!r.ok) return {false, "bench failed at p = " + std::to_string(r.p) + ": " + r.status};
    (r.mode == AssemblyMode::truncated_recurrence ? tr : ex)[r.p] = r.peak_bytes;
  }
  std::vector<u64> above;
  for (u64 p : ps)
    if (p >= 31 && tr[p] >= ex[p]) above.push_back(p);
  // least squares slope of log peak against log p
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (u64 p : ps) {
    const double x = std::log(static_cast<double>(p)), y = std::log(static_cast<double>(tr[p]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(ps.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  std::ostringstream os;
  os << ps.size() << " primes " << ps.front() << ".." << ps.back() << ", log-log slope " << slope << ", peak "
     << tr[ps.back()] << " vs " << ex[ps.back()] << " bytes at p = " << ps.back() << ", truncated >= exact at "
     << above.size() << " primes";
  return {rep.cross_mode_equal && above.empty() && slope <= 1.1, os.str()};
}

// 5: invariants over everything collected above
Verdict invariants() {
  long weil = 0, fe = 0, hw_checked = 0, hw_bad = 0, a0 = 0;
  for (const auto& r : all_good) {
    const int b = static_cast<int>(r.completed.size()) - 1;
    if (r.completed.empty() || r.completed[0] != 1) ++a0;
    if (!weil_bounds_hold(r.completed, b, r.p)) ++weil;
    if (b == 4 && abs(r.completed[2]) > 6 * pow_ui(r.p, 3)) ++weil;
    if (!r.fe_consistent) ++fe;
    if (r.hasse_witt) {
      ++hw_checked;
      if (!*r.hasse_witt) ++hw_bad;
    }
  }
  std::ostringstream os;
  os << all_good.size() << " good factors; a0 failures " << a0 << ", Weil " << weil << ", functional equation " << fe
     << ", Hasse-Witt " << hw_bad << " of " << hw_checked << " ordinary points";
  return {!all_good.empty() && a0 == 0 && weil == 0 && fe == 0 && hw_bad == 0 && hw_checked > 0, os.str()};
}

}  // namespace

int main() {
  memtrack::install();
  const auto db = load_operator_db(CYFROB_DATA_DIR "/operators.db");
  std::vector<Verdict> v(11);
  const char* names[11] = {"",
                           "truncated vs exact, 7 <= p <= 97",
                           "anchor at p = 2^20 - 3",
                           "accuracy bounds",
                           "termination with nadd = 5",
                           "structural invariants",
                           "K3 splitting",
                           "Sato-Tate classes",
                           "density moments",
                           "4.2.5 Hecke eigenvalues",
                           "memory trend"};
  auto step = [&](int i, auto&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      v[i] = f();
    } catch (const std::exception& e) {
      v[i] = {false, std::string("exception: ") + e.what()};
    }
    std::cerr << "criterion " << i << " done in " << seconds_since(t0) << " s\n";
  };
  step(1, [&] { return sweep(db); });
  step(3, [&] { return bounds(db); });
  step(4, [&] { return termination(db); });
  step(6, [&] { return k3_split(db); });
  step(7, [&] { return sato_tate(db); });
  step(8, [&] { return moments(); });
  step(9, [&] { return hecke(db); });
  step(10, [&] { return memory(db); });
  step(2, [&] { return anchor(db); });
  step(5, [&] { return invariants(); });

  int failed = 0;
  for (int i = 1; i <= 10; ++i) {
    std::cout << (v[i].pass ? "PASS" : "FAIL") << "  " << i << ". " << names[i] << ": " << v[i].detail << '\n';
    if (!v[i].pass) ++failed;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << '\n';
  return failed ? 1 : 0;
}
