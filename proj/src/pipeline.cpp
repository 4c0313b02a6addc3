#include "cyfrob/pipeline.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <new>
#include <sstream>

#include "cyfrob/primes.hpp"

namespace cyfrob {

std::string to_string(AssemblyMode m) {
  switch (m) {
    case AssemblyMode::truncated_recurrence:
      return "truncated_recurrence";
    case AssemblyMode::truncated_rational:
      return "truncated_rational";
    case AssemblyMode::exact_rational:
      return "exact_rational";
  }
  return "?";
}

AssemblyMode assembly_mode_from_string(const std::string& s) {
  for (auto m : {AssemblyMode::truncated_recurrence, AssemblyMode::truncated_rational, AssemblyMode::exact_rational})
    if (to_string(m) == s) return m;
  throw UsageError("unknown mode: " + s);
}

void check_prime_supported(const CYOperator& op, u64 p) {
  if (p < 5) throw UsageError("p = " + std::to_string(p) + " refused: primes below 5 are not supported");
  if (mpz_class(p) <= ceil_q(op.trunc_const_C))
    throw UsageError("p = " + std::to_string(p) + " refused: p must exceed ceil(C) = " +
                     ceil_q(op.trunc_const_C).get_str());
}

namespace {

bool divides(u64 p, const mpz_class& x) { return x != 0 && mpz_divisible_ui_p(x.get_mpz_t(), p); }

void check_locus(const IntPoly& f, const std::string& what, u64 p) {
  if (f.empty()) return;
  if (divides(p, f.back())) throw SingularPrimeError("p divides the leading coefficient of the " + what + " locus");
}

}  // namespace

void check_prime_regular(const CYOperator& op, u64 p) {
  check_locus(op.conifold_locus, "conifold", p);
  check_locus(op.apparent_sing_locus, "apparent", p);
  for (const auto& f : op.other_sing_loci) check_locus(f, "singular", p);
  if (op.rational_K && divides(p, op.rational_K->get_den())) throw SingularPrimeError("p divides the denominator of K");
  if (divides(p, op.alpha1.get_den())) throw SingularPrimeError("p divides the denominator of alpha_1");
  if (divides(p, op.trunc_const_C.get_den())) throw SingularPrimeError("p divides the denominator of C");
}

PrimeResult compute_prime(const CYOperator& op, const RecurrenceTable& table, u64 p, const PrimeOptions& options) {
  check_prime_supported(op, p);
  PrimeResult res;
  res.p = p;
  try {
    check_prime_regular(op, p);
  } catch (const SingularPrimeError& e) {
    res.skipped = true;
    res.diagnostic = "p = " + std::to_string(p) + " skipped: " + e.what();
    return res;
  }
  // the degree truncation is only sharp enough for B <= b; b = 4 at p = 5 needs B = 5
  if (target_accuracy_B(op.order_b, p) > op.order_b) {
    res.skipped = true;
    res.diagnostic = "p = " + std::to_string(p) + " skipped: accuracy p^" +
                     std::to_string(target_accuracy_B(op.order_b, p)) + " is out of reach of the degree truncation";
    return res;
  }
  AssemblyOptions ao;
  ao.mode = options.mode;
  ao.acc = options.acc;
  ao.nadd = options.nadd;
  ao.bound = options.bound;
  const auto num = assemble_U_numerator(op, table, p, ao);
  res.log = {p, num.trunc_deg, num.M, num.warn()};
  res.accuracy_ok = num.accuracy_ok;
  if (!num.accuracy_ok)
    res.diagnostic = "p = " + std::to_string(p) + ": accuracy ledger " + std::to_string(num.min_ledger) +
                     " below B = " + std::to_string(num.B) + " (increase --acc)";
  res.records = compute_records(op, table, num, options.eval);
  return res;
}

void apply_scaling(CYOperator& op, const std::string& scaling) {
  if (scaling.empty()) return;
  mpq_class c;
  if (c.set_str(scaling, 10) != 0) throw UsageError("scaling must be r/s: " + scaling);
  c.canonicalize();
  if (c <= 0) throw UsageError("scaling must be positive");
  op.trunc_const_C = c;
}

ComputeSummary run_compute(const RunManifest& manifest, const std::vector<CYOperator>& db) {
  manifest.validate();
  CYOperator op = find_operator(db, manifest.operator_name);
  apply_scaling(op, manifest.scaling);
  const auto primes = primes_in_index_range(manifest.n_min, manifest.n_max);
  for (u64 p : primes) check_prime_supported(op, p);
  const auto table = derive_recurrence(op);

  ComputeSummary sum;
  sum.outputs = outputs_path(manifest.outdir, manifest.label);
  sum.log = log_path(manifest.outdir, manifest.label);
  OrderedWriter out(sum.outputs, primes);
  OrderedWriter log(sum.log, primes);
  {
    std::ofstream mf(sum.log.substr(0, sum.log.size() - 4) + ".manifest.json");
    mf << manifest.to_json() << '\n';
  }

  PrimeOptions po;
  po.acc = manifest.acc;
  po.nadd = manifest.nadd;
  std::vector<std::string> diag(primes.size());
  std::vector<int> state(primes.size(), 0);  // 0 computed, 1 skipped, 2 failed

#pragma omp parallel for schedule(dynamic, 1) num_threads(manifest.workers)
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const u64 p = primes[i];
    try {
      const auto res = compute_prime(op, table, p, po);
      diag[i] = res.diagnostic;
      if (res.skipped) {
        state[i] = 1;
        out.skip(p);
        log.skip(p);
        continue;
      }
      if (!res.accuracy_ok) {
        state[i] = 2;
        out.skip(p);
        log.submit(p, {format_log(res.log)});
        continue;
      }
      std::vector<std::string> lines;
      for (const auto& r : res.records) lines.push_back(format_record(r));
      out.submit(p, std::move(lines));
      log.submit(p, {format_log(res.log)});
    } catch (const std::exception& e) {
      state[i] = 2;
      diag[i] = "p = " + std::to_string(p) + " failed: " + e.what();
      out.skip(p);
      log.skip(p);
    }
  }
  out.close();
  log.close();
  for (std::size_t i = 0; i < primes.size(); ++i) {
    (state[i] == 0 ? sum.computed : state[i] == 1 ? sum.skipped : sum.failed)++;
    if (!diag[i].empty()) sum.diagnostics.push_back(diag[i]);
  }
  return sum;
}

namespace {

std::size_t read_vm_hwm() {
  std::ifstream in("/proc/self/status");
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("VmHWM:", 0) == 0) {
      std::istringstream is(line.substr(6));
      std::size_t kb = 0;
      is >> kb;
      return kb * 1024;
    }
  return 0;
}

std::size_t read_vm_rss() {
  std::ifstream in("/proc/self/status");
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("VmRSS:", 0) == 0) {
      std::istringstream is(line.substr(6));
      std::size_t kb = 0;
      is >> kb;
      return kb * 1024;
    }
  return 0;
}

}  // namespace

BenchProbe rss_probe() {
  return {[] { std::ofstream("/proc/self/clear_refs") << "5"; }, read_vm_hwm, read_vm_rss};
}

void BenchReport::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "mode,p,wall_seconds,peak_bytes,status\n";
  for (const auto& r : rows)
    out << to_string(r.mode) << ',' << r.p << ',' << r.wall_seconds << ',' << r.peak_bytes << ','
        << (r.ok ? "ok" : r.status) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

BenchReport run_bench(const CYOperator& op, const std::vector<u64>& primes, const std::vector<AssemblyMode>& modes,
                      const BenchProbe& probe, const EvaluationOptions& eval) {
  const auto table = derive_recurrence(op);
  BenchReport rep;
  for (u64 p : primes) {
    check_prime_supported(op, p);
    std::vector<std::vector<EulerFactorRecord>> results;
    std::vector<AssemblyMode> done;
    for (auto mode : modes) {
      BenchRow row;
      row.mode = mode;
      row.p = p;
      PrimeOptions po;
      po.mode = mode;
      po.eval = eval;
      const std::size_t base = probe.current ? probe.current() : 0;
      if (probe.reset) probe.reset();
      const auto t0 = std::chrono::steady_clock::now();
      try {
        auto res = compute_prime(op, table, p, po);
        row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (res.skipped) {
          row.status = "skipped";
        } else if (!res.accuracy_ok) {
          row.status = "accuracy";
        } else {
          row.ok = true;
          results.push_back(std::move(res.records));
          done.push_back(mode);
        }
      } catch (const std::bad_alloc&) {
        row.status = "out_of_memory";
      } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
      }
      if (probe.peak) {
        const std::size_t pk = probe.peak();
        row.peak_bytes = pk > base ? pk - base : 0;
      }
      rep.rows.push_back(row);
    }
    for (std::size_t j = 1; j < results.size(); ++j)
      if (results[j] != results[0]) {
        rep.cross_mode_equal = false;
        rep.mismatches.push_back("p = " + std::to_string(p) + ": " + to_string(done[j]) + " differs from " +
                                 to_string(done[0]));
      }
  }
  return rep;
}

}  // namespace cyfrob
