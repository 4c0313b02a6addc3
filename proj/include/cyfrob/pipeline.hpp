#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "cyfrob/evaluation.hpp"
#include "cyfrob/io.hpp"

namespace cyfrob {

std::string to_string(AssemblyMode m);
AssemblyMode assembly_mode_from_string(const std::string& s);

struct PrimeOptions {
  AssemblyMode mode = AssemblyMode::truncated_recurrence;
  int acc = 0;
  int nadd = 0;
  BoundMode bound = BoundMode::universal;
  EvaluationOptions eval;
};

struct PrimeResult {
  u64 p = 0;
  bool skipped = false;
  std::string diagnostic;
  std::vector<EulerFactorRecord> records;
  LogEntry log;
  bool accuracy_ok = true;
};

// throws UsageError for p < 5 or p <= ceil(C)
void check_prime_supported(const CYOperator& op, u64 p);

// throws SingularPrimeError when the reduction of the operator data mod p degenerates
void check_prime_regular(const CYOperator& op, u64 p);

// one prime end to end; singular primes come back skipped with a diagnostic
PrimeResult compute_prime(const CYOperator& op, const RecurrenceTable& table, u64 p, const PrimeOptions& options = {});

// C override given as "r/s" or an integer
void apply_scaling(CYOperator& op, const std::string& scaling);

struct ComputeSummary {
  std::string outputs;
  std::string log;
  int computed = 0;
  int skipped = 0;
  int failed = 0;
  std::vector<std::string> diagnostics;
};

// writes outputs/outputs_<label>.txt and logs/<label>.log under manifest.outdir
ComputeSummary run_compute(const RunManifest& manifest, const std::vector<CYOperator>& db);

struct BenchProbe {
  std::function<void()> reset;           // start a new peak window
  std::function<std::size_t()> peak;     // peak bytes since reset
  std::function<std::size_t()> current;  // bytes in use now
};

// VmHWM of the process, reset through /proc/self/clear_refs
BenchProbe rss_probe();

struct BenchRow {
  AssemblyMode mode = AssemblyMode::truncated_recurrence;
  u64 p = 0;
  double wall_seconds = 0;
  std::size_t peak_bytes = 0;  // above the level at the start of the run
  bool ok = false;
  std::string status;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  bool cross_mode_equal = true;
  std::vector<std::string> mismatches;
  void write_csv(const std::string& path) const;
};

BenchReport run_bench(const CYOperator& op, const std::vector<u64>& primes, const std::vector<AssemblyMode>& modes,
                      const BenchProbe& probe = {}, const EvaluationOptions& eval = {});

}  // namespace cyfrob
