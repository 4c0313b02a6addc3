// cyfrob: Euler factors of one-parameter Calabi-Yau operators.
#include <CLI11.hpp>

#include <iomanip>
#include <iostream>

#include "cyfrob/analytics.hpp"
#include "cyfrob/memtrack.hpp"
#include "cyfrob/pipeline.hpp"
#include "cyfrob/primes.hpp"

using namespace cyfrob;

namespace {

std::pair<int, int> parse_range(const std::string& s) {
  const auto colon = s.find(':');
  try {
    if (colon == std::string::npos) {
      const int n = std::stoi(s);
      return {n, n};
    }
    return {std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
  } catch (const std::exception&) {
    throw UsageError("prime range must be n_min:n_max, got '" + s + "'");
  }
}

std::pair<long, long> parse_point(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return {std::stol(s), 1};
    return {std::stol(s.substr(0, slash)), std::stol(s.substr(slash + 1))};
  } catch (const std::exception&) {
    throw UsageError("point must be r/s, got '" + s + "'");
  }
}

std::vector<EulerFactorRecord> read_all(const std::vector<std::string>& files) {
  std::vector<EulerFactorRecord> all;
  for (const auto& f : files) {
    auto r = read_records(f);
    all.insert(all.end(), r.begin(), r.end());
  }
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Euler factors of Calabi-Yau operators by the deformation method"};
  app.require_subcommand(1);
  std::string db_path = "data/operators.db";
  std::string outdir = ".";
  app.add_option("--db", db_path, "operator database")->capture_default_str();
  app.add_option("--outdir", outdir, "root for outputs/ and logs/")->capture_default_str();

  RunManifest man;
  std::string range;
  auto* compute = app.add_subcommand("compute", "Euler factors for a range of prime indices");
  compute->add_option("--operator", man.operator_name)->required();
  compute->add_option("--primes", range, "n_min:n_max (indices, p_1 = 2)")->required();
  compute->add_option("--label", man.label)->required();
  compute->add_option("--scaling", man.scaling, "override C as r/s");
  compute->add_option("--acc", man.acc, "p-adic accuracy A (default: bound)");
  compute->add_option("--nadd", man.nadd, "extra series terms checked for termination");
  compute->add_option("--workers", man.workers, "primes processed concurrently")->capture_default_str();

  int depth = 30;
  std::string vop;
  auto* validate = app.add_subcommand("validate", "check MUM shape, integrality and self-duality");
  validate->add_option("--operator", vop)->required();
  validate->add_option("--depth", depth)->capture_default_str();

  std::vector<std::string> inputs;
  std::string point;
  int prime_count = 0, order = 3;
  auto* stats = app.add_subcommand("stats", "trace moments and distribution class at a point");
  stats->add_option("--inputs", inputs)->required()->expected(1, -1);
  stats->add_option("--point", point, "r/s")->required();
  stats->add_option("--primes", prime_count, "number of primes to use")->required();
  stats->add_option("--order", order, "operator order b")->capture_default_str();

  std::string bop, brange, csv, memory = "heap";
  std::vector<std::string> modes{"exact_rational", "truncated_rational", "truncated_recurrence"};
  int stride = 1;
  auto* bench = app.add_subcommand("bench", "time and memory of the three assembly modes");
  bench->add_option("--operator", bop)->required();
  bench->add_option("--primes", brange)->required();
  bench->add_option("--modes", modes)->expected(1, -1)->capture_default_str();
  bench->add_option("--stride", stride, "use every stride-th prime index")->capture_default_str();
  bench->add_option("--csv", csv, "CSV path (default <outdir>/bench_<operator>.csv)");
  bench->add_option("--memory", memory, "heap or rss")->check(CLI::IsMember({"heap", "rss"}))->capture_default_str();

  std::vector<std::string> einputs;
  std::string format, output;
  auto* exp = app.add_subcommand("export", "convert records for external tools");
  exp->add_option("--inputs", einputs)->required()->expected(1, -1);
  exp->add_option("--format", format, "native, euler, histogram or hecke")->required();
  exp->add_option("--output", output, "default <outdir>/export.<format>");
  exp->add_option("--order", order, "operator order b (histogram)")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*compute) {
      std::tie(man.n_min, man.n_max) = parse_range(range);
      man.outdir = outdir;
      const auto db = load_operator_db(db_path);
      const auto sum = run_compute(man, db);
      for (const auto& d : sum.diagnostics) std::cerr << d << '\n';
      std::cout << "computed " << sum.computed << ", skipped " << sum.skipped << ", failed " << sum.failed << '\n'
                << "outputs: " << sum.outputs << "\nlog: " << sum.log << '\n';
      return sum.failed ? 1 : 0;
    }
    if (*validate) {
      const auto db = load_operator_db(db_path);
      const auto rep = validate_operator(find_operator(db, vop), depth, depth);
      for (const auto& c : rep.checks)
        std::cout << (c.passed ? "ok    " : "FAIL  ") << c.name << (c.detail.empty() ? "" : ": " + c.detail) << '\n';
      return rep.all_passed() ? 0 : 1;
    }
    if (*stats) {
      const auto [r, s] = parse_point(point);
      const auto traces = gather_traces(read_all(inputs), r, s, prime_count);
      if (static_cast<int>(traces.size()) < prime_count)
        std::cerr << "only " << traces.size() << " good primes available at " << point << '\n';
      const auto m = compute_moments(traces, order);
      const auto cls = classify_distribution(m);
      std::cout << std::setprecision(6) << "primes " << traces.size() << "\nmoments";
      for (double v : m) std::cout << ' ' << v;
      std::cout << '\n';
      for (std::size_t i = 0; i < 4; ++i)
        std::cout << "distance " << to_string(all_distributions()[i]) << ' ' << cls.all_distances[i] << '\n';
      std::cout << "class " << to_string(cls.kind) << (cls.within_threshold ? "" : " (distance >= 2)") << '\n';
      return 0;
    }
    if (*bench) {
      const auto db = load_operator_db(db_path);
      const auto& op = find_operator(db, bop);
      const auto [lo, hi] = parse_range(brange);
      if (stride < 1) throw UsageError("stride must be positive");
      std::vector<u64> primes;
      const auto all = primes_in_index_range(lo, hi);
      for (std::size_t i = 0; i < all.size(); i += stride) primes.push_back(all[i]);
      std::vector<AssemblyMode> ms;
      for (const auto& m : modes) ms.push_back(assembly_mode_from_string(m));
      BenchProbe probe;
      if (memory == "heap") {
        memtrack::install();
        probe = {memtrack::reset_peak, memtrack::peak_bytes, memtrack::current_bytes};
      } else {
        probe = rss_probe();
      }
      EvaluationOptions eval;
      eval.hasse_witt = false;
      const auto rep = run_bench(op, primes, ms, probe, eval);
      if (csv.empty()) csv = outdir + "/bench_" + op.name + ".csv";
      rep.write_csv(csv);
      for (const auto& row : rep.rows)
        std::cout << std::left << std::setw(22) << to_string(row.mode) << std::setw(8) << row.p << std::setw(12)
                  << row.wall_seconds << std::setw(14) << row.peak_bytes << (row.ok ? "ok" : row.status) << '\n';
      for (const auto& m : rep.mismatches) std::cerr << m << '\n';
      std::cout << "csv: " << csv << '\n';
      return rep.cross_mode_equal ? 0 : 1;
    }
    if (*exp) {
      const auto fmt = export_format_from_string(format);
      if (output.empty()) output = outdir + "/export." + format;
      export_records(read_all(einputs), fmt, output, order);
      std::cout << output << '\n';
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "invalid: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
