#pragma once

#include <fstream>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "cyfrob/evaluation.hpp"

namespace cyfrob {

// [p, phi*, [a1, a2]]   good
// [p, phi*, [a1, a2], C]   conifold
// [p, phi*, [], 0]   other singular point
std::string format_record(const EulerFactorRecord& r);
EulerFactorRecord parse_record(const std::string& line);
std::vector<EulerFactorRecord> read_records(const std::string& path);

struct LogEntry {
  u64 p = 0;
  int trunc_deg = 0;
  int M = 0;
  bool warn = false;
  bool operator==(const LogEntry&) const = default;
};

// [p, trunc_deg, M] with a trailing " WARN" when a check failed
std::string format_log(const LogEntry& e);
LogEntry parse_log(const std::string& line);

std::string outputs_path(const std::string& outdir, const std::string& label);
std::string log_path(const std::string& outdir, const std::string& label);

void write_outputs(const std::vector<EulerFactorRecord>& records, const std::string& path);
void write_log(const LogEntry& e, const std::string& path);  // appends

// Lines submitted out of order are written in ascending key order as soon as
// every smaller key has arrived. Thread safe.
class OrderedWriter {
 public:
  OrderedWriter(const std::string& path, std::vector<u64> keys, bool append = false);
  void submit(u64 key, std::vector<std::string> lines);
  // skip a key without output (failed prime)
  void skip(u64 key) { submit(key, {}); }
  void close();

 private:
  void flush_ready();
  std::ofstream out_;
  std::vector<u64> keys_;
  std::size_t next_ = 0;
  std::map<u64, std::vector<std::string>> pending_;
  std::mutex mu_;
};

struct RunManifest {
  std::string label;
  std::string operator_name;
  int n_min = 1;
  int n_max = 1;
  std::string scaling;  // r/s override of C, empty = from the database
  int acc = 0;          // 0 = bound
  int nadd = 0;
  int workers = 1;
  std::string outdir = ".";

  void validate() const;
  std::string to_json() const;
  static RunManifest from_json(const std::string& text);
  bool operator==(const RunManifest&) const = default;
};

}  // namespace cyfrob
