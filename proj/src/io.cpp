#include "cyfrob/io.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>

#include <json.hpp>

namespace cyfrob {

namespace {

std::string strip(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(strip(item));
  return out;
}

u64 parse_u64(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad " + what + ": '" + s + "'", 0, 0);
  }
}

}  // namespace

std::string format_record(const EulerFactorRecord& r) {
  std::ostringstream os;
  os << '[' << r.p << ", " << r.phi_star << ", [";
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) os << (i ? ", " : "") << r.coeffs[i];
  os << ']';
  if (r.flag == PointFlag::conifold) os << ", C";
  if (r.flag == PointFlag::other_singular) os << ", 0";
  os << ']';
  return os.str();
}

EulerFactorRecord parse_record(const std::string& line) {
  const std::string s = strip(line);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') throw ParseError("record must be bracketed", 0, 0);
  const std::string body = s.substr(1, s.size() - 2);
  const auto lb = body.find('['), rb = body.find(']');
  if (lb == std::string::npos || rb == std::string::npos || rb < lb)
    throw ParseError("record needs a coefficient list", 0, 3);
  std::string pre = strip(body.substr(0, lb));
  if (pre.empty() || pre.back() != ',') throw ParseError("record needs p and phi*", 0, 1);
  pre.pop_back();
  const auto head = split_commas(pre);
  if (head.size() != 2) throw ParseError("record needs p and phi*", 0, 1);
  EulerFactorRecord r;
  r.p = parse_u64(head[0], "prime");
  r.phi_star = parse_u64(head[1], "point");
  const std::string list = strip(body.substr(lb + 1, rb - lb - 1));
  if (!list.empty())
    for (const auto& c : split_commas(list)) {
      mpz_class v;
      if (c.empty() || v.set_str(c, 10) != 0) throw ParseError("bad coefficient: '" + c + "'", 0, 3);
      r.coeffs.push_back(v);
    }
  const std::string tail = strip(body.substr(rb + 1));
  if (tail.empty())
    r.flag = PointFlag::good;
  else if (tail == ", C" || tail == ",C")
    r.flag = PointFlag::conifold;
  else if (tail == ", 0" || tail == ",0")
    r.flag = PointFlag::other_singular;
  else
    throw ParseError("unknown record flag: '" + tail + "'", 0, 4);
  return r;
}

std::vector<EulerFactorRecord> read_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<EulerFactorRecord> out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (strip(line).empty()) continue;
    try {
      out.push_back(parse_record(line));
    } catch (const ParseError& e) {
      throw ParseError(path + ": " + e.what(), n, e.field);
    }
  }
  return out;
}

std::string format_log(const LogEntry& e) {
  std::ostringstream os;
  os << '[' << e.p << ", " << e.trunc_deg << ", " << e.M << ']';
  if (e.warn) os << " WARN";
  return os.str();
}

LogEntry parse_log(const std::string& line) {
  std::string s = strip(line);
  LogEntry e;
  const std::string suffix = " WARN";
  if (s.size() > suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0) {
    e.warn = true;
    s = strip(s.substr(0, s.size() - suffix.size()));
  }
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') throw ParseError("log line must be bracketed", 0, 0);
  const auto f = split_commas(s.substr(1, s.size() - 2));
  if (f.size() != 3) throw ParseError("log line needs three fields", 0, 0);
  e.p = parse_u64(f[0], "prime");
  try {
    e.trunc_deg = std::stoi(f[1]);
    e.M = std::stoi(f[2]);
  } catch (const std::exception&) {
    throw ParseError("bad log field", 0, 2);
  }
  return e;
}

std::string outputs_path(const std::string& outdir, const std::string& label) {
  return (std::filesystem::path(outdir) / "outputs" / ("outputs_" + label + ".txt")).string();
}

std::string log_path(const std::string& outdir, const std::string& label) {
  return (std::filesystem::path(outdir) / "logs" / (label + ".log")).string();
}

namespace {

void ensure_parent(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

}  // namespace

void write_outputs(const std::vector<EulerFactorRecord>& records, const std::string& path) {
  ensure_parent(path);
  std::vector<const EulerFactorRecord*> sorted;
  for (const auto& r : records) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) {
    return a->p != b->p ? a->p < b->p : a->phi_star < b->phi_star;
  });
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  for (const auto* r : sorted) out << format_record(*r) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_log(const LogEntry& e, const std::string& path) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << format_log(e) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

OrderedWriter::OrderedWriter(const std::string& path, std::vector<u64> keys, bool append) : keys_(std::move(keys)) {
  ensure_parent(path);
  out_.open(path, append ? std::ios::app : std::ios::trunc);
  if (!out_) throw std::runtime_error("cannot open " + path);
  std::sort(keys_.begin(), keys_.end());
}

void OrderedWriter::submit(u64 key, std::vector<std::string> lines) {
  std::lock_guard<std::mutex> lock(mu_);
  pending_[key] = std::move(lines);
  flush_ready();
}

void OrderedWriter::flush_ready() {
  while (next_ < keys_.size()) {
    auto it = pending_.find(keys_[next_]);
    if (it == pending_.end()) break;
    for (const auto& l : it->second) out_ << l << '\n';
    pending_.erase(it);
    ++next_;
  }
  out_.flush();
  if (!out_) throw std::runtime_error("write failed");
}

void OrderedWriter::close() {
  std::lock_guard<std::mutex> lock(mu_);
  flush_ready();
  out_.close();
}

void RunManifest::validate() const {
  if (label.empty()) throw ValidationError("manifest needs a label");
  if (operator_name.empty()) throw ValidationError("manifest needs an operator");
  if (n_min < 1 || n_max < n_min) throw ValidationError("prime index range must satisfy 1 <= n_min <= n_max");
  if (nadd < 0) throw ValidationError("nadd must be nonnegative");
  if (nadd > 0 && acc <= 0) throw ValidationError("nadd > 0 requires an explicit acc");
  if (acc < 0) throw ValidationError("acc must be positive");
  if (workers < 1) throw ValidationError("workers must be positive");
  if (!scaling.empty()) {
    mpq_class c;
    if (c.set_str(scaling, 10) != 0) throw ValidationError("scaling must be a rational r/s");
    c.canonicalize();
    if (c <= 0) throw ValidationError("scaling must be positive");
  }
}

std::string RunManifest::to_json() const {
  nlohmann::json j = {{"label", label}, {"operator", operator_name}, {"n_min", n_min}, {"n_max", n_max},
                      {"scaling", scaling}, {"acc", acc}, {"nadd", nadd}, {"workers", workers}, {"outdir", outdir}};
  return j.dump(2);
}

RunManifest RunManifest::from_json(const std::string& text) {
  RunManifest m;
  try {
    const auto j = nlohmann::json::parse(text);
    m.label = j.at("label").get<std::string>();
    m.operator_name = j.at("operator").get<std::string>();
    m.n_min = j.at("n_min").get<int>();
    m.n_max = j.at("n_max").get<int>();
    m.scaling = j.value("scaling", std::string());
    m.acc = j.value("acc", 0);
    m.nadd = j.value("nadd", 0);
    m.workers = j.value("workers", 1);
    m.outdir = j.value("outdir", std::string("."));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what(), 0, 0);
  }
  return m;
}

}  // namespace cyfrob
