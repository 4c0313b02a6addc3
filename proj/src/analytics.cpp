#include "cyfrob/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "cyfrob/io.hpp"

namespace cyfrob {

namespace {

constexpr double kPi = 3.14159265358979323846;

double normalized_trace(const mpz_class& a1, u64 p, int b) {
  return a1.get_d() / std::pow(static_cast<double>(p), (b - 1) / 2.0);
}

// continuous parts on the pieces between breakpoints; each lambda gets
// (x, x - lo, hi - x)
struct Piece {
  double lo, hi;
  double (*f)(double, double, double);
};

std::vector<Piece> pieces(DistributionKind k) {
  switch (k) {
    case DistributionKind::Batman:
      return {{-3, -1,
               [](double, double da, double db) { return std::sqrt(da) / (4 * kPi * std::sqrt(2 + db)); }},
              {-1, 1,
               [](double, double da, double db) {
                 return std::sqrt(2 + da) / (4 * kPi * std::sqrt(db)) + std::sqrt(2 + db) / (4 * kPi * std::sqrt(da));
               }},
              {1, 3, [](double, double da, double db) { return std::sqrt(db) / (4 * kPi * std::sqrt(2 + da)); }}};
    case DistributionKind::Wing:
      return {{-3, 1, [](double, double da, double db) { return std::sqrt(da / db) / (2 * kPi); }}};
    case DistributionKind::FlyingBatman:
      return {{-3, -1, [](double, double da, double db) { return 1 / (4 * kPi * std::sqrt(da * (2 + db))); }},
              {-1, 1,
               [](double, double da, double db) {
                 return 1 / (4 * kPi * std::sqrt(db * (2 + da))) + 1 / (4 * kPi * std::sqrt(da * (2 + db)));
               }},
              {1, 3, [](double, double da, double db) { return 1 / (4 * kPi * std::sqrt(db * (2 + da))); }}};
    case DistributionKind::ShiftedSemicircle:
      return {{-3, 1, [](double, double da, double db) { return 1 / (2 * kPi * std::sqrt(da * db)); }}};
  }
  return {};
}

}  // namespace

std::string to_string(DistributionKind k) {
  switch (k) {
    case DistributionKind::Batman:
      return "Batman";
    case DistributionKind::Wing:
      return "Wing";
    case DistributionKind::FlyingBatman:
      return "FlyingBatman";
    case DistributionKind::ShiftedSemicircle:
      return "ShiftedSemicircle";
  }
  return "?";
}

DistributionKind distribution_from_string(const std::string& s) {
  for (auto k : all_distributions())
    if (to_string(k) == s) return k;
  throw UsageError("unknown distribution: " + s);
}

const std::array<DistributionKind, 4>& all_distributions() {
  static const std::array<DistributionKind, 4> all{DistributionKind::Batman, DistributionKind::Wing,
                                                   DistributionKind::FlyingBatman,
                                                   DistributionKind::ShiftedSemicircle};
  return all;
}

MomentVector target_moments(DistributionKind k) {
  switch (k) {
    case DistributionKind::Batman:
      return {1, 0, 1, 0, 3, 0};
    case DistributionKind::Wing:
      return {1, 0, 1, -1, 3, -6};
    case DistributionKind::FlyingBatman:
      return {1, 0, 2, 0, 10, 0};
    case DistributionKind::ShiftedSemicircle:
      return {1, -1, 2, -4, 10, -26};
  }
  return {};
}

std::vector<Trace> gather_traces(const std::vector<EulerFactorRecord>& records, long r, long s, int prime_count) {
  if (s == 0) throw UsageError("point denominator must be nonzero");
  std::map<u64, std::vector<const EulerFactorRecord*>> by_prime;
  for (const auto& rec : records) by_prime[rec.p].push_back(&rec);
  std::vector<Trace> out;
  for (const auto& [p, recs] : by_prime) {
    if (static_cast<int>(out.size()) >= prime_count) break;
    const long pl = static_cast<long>(p);
    const long sm = ((s % pl) + pl) % pl;
    if (sm == 0) continue;
    const long rm = ((r % pl) + pl) % pl;
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), mpz_class(sm).get_mpz_t(), mpz_class(pl).get_mpz_t());
    const u64 phi = static_cast<u64>(mpz_class(mpz_class(rm) * inv % pl).get_ui());
    if (phi == 0) continue;
    for (const auto* rec : recs)
      if (rec->phi_star == phi) {
        if (rec->flag == PointFlag::good && !rec->coeffs.empty()) out.push_back({p, rec->coeffs[0]});
        break;
      }
  }
  return out;
}

MomentVector compute_moments(const std::vector<double>& x) {
  if (x.empty()) throw UsageError("no traces to average");
  MomentVector m{};
  for (double v : x) {
    double t = 1;
    for (int j = 0; j < 6; ++j) {
      m[j] += t;
      t *= v;
    }
  }
  for (auto& v : m) v /= static_cast<double>(x.size());
  return m;
}

MomentVector compute_moments(const std::vector<Trace>& traces, int b) {
  std::vector<double> x;
  x.reserve(traces.size());
  for (const auto& t : traces) x.push_back(normalized_trace(t.a1, t.p, b));
  return compute_moments(x);
}

DistributionClass classify_distribution(const MomentVector& m, double threshold) {
  DistributionClass best;
  best.distance = INFINITY;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto k = all_distributions()[i];
    const auto t = target_moments(k);
    double d = 0;
    for (int j = 0; j < 6; ++j) d += (m[j] - t[j]) * (m[j] - t[j]);
    best.all_distances[i] = d;
    if (d < best.distance) {
      best.distance = d;
      best.kind = k;
    }
  }
  best.within_threshold = best.distance < threshold;
  return best;
}

std::vector<std::pair<double, double>> point_masses(DistributionKind k) {
  switch (k) {
    case DistributionKind::FlyingBatman:
      return {{-1.0, 0.25}, {1.0, 0.25}};
    case DistributionKind::ShiftedSemicircle:
      return {{-1.0, 0.5}};
    default:
      return {};
  }
}

DensityValue density(double x, DistributionKind k) {
  DensityValue d;
  d.point_masses = point_masses(k);
  for (const auto& pc : pieces(k))
    if (x > pc.lo && x < pc.hi) {
      d.continuous = pc.f(x, x - pc.lo, pc.hi - x);
      break;
    }
  return d;
}

MomentVector density_moments(DistributionKind k) {
  MomentVector m{};
  for (int j = 0; j < 6; ++j) {
    double s = 0;
    for (const auto& pc : pieces(k))
      s += tanh_sinh([&](double x, double da, double db) { return std::pow(x, j) * pc.f(x, da, db); }, pc.lo, pc.hi);
    for (const auto& [x, w] : point_masses(k)) s += w * std::pow(x, j);
    m[j] = s;
  }
  return m;
}

double density_total_mass(DistributionKind k) { return density_moments(k)[0]; }

HeckePair hecke_eigenvalues(const EulerFactorRecord& record) {
  if (record.flag != PointFlag::good || record.coeffs.size() < 2) throw UsageError("Hecke eigenvalues need a good record");
  const mpz_class p = record.p;
  HeckePair h;
  h.lambda1 = -record.coeffs[0];
  const mpz_class num = record.coeffs[1] - p - p * p * p;
  if (!mpz_divisible_p(num.get_mpz_t(), p.get_mpz_t()))
    throw IntegrityError("lambda2 is not integral at p = " + p.get_str());
  h.lambda2 = num / p;
  return h;
}

ExportFormat export_format_from_string(const std::string& s) {
  if (s == "native") return ExportFormat::native;
  if (s == "euler") return ExportFormat::euler;
  if (s == "histogram") return ExportFormat::histogram;
  if (s == "hecke") return ExportFormat::hecke;
  throw UsageError("unknown export format: " + s);
}

Histogram trace_histogram(const std::vector<Trace>& traces, int b, int bins) {
  Histogram h;
  const double lo = -b, hi = b, width = (hi - lo) / bins;
  std::vector<long> counts(bins, 0);
  long at_minus = 0, at_plus = 0;
  for (const auto& t : traces) {
    // exactly +-1 after normalization: a1^2 = p^{b-1}
    const mpz_class sq = t.a1 * t.a1;
    if (sq == pow_ui(t.p, b - 1)) {
      (t.a1 > 0 ? at_plus : at_minus)++;
      continue;
    }
    const double x = normalized_trace(t.a1, t.p, b);
    int i = static_cast<int>(std::floor((x - lo) / width));
    i = std::clamp(i, 0, bins - 1);
    ++counts[i];
  }
  const double n = static_cast<double>(traces.size());
  for (int i = 0; i < bins; ++i)
    h.bins.push_back({lo + i * width, lo + (i + 1) * width, n > 0 ? counts[i] / (n * width) : 0.0});
  h.point_masses = {{-1.0, n > 0 ? at_minus / n : 0.0}, {1.0, n > 0 ? at_plus / n : 0.0}};
  return h;
}

void export_records(const std::vector<EulerFactorRecord>& records, ExportFormat format, const std::string& path,
                    int b) {
  std::vector<const EulerFactorRecord*> sorted;
  for (const auto& r : records) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(), [](auto* x, auto* y) {
    return x->p != y->p ? x->p < y->p : x->phi_star < y->phi_star;
  });
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  switch (format) {
    case ExportFormat::native:
      for (const auto* r : sorted) out << format_record(*r) << '\n';
      break;
    case ExportFormat::euler:
      for (const auto* r : sorted) {
        if (r->flag != PointFlag::good) continue;
        out << r->p;
        const auto& c = r->completed.empty() ? r->coeffs : r->completed;
        if (r->completed.empty()) out << " 1";
        for (const auto& a : c) out << ' ' << a;
        out << '\n';
      }
      break;
    case ExportFormat::hecke:
      for (const auto* r : sorted) {
        if (r->flag != PointFlag::good) continue;
        const auto h = hecke_eigenvalues(*r);
        out << r->p << ' ' << h.lambda1 << ' ' << h.lambda2 << '\n';
      }
      break;
    case ExportFormat::histogram: {
      std::vector<Trace> tr;
      for (const auto* r : sorted)
        if (r->flag == PointFlag::good && !r->coeffs.empty()) tr.push_back({r->p, r->coeffs[0]});
      const auto h = trace_histogram(tr, b);
      out << "bin_lo,bin_hi,relative_abundance\n";
      for (const auto& bin : h.bins) out << bin.lo << ',' << bin.hi << ',' << bin.relative_abundance << '\n';
      std::ofstream side(path + ".masses.csv");
      if (!side) throw std::runtime_error("cannot open " + path + ".masses.csv");
      side << "x,mass\n";
      for (const auto& [x, w] : h.point_masses) side << x << ',' << w << '\n';
      break;
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace cyfrob
