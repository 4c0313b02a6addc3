#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "cyfrob/evaluation.hpp"

namespace cyfrob {

// (m_0, ..., m_5) of normalized traces x = a1 / p^{(b-1)/2}
using MomentVector = std::array<double, 6>;

enum class DistributionKind { Batman, Wing, FlyingBatman, ShiftedSemicircle };

struct DistributionClass {
  DistributionKind kind = DistributionKind::Batman;
  double distance = 0;       // squared distance to the nearest target
  bool within_threshold = false;
  std::array<double, 4> all_distances{};  // in the enum order
};

std::string to_string(DistributionKind k);
DistributionKind distribution_from_string(const std::string& s);
const std::array<DistributionKind, 4>& all_distributions();
MomentVector target_moments(DistributionKind k);

struct Trace {
  u64 p = 0;
  mpz_class a1;
};

// phi* = r s^{-1} mod p for the first prime_count primes (ascending) with a
// good record at that point; primes dividing s are skipped
std::vector<Trace> gather_traces(const std::vector<EulerFactorRecord>& records, long r, long s, int prime_count);

MomentVector compute_moments(const std::vector<Trace>& traces, int b);
MomentVector compute_moments(const std::vector<double>& x);

DistributionClass classify_distribution(const MomentVector& m, double threshold = 2.0);

struct DensityValue {
  double continuous = 0;
  std::vector<std::pair<double, double>> point_masses;  // (x, mass), independent of x
};

DensityValue density(double x, DistributionKind k);
std::vector<std::pair<double, double>> point_masses(DistributionKind k);

// integral of x^j against the continuous part plus the point masses
MomentVector density_moments(DistributionKind k);
double density_total_mass(DistributionKind k);

// tanh-sinh on [a, b]; f receives (x, x - a, b - x) with the distances exact
template <class F>
double tanh_sinh(F&& f, double a, double b, double h = 1.0 / 64, double umax = 4.0);

struct HeckePair {
  mpz_class lambda1;
  mpz_class lambda2;
};

// lambda1 = -a1, lambda2 = (a2 - p - p^3) / p
HeckePair hecke_eigenvalues(const EulerFactorRecord& record);

enum class ExportFormat { native, euler, histogram, hecke };
ExportFormat export_format_from_string(const std::string& s);

struct HistogramBin {
  double lo, hi, relative_abundance;
};

struct Histogram {
  std::vector<HistogramBin> bins;
  std::vector<std::pair<double, double>> point_masses;  // (x, fraction of samples)
};

// 70 bins on [-b, b]; samples exactly at x = +-1 go to the point-mass table
Histogram trace_histogram(const std::vector<Trace>& traces, int b, int bins = 70);

// writes the chosen format to `path`; histogram also writes `<path>.masses.csv`
void export_records(const std::vector<EulerFactorRecord>& records, ExportFormat format, const std::string& path,
                    int b = 3);

}  // namespace cyfrob

#include <cmath>

namespace cyfrob {

template <class F>
double tanh_sinh(F&& f, double a, double b, double h, double umax) {
  const double half = 0.5 * (b - a);
  const double pi2 = 1.5707963267948966;
  double sum = 0;
  for (int k = -static_cast<int>(umax / h); k <= static_cast<int>(umax / h); ++k) {
    const double u = k * h;
    const double v = pi2 * std::sinh(u);
    const double ch = std::cosh(v);
    const double w = pi2 * std::cosh(u) / (ch * ch);
    // 1 - t and 1 + t without cancellation, t = tanh(v)
    const double e = std::exp(-2 * std::fabs(v));
    const double small = 2 * e / (1 + e);
    const double one_minus_t = v >= 0 ? small : 2 - small;
    const double one_plus_t = v >= 0 ? 2 - small : small;
    const double da = half * one_plus_t, db = half * one_minus_t;
    if (da <= 0 || db <= 0) continue;
    const double x = v >= 0 ? b - db : a + da;
    sum += w * f(x, da, db);
  }
  return sum * h * half;
}

}  // namespace cyfrob
