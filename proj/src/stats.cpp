// SPDX-License-Identifier: Apache-2.0
#include "elorank/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "elorank/errors.hpp"
#include "elorank/metrics.hpp"

namespace elorank {
namespace {

constexpr int kMaxIterations = 10000;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

double gamma_series(double a, double x) {
  double sum = 1.0 / a;
  double term = sum;
  for (int n = 1; n < kMaxIterations; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper tail Q(a, x) by Lentz's continued fraction.
double gamma_continued_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double regularized_gamma_q(double a, double x) {
  if (x <= 0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_series(a, x);
  return gamma_continued_fraction(a, x);
}

double beta_continued_fraction(double x, double a, double b) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m < kMaxIterations; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (!(a > 0) || x < 0) throw DomainError("regularized_gamma_p needs a > 0 and x >= 0");
  if (x == 0) return 0.0;
  if (x < a + 1.0) return gamma_series(a, x);
  return 1.0 - gamma_continued_fraction(a, x);
}

double regularized_beta(double x, double a, double b) {
  if (!(a > 0) || !(b > 0) || x < 0 || x > 1) throw DomainError("regularized_beta needs a, b > 0 and x in [0, 1]");
  if (x == 0) return 0.0;
  if (x == 1) return 1.0;
  const double front =
      std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(x, a, b) / a;
  return 1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b;
}

double chi_square_sf(double x, double df) {
  if (!(df > 0)) throw DomainError("chi-square degrees of freedom must be positive");
  if (std::isinf(x)) return 0.0;
  return regularized_gamma_q(df / 2.0, x / 2.0);
}

double f_sf(double f, double d1, double d2) {
  if (!(d1 > 0) || !(d2 > 0)) throw DomainError("F degrees of freedom must be positive");
  if (f <= 0) return 1.0;
  if (std::isinf(f)) return 0.0;
  return regularized_beta(d2 / (d2 + d1 * f), d2 / 2.0, d1 / 2.0);
}

KruskalWallisResult kruskal_wallis(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw ValidationError("kruskal_wallis needs at least two groups");
  std::vector<double> pooled;
  for (const auto& g : groups) {
    if (g.empty()) throw ValidationError("kruskal_wallis groups must be non-empty");
    pooled.insert(pooled.end(), g.begin(), g.end());
  }
  const auto ranks = mid_ranks(pooled);
  const double n = static_cast<double>(pooled.size());

  double sum = 0.0;
  std::size_t offset = 0;
  for (const auto& g : groups) {
    double r = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) r += ranks[offset + i];
    offset += g.size();
    sum += r * r / static_cast<double>(g.size());
  }
  const double h_raw = 12.0 / (n * (n + 1.0)) * sum - 3.0 * (n + 1.0);

  // Tie correction 1 - sum(t^3 - t) / (N^3 - N) over groups of tied values.
  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  double ties = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    ties += t * t * t - t;
    i = j;
  }
  const double correction = 1.0 - ties / (n * n * n - n);

  KruskalWallisResult r;
  r.df = static_cast<int>(groups.size()) - 1;
  if (correction <= 0.0) return r;
  r.h = std::max(0.0, h_raw / correction);
  r.p = chi_square_sf(r.h, r.df);
  return r;
}

AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw ValidationError("one_way_anova needs at least two groups");
  std::size_t n = 0;
  double grand = 0.0;
  for (const auto& g : groups) {
    if (g.empty()) throw ValidationError("one_way_anova groups must be non-empty");
    n += g.size();
    for (double v : g) grand += v;
  }
  if (n <= groups.size()) throw ValidationError("one_way_anova needs more observations than groups");
  grand /= static_cast<double>(n);

  double ssb = 0.0, ssw = 0.0, sst = 0.0;
  for (const auto& g : groups) {
    double mean = 0.0;
    for (double v : g) mean += v;
    mean /= static_cast<double>(g.size());
    ssb += static_cast<double>(g.size()) * (mean - grand) * (mean - grand);
    for (double v : g) {
      ssw += (v - mean) * (v - mean);
      sst += (v - grand) * (v - grand);
    }
  }

  AnovaResult r;
  r.df_between = static_cast<int>(groups.size()) - 1;
  r.df_within = static_cast<int>(n - groups.size());
  // Components this small relative to the total are rounding in the means.
  if (ssb <= 1e-12 * sst) ssb = 0.0;
  if (ssw <= 1e-20 * sst) ssw = 0.0;
  if (ssw == 0.0) {
    if (ssb == 0.0) return r;
    r.f = std::numeric_limits<double>::infinity();
    r.p = 0.0;
    r.infinite_f = true;
    return r;
  }
  r.f = (ssb / r.df_between) / (ssw / r.df_within);
  r.p = f_sf(r.f, r.df_between, r.df_within);
  return r;
}

}  // namespace elorank
