// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace elorank {

/// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

/// Regularized incomplete beta I_x(a, b).
double regularized_beta(double x, double a, double b);

/// Upper tail P(X > x) for chi-square with df degrees of freedom.
double chi_square_sf(double x, double df);

/// Upper tail P(F > f) for the F distribution with (d1, d2) degrees of freedom.
double f_sf(double f, double d1, double d2);

struct KruskalWallisResult {
  double h = 0.0;
  int df = 0;
  double p = 1.0;
};

KruskalWallisResult kruskal_wallis(const std::vector<std::vector<double>>& groups);

struct AnovaResult {
  double f = 0.0;
  int df_between = 0;
  int df_within = 0;
  double p = 1.0;
  bool infinite_f = false;  // no within-group variance but the means differ
};

AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups);

}  // namespace elorank
