// Copyright 2026 The PEON Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "peon/numerics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "peon/error.h"

namespace peon {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double Poly(const double* c, int n, double x) {
  double r = c[n - 1];
  for (int i = n - 2; i >= 0; --i) r = r * x + c[i];
  return r;
}

// Error of Stirling's approximation to log(n!):
// log(n!) - log(sqrt(2 pi n) (n/e)^n).
double StirlingError(double n) {
  static constexpr double kS0 = 1.0 / 12;
  static constexpr double kS1 = 1.0 / 360;
  static constexpr double kS2 = 1.0 / 1260;
  static constexpr double kS3 = 1.0 / 1680;
  static constexpr double kS4 = 1.0 / 1188;
  // Exact values for n = 0, 0.5, ..., 15.
  static constexpr double kTable[31] = {
      0.0,
      0.1534264097200273452913848,
      0.0810614667953272582196702,
      0.0548141210519176538961390,
      0.0413406959554092940938221,
      0.03316287351993628748511048,
      0.02767792568499833914878929,
      0.02374616365629749597132920,
      0.02079067210376509311152277,
      0.01848845053267318523077934,
      0.01664469118982119216319487,
      0.01513497322191737887351255,
      0.01387612882307074799874573,
      0.01281046524292022692424986,
      0.01189670994589177009505572,
      0.01110455975820691732662991,
      0.010411265261972096497478567,
      0.009799416126158803298389475,
      0.009255462182712732917728637,
      0.008768700134139385462952823,
      0.008330563433362871256469318,
      0.007934114564314020547248100,
      0.007573675487951840794972024,
      0.007244554301320383179543912,
      0.006942840107209529865664152,
      0.006665247032707682442354394,
      0.006408994188004207068439631,
      0.006171712263039457647532867,
      0.005951370112758847735624416,
      0.005746216513010115682023589,
      0.005554733551962801371038690,
  };
  if (n <= 15.0) {
    double nn = n + n;
    if (nn == std::floor(nn)) return kTable[static_cast<int>(nn)];
    return std::lgamma(n + 1.0) - (n + 0.5) * std::log(n) + n -
           0.5 * std::log(2 * std::numbers::pi);
  }
  double nn = n * n;
  if (n > 500) return (kS0 - kS1 / nn) / n;
  if (n > 80) return (kS0 - (kS1 - kS2 / nn) / nn) / n;
  if (n > 35) return (kS0 - (kS1 - (kS2 - kS3 / nn) / nn) / nn) / n;
  return (kS0 - (kS1 - (kS2 - (kS3 - kS4 / nn) / nn) / nn) / nn) / n;
}

// Deviance term x log(x/np) + np - x, series form near x = np.
double Deviance(double x, double np) {
  if (std::abs(x - np) < 0.1 * (x + np)) {
    double v = (x - np) / (x + np);
    double s = (x - np) * v;
    double ej = 2 * x * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
  }
  return x * std::log(x / np) + np - x;
}

void CheckBinomial(std::int64_t n, double p) {
  if (n < 0 || !(p >= 0.0 && p <= 1.0))
    throw Error(ErrorCode::kDomainError, "binomial parameters out of domain");
}

}  // namespace

double NormalQuantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw Error(ErrorCode::kDomainError, "normal quantile needs 0 < p < 1, got " + std::to_string(p));
  static constexpr double a[8] = {3.3871328727963666080e0, 1.3314166789178437745e+2,
                                  1.9715909503065514427e+3, 1.3731693765509461125e+4,
                                  4.5921953931549871457e+4, 6.7265770927008700853e+4,
                                  3.3430575583588128105e+4, 2.5090809287301226727e+3};
  static constexpr double b[8] = {1.0, 4.2313330701600911252e+1,
                                  6.8718700749205790830e+2, 5.3941960214247511077e+3,
                                  2.1213794301586595867e+4, 3.9307895800092710610e+4,
                                  2.8729085735721942674e+4, 5.2264952788528545610e+3};
  static constexpr double c[8] = {1.42343711074968357734e0, 4.63033784615654529590e0,
                                  5.76949722146069140550e0, 3.64784832476320460504e0,
                                  1.27045825245236838258e0, 2.41780725177450611770e-1,
                                  2.27238449892691845833e-2, 7.74545014278341407640e-4};
  static constexpr double d[8] = {1.0, 2.05319162663775882187e0,
                                  1.67638483018380384940e0, 6.89767334985100004550e-1,
                                  1.48103976427480074590e-1, 1.51986665636164571966e-2,
                                  5.47593808499534494600e-4, 1.05075007164441684324e-9};
  static constexpr double e[8] = {6.65790464350110377720e0, 5.46378491116411436990e0,
                                  1.78482653991729133580e0, 2.96560571828504891230e-1,
                                  2.65321895265761230930e-2, 1.24266094738807843860e-3,
                                  2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static constexpr double f[8] = {1.0, 5.99832206555887937690e-1,
                                  1.36929880922735805310e-1, 1.48753612908506148525e-2,
                                  7.86869131145613259100e-4, 1.84631831751005468180e-5,
                                  1.42151175831644588870e-7, 2.04426310338993978564e-15};
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * Poly(a, 8, r) / Poly(b, 8, r);
  }
  double r = q < 0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double x;
  if (r <= 5.0) {
    r -= 1.6;
    x = Poly(c, 8, r) / Poly(d, 8, r);
  } else {
    r -= 5.0;
    x = Poly(e, 8, r) / Poly(f, 8, r);
  }
  return q < 0 ? -x : x;
}

double NormalCdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double NormalSf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double BinomialLogPmf(std::int64_t k, std::int64_t n, double p) {
  CheckBinomial(n, p);
  if (k < 0 || k > n) return -kInf;
  const double q = 1.0 - p;
  if (p == 0.0) return k == 0 ? 0.0 : -kInf;
  if (q == 0.0) return k == n ? 0.0 : -kInf;
  const double dn = static_cast<double>(n);
  const double dk = static_cast<double>(k);
  if (k == 0) return dn * std::log1p(-p);
  if (k == n) return dn * std::log(p);
  const double lc = StirlingError(dn) - StirlingError(dk) - StirlingError(dn - dk) -
                    Deviance(dk, dn * p) - Deviance(dn - dk, dn * q);
  return lc + 0.5 * std::log(dn / (2 * std::numbers::pi * dk * (dn - dk)));
}

double BinomialPmf(std::int64_t k, std::int64_t n, double p) {
  return std::exp(BinomialLogPmf(k, n, p));
}

namespace {

// Sum of pmf over [lo, hi], accumulated from the end nearest the mode so
// the largest terms go in first.
double SumPmf(std::int64_t lo, std::int64_t hi, std::int64_t n, double p) {
  lo = std::max<std::int64_t>(lo, 0);
  hi = std::min(hi, n);
  if (lo > hi) return 0.0;
  const double mode = std::floor((static_cast<double>(n) + 1) * p);
  double total = 0.0;
  if (static_cast<double>(hi) <= mode) {
    for (std::int64_t k = hi; k >= lo; --k) {
      double t = BinomialPmf(k, n, p);
      total += t;
      if (t < total * 1e-18) break;
    }
  } else if (static_cast<double>(lo) >= mode) {
    for (std::int64_t k = lo; k <= hi; ++k) {
      double t = BinomialPmf(k, n, p);
      total += t;
      if (t < total * 1e-18) break;
    }
  } else {
    for (std::int64_t k = lo; k <= hi; ++k) total += BinomialPmf(k, n, p);
  }
  return total;
}

}  // namespace

double BinomialCdf(std::int64_t k, std::int64_t n, double p) {
  CheckBinomial(n, p);
  if (k < 0) return 0.0;
  if (k >= n) return 1.0;
  const double mean = static_cast<double>(n) * p;
  if (static_cast<double>(k) <= mean) return std::min(1.0, SumPmf(0, k, n, p));
  return std::max(0.0, 1.0 - SumPmf(k + 1, n, n, p));
}

double BinomialSf(std::int64_t k, std::int64_t n, double p) {
  CheckBinomial(n, p);
  if (k < 0) return 1.0;
  if (k >= n) return 0.0;
  const double mean = static_cast<double>(n) * p;
  if (static_cast<double>(k) >= mean) return std::min(1.0, SumPmf(k + 1, n, n, p));
  return std::max(0.0, 1.0 - SumPmf(0, k, n, p));
}

double ChiSquaredSf(double x, double dof) {
  if (!(dof > 0.0)) throw Error(ErrorCode::kDomainError, "chi-squared needs dof > 0");
  if (std::isnan(x)) throw Error(ErrorCode::kDomainError, "chi-squared statistic is NaN");
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(dof / 2.0, x / 2.0);
}

}  // namespace peon
