#include "analysis/bessel.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

namespace lift::analysis {

namespace {

double series(int n, double x) {
  const double half = x / 2;
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term *= half / k;  // (x/2)^n / n!
  double sum = term;
  const double q = -half * half;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * (k + n));
    sum += term;
    if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
  }
  return sum;
}

double miller(int n, double x) {
  const double ax = std::fabs(x);
  const int top = 2 * ((std::max(n, static_cast<int>(ax)) + 20 + static_cast<int>(std::sqrt(60.0 * (std::max(n, static_cast<int>(ax)) + 1)))) / 2);
  std::vector<double> j(top + 2, 0.0);
  j[top + 1] = 0.0;
  j[top] = 1e-300;
  for (int k = top; k >= 1; --k) {
    j[k - 1] = (2.0 * k / x) * j[k] - j[k + 1];
    if (std::fabs(j[k - 1]) > 1e250) {
      for (int i = k - 1; i <= top + 1; ++i) j[i] *= 1e-250;
    }
  }
  // J_0 + 2 sum_k J_{2k} = 1.
  double norm = j[0];
  for (int k = 2; k <= top; k += 2) norm += 2.0 * j[k];
  return j[n] / norm;
}

}  // namespace

double bessel_j(int n, double x) {
  double sign = 1.0;
  if (n < 0) {
    n = -n;
    if (n % 2) sign = -sign;
  }
  if (x < 0) {
    x = -x;
    if (n % 2) sign = -sign;
  }
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  return sign * (x <= 4.0 ? series(n, x) : miller(n, x));
}

double bessel_tail_bound(int s_max, double x) {
  const double half = std::fabs(x) / 2;
  double term = 1.0;
  for (int k = 1; k <= s_max; ++k) term *= half / k;
  double sum = 0;
  for (int n = s_max + 1; n < s_max + 200; ++n) {
    term *= half / n;
    sum += term;
    if (term < 1e-300 || term < 1e-18 * sum) break;
  }
  return 2.0 * sum;
}

}  // namespace lift::analysis
