#pragma once

namespace lift::analysis {

// Bessel function of the first kind J_n(x) for integer n (any sign) and real x.
// Ascending power series for |x| <= 4, normalized Miller downward recurrence
// beyond.
double bessel_j(int n, double x);

// Upper bound on sum_{|s| > s_max} |J_s(x)|, from |J_n(x)| <= (|x|/2)^n / n!.
double bessel_tail_bound(int s_max, double x);

}  // namespace lift::analysis
