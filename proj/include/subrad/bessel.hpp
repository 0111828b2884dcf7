#pragma once

// Bessel-of-the-first-kind helpers for the gap-field radial profiles.
// J_m itself comes from the standard library; the zero/peak locations are
// found by Newton iteration seeded with the McMahon expansion.

namespace subrad::bessel {

double j(int m, double x);  // J_m(x), m >= 0

// n-th positive zero j_{m,n}, n >= 1
double j_zero(int m, int n);

// location of the first maximum of |J_m| on (0, j_{m,1}]; for m = 0 this is 0
double j_first_peak(int m);

// max of |J_m| on [0, j_{m,n}] — attained at the first peak
double j_peak_value(int m);

}  // namespace subrad::bessel
