#pragma once

// Modified Bessel functions I0 and I1 for the closed-form telegraph kernel.
//
// Power series below argument 20, asymptotic expansion above; both branches
// target ~1e-14 relative error, comfortably inside the 1e-12 budget the
// density code assumes. The *_scaled variants return e^(-x) I_n(x), which is
// what the kernel actually consumes: the density multiplies by e^(-lambda*t)
// with lambda*t possibly in the thousands, where the unscaled I_n overflow.

namespace telegraph {

double bessel_i0_scaled(double x);  // e^(-x) I0(x), x >= 0
double bessel_i1_scaled(double x);  // e^(-x) I1(x), x >= 0
double bessel_i0(double x);
double bessel_i1(double x);

}  // namespace telegraph
