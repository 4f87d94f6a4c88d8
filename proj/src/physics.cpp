#include "mpi1d/physics.hpp"

#include <cmath>

namespace mpi1d {

void PhysicalParams::validate() const {
    if (!(A > 0.0)) throw std::invalid_argument("physical parameter A must be > 0");
    if (!(G > 0.0)) throw std::invalid_argument("physical parameter G must be > 0");
    if (!(T > 0.0)) throw std::invalid_argument("physical parameter T must be > 0");
    if (!(a > 0.0)) throw std::invalid_argument("physical parameter a must be > 0");
    if (!(beta > 0.0)) throw std::invalid_argument("physical parameter beta must be > 0");
}

// coth(x) and 1/x cancel catastrophically near zero, so below |x| = 1e-4 we
// use the Taylor expansion x/3 - x^3/45 + 2 x^5 / 945; the first neglected
// term is O(x^7) ~ 1e-30 at the cutoff, far below double precision.
double langevin(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return x * (1.0 / 3.0 - x2 / 45.0 + (2.0 / 945.0) * x2 * x2);
    }
    return 1.0 / std::tanh(x) - 1.0 / x;
}

// Same cancellation issue near zero: series 1/3 - x^2/15 + 2 x^4 / 189 below
// |x| = 1e-4.  For large |x| the 1/sinh^2 term underflows long before sinh
// itself overflows (~710); switching to the exact limit 1/x^2 at |x| > 350
// keeps every intermediate finite.
double langevin_deriv(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 1.0 / 3.0 - x2 / 15.0 + (2.0 / 189.0) * x2 * x2;
    }
    if (ax > 350.0) return 1.0 / (x * x);
    const double s = std::sinh(x);
    return 1.0 / (x * x) - 1.0 / (s * s);
}

double kernel_mg_deriv(double x, const PhysicalParams& p) {
    return p.a * p.beta * p.G * langevin_deriv(p.beta * p.G * x);
}

// With the unitary convention F(f)(w) = (2*pi)^{-1/2} \int f(x) e^{-iwx} dx,
//
//   F(L')(w) = sqrt(pi/2) * (w * coth(pi*w/2) - |w|)
//            = sqrt(2*pi) * |w| / (e^{pi*|w|} - 1).
//
// The expm1 form is the one we evaluate: it has no subtraction for small w
// (where coth - 1 would cancel) and underflows gracefully for large w.  The
// removable singularity at w = 0 has the value sqrt(2/pi).
double langevin_deriv_fourier(double omega) {
    const double aw = std::abs(omega);
    if (aw == 0.0) return std::sqrt(2.0 / std::numbers::pi);
    return std::sqrt(2.0 * std::numbers::pi) * aw / std::expm1(std::numbers::pi * aw);
}

// Dilation rule: M'_G(x) = a*beta*G * L'(beta*G*x), so the 1/(beta*G) scale
// factor from the substitution cancels the a*beta*G amplitude, leaving
// F(M'_G)(w) = a * F(L')(w / (beta*G)).
double kernel_fourier(double omega, const PhysicalParams& p) {
    return p.a * langevin_deriv_fourier(omega / (p.beta * p.G));
}

} // namespace mpi1d
