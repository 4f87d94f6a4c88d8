#pragma once

#include <numbers>
#include <stdexcept>

namespace mpi1d {

// Physical configuration of the 1D scanner model: drive-field amplitude A,
// selection-gradient strength G, excitation period T, and the particle
// response constants a (signal scale) and beta (saturation steepness).
struct PhysicalParams {
    double A = 20.0;
    double G = 1.0;
    double T = 1.0;
    double a = 1.0;
    double beta = 1.0;

    void validate() const;

    // Drive-field field-of-view is [-A/G, A/G].
    double fov_half_width() const { return A / G; }
    double omega0() const { return 2.0 * std::numbers::pi / T; }

    bool operator==(const PhysicalParams&) const = default;
};

// Langevin function L(x) = coth(x) - 1/x, the scalar magnetization response.
double langevin(double x);

// L'(x) = 1/x^2 - 1/sinh(x)^2, with L'(0) = 1/3.
double langevin_deriv(double x);

// Convolution kernel of the model: M'_G(x) = a*beta*G * L'(beta*G*x).
double kernel_mg_deriv(double x, const PhysicalParams& p);

// Unitary-convention Fourier transform of L' (see physics.cpp for the form used).
double langevin_deriv_fourier(double omega);

// Transform of the scaled kernel: a * F(L')(omega / (beta*G)).
double kernel_fourier(double omega, const PhysicalParams& p);

} // namespace mpi1d
