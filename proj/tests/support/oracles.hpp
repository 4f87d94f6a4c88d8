// Independent numerical oracles for the test suite.
//
// Everything here is deliberately written against different algorithms than
// the library under test: adaptive Simpson instead of trapezoid sums, a
// series/continued-fraction sine integral, and a cyclic Jacobi eigensolver
// instead of LAPACK.  Frozen reference constants were computed once with
// 50-digit arithmetic and are hard-coded.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace oracle {

// ---------------------------------------------------------------------------
// Adaptive Simpson quadrature with error control by interval halving.
// ---------------------------------------------------------------------------

namespace detail {

template <typename Fn>
double simpson_step(Fn&& f, double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename Fn>
double adaptive(Fn&& f, double a, double b, double fa, double fm, double fb, double whole,
                double tol, double floor, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson_step(f, a, m, fa, flm, fm);
    const double right = simpson_step(f, m, b, fm, frm, fb);
    const double delta = left + right - whole;
    // Accept on the per-interval budget (halved at each split so the leaf
    // errors sum to the caller's tolerance), or when the fifth difference is
    // already inside the caller's *total* budget (Gander/Gautschi-style
    // floor).  The floor matters for integrands with a fixed absolute
    // evaluation noise -- cancellation inside a closed form, or a nested
    // quadrature: there delta and the halved tolerance both shrink by 2x per
    // level, so without it the recursion could never terminate no matter how
    // deep it goes.  The width test stops at intervals no longer splittable
    // in double precision.
    if (std::abs(delta) <= 15.0 * tol || std::abs(delta) <= floor || m <= a || b <= m) {
        return left + right + delta / 15.0;
    }
    if (depth <= 0) throw std::runtime_error("adaptive Simpson: max depth exceeded");
    return adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, floor, depth - 1) +
           adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, floor, depth - 1);
}

} // namespace detail

template <typename Fn>
double integrate(Fn&& f, double a, double b, double tol = 1e-12, int depth = 30) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = detail::simpson_step(f, a, b, fa, fm, fb);
    return detail::adaptive(f, a, b, fa, fm, fb, whole, tol, tol, depth);
}

// ---------------------------------------------------------------------------
// Sine integral Si(x) = int_0^x sin(t)/t dt.
// Power series for x < 12; for larger x the Lentz continued fraction for the
// auxiliary complex integral (the classic cisi construction), which converges
// rapidly and stays accurate for arbitrarily large arguments.
// ---------------------------------------------------------------------------

inline double sine_integral(double x) {
    if (x < 0.0) return -sine_integral(-x);
    if (x == 0.0) return 0.0;
    if (x < 12.0) {
        // Si(x) = sum_{k>=0} (-1)^k x^{2k+1} / ((2k+1) (2k+1)!)
        double term = x;
        double sum = x;
        for (int k = 1; k < 200; ++k) {
            const double n = 2.0 * k;
            term *= -x * x / (n * (n + 1.0));
            sum += term / (n + 1.0);
            if (std::abs(term) < 1e-18 * std::abs(sum)) return sum;
        }
        throw std::runtime_error("sine_integral: series did not converge");
    }
    // Evaluate E1(ix) by the Lentz modified continued fraction, then
    // Si(x) = pi/2 + Im(h * (cos x - i sin x)) with h the fraction value.
    using cplx = std::complex<double>;
    const double eps = std::numeric_limits<double>::epsilon();
    const double fpmin = std::numeric_limits<double>::min() / eps;
    cplx b(1.0, x);
    cplx c(1.0 / fpmin, 0.0);
    cplx d = 1.0 / b;
    cplx h = d;
    for (int i = 2; i <= 200; ++i) {
        const double a = -static_cast<double>(i - 1) * static_cast<double>(i - 1);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const cplx del = c * d;
        h *= del;
        if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < eps) {
            h *= cplx(std::cos(x), -std::sin(x));
            return std::numbers::pi / 2.0 + h.imag();
        }
    }
    throw std::runtime_error("sine_integral: continued fraction did not converge");
}

// ---------------------------------------------------------------------------
// Quadrature oracle for the Fourier transform of the Langevin derivative,
// unitary convention: F(w) = (2/sqrt(2 pi)) int_0^inf L'(x) cos(w x) dx.
// The body [0, X] is integrated adaptively; beyond X the kernel is 1/x^2 to
// better than 1e-28 (the sinh part is ~4 e^{-2X}), and the tail
// int_X^inf cos(w x)/x^2 dx = cos(w X)/X - w (pi/2 - Si(w X)) is exact.
// ---------------------------------------------------------------------------

inline double langevin_deriv_oracle(double x) {
    // Independent evaluation (different series order and switch point than
    // the library).  The switch sits where the two error envelopes cross:
    // below 1/8 the Bernoulli series through x^8 truncates at ~2.4e-5 x^10
    // (< 3e-14 at the switch); above it the 1/x^2 - 1/sinh^2 cancellation
    // leaves an absolute rounding error of order eps/x^2 (~2e-14 at the
    // switch, falling off quadratically).  Either side hands the quadrature
    // a uniformly ~1e-14-accurate integrand with no noisy band -- put the
    // switch much lower and the closed form's noise just above it grows like
    // 1/x^2 and poisons tight-tolerance integration.
    if (std::abs(x) < 0.125) {
        const double x2 = x * x;
        return 1.0 / 3.0 +
               x2 * (-1.0 / 15.0 +
                     x2 * (2.0 / 189.0 + x2 * (-1.0 / 675.0 + x2 * (2.0 / 10395.0))));
    }
    const double s = std::sinh(x);
    return 1.0 / (x * x) - 1.0 / (s * s);
}

inline double fourier_lprime_quadrature(double w, double body_end = 60.0) {
    const double body = integrate(
        [w](double x) { return langevin_deriv_oracle(x) * std::cos(w * x); }, 0.0, body_end,
        1e-14);
    const double tail =
        w == 0.0 ? 1.0 / body_end
                 : std::cos(w * body_end) / body_end -
                       w * (std::numbers::pi / 2.0 - sine_integral(w * body_end));
    return (2.0 / std::sqrt(2.0 * std::numbers::pi)) * (body + tail);
}

// ---------------------------------------------------------------------------
// Cyclic Jacobi eigenvalue iteration for small symmetric matrices (row-major).
// Returns eigenvalues sorted ascending.  O(n^3) per sweep; intended for n
// up to ~100 in tests.
// ---------------------------------------------------------------------------

inline std::vector<double> jacobi_eigenvalues(std::size_t n, std::vector<double> a) {
    if (a.size() != n * n) throw std::invalid_argument("jacobi: size mismatch");
    auto off2 = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
        }
        return 2.0 * s;
    };
    double norm2 = 0.0;
    for (double v : a) norm2 += v * v;
    const double stop = 1e-26 * (norm2 > 0.0 ? norm2 : 1.0);
    for (int sweep = 0; sweep < 50 && off2() > stop; ++sweep) {
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0) continue;
                const double app = a[p * n + p], aqq = a[q * n + q];
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p], akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k], aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a[i * n + i];
    std::sort(eig.begin(), eig.end());
    return eig;
}

// Plain triple-loop matrix product (row-major), independent of BLAS.
inline std::vector<double> naive_matmul(std::size_t m, std::size_t k, std::size_t n,
                                        const std::vector<double>& a,
                                        const std::vector<double>& b) {
    if (a.size() != m * k || b.size() != k * n) {
        throw std::invalid_argument("naive_matmul: size mismatch");
    }
    std::vector<double> c(m * n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t l = 0; l < k; ++l) {
            const double ail = a[i * k + l];
            for (std::size_t j = 0; j < n; ++j) c[i * n + j] += ail * b[l * n + j];
        }
    }
    return c;
}

// ---------------------------------------------------------------------------
// Frozen reference values (50-digit arithmetic, rounded to double).
// ---------------------------------------------------------------------------

struct FrozenPoint {
    double x;
    double value;
};

// Unitary Fourier transform of L' at selected frequencies.
inline constexpr std::array<FrozenPoint, 9> kFourierLprime = {{
    {0.0, 0.79788456080286536},
    {0.25, 0.52515507006940874},
    {0.5, 0.32891263010147666},
    {1.0, 0.11321363410826364},
    {2.0, 0.0093794851564894459},
    {3.0, 0.0006069000540139925},
    {5.0, 1.888766341065405e-6},
    {7.0, 4.9380274229445142e-9},
    {10.0, 5.6928061524059746e-13},
}};

// Sine integral at selected arguments (covers both evaluation branches).
inline constexpr std::array<FrozenPoint, 9> kSineIntegral = {{
    {0.5, 0.49310741804306669},
    {2.0, 1.6054129768026948},
    {5.0, 1.5499312449446741},
    {8.0, 1.5741868217069421},
    {12.0, 1.5049712415263734},
    {15.0, 1.6181944437083687},
    {40.0, 1.5869851193547845},
    {100.0, 1.5622254668890563},
    {400.0, 1.5721148692738118},
}};

inline constexpr double kEllipticKHalfSqrt2 = 1.8540746773013719; // K(1/sqrt 2)
inline constexpr double kWidomRate20 = 0.23847518975657075;       // rate at beta*A = 20

} // namespace oracle
