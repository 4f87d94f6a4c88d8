#include "mpi1d/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "mpi1d/linalg.hpp"

namespace mpi1d {

namespace {

// Deterministic row-chunk parallelism: the partition only decides which
// thread computes a row, never how it is computed, so results are bit-exact
// regardless of the thread count.
void parallel_rows(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
    const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    if (hw == 1 || n < 128) {
        body(0, n);
        return;
    }
    const std::size_t n_threads = std::min(hw, n);
    const std::size_t chunk = (n + n_threads - 1) / n_threads;
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

void require_fov_grid(const SpaceGrid& sg, const PhysicalParams& p, const char* who) {
    const double half = p.fov_half_width();
    const double tol = 1e-9 * half;
    if (std::abs(sg.left + half) > tol || std::abs(sg.right - half) > tol) {
        throw std::invalid_argument(std::string(who) +
                                    " requires the drive-field FOV grid [-A/G, A/G]");
    }
}

} // namespace

std::vector<TimeSample> time_sampling_stencils(TrajectoryKind kind, const TimeGrid& tg,
                                               const SpaceGrid& sg, const PhysicalParams& p) {
    p.validate();
    const std::size_t n = sg.n_points;
    const double h = sg.h();
    const double tol = 1e-9 * h;
    std::vector<TimeSample> st(tg.n_points);
    for (std::size_t i = 0; i < tg.n_points; ++i) {
        const double t = tg.point(i);
        const double y = gamma_g(kind, t, p);
        if (y < sg.left - tol || y > sg.right + tol) {
            throw std::invalid_argument(
                "trajectory leaves the spatial grid: gamma(t)/G = " + std::to_string(y) +
                " at t = " + std::to_string(t));
        }
        auto j = static_cast<std::size_t>(
            std::clamp(std::floor((y - sg.left) / h), 0.0, static_cast<double>(n - 2)));
        const double lam = std::clamp((y - sg.point(j)) / h, 0.0, 1.0);
        st[i] = {j, lam, gamma_g_deriv(kind, t, p)};
    }
    return st;
}

OperatorMatrix build_q_conv(const SpaceGrid& g, const PhysicalParams& p, GridTag tag) {
    p.validate();
    const std::size_t n = g.n_points;
    const auto x = g.points();
    const auto w = g.weights();
    OperatorMatrix q(n, n, tag, tag);
    parallel_rows(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            double* row = q.row_ptr(i);
            for (std::size_t j = 0; j < n; ++j) {
                row[j] = w[j] * kernel_mg_deriv(x[i] - x[j], p);
            }
        }
    });
    return q;
}

OperatorMatrix build_restriction(const SpaceGrid& outer, const SpaceGrid& inner) {
    const double h = outer.h();
    if (std::abs(inner.h() - h) > 1e-9 * h) {
        throw std::invalid_argument("restriction: inner grid spacing does not match outer grid");
    }
    const double off = (inner.left - outer.left) / h;
    const double offr = std::round(off);
    if (offr < 0.0 || std::abs(off - offr) > 1e-6) {
        throw std::invalid_argument("restriction: inner grid is not node-aligned with outer grid");
    }
    const auto offset = static_cast<std::size_t>(offr);
    if (offset + inner.n_points > outer.n_points) {
        throw std::invalid_argument("restriction: inner grid extends past the outer grid");
    }
    for (std::size_t i : {std::size_t{0}, inner.n_points - 1}) {
        if (std::abs(outer.point(offset + i) - inner.point(i)) > 1e-9 * h) {
            throw std::invalid_argument("restriction: grids disagree at a shared node");
        }
    }
    OperatorMatrix r(inner.n_points, outer.n_points, GridTag::space, GridTag::fov);
    for (std::size_t i = 0; i < inner.n_points; ++i) r.at(i, offset + i) = 1.0;
    return r;
}

OperatorMatrix build_q_time(TrajectoryKind kind, const TimeGrid& tg, const SpaceGrid& sg,
                            const PhysicalParams& p) {
    p.validate();
    const auto st = time_sampling_stencils(kind, tg, sg, p);
    OperatorMatrix q(tg.n_points, sg.n_points, GridTag::fov, GridTag::time);
    for (std::size_t i = 0; i < tg.n_points; ++i) {
        const auto& s = st[i];
        q.at(i, s.cell) = s.deriv * (1.0 - s.lam);
        q.at(i, s.cell + 1) = s.deriv * s.lam;
    }
    return q;
}

OperatorMatrix build_q_fft(const TimeGrid& tg, std::size_t n_max) {
    if (n_max < 1) throw std::invalid_argument("build_q_fft: n_max must be >= 1");
    const double omega0 = 2.0 * std::numbers::pi / tg.T;
    const double scale = 2.0 / tg.T;
    const auto t = tg.points();
    const auto wt = tg.weights();
    OperatorMatrix q(n_max, tg.n_points, GridTag::time, GridTag::freq);
    parallel_rows(n_max, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t n = lo; n < hi; ++n) {
            double* row = q.row_ptr(n);
            const double freq = static_cast<double>(n + 1) * omega0;
            for (std::size_t j = 0; j < tg.n_points; ++j) {
                row[j] = scale * std::sin(freq * t[j]) * wt[j];
            }
        }
    });
    return q;
}

OperatorMatrix build_q_chebt(const SpaceGrid& sg, std::size_t n_max, const PhysicalParams& p) {
    p.validate();
    if (n_max < 1) throw std::invalid_argument("build_q_chebt: n_max must be >= 1");
    require_fov_grid(sg, p, "build_q_chebt");
    const std::size_t n = sg.n_points;
    const auto w = sg.weights();
    const double scale = -2.0 / p.T;
    OperatorMatrix q(n_max, n, GridTag::fov, GridTag::cheb);
    // The grid is the FOV grid, so the normalized coordinate u_j = G*x_j/A is
    // computed directly as -1 + 2j/(N-1); the endpoints are exactly +-1 and
    // the weight sqrt(1-u^2) vanishes there identically.
    std::vector<double> u(n), s(n);
    for (std::size_t j = 0; j < n; ++j) {
        u[j] = -1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(n - 1);
        s[j] = std::sqrt(std::max(0.0, 1.0 - u[j] * u[j]));
    }
    // Column-wise second-kind recurrence U_k = 2u U_{k-1} - U_{k-2}.
    std::vector<double> um1(n, 1.0), um2(n, 0.0);
    for (std::size_t k = 1; k <= n_max; ++k) {
        double* row = q.row_ptr(k - 1);
        for (std::size_t j = 0; j < n; ++j) {
            row[j] = scale * um1[j] * s[j] * w[j];
        }
        for (std::size_t j = 0; j < n; ++j) {
            const double next = 2.0 * u[j] * um1[j] - um2[j];
            um2[j] = um1[j];
            um1[j] = next;
        }
    }
    return q;
}

OperatorMatrix build_s_conv(const SpaceGrid& fov, const PhysicalParams& p, bool symmetrized) {
    p.validate();
    require_fov_grid(fov, p, "build_s_conv");
    const std::size_t n = fov.n_points;
    if (!symmetrized) {
        OperatorMatrix q = build_q_conv(fov, p, GridTag::fov);
        q.note = "plain";
        return q;
    }
    const auto x = fov.points();
    const auto w = fov.weights();
    std::vector<double> sw(n);
    for (std::size_t j = 0; j < n; ++j) sw[j] = std::sqrt(w[j]);
    OperatorMatrix q(n, n, GridTag::fov, GridTag::fov);
    // Entries k(x_i - x_j) * (sw_i * sw_j).  The kernel is even, x_i - x_j is
    // the exact negation of x_j - x_i, and the weight product commutes, so
    // the assembled matrix is symmetric to the last bit.
    parallel_rows(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            double* row = q.row_ptr(i);
            for (std::size_t j = 0; j < n; ++j) {
                row[j] = kernel_mg_deriv(x[i] - x[j], p) * (sw[i] * sw[j]);
            }
        }
    });
    q.note = "symmetrized";
    return q;
}

OperatorMatrix build_s_time(TrajectoryKind kind, const TimeGrid& tg, const SpaceGrid& sg,
                            const PhysicalParams& p) {
    const OperatorMatrix c = build_s_conv(sg, p, false);
    const auto st = time_sampling_stencils(kind, tg, sg, p);
    const std::size_t n = sg.n_points;
    OperatorMatrix out(tg.n_points, n, GridTag::fov, GridTag::time);
    // Each row of the time-sampling factor has two entries, so S^t rows are
    // combinations of two convolution rows; no dense M x N factor is formed.
    parallel_rows(tg.n_points, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const auto& s = st[i];
            const double a0 = s.deriv * (1.0 - s.lam);
            const double a1 = s.deriv * s.lam;
            const double* c0 = c.row_ptr(s.cell);
            const double* c1 = c.row_ptr(s.cell + 1);
            double* row = out.row_ptr(i);
            for (std::size_t j = 0; j < n; ++j) row[j] = a0 * c0[j] + a1 * c1[j];
        }
    });
    out.note = "time-sampled convolution";
    return out;
}

OperatorMatrix build_s_freq(TrajectoryKind kind, const TimeGrid& tg, const SpaceGrid& sg,
                            std::size_t n_max, const PhysicalParams& p, FreqPath path) {
    p.validate();
    if (n_max < 1) throw std::invalid_argument("build_s_freq: n_max must be >= 1");
    if (path == FreqPath::chebyshev) {
        if (kind == TrajectoryKind::sawtooth) {
            throw std::invalid_argument(
                "build_s_freq: the chebyshev path is only defined for the cosine trajectory");
        }
        const OperatorMatrix qc = build_q_chebt(sg, n_max, p);
        const OperatorMatrix c = build_s_conv(sg, p, false);
        OperatorMatrix out = matmul(qc, c);
        out.codomain = GridTag::freq;
        out.note = "path=chebyshev";
        return out;
    }
    // Sine-analysis path: contract the analysis rows with the two-entry
    // interpolation stencils first (cost n_max * M), then multiply by the
    // convolution operator.
    const OperatorMatrix qf = build_q_fft(tg, n_max);
    const auto st = time_sampling_stencils(kind, tg, sg, p);
    const std::size_t n = sg.n_points;
    OperatorMatrix w(n_max, n, GridTag::fov, GridTag::freq);
    parallel_rows(n_max, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t r = lo; r < hi; ++r) {
            const double* f = qf.row_ptr(r);
            double* row = w.row_ptr(r);
            for (std::size_t i = 0; i < tg.n_points; ++i) {
                const auto& s = st[i];
                const double v = f[i] * s.deriv;
                row[s.cell] += v * (1.0 - s.lam);
                row[s.cell + 1] += v * s.lam;
            }
        }
    });
    const OperatorMatrix c = build_s_conv(sg, p, false);
    OperatorMatrix out(n_max, n, GridTag::fov, GridTag::freq);
    linalg::gemm(n_max, n, n, w.data.data(), c.data.data(), out.data.data());
    out.note = "path=fft-time";
    return out;
}

} // namespace mpi1d
