#include "mpi1d/spectral.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mpi1d/linalg.hpp"

namespace mpi1d {

double SpectrumReport::noise_floor() const {
    if (sigmas.empty()) return 0.0;
    return 1e3 * DBL_EPSILON * sigmas.front();
}

std::size_t SpectrumReport::trusted_count() const {
    const double floor = noise_floor();
    std::size_t k = 0;
    while (k < sigmas.size() && sigmas[k] >= floor) ++k;
    return k;
}

SpectrumReport singular_values(const OperatorMatrix& m) {
    SpectrumReport rep;
    rep.sigmas = linalg::singular_values(m.rows, m.cols, m.data.data());
    rep.source = to_string(m.codomain) + "<-" + to_string(m.domain);
    return rep;
}

std::vector<double> sym_eigenvalues(const OperatorMatrix& m) {
    if (m.rows != m.cols) {
        throw std::invalid_argument("sym_eigenvalues: operator is not square");
    }
    double scale = 0.0;
    for (double v : m.data) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = i + 1; j < m.cols; ++j) {
            if (std::abs(m.at(i, j) - m.at(j, i)) > 1e-12 * scale) {
                throw std::invalid_argument("sym_eigenvalues: operator is not symmetric");
            }
        }
    }
    return linalg::sym_eigenvalues(m.rows, m.data.data());
}

namespace {

// Arithmetic-geometric mean, quadratically convergent.
double agm(double a, double b) {
    while (std::abs(a - b) > DBL_EPSILON * a) {
        const double am = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = am;
    }
    return 0.5 * (a + b);
}

} // namespace

// AGM evaluation: K(t) = pi / (2 * AGM(1, sqrt(1 - t^2))), full double
// accuracy in a handful of iterations.
double elliptic_k(double t) {
    if (!(t >= 0.0) || t >= 1.0) {
        throw std::invalid_argument("elliptic_k: modulus must satisfy 0 <= t < 1");
    }
    return std::numbers::pi / (2.0 * agm(1.0, std::sqrt((1.0 - t) * (1.0 + t))));
}

// Rate r in ln sigma_n ~ -r n:  r = pi * K(sech(x)) / K(tanh(x)).
// sech and tanh are complementary moduli (sech^2 + tanh^2 = 1), so with
// K(k) = pi / (2 AGM(1, k')) the ratio collapses to AGM(1, sech) over
// AGM(1, tanh) directly -- no 1 - tanh^2 subtraction anywhere, which is what
// would otherwise shred the tiny complement when tanh(x) is within a few ulps
// of 1.  Past x = 18 even sech underflows toward the AGM's tolerance, so the
// expansion K(k) ~ ln(4/k') with k' = sech(x) takes over:
//   K(sech) -> pi/2,  ln(4 cosh x) = x + ln 2 + log1p(e^{-2x}).
double widom_rate(double beta_times_a) {
    if (!(beta_times_a > 0.0)) {
        throw std::invalid_argument("widom_rate: beta*A must be > 0");
    }
    const double x = beta_times_a;
    if (x >= 18.0) {
        const double pi = std::numbers::pi;
        return pi * (pi / 2.0) / (x + std::log(2.0) + std::log1p(std::exp(-2.0 * x)));
    }
    const double sech = 1.0 / std::cosh(x);
    const double tanh = std::tanh(x);
    return std::numbers::pi * agm(1.0, sech) / agm(1.0, tanh);
}

FitResult fit_decay_rate(const SpectrumReport& rep, std::size_t n0, std::size_t n1) {
    const std::size_t len = rep.sigmas.size();
    if (n0 < 1 || n0 >= n1 || n1 > len) {
        throw std::invalid_argument("fit_decay_rate: need 1 <= n0 < n1 <= " +
                                    std::to_string(len));
    }
    const double floor = rep.noise_floor();
    for (std::size_t n = n0; n <= n1; ++n) {
        if (!(rep.sigmas[n - 1] >= floor) || rep.sigmas[n - 1] <= 0.0) {
            throw std::runtime_error(
                "fit_decay_rate: window [" + std::to_string(n0) + ", " + std::to_string(n1) +
                "] touches the numerical noise floor at index " + std::to_string(n) +
                " (values from index " + std::to_string(rep.trusted_count() + 1) +
                " are untrusted)");
        }
    }
    const auto m = static_cast<double>(n1 - n0 + 1);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t n = n0; n <= n1; ++n) {
        const auto x = static_cast<double>(n);
        const double y = std::log(rep.sigmas[n - 1]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    FitResult fit;
    fit.n0 = n0;
    fit.n1 = n1;
    fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / m;
    double ss = 0.0;
    for (std::size_t n = n0; n <= n1; ++n) {
        const double r = std::log(rep.sigmas[n - 1]) -
                         (fit.intercept + fit.slope * static_cast<double>(n));
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / m);
    return fit;
}

namespace {

// Gram matrix B = (Q^time)^T Q^time.  Each row of Q^time holds only the two
// interpolation entries, so B is symmetric tridiagonal; it is accumulated in
// O(M) from the stencils.
struct TimeGram {
    std::vector<double> diag;
    std::vector<double> off;
};

TimeGram build_time_gram(const std::vector<TimeSample>& st, std::size_t n) {
    TimeGram g;
    g.diag.assign(n, 0.0);
    g.off.assign(n - 1, 0.0);
    for (const auto& s : st) {
        const double a0 = s.deriv * (1.0 - s.lam);
        const double a1 = s.deriv * s.lam;
        g.diag[s.cell] += a0 * a0;
        g.diag[s.cell + 1] += a1 * a1;
        g.off[s.cell] += a0 * a1;
    }
    return g;
}

} // namespace

// Factorization trick: with B = (Q^time)^T Q^time = L D L^T (tridiagonal
// LDL^T, pivots clamped at zero since B is positive semidefinite up to
// roundoff), the Gram matrix of S^t = Q^time C satisfies
//
//   (S^t)^T S^t = C^T B C = (D^{1/2} L^T C)^T (D^{1/2} L^T C),
//
// so S^t shares its singular values with the N x N matrix D^{1/2} L^T C,
// whose rows are sqrt(d_i) * (C_i + l_i * C_{i+1}).  This replaces the SVD
// of an (K*N) x N matrix by an N x N one at no loss of accuracy.
std::vector<double> st_singular_values(TrajectoryKind kind, const TimeGrid& tg,
                                       const SpaceGrid& sg, const PhysicalParams& p) {
    const std::size_t n = sg.n_points;
    const auto st = time_sampling_stencils(kind, tg, sg, p);
    const TimeGram gram = build_time_gram(st, n);

    std::vector<double> d(n), l(n - 1);
    double prev = std::max(0.0, gram.diag[0]);
    d[0] = prev;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        l[i] = prev > 0.0 ? gram.off[i] / prev : 0.0;
        prev = std::max(0.0, gram.diag[i + 1] - l[i] * l[i] * prev);
        d[i + 1] = prev;
    }

    const OperatorMatrix c = build_s_conv(sg, p, false);
    std::vector<double> g(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        const double sd = std::sqrt(d[i]);
        const double* ci = c.row_ptr(i);
        double* gi = g.data() + i * n;
        if (i + 1 < n) {
            const double li = l[i];
            const double* cj = c.row_ptr(i + 1);
            for (std::size_t j = 0; j < n; ++j) gi[j] = sd * (ci[j] + li * cj[j]);
        } else {
            for (std::size_t j = 0; j < n; ++j) gi[j] = sd * ci[j];
        }
    }
    return linalg::singular_values(n, n, std::move(g));
}

std::vector<double> qtime_singular_values(TrajectoryKind kind, const TimeGrid& tg,
                                          const SpaceGrid& sg, const PhysicalParams& p) {
    const auto st = time_sampling_stencils(kind, tg, sg, p);
    TimeGram gram = build_time_gram(st, sg.n_points);
    std::vector<double> eig =
        linalg::tridiag_eigenvalues(std::move(gram.diag), std::move(gram.off));
    std::vector<double> s(eig.size());
    for (std::size_t i = 0; i < eig.size(); ++i) {
        s[i] = std::sqrt(std::max(0.0, eig[eig.size() - 1 - i]));
    }
    return s;
}

StudyOperator study_operator_from_string(const std::string& s) {
    if (s == "conv") return StudyOperator::conv;
    if (s == "time") return StudyOperator::time;
    if (s == "freq") return StudyOperator::freq;
    throw std::invalid_argument("unknown operator kind '" + s +
                                "' (expected conv, time, or freq)");
}

std::string to_string(StudyOperator op) {
    switch (op) {
        case StudyOperator::conv: return "conv";
        case StudyOperator::time: return "time";
        case StudyOperator::freq: return "freq";
    }
    throw std::logic_error("unreachable study operator");
}

ConvergenceTable convergence_study(StudyOperator op, TrajectoryKind traj,
                                   const PhysicalParams& p,
                                   const std::vector<std::size_t>& n_list, std::size_t m_top,
                                   std::size_t oversample, Window window, std::size_t n_max) {
    p.validate();
    if (n_list.empty()) throw std::invalid_argument("convergence_study: empty n_list");
    for (std::size_t k = 0; k + 1 < n_list.size(); ++k) {
        if (n_list[k] >= n_list[k + 1]) {
            throw std::invalid_argument("convergence_study: n_list must be strictly increasing");
        }
    }

    ConvergenceTable table;
    table.m_top = m_top;
    table.rows.reserve(n_list.size());
    // Runs are sequential: every singular value solve is itself BLAS-parallel,
    // and two N=5001 problems in flight would double the dense-matrix
    // footprint for little wall-clock gain.
    for (std::size_t n : n_list) {
        const SpaceGrid fov = SpaceGrid::fov(n, p);
        std::vector<double> sig;
        switch (op) {
            case StudyOperator::conv: {
                // The symmetrized operator is exactly symmetric, so its
                // singular values are the eigenvalue magnitudes; the
                // symmetric solver is markedly cheaper than a general SVD.
                const OperatorMatrix s = build_s_conv(fov, p, true);
                sig = linalg::sym_eigenvalues(s.rows, s.data.data());
                for (double& v : sig) v = std::abs(v);
                std::sort(sig.begin(), sig.end(), std::greater<>());
                break;
            }
            case StudyOperator::time: {
                const TimeGrid tg(oversample, n, window, p.T);
                sig = st_singular_values(traj, tg, fov, p);
                break;
            }
            case StudyOperator::freq: {
                const TimeGrid tg(oversample, n, window, p.T);
                const OperatorMatrix s = build_s_freq(traj, tg, fov, n_max, p);
                sig = linalg::singular_values(s.rows, s.cols, s.data.data());
                break;
            }
        }
        if (sig.size() > m_top) sig.resize(m_top);
        table.rows.push_back({n, std::move(sig)});
    }

    for (std::size_t k = 0; k + 1 < table.rows.size(); ++k) {
        const auto& coarse = table.rows[k].sigmas;
        const auto& fine = table.rows[k + 1].sigmas;
        const std::size_t m = std::min(coarse.size(), fine.size());
        double dev = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            dev = std::max(dev, std::abs(coarse[i] - fine[i]) / fine[i]);
        }
        table.max_rel_dev.push_back(dev);
    }
    return table;
}

} // namespace mpi1d
