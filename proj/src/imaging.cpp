#include "mpi1d/imaging.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <stdexcept>

#include "mpi1d/linalg.hpp"
#include "mpi1d/rng.hpp"

namespace mpi1d {

PhantomKind phantom_kind_from_string(const std::string& s) {
    if (s == "gaussian") return PhantomKind::gaussian;
    if (s == "rect") return PhantomKind::rect;
    if (s == "two_bumps") return PhantomKind::two_bumps;
    throw std::invalid_argument("unknown phantom kind '" + s +
                                "' (expected gaussian, rect, or two_bumps)");
}

namespace {

void require_support_inside(const BumpSpec& b, const SpaceGrid& g, bool hard_edges) {
    if (!(b.width > 0.0)) throw std::invalid_argument("phantom bump width must be > 0");
    // A rect has sharp edges that must lie inside the grid; a gaussian has
    // unbounded tails, so only its center is constrained (the endpoint
    // warning below catches tails that are numerically non-negligible).
    const double lo = hard_edges ? b.center - 0.5 * b.width : b.center;
    const double hi = hard_edges ? b.center + 0.5 * b.width : b.center;
    if (lo < g.left || hi > g.right) {
        throw std::invalid_argument("phantom support is not inside the field of view");
    }
}

void add_gaussian(std::vector<double>& vals, const BumpSpec& b, const SpaceGrid& g) {
    for (std::size_t j = 0; j < g.n_points; ++j) {
        const double u = (g.point(j) - b.center) / b.width;
        vals[j] += b.amplitude * std::exp(-0.5 * u * u);
    }
}

} // namespace

Phantom make_phantom(PhantomKind kind, const std::vector<BumpSpec>& bumps,
                     const SpaceGrid& grid) {
    const std::size_t need = kind == PhantomKind::two_bumps ? 2 : 1;
    if (bumps.size() != need) {
        throw std::invalid_argument("phantom kind needs " + std::to_string(need) +
                                    " bump(s), got " + std::to_string(bumps.size()));
    }
    Phantom ph;
    ph.grid = grid;
    ph.values.assign(grid.n_points, 0.0);
    switch (kind) {
        case PhantomKind::gaussian:
            require_support_inside(bumps[0], grid, false);
            add_gaussian(ph.values, bumps[0], grid);
            break;
        case PhantomKind::rect: {
            const auto& b = bumps[0];
            require_support_inside(b, grid, true);
            for (std::size_t j = 0; j < grid.n_points; ++j) {
                if (std::abs(grid.point(j) - b.center) <= 0.5 * b.width) {
                    ph.values[j] += b.amplitude;
                }
            }
            break;
        }
        case PhantomKind::two_bumps:
            for (const auto& b : bumps) {
                require_support_inside(b, grid, false);
                add_gaussian(ph.values, b, grid);
            }
            break;
    }
    double peak = 0.0;
    for (double v : ph.values) peak = std::max(peak, std::abs(v));
    const double edge = std::max(std::abs(ph.values.front()), std::abs(ph.values.back()));
    // The model assumes the density is supported strictly inside the FOV;
    // numerically non-negligible mass at the boundary is allowed but flagged.
    if (peak > 0.0 && edge > 1e-12 * peak) {
        ph.warning = "phantom support reaches the field-of-view boundary";
    }
    return ph;
}

Signal forward(const Phantom& c, const OperatorMatrix& op, const TimeGrid* tg) {
    if (op.cols != c.grid.n_points) {
        throw std::invalid_argument("forward: operator domain size " + std::to_string(op.cols) +
                                    " does not match phantom grid size " +
                                    std::to_string(c.grid.n_points));
    }
    Signal s;
    s.samples = op.apply(c.values);
    if (op.codomain == GridTag::time) {
        if (tg == nullptr) {
            throw std::invalid_argument("forward: a time-domain operator needs the time grid");
        }
        if (tg->n_points != op.rows) {
            throw std::invalid_argument("forward: time grid size does not match operator rows");
        }
        s.kind = SignalKind::time;
        s.abscissa = tg->points();
    } else {
        s.kind = SignalKind::freq;
        s.abscissa.resize(op.rows);
        for (std::size_t i = 0; i < op.rows; ++i) s.abscissa[i] = static_cast<double>(i + 1);
    }
    return s;
}

Signal add_noise(const Signal& s, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0)) throw std::invalid_argument("add_noise: sigma must be >= 0");
    Signal out = s;
    out.noise_level = sigma;
    out.seed = seed;
    if (sigma == 0.0) return out;
    double peak = 0.0;
    for (double v : s.samples) peak = std::max(peak, std::abs(v));
    const double scale = sigma * peak;
    GaussianStream rng(seed);
    for (double& v : out.samples) v += scale * rng.normal();
    return out;
}

namespace {

Phantom from_filtered_svd(const OperatorMatrix& op, const Signal& s, const SpaceGrid& grid,
                          const std::vector<double>& filter, const linalg::SvdEconomy& svd,
                          std::string warning) {
    Phantom ph;
    ph.grid = grid;
    ph.warning = std::move(warning);
    ph.values.assign(op.cols, 0.0);
    for (std::size_t i = 0; i < filter.size(); ++i) {
        if (filter[i] == 0.0) continue;
        double proj = 0.0; // u_i^T s
        for (std::size_t r = 0; r < op.rows; ++r) proj += svd.u[r * svd.r + i] * s.samples[r];
        const double coef = filter[i] * proj;
        const double* vrow = svd.vt.data() + i * op.cols;
        for (std::size_t j = 0; j < op.cols; ++j) ph.values[j] += coef * vrow[j];
    }
    return ph;
}

void require_signal_matches(const OperatorMatrix& op, const Signal& s,
                            const SpaceGrid& grid) {
    if (s.samples.size() != op.rows) {
        throw std::invalid_argument("reconstruct: signal length " +
                                    std::to_string(s.samples.size()) +
                                    " does not match operator rows " + std::to_string(op.rows));
    }
    if (grid.n_points != op.cols) {
        throw std::invalid_argument("reconstruct: grid size does not match operator columns");
    }
    const bool time_like = op.codomain == GridTag::time;
    if (time_like != (s.kind == SignalKind::time)) {
        throw std::invalid_argument("reconstruct: signal kind does not match operator codomain");
    }
}

} // namespace

Phantom reconstruct_tsvd(const OperatorMatrix& op, const Signal& s, std::size_t k,
                         const SpaceGrid& grid) {
    require_signal_matches(op, s, grid);
    const linalg::SvdEconomy svd = linalg::svd_economy(op.rows, op.cols, op.data.data());
    if (k < 1 || k > svd.r) {
        throw std::invalid_argument("reconstruct_tsvd: k must be in [1, " +
                                    std::to_string(svd.r) + "]");
    }
    std::string warning;
    const double floor = 1e3 * DBL_EPSILON * svd.s.front();
    if (svd.s[k - 1] < floor) {
        std::size_t first = k;
        while (first > 1 && svd.s[first - 2] < floor) --first;
        warning = "truncation rank " + std::to_string(k) +
                  " extends below the numerical noise floor (untrusted from index " +
                  std::to_string(first) + ")";
    }
    std::vector<double> filter(svd.r, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        filter[i] = svd.s[i] > 0.0 ? 1.0 / svd.s[i] : 0.0;
    }
    return from_filtered_svd(op, s, grid, filter, svd, std::move(warning));
}

Phantom reconstruct_tikhonov(const OperatorMatrix& op, const Signal& s, double lambda,
                             const SpaceGrid& grid) {
    require_signal_matches(op, s, grid);
    if (!(lambda > 0.0)) throw std::invalid_argument("reconstruct_tikhonov: lambda must be > 0");
    const linalg::SvdEconomy svd = linalg::svd_economy(op.rows, op.cols, op.data.data());
    std::vector<double> filter(svd.r);
    for (std::size_t i = 0; i < svd.r; ++i) {
        filter[i] = svd.s[i] / (svd.s[i] * svd.s[i] + lambda);
    }
    return from_filtered_svd(op, s, grid, filter, svd, {});
}

double rel_error(const Phantom& c, const Phantom& c_hat) {
    if (!(c.grid == c_hat.grid)) {
        throw std::invalid_argument("rel_error: phantoms live on different grids");
    }
    const auto w = c.grid.weights();
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        const double d = c.values[j] - c_hat.values[j];
        num += w[j] * d * d;
        den += w[j] * c.values[j] * c.values[j];
    }
    if (den == 0.0) return std::sqrt(num);
    return std::sqrt(num / den);
}

} // namespace mpi1d
