#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "mpi1d/assembly.hpp"
#include "mpi1d/imaging.hpp"
#include "mpi1d/linalg.hpp"
#include "mpi1d/rng.hpp"
#include "mpi1d/trajectory.hpp"

using namespace mpi1d;

namespace {

double plain_l2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

struct CosineSystem {
    PhysicalParams p;
    SpaceGrid sg;
    TimeGrid tg;
    OperatorMatrix st;
};

CosineSystem cosine_system(std::size_t n_space, std::size_t oversample) {
    CosineSystem sys;
    sys.sg = SpaceGrid::fov(n_space, sys.p);
    sys.tg = TimeGrid(oversample, n_space, Window::half, sys.p.T);
    sys.st = build_s_time(TrajectoryKind::cosine, sys.tg, sys.sg, sys.p);
    return sys;
}

Phantom centered_gaussian(const SpaceGrid& g, double width, double amplitude) {
    return make_phantom(PhantomKind::gaussian, {{0.0, width, amplitude}}, g);
}

} // namespace

TEST_CASE("phantoms: sampling rules per kind") {
    SpaceGrid g(401, -20.0, 20.0);

    SUBCASE("rect takes exactly the values 0 and amplitude") {
        const Phantom ph = make_phantom(PhantomKind::rect, {{0.0, 5.07, 1.0}}, g);
        std::size_t inside = 0;
        for (double v : ph.values) {
            CHECK((v == 0.0 || v == 1.0));
            if (v == 1.0) ++inside;
        }
        // half width 2.535 over h = 0.1 -> 25 nodes per side plus the center
        CHECK(inside == 51);
        for (std::size_t j = 0; j < g.n_points; ++j) {
            CHECK(ph.values[j] == ph.values[g.n_points - 1 - j]);
        }
        CHECK(ph.warning.empty());
    }

    SUBCASE("gaussian peaks with the requested amplitude at its center node") {
        const double c = g.point(237);
        const Phantom ph = make_phantom(PhantomKind::gaussian, {{c, 1.3, 2.5}}, g);
        const auto it = std::max_element(ph.values.begin(), ph.values.end());
        CHECK(*it == 2.5);
        CHECK(static_cast<std::size_t>(it - ph.values.begin()) == 237);
        CHECK(ph.warning.empty());
    }

    SUBCASE("two_bumps equals the sum of its two gaussians") {
        const BumpSpec b1{-4.0, 1.5, 1.0};
        const BumpSpec b2{6.0, 0.8, 0.6};
        const Phantom both = make_phantom(PhantomKind::two_bumps, {b1, b2}, g);
        const Phantom g1 = make_phantom(PhantomKind::gaussian, {b1}, g);
        const Phantom g2 = make_phantom(PhantomKind::gaussian, {b2}, g);
        double dev = 0.0;
        for (std::size_t j = 0; j < g.n_points; ++j) {
            dev = std::max(dev, std::abs(both.values[j] - (g1.values[j] + g2.values[j])));
        }
        CHECK(dev <= 1e-12 * max_abs(both.values));
    }

    SUBCASE("bump-count mismatches are named errors") {
        CHECK_THROWS_WITH_AS(make_phantom(PhantomKind::two_bumps, {{0.0, 1.0, 1.0}}, g),
                             "phantom kind needs 2 bump(s), got 1", std::invalid_argument);
        CHECK_THROWS_WITH_AS(
            make_phantom(PhantomKind::gaussian, {{0.0, 1.0, 1.0}, {1.0, 1.0, 1.0}}, g),
            "phantom kind needs 1 bump(s), got 2", std::invalid_argument);
    }

    SUBCASE("support outside the field of view is rejected") {
        // rect edge at 19 + 2 = 21 > 20
        CHECK_THROWS_WITH_AS(make_phantom(PhantomKind::rect, {{19.0, 4.0, 1.0}}, g),
                             "phantom support is not inside the field of view",
                             std::invalid_argument);
        CHECK_THROWS_WITH_AS(make_phantom(PhantomKind::gaussian, {{20.5, 1.0, 1.0}}, g),
                             "phantom support is not inside the field of view",
                             std::invalid_argument);
        CHECK_THROWS_WITH_AS(make_phantom(PhantomKind::gaussian, {{0.0, 0.0, 1.0}}, g),
                             "phantom bump width must be > 0", std::invalid_argument);
    }

    SUBCASE("mass reaching the boundary warns without aborting") {
        const Phantom wide = centered_gaussian(g, 8.0, 1.0);
        CHECK(wide.warning == "phantom support reaches the field-of-view boundary");
        CHECK(wide.values.size() == g.n_points);
        // exp(-200) at the edge is far below the 1e-12 relative threshold
        const Phantom narrow = centered_gaussian(g, 1.0, 1.0);
        CHECK(narrow.warning.empty());
    }

    SUBCASE("kind names round-trip; unknown names are rejected") {
        CHECK(phantom_kind_from_string("gaussian") == PhantomKind::gaussian);
        CHECK(phantom_kind_from_string("rect") == PhantomKind::rect);
        CHECK(phantom_kind_from_string("two_bumps") == PhantomKind::two_bumps);
        CHECK_THROWS_WITH_AS(phantom_kind_from_string("blob"),
                             "unknown phantom kind 'blob' (expected gaussian, rect, or two_bumps)",
                             std::invalid_argument);
    }
}

TEST_CASE("forward: kinds, metadata, and argument checking") {
    auto sys = cosine_system(201, 2);
    const Phantom ph = centered_gaussian(sys.sg, 2.0, 1.0);

    SUBCASE("time-domain signals carry the sample times") {
        const Signal u = forward(ph, sys.st, &sys.tg);
        CHECK(u.kind == SignalKind::time);
        CHECK(u.samples.size() == sys.tg.n_points);
        CHECK(u.abscissa == sys.tg.points());
        CHECK(u.noise_level == 0.0);
    }

    SUBCASE("frequency-domain signals carry 1-based harmonic indices") {
        const OperatorMatrix sf =
            build_s_freq(TrajectoryKind::cosine, sys.tg, sys.sg, 12, sys.p);
        const Signal u = forward(ph, sf);
        CHECK(u.kind == SignalKind::freq);
        REQUIRE(u.abscissa.size() == 12);
        CHECK(u.abscissa.front() == 1.0);
        CHECK(u.abscissa.back() == 12.0);
    }

    SUBCASE("grid/operator mismatches are errors") {
        const SpaceGrid other(101, -20.0, 20.0);
        Phantom wrong;
        wrong.grid = other;
        wrong.values.assign(101, 0.0);
        CHECK_THROWS_WITH(forward(wrong, sys.st, &sys.tg),
                          doctest::Contains("does not match phantom grid size"));
        CHECK_THROWS_WITH(forward(ph, sys.st), doctest::Contains("needs the time grid"));
        TimeGrid short_tg(1, 101, Window::half, sys.p.T);
        CHECK_THROWS_WITH(forward(ph, sys.st, &short_tg),
                          doctest::Contains("time grid size does not match"));
    }
}

TEST_CASE("forward: zero input, additivity, and exact scale equivariance") {
    auto sys = cosine_system(301, 2);

    SUBCASE("zero phantom maps to the zero signal") {
        Phantom zero;
        zero.grid = sys.sg;
        zero.values.assign(sys.sg.n_points, 0.0);
        const Signal u = forward(zero, sys.st, &sys.tg);
        for (double v : u.samples) CHECK(v == 0.0);
    }

    SUBCASE("two_bumps forwards to the sum of the single-bump signals") {
        const BumpSpec b1{-5.0, 1.2, 1.0};
        const BumpSpec b2{7.0, 0.9, 0.5};
        const Signal u12 =
            forward(make_phantom(PhantomKind::two_bumps, {b1, b2}, sys.sg), sys.st, &sys.tg);
        const Signal u1 =
            forward(make_phantom(PhantomKind::gaussian, {b1}, sys.sg), sys.st, &sys.tg);
        const Signal u2 =
            forward(make_phantom(PhantomKind::gaussian, {b2}, sys.sg), sys.st, &sys.tg);
        double dev = 0.0;
        for (std::size_t i = 0; i < u12.samples.size(); ++i) {
            dev = std::max(dev, std::abs(u12.samples[i] - (u1.samples[i] + u2.samples[i])));
        }
        CHECK(dev <= 1e-12 * max_abs(u12.samples));
    }

    SUBCASE("scaling the phantom scales the signal") {
        const Phantom ph = centered_gaussian(sys.sg, 2.0, 1.0);
        const Signal u = forward(ph, sys.st, &sys.tg);

        // a power-of-two factor shifts every intermediate exponent and nothing
        // else, so the scaled forward map matches bit for bit
        Phantom doubled = ph;
        for (double& v : doubled.values) v *= 2.0;
        const Signal u2 = forward(doubled, sys.st, &sys.tg);
        for (std::size_t i = 0; i < u.samples.size(); ++i) {
            CHECK(u2.samples[i] == 2.0 * u.samples[i]);
        }

        Phantom scaled = ph;
        for (double& v : scaled.values) v *= 1.7;
        const Signal u17 = forward(scaled, sys.st, &sys.tg);
        const double scale = max_abs(u.samples);
        for (std::size_t i = 0; i < u.samples.size(); ++i) {
            CHECK(std::abs(u17.samples[i] - 1.7 * u.samples[i]) <= 1e-13 * scale);
        }
    }
}

TEST_CASE("forward: a symmetric phantom excites only odd cosine harmonics") {
    PhysicalParams p;
    const SpaceGrid sg = SpaceGrid::fov(501, p);
    const TimeGrid tg(4, 501, Window::half, p.T);
    const OperatorMatrix sf = build_s_freq(TrajectoryKind::cosine, tg, sg, 40, p);
    const Signal u = forward(centered_gaussian(sg, 2.0, 1.0), sf);
    const double norm = plain_l2(u.samples);
    REQUIRE(norm > 0.0);
    CHECK(std::abs(u.samples[0]) > 1e-3 * norm); // odd harmonics carry the signal
    for (std::size_t n = 2; n <= 40; n += 2) {
        CHECK(std::abs(u.samples[n - 1]) < 1e-6 * norm);
    }
}

TEST_CASE("forward: a delta-like phantom traces the kernel along the trajectory") {
    PhysicalParams p;
    const std::size_t n_space = 2001;
    const SpaceGrid sg = SpaceGrid::fov(n_space, p);
    const TimeGrid tg(1, n_space, Window::half, p.T);
    const OperatorMatrix st = build_s_time(TrajectoryKind::cosine, tg, sg, p);

    // unit-mass spike at an interior node: value 1/h, trapezoid weight h
    const std::size_t j0 = 1185;
    const double x0 = sg.point(j0);
    Phantom spike;
    spike.grid = sg;
    spike.values.assign(n_space, 0.0);
    spike.values[j0] = 1.0 / sg.h();

    const Signal u = forward(spike, st, &tg);
    const double peak = max_abs(u.samples);
    REQUIRE(peak > 0.0);
    double dev = 0.0;
    for (std::size_t i = 0; i < u.samples.size(); ++i) {
        const double t = tg.point(i);
        const double ref = gamma_g_deriv(TrajectoryKind::cosine, t, p) *
                           kernel_mg_deriv(gamma_g(TrajectoryKind::cosine, t, p) - x0, p);
        dev = std::max(dev, std::abs(u.samples[i] - ref));
    }
    CHECK(dev < 5e-3 * peak);
}

TEST_CASE("add_noise: relative convention, determinism, and measured level") {
    Signal s;
    s.kind = SignalKind::time;
    const std::size_t n = 10000;
    s.abscissa.resize(n);
    s.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.abscissa[i] = static_cast<double>(i);
        s.samples[i] = 3.0 * std::sin(0.0071 * static_cast<double>(i));
    }
    const double peak = max_abs(s.samples);

    SUBCASE("sigma = 0 returns the samples untouched") {
        const Signal out = add_noise(s, 0.0, 99);
        CHECK(out.samples == s.samples);
        CHECK(out.noise_level == 0.0);
        CHECK(out.seed == 99);
    }

    SUBCASE("a fixed seed reproduces the noise bit for bit") {
        const Signal a = add_noise(s, 0.02, 1234);
        const Signal b = add_noise(s, 0.02, 1234);
        CHECK(a.samples == b.samples);
        const Signal c = add_noise(s, 0.02, 1235);
        CHECK(a.samples != c.samples);
        CHECK(a.noise_level == 0.02);
        CHECK(a.seed == 1234);
        CHECK(a.abscissa == s.abscissa);
    }

    SUBCASE("the empirical level matches sigma * max|s| within 5%") {
        const double sigma = 0.03;
        const Signal noisy = add_noise(s, sigma, 2026);
        double sum = 0.0, sumsq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = noisy.samples[i] - s.samples[i];
            sum += d;
            sumsq += d * d;
        }
        const double mean = sum / static_cast<double>(n);
        const double sd = std::sqrt(sumsq / static_cast<double>(n) - mean * mean);
        const double expect = sigma * peak;
        CHECK(std::abs(sd / expect - 1.0) < 0.05);
        CHECK(std::abs(mean) < 0.05 * expect);
    }

    SUBCASE("negative sigma is rejected") {
        CHECK_THROWS_WITH_AS(add_noise(s, -0.1, 1), "add_noise: sigma must be >= 0",
                             std::invalid_argument);
    }
}

TEST_CASE("tsvd: identity operator and argument checking") {
    const std::size_t n = 120;
    const SpaceGrid g(n, -1.0, 1.0);
    OperatorMatrix id(n, n, GridTag::space, GridTag::time);
    for (std::size_t i = 0; i < n; ++i) id.at(i, i) = 1.0;

    Signal s;
    s.kind = SignalKind::time;
    GaussianStream rng(7);
    s.abscissa.resize(n);
    s.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.abscissa[i] = static_cast<double>(i);
        s.samples[i] = rng.normal();
    }

    SUBCASE("full-rank truncation inverts the identity") {
        const Phantom ch = reconstruct_tsvd(id, s, n, g);
        CHECK(ch.warning.empty());
        double dev = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            dev = std::max(dev, std::abs(ch.values[i] - s.samples[i]));
        }
        CHECK(dev <= 1e-12 * max_abs(s.samples));
    }

    SUBCASE("k outside [1, r] is an error") {
        CHECK_THROWS_WITH_AS(reconstruct_tsvd(id, s, 0, g),
                             "reconstruct_tsvd: k must be in [1, 120]", std::invalid_argument);
        CHECK_THROWS_WITH_AS(reconstruct_tsvd(id, s, n + 1, g),
                             "reconstruct_tsvd: k must be in [1, 120]", std::invalid_argument);
    }

    SUBCASE("signal/operator mismatches are errors") {
        Signal short_s = s;
        short_s.samples.resize(n - 1);
        CHECK_THROWS_WITH(reconstruct_tsvd(id, short_s, 5, g),
                          doctest::Contains("does not match operator rows"));
        Signal freq_s = s;
        freq_s.kind = SignalKind::freq;
        CHECK_THROWS_WITH(reconstruct_tsvd(id, freq_s, 5, g),
                          doctest::Contains("signal kind does not match"));
        const SpaceGrid other(n + 1, -1.0, 1.0);
        CHECK_THROWS_WITH(reconstruct_tsvd(id, s, 5, other),
                          doctest::Contains("grid size does not match"));
    }
}

TEST_CASE("tsvd on the cosine system: projection, floor warning, monotone error") {
    auto sys = cosine_system(301, 2);

    SUBCASE("data in the top-k right singular span is recovered exactly") {
        const linalg::SvdEconomy svd =
            linalg::svd_economy(sys.st.rows, sys.st.cols, sys.st.data.data());
        const std::size_t picks[] = {0, 3, 24};
        const double coef[] = {0.6, 0.3, 0.1};
        Phantom ph;
        ph.grid = sys.sg;
        ph.values.assign(sys.sg.n_points, 0.0);
        for (int m = 0; m < 3; ++m) {
            const double* vrow = svd.vt.data() + picks[m] * sys.st.cols;
            for (std::size_t j = 0; j < sys.st.cols; ++j) ph.values[j] += coef[m] * vrow[j];
        }
        const Signal s = forward(ph, sys.st, &sys.tg);
        const Phantom ch = reconstruct_tsvd(sys.st, s, 25, sys.sg);
        std::vector<double> diff(ph.values.size());
        for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = ch.values[j] - ph.values[j];
        CHECK(plain_l2(diff) < 1e-8 * plain_l2(ph.values));
    }

    SUBCASE("truncating past the noise floor warns but still returns") {
        const Signal s = forward(centered_gaussian(sys.sg, 2.0, 1.0), sys.st, &sys.tg);
        const Phantom ch = reconstruct_tsvd(sys.st, s, 250, sys.sg);
        CHECK(ch.warning.find("below the numerical noise floor") != std::string::npos);
        CHECK(ch.warning.find("untrusted from index") != std::string::npos);
        CHECK(ch.values.size() == sys.sg.n_points);
        const Phantom ok = reconstruct_tsvd(sys.st, s, 30, sys.sg);
        CHECK(ok.warning.empty());
    }

    SUBCASE("noise-free reconstruction error is nonincreasing in k") {
        const Phantom ph = centered_gaussian(sys.sg, 2.0, 1.0);
        const Signal s = forward(ph, sys.st, &sys.tg);
        const std::size_t ks[] = {2, 3, 5, 8, 12, 20, 30, 45};
        double prev = -1.0;
        for (std::size_t i = 0; i < std::size(ks); ++i) {
            const double err = rel_error(ph, reconstruct_tsvd(sys.st, s, ks[i], sys.sg));
            if (i > 0) CHECK(err <= prev + 1e-9);
            prev = err;
        }
        CHECK(prev < 0.05); // by k = 45 the phantom is essentially recovered
    }
}

TEST_CASE("tsvd: noiseless gaussian phantom at N = 1001 recovers below 5%") {
    PhysicalParams p;
    const SpaceGrid sg = SpaceGrid::fov(1001, p);
    const TimeGrid tg(4, 1001, Window::half, p.T);
    const OperatorMatrix st = build_s_time(TrajectoryKind::cosine, tg, sg, p);
    // width = 0.05 * FOV width = 2.0
    const Phantom ph = centered_gaussian(sg, 2.0, 1.0);
    const Signal s = forward(ph, st, &tg);
    const Phantom ch = reconstruct_tsvd(st, s, 30, sg);
    CHECK(rel_error(ph, ch) < 0.05);
}

TEST_CASE("tikhonov: limits, identity, normal equations, residual monotone") {
    auto sys = cosine_system(301, 2);
    const Phantom ph = centered_gaussian(sys.sg, 2.0, 1.0);
    const Signal s = forward(ph, sys.st, &sys.tg);
    const double sigma1 =
        linalg::singular_values(sys.st.rows, sys.st.cols, sys.st.data.data()).front();
    const double s1sq = sigma1 * sigma1;

    SUBCASE("large lambda crushes the solution") {
        const Phantom big = reconstruct_tikhonov(sys.st, s, 1e6 * s1sq, sys.sg);
        const Phantom small = reconstruct_tikhonov(sys.st, s, 1e-6 * s1sq, sys.sg);
        CHECK(plain_l2(big.values) < 1e-4 * plain_l2(small.values));
    }

    SUBCASE("lambda -> 0 on the identity recovers the data") {
        const std::size_t n = 80;
        const SpaceGrid g(n, -1.0, 1.0);
        OperatorMatrix id(n, n, GridTag::space, GridTag::time);
        for (std::size_t i = 0; i < n; ++i) id.at(i, i) = 1.0;
        Signal data;
        data.kind = SignalKind::time;
        data.abscissa.assign(n, 0.0);
        data.samples.resize(n);
        GaussianStream rng(11);
        for (double& v : data.samples) v = rng.normal();
        const Phantom ch = reconstruct_tikhonov(id, data, 1e-12, g);
        double dev = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            dev = std::max(dev, std::abs(ch.values[i] - data.samples[i]));
        }
        CHECK(dev <= 1e-10 * max_abs(data.samples));
    }

    SUBCASE("filter factors agree with a dense normal-equations solve") {
        const double lambda = 1e-3 * s1sq;
        const OperatorMatrix at = transpose(sys.st);
        OperatorMatrix ata = matmul(at, sys.st);
        for (std::size_t i = 0; i < ata.rows; ++i) ata.at(i, i) += lambda;
        const std::vector<double> rhs = at.apply(s.samples);
        const std::vector<double> x = linalg::solve_spd(ata.rows, ata.data, rhs);

        const Phantom ch = reconstruct_tikhonov(sys.st, s, lambda, sys.sg);
        std::vector<double> diff(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) diff[j] = ch.values[j] - x[j];
        CHECK(plain_l2(diff) <= 1e-8 * plain_l2(x));
    }

    SUBCASE("the residual grows monotonically with lambda") {
        const double factors[] = {1e-6, 1e-4, 1e-2, 1.0, 1e2};
        double prev = -1.0;
        for (double f : factors) {
            const Phantom ch = reconstruct_tikhonov(sys.st, s, f * s1sq, sys.sg);
            const std::vector<double> pred = sys.st.apply(ch.values);
            std::vector<double> res(pred.size());
            for (std::size_t i = 0; i < res.size(); ++i) res[i] = pred[i] - s.samples[i];
            const double r = plain_l2(res);
            CHECK(r > prev);
            prev = r;
        }
    }

    SUBCASE("nonpositive lambda is rejected") {
        CHECK_THROWS_WITH_AS(reconstruct_tikhonov(sys.st, s, 0.0, sys.sg),
                             "reconstruct_tikhonov: lambda must be > 0", std::invalid_argument);
        CHECK_THROWS_WITH_AS(reconstruct_tikhonov(sys.st, s, -1.0, sys.sg),
                             "reconstruct_tikhonov: lambda must be > 0", std::invalid_argument);
    }
}

TEST_CASE("rel_error: weighted norm cases") {
    const SpaceGrid g(201, -10.0, 10.0);
    const Phantom c = make_phantom(PhantomKind::gaussian, {{0.0, 1.5, 2.0}}, g);
    const auto w = g.weights();

    SUBCASE("identical phantoms have zero error") { CHECK(rel_error(c, c) == 0.0); }

    SUBCASE("doubling gives exactly 1") {
        Phantom two = c;
        for (double& v : two.values) v *= 2.0;
        CHECK(rel_error(c, two) == 1.0);
    }

    SUBCASE("one interior node bumped by h") {
        const std::size_t j = 57;
        Phantom bumped = c;
        bumped.values[j] += g.h();
        double den = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) den += w[i] * c.values[i] * c.values[i];
        const double expect = g.h() * std::sqrt(w[j]) / std::sqrt(den);
        CHECK(rel_error(c, bumped) == doctest::Approx(expect).epsilon(1e-12));
    }

    SUBCASE("zero reference falls back to the absolute weighted norm") {
        Phantom zero;
        zero.grid = g;
        zero.values.assign(g.n_points, 0.0);
        double acc = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * c.values[i] * c.values[i];
        CHECK(rel_error(zero, c) == doctest::Approx(std::sqrt(acc)).epsilon(1e-14));
    }

    SUBCASE("grid mismatch is an error") {
        Phantom other = c;
        other.grid = SpaceGrid(201, -10.0, 10.5);
        CHECK_THROWS_WITH_AS(rel_error(c, other), "rel_error: phantoms live on different grids",
                             std::invalid_argument);
    }
}

TEST_CASE("ill-posedness witness: a high-mode data bump amplifies by 1/sigma_n") {
    auto sys = cosine_system(301, 2);
    const linalg::SvdEconomy svd =
        linalg::svd_economy(sys.st.rows, sys.st.cols, sys.st.data.data());
    const Signal s = forward(centered_gaussian(sys.sg, 2.0, 1.0), sys.st, &sys.tg);

    const std::size_t n = 200; // 1-based singular index, far below the noise floor
    REQUIRE(svd.s[n - 1] > 0.0);
    const double eps = 1e-3 * svd.s.front();

    Signal bumped = s;
    for (std::size_t r = 0; r < sys.st.rows; ++r) {
        bumped.samples[r] += eps * svd.u[r * svd.r + (n - 1)];
    }

    const std::size_t k = 250; // k >= n, so the amplified mode passes the filter
    const Phantom c1 = reconstruct_tsvd(sys.st, s, k, sys.sg);
    const Phantom c2 = reconstruct_tsvd(sys.st, bumped, k, sys.sg);
    std::vector<double> diff(c1.values.size());
    for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = c2.values[j] - c1.values[j];

    const double gain = plain_l2(diff);
    const double expect = eps / svd.s[n - 1];
    CHECK(gain >= expect * (1.0 - 1e-6));
    CHECK(gain <= expect * (1.0 + 1e-6));
}
