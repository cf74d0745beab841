#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "carlift/carleman_fourier.hpp"
#include "carlift/casestudy.hpp"

using namespace carlift;

namespace {

constexpr double kPi = std::numbers::pi;
const CScalar kI(0.0, 1.0);

std::mt19937 rng(431007);

CScalar random_complex(double scale) {
    std::uniform_real_distribution<double> d(-scale, scale);
    return {d(rng), d(rng)};
}

TrigPoly random_degree_one(bool nonzero_g0) {
    CScalar g0 = random_complex(1.0);
    if (nonzero_g0)
        while (std::abs(g0) < 0.2) g0 = random_complex(1.0);
    return TrigPoly(1, {random_complex(1.0), g0, random_complex(1.0)});
}

}  // namespace

TEST_CASE("multi-index blocks and dimensions") {
    const auto block2 = block_multi_indices(2);
    REQUIRE(block2.size() == 3);
    CHECK(block2[0] == MultiIndex{2, 0});
    CHECK(block2[1] == MultiIndex{1, 1});
    CHECK(block2[2] == MultiIndex{0, 2});

    CHECK(cf_dimension(1) == 2);
    CHECK(cf_dimension(2) == 5);
    CHECK(cf_dimension(3) == 9);
    for (int N = 1; N <= 15; ++N) {
        std::size_t total = 0;
        for (int k = 1; k <= N; ++k) total += static_cast<std::size_t>(k) + 1;
        CHECK(cf_dimension(N) == total);
    }

    CHECK(cf_row(MultiIndex{1, 0}) == 0);
    CHECK(cf_row(MultiIndex{0, 1}) == 1);
    CHECK(cf_row(MultiIndex{2, 0}) == 2);
    CHECK(cf_row(MultiIndex{0, 2}) == 4);
}

TEST_CASE("coupling coefficients live on the axes only") {
    const TrigPoly g = random_degree_one(false);
    CHECK(h_gamma(g, 0, 0) == g.coeff(0));
    CHECK(h_gamma(g, 1, 0) == g.coeff(1));
    CHECK(h_gamma(g, 0, 1) == g.coeff(-1));
    CHECK(h_gamma(g, 1, 1) == CScalar(0.0, 0.0));
    CHECK(h_gamma(g, -1, 0) == CScalar(0.0, 0.0));
    CHECK(h_gamma(g, 2, 0) == CScalar(0.0, 0.0));
}

TEST_CASE("order-1 block is diag(i g0, -i g0)") {
    const TrigPoly g = random_degree_one(false);
    const CFSection sec = build_cf_section(g, 1);
    CHECK(sec.B(0, 0) == kI * g.coeff(0));
    CHECK(sec.B(1, 1) == -kI * g.coeff(0));
    CHECK(sec.B(0, 1) == CScalar(0.0, 0.0));
    CHECK(sec.B(1, 0) == CScalar(0.0, 0.0));
}

TEST_CASE("order-2 section matches the 5x5 display") {
    const TrigPoly g = random_degree_one(false);
    const CFSection sec = build_cf_section(g, 2);
    const CScalar g0 = g.coeff(0), g1 = g.coeff(1), gm1 = g.coeff(-1);
    const CScalar zero(0.0, 0.0);
    const CScalar expected[5][5] = {
        {kI * g0, zero, kI * g1, kI * gm1, zero},
        {zero, -kI * g0, zero, -kI * g1, -kI * gm1},
        {zero, zero, 2.0 * kI * g0, zero, zero},
        {zero, zero, zero, zero, zero},
        {zero, zero, zero, zero, -2.0 * kI * g0},
    };
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) CHECK(sec.B(i, j) == expected[i][j]);
}

TEST_CASE("structural invariants of the full section") {
    const TrigPoly g = random_degree_one(false);
    for (int N : {3, 8, 15}) {
        const CFSection sec = build_cf_section(g, N);
        REQUIRE(sec.B.rows() == cf_dimension(N));

        // Balanced rows are identically zero.
        for (int k = 1; k <= N; ++k)
            for (const auto& alpha : block_multi_indices(k)) {
                if (alpha.alpha1 != alpha.alpha2) continue;
                const std::size_t r = cf_row(alpha);
                for (std::size_t j = 0; j < sec.B.cols(); ++j)
                    CHECK(sec.B(r, j) == CScalar(0.0, 0.0));
            }

        // Blocks beyond the coupling range vanish.
        for (int k = 1; k <= N; ++k)
            for (int l = k; l <= N; ++l) {
                if (l - k <= g.degree()) continue;
                const ComplexMatrix blk = sec.block(k, l);
                for (std::size_t i = 0; i < blk.rows(); ++i)
                    for (std::size_t j = 0; j < blk.cols(); ++j)
                        CHECK(blk(i, j) == CScalar(0.0, 0.0));
            }

        // Everything below the diagonal is zero (diagonal blocks are
        // diagonal matrices).
        for (std::size_t i = 0; i < sec.B.rows(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                CHECK(sec.B(i, j) == CScalar(0.0, 0.0));
    }
}

TEST_CASE("initial state stacks e^{i(k-2j)x0}") {
    const TrigPoly g = random_degree_one(false);
    const CFSection sec = build_cf_section(g, 3);
    const CScalar x0(0.3, -0.6);
    const CVector y0 = sec.initial_state(x0);
    for (int k = 1; k <= 3; ++k)
        for (const auto& alpha : block_multi_indices(k)) {
            const CScalar expect =
                std::exp(kI * static_cast<double>(alpha.alpha1 - alpha.alpha2) * x0);
            CHECK(std::abs(y0[cf_row(alpha)] - expect) < 1e-13);
        }
}

TEST_CASE("order-1 solve is the pure rotation pair") {
    const TrigPoly g = random_degree_one(false);
    const CScalar x0(0.2, 0.1);
    const CFSection sec = build_cf_section(g, 1);
    const TimeGrid grid(0.0, 1.0, 20);
    const Trajectory traj = solve_cf_section(sec, x0, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const CScalar arg = x0 + g.coeff(0) * grid[i];
        CHECK(std::abs(traj.at(i, 0) - std::exp(kI * arg)) < 1e-12);
        CHECK(std::abs(traj.at(i, 1) - std::exp(-kI * arg)) < 1e-12);
    }
}

TEST_CASE("order-2 solve matches the componentwise closed form") {
    for (int trial = 0; trial < 3; ++trial) {
        const TrigPoly g = random_degree_one(true);
        const CScalar g0 = g.coeff(0), g1 = g.coeff(1), gm1 = g.coeff(-1);
        const CScalar x0 = random_complex(0.8);
        const CFSection sec = build_cf_section(g, 2);
        const TimeGrid grid(0.0, 1.0, 16);
        const Trajectory traj = solve_cf_section(sec, x0, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double t = grid[i];
            const CScalar plus =
                (g1 * std::exp(kI * (2.0 * x0 + g0 * t)) + gm1) *
                    (std::exp(kI * g0 * t) - 1.0) / g0 +
                std::exp(kI * (x0 + g0 * t));
            // The minus component is the plus component under the extended
            // system's symmetry x0 -> -x0, g_m -> -g_{-m}.
            const CScalar minus =
                (gm1 * std::exp(-kI * (2.0 * x0 + g0 * t)) + g1) *
                    (std::exp(-kI * g0 * t) - 1.0) / g0 +
                std::exp(-kI * (x0 + g0 * t));
            CHECK(std::abs(traj.at(i, 0) - plus) < 1e-9);
            CHECK(std::abs(traj.at(i, 1) - minus) < 1e-9);
            CHECK(std::abs(traj.at(i, 2) - std::exp(2.0 * kI * (x0 + g0 * t))) < 1e-9);
            CHECK(std::abs(traj.at(i, 3) - CScalar(1.0, 0.0)) < 1e-12);
            CHECK(std::abs(traj.at(i, 4) - std::exp(-2.0 * kI * (x0 + g0 * t))) < 1e-9);
        }
    }
}

TEST_CASE("order-2 solve with g0 = 0 cross-checked against rk45") {
    const TrigPoly g(1, {random_complex(1.0), CScalar(0.0, 0.0), random_complex(1.0)});
    const CScalar x0(0.1, -0.2);
    const CFSection sec = build_cf_section(g, 2);
    const TimeGrid grid(0.0, 1.0, 16);
    const Trajectory exact = solve_cf_section(sec, x0, grid);
    const std::size_t dim = cf_dimension(2);
    const auto field = [&sec, dim](const CVector& y, CVector& d) {
        for (std::size_t i = 0; i < dim; ++i) {
            CScalar s(0.0, 0.0);
            for (std::size_t j = i; j < dim; ++j) s += sec.B(i, j) * y[j];
            d[i] = s;
        }
    };
    const Trajectory numeric = rk45(field, sec.initial_state(x0), grid, 1e-11, 1e-13);
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t c = 0; c < dim; ++c)
            CHECK(std::abs(exact.at(i, c) - numeric.at(i, c)) < 1e-7);
}

TEST_CASE("balanced components stay constant in time") {
    const TrigPoly g = random_degree_one(true);
    const CScalar x0(0.8, 0.4);
    for (int N : {4, 9, 15}) {
        const CFSection sec = build_cf_section(g, N);
        const TimeGrid grid(0.0, 0.8, 8);
        const Trajectory traj = solve_cf_section(sec, x0, grid);
        for (int k = 1; k <= N; ++k)
            for (const auto& alpha : block_multi_indices(k)) {
                if (alpha.alpha1 != alpha.alpha2) continue;
                const std::size_t r = cf_row(alpha);
                for (std::size_t i = 1; i < grid.size(); ++i)
                    CHECK(std::abs(traj.at(i, r) - traj.at(0, r)) < 1e-12);
            }
    }
}

TEST_CASE("concise section structure") {
    SUBCASE("single-frequency family is bidiagonal") {
        const CScalar a(0.0, -1.0);
        const ConciseCFSection sec = build_concise_cf(case_study_g(a), 3);
        const CScalar ai = a * kI;
        CHECK(std::abs(sec.G(0, 0) - ai) < 1e-15);
        CHECK(std::abs(sec.G(0, 1) + ai) < 1e-15);
        CHECK(sec.G(0, 2) == CScalar(0.0, 0.0));
        CHECK(std::abs(sec.G(1, 1) - 2.0 * ai) < 1e-15);
        CHECK(std::abs(sec.G(1, 2) + 2.0 * ai) < 1e-15);
        CHECK(std::abs(sec.G(2, 2) - 3.0 * ai) < 1e-15);

        const ConciseCFSection big = build_concise_cf(case_study_g(a), 15);
        for (std::size_t i = 0; i < 15; ++i)
            for (std::size_t j = 0; j < 15; ++j)
                if (j != i && j != i + 1) CHECK(big.G(i, j) == CScalar(0.0, 0.0));
    }
    SUBCASE("diagonal scales with the chain index") {
        const TrigPoly g(2, {CScalar(), CScalar(), random_complex(1.0),
                             random_complex(1.0), random_complex(1.0)});
        const ConciseCFSection sec = build_concise_cf(g, 6);
        for (int k = 1; k <= 6; ++k)
            CHECK(sec.G(static_cast<std::size_t>(k - 1), static_cast<std::size_t>(k - 1)) ==
                  kI * static_cast<double>(k) * g.coeff(0));
    }
    SUBCASE("negative frequencies are rejected") {
        const TrigPoly g(1, {CScalar(0.1, 0.0), CScalar(1.0, 0.0), CScalar(0.0, 0.0)});
        CHECK_THROWS_AS(build_concise_cf(g, 3), NegativeFrequencyPresent);
    }
}

TEST_CASE("concise solve closed forms") {
    const TrigPoly g(2, {CScalar(), CScalar(), CScalar(0.4, 0.6), CScalar(-0.2, 0.1),
                         CScalar(0.3, 0.0)});
    const CScalar x0(0.5, -0.1);
    SUBCASE("order 1 is the rotation") {
        const ConciseCFSection sec = build_concise_cf(g, 1);
        const TimeGrid grid(0.0, 1.2, 12);
        const Trajectory traj = solve_concise_cf(sec, x0, grid);
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(std::abs(traj.at(i, 0) -
                           std::exp(kI * (x0 + g.coeff(0) * grid[i]))) < 1e-11);
    }
    SUBCASE("case-study chain matches the closed form at every order") {
        const CaseParams p(CScalar(1.0, 0.0), CScalar(0.3, 0.2));
        for (int N : {2, 7, 12}) {
            const ConciseCFSection sec = build_concise_cf(case_study_g(p.a), N);
            const TimeGrid grid(0.0, 0.5, 20);
            const Trajectory traj = solve_concise_cf(sec, p.x0, grid);
            for (std::size_t i = 0; i < grid.size(); ++i)
                for (int k = 1; k <= N; ++k)
                    CHECK(std::abs(traj.at(i, static_cast<std::size_t>(k - 1)) -
                                   exact_z(p, k, N, grid[i])) < 1e-8);
        }
    }
}

TEST_CASE("concise chain embeds into the full section") {
    const TrigPoly g(1, {CScalar(), CScalar(0.7, 0.2), CScalar(-0.5, 0.4)});
    const CScalar x0(0.25, 0.45);
    const int N = 6;
    const CFSection full = build_cf_section(g, N);
    const ConciseCFSection concise = build_concise_cf(g, N);
    const TimeGrid grid(0.0, 0.7, 14);
    const Trajectory yfull = solve_cf_section(full, x0, grid);
    const Trajectory zchain = solve_concise_cf(concise, x0, grid);
    for (int k = 1; k <= N; ++k) {
        const std::size_t r = cf_row(MultiIndex{k, 0});
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(std::abs(yfull.at(i, r) - zchain.at(i, static_cast<std::size_t>(k - 1))) <
                  1e-9);
    }
}

TEST_CASE("growth constants") {
    const TrigPoly g(2, {CScalar(0.1, 0.0), CScalar(0.3, -0.4), CScalar(0.0, 2.0),
                         CScalar(1.0, 0.0), CScalar(0.0, 0.5)});
    const double R = 4.0;
    CHECK(d0_theorem(g, R) ==
          doctest::Approx(2.0 * std::max({2.0, (std::abs(g.coeff(1)) +
                                                std::abs(g.coeff(-1))) * R,
                                          (std::abs(g.coeff(2)) +
                                           std::abs(g.coeff(-2))) * R * R})));
    CHECK(d0_remark(g, R) ==
          doctest::Approx(std::max({2.0, std::abs(g.coeff(1)) * R,
                                    std::abs(g.coeff(2)) * R * R})));
}

TEST_CASE("first-block bound report") {
    SUBCASE("case-study bound equals the inline specialization") {
        const CScalar x0(0.7, 0.5);
        const double R = optimal_R(x0);
        const CFBoundReport rep = cf_bound_report_case_study(x0, R);
        const double e = std::numbers::e;
        const double abs_im = std::abs(x0.imag());
        for (int N : {1, 5, 10}) {
            for (double t : {0.0, 0.5 * rep.T_cf_star, rep.T_cf_star}) {
                const double c0 =
                    1.0 / (std::sqrt(2.0 * kPi) * (e - 1.0)) *
                    std::exp((3.0 * e - 1.0) / (2.0 * e - 1.0) * (abs_im + std::log(R)) -
                             e / (2.0 * e - 1.0));
                const double direct =
                    c0 * std::pow(N, -1.5) * std::exp(R * N * t) *
                    std::pow(std::exp(abs_im + 1.0) / R,
                             (e - 1.0) * N / (2.0 * e - 1.0));
                CHECK(rep.bound(N, t) == doctest::Approx(direct).epsilon(1e-12));
            }
        }
    }
    SUBCASE("optimal radius maximizes the guaranteed window") {
        const CScalar x0(0.0, 0.8);
        const double R = optimal_R(x0);
        const double T = cf_bound_report_case_study(x0, R).T_cf_star;
        CHECK(T == doctest::Approx(cf_guaranteed_time_range(x0.imag())).epsilon(1e-12));
        CHECK(T > cf_bound_report_case_study(x0, R * 1.25).T_cf_star);
        CHECK(T > cf_bound_report_case_study(x0, R / 1.25).T_cf_star);
    }
    SUBCASE("bound decays geometrically in N at t = 0") {
        const TrigPoly g = random_degree_one(true);
        const CScalar x0(0.4, -0.3);
        const double R = 12.0;
        const CFBoundReport rep = cf_bound_report(g, x0, R);
        double prev = rep.bound(1, 0.0);
        for (int N = 2; N <= 40; ++N) {
            const double cur = rep.bound(N, 0.0);
            CHECK(cur < prev);
            prev = cur;
        }
        CHECK(prev < rep.bound(1, 0.0) * 1e-3);
    }
    SUBCASE("strip and time-range violations") {
        const TrigPoly g = random_degree_one(true);
        CHECK_THROWS_AS(cf_bound_report(g, CScalar(0.0, 3.0), std::exp(2.0)),
                        InitialOutOfStrip);
        CHECK_THROWS_AS(cf_bound_report(g, CScalar(0.0, 0.0), 2.0), InitialOutOfStrip);
        const CFBoundReport rep = cf_bound_report(g, CScalar(0.0, 0.0), 20.0);
        CHECK_THROWS_AS(rep.bound(3, rep.T_cf_star * 1.01), OutOfTimeRange);
    }
}

TEST_CASE("state recovery") {
    SUBCASE("pure rotation recovers the line") {
        const CScalar x0(0.4, -0.2);
        const CScalar g0(1.3, 0.0);
        const TimeGrid grid(0.0, 5.0, 200);
        Trajectory y;
        y.times = grid.times();
        for (std::size_t i = 0; i < grid.size(); ++i)
            y.states.push_back({std::exp(kI * (x0 + g0 * grid[i]))});
        y.valid_count = grid.size();
        const Trajectory xi = recover_state(y, x0, +1);
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(std::abs(xi.at(i, 0) - (x0 + g0 * grid[i])) < 1e-12);
    }
    SUBCASE("recovered state obeys the four-epsilon estimate") {
        const CaseParams p(CScalar(1.0, 0.0), CScalar(-0.5, 0.0));
        const int N = 12;
        const ConciseCFSection sec = build_concise_cf(case_study_g(p.a), N);
        const TimeGrid grid(0.0, 0.3, 60);
        const Trajectory z = solve_concise_cf(sec, p.x0, grid);
        const Trajectory ref = exact_trajectory(p, grid);
        REQUIRE(ref.fully_valid());
        std::vector<CScalar> xref(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) xref[i] = ref.at(i, 0);
        const Trajectory xi =
            recover_state(z.extract_component(0), p.x0, +1, xref);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double eps = exact_error(p, N, grid[i]);
            CHECK(std::abs(xi.at(i, 0) - xref[i]) <= 4.0 * eps + 1e-12);
        }
    }
    SUBCASE("negative branch recovers -x") {
        const CaseParams p(CScalar(1.0, 0.0), CScalar(0.3, 0.1));
        const CFSection sec = build_cf_section(case_study_g(p.a), 8);
        const TimeGrid grid(0.0, 0.25, 50);
        const Trajectory y = solve_cf_section(sec, p.x0, grid);
        const Trajectory ref = exact_trajectory(p, grid);
        REQUIRE(ref.fully_valid());
        const Trajectory xi_minus = recover_state(
            y.extract_component(cf_row(MultiIndex{0, 1})), p.x0, -1);
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(std::abs(xi_minus.at(i, 0) + ref.at(i, 0)) < 1e-3);
    }
    SUBCASE("4 eps phase fact holds in the gated region") {
        std::uniform_real_distribution<double> ure(-kPi, kPi);
        std::uniform_real_distribution<double> uim(-0.6, 0.6);
        int checked = 0;
        while (checked < 1000) {
            const CScalar z(ure(rng), uim(rng));
            const double eps = std::abs(std::exp(kI * z) - 1.0);
            if (eps > 0.5) continue;
            ++checked;
            const double wrapped =
                z.real() - 2.0 * kPi * std::round(z.real() / (2.0 * kPi));
            CHECK(std::abs(CScalar(wrapped, z.imag())) <= 4.0 * eps + 1e-12);
        }
    }
    SUBCASE("branch jump and gate failures") {
        Trajectory y;
        y.times = {0.0, 1.0};
        y.states = {{std::exp(kI * CScalar(0.0, 0.0))},
                    {CScalar(std::exp(4.0), 0.0)}};  // modulus leaps by e^4
        y.valid_count = 2;
        CHECK_THROWS_AS(recover_state(y, CScalar(0.0, 0.0), +1), BranchJump);

        Trajectory bad;
        bad.times = {0.0};
        bad.states = {{CScalar(3.0, 0.0)}};  // |y e^{-ix} - 1| = 2 at x = 0
        bad.valid_count = 1;
        const std::vector<CScalar> ref = {CScalar(0.0, 0.0)};
        CHECK_THROWS_AS(recover_state(bad, CScalar(0.0, 0.0), +1, ref), GateFailed);
        CHECK_THROWS_AS(recover_state(bad, CScalar(0.0, 0.0), +2), PreconditionError);
    }
}

TEST_CASE("global convergence rate") {
    SUBCASE("violated clauses are named") {
        // mu0 = 0 for real g0.
        CHECK_THROWS_WITH_AS(
            global_rate(case_study_g(CScalar(1.0, 0.0)), CScalar(0.0, 3.0),
                        std::exp(5.0)),
            doctest::Contains("mu0"), AssumptionViolated);
        // Radius too small for the strip.
        CHECK_THROWS_WITH_AS(global_rate(case_study_g(CScalar(0.0, 1.0)),
                                         CScalar(0.0, 3.0), std::exp(3.5)),
                             doctest::Contains("R >"), AssumptionViolated);
        // Initial state too low.
        CHECK_THROWS_WITH_AS(global_rate(case_study_g(CScalar(0.0, 1.0)),
                                         CScalar(0.0, -3.0), std::exp(5.0)),
                             doctest::Contains("Im x0"), AssumptionViolated);
    }
    SUBCASE("reference arithmetic for a = i, x0 = 3i, R = e^5") {
        const GlobalRateParams params =
            global_rate(case_study_g(CScalar(0.0, 1.0)), CScalar(0.0, 3.0),
                        std::exp(5.0));
        CHECK(params.mu0 == 1.0);
        // (e^5 + 1) sqrt(e^{-6} + e^6) / e^5, computed independently.
        CHECK(params.rate == doctest::Approx(20.220934326995263).epsilon(1e-13));
        // The formula value exceeds 1 here; the rate promises nothing.
        CHECK(params.rate > 1.0);
    }
    SUBCASE("rate scales as 1/R once the degree-zero term dominates") {
        const TrigPoly g(0, {CScalar(0.0, 2.0)});
        const CScalar x0(0.0, 2.0);
        const double R1 = std::exp(4.0);
        const double R2 = 2.0 * R1;
        const GlobalRateParams p1 = global_rate(g, x0, R1);
        const GlobalRateParams p2 = global_rate(g, x0, R2);
        CHECK(p1.rate == doctest::Approx(2.0 * p2.rate).epsilon(1e-12));
    }
}

TEST_CASE("first-block bound dominates the measured error (spot check)") {
    for (double phi : {-kPi / 2.0, 0.0, kPi / 2.0}) {
        const CScalar a = std::exp(kI * phi);
        for (double v : {-0.8, 0.0, 0.6}) {
            const CScalar x0(0.3, v);
            const double R = optimal_R(x0);
            const CFBoundReport rep = cf_bound_report_case_study(x0, R);
            const TimeGrid grid(0.0, rep.T_cf_star, 30);
            const CaseParams p(a, x0);
            const Trajectory ref = exact_trajectory(p, grid);
            REQUIRE(ref.fully_valid());
            for (int N : {1, 5}) {
                const ConciseCFSection sec = build_concise_cf(case_study_g(a), N);
                const Trajectory z = solve_concise_cf(sec, x0, grid);
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    const double measured =
                        std::abs(z.at(i, 0) * std::exp(-kI * ref.at(i, 0)) -
                                 CScalar(1.0, 0.0));
                    CHECK(measured <= rep.bound(N, grid[i]) * (1.0 + 1e-9));
                }
            }
        }
    }
}

TEST_CASE("measured error ignores the real part of the initial state") {
    const CScalar a(0.0, 1.0);
    const int N = 8;
    const ConciseCFSection sec = build_concise_cf(case_study_g(a), N);
    const TimeGrid grid(0.0, 0.4, 40);
    const CScalar base(0.3, 0.35);
    const std::vector<double> shifts = {0.0, 0.9, -2.4};
    std::vector<std::vector<double>> curves;
    for (double shift : shifts) {
        const CScalar x0 = base + shift;
        const Trajectory z = solve_concise_cf(sec, x0, grid);
        const Trajectory ref = exact_trajectory(CaseParams(a, x0), grid);
        REQUIRE(ref.fully_valid());
        std::vector<double> curve(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
            curve[i] = std::abs(z.at(i, 0) * std::exp(-kI * ref.at(i, 0)) -
                                CScalar(1.0, 0.0));
        curves.push_back(std::move(curve));
    }
    for (std::size_t s = 1; s < curves.size(); ++s)
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(std::abs(curves[s][i] - curves[0][i]) < 1e-9);
}
