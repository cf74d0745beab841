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

std::mt19937 rng(90921);

double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

TEST_CASE("case parameters are validated") {
    CHECK_THROWS_AS(CaseParams(CScalar(2.0, 0.0), CScalar(0.0, 0.0)),
                    PreconditionError);
    CHECK_THROWS_AS(CaseParams(CScalar(-1.0, 0.0), CScalar(0.0, 0.0)),
                    PreconditionError);
    CHECK_THROWS_AS(CaseParams(2.5, CScalar(0.0, 0.0)), PreconditionError);
    const CaseParams p(kPi / 2.0, CScalar(0.3, 0.0));
    CHECK(std::abs(p.a - CScalar(0.0, 1.0)) < 1e-15);
}

TEST_CASE("exact solution basics") {
    const CaseParams p(CScalar(1.0, 0.0), CScalar(-0.5, 0.25));
    CHECK(exact_solution(p, 0.0) == p.x0);

    // The origin is an equilibrium.
    const CaseParams origin(CScalar(1.0, 0.0), CScalar(0.0, 0.0));
    for (double t : {0.1, 1.0, 3.0})
        CHECK(std::abs(exact_solution(origin, t)) < 1e-12);
}

TEST_CASE("exact solution agrees with the integrator on random draws") {
    for (int draw = 0; draw < 50; ++draw) {
        const double phi = uniform(-kPi / 2.0, kPi / 2.0);
        CScalar x0(uniform(-2.0, 2.0), uniform(-2.0, 2.0));
        while (std::abs(x0) > 2.0)
            x0 = CScalar(uniform(-2.0, 2.0), uniform(-2.0, 2.0));
        const CaseParams p(phi, x0);

        double horizon = 2.0;
        if (const auto t0 = detect_blowup(p, horizon))
            horizon = std::min(horizon, 0.9 * *t0);
        if (horizon < 1e-3) continue;

        const TrigPoly g = case_study_g(p.a);
        const auto field = [&g](const CVector& y, CVector& d) { d[0] = g.eval(y[0]); };
        const TimeGrid grid(0.0, horizon, 32);
        Trajectory numeric;
        try {
            numeric = rk45(field, {x0}, grid, 1e-11, 1e-13);
        } catch (const StepSizeUnderflow&) {
            continue;  // grazing a blow-up beyond the detection tolerance
        }
        if (!numeric.fully_valid()) continue;
        const Trajectory exact = exact_trajectory(p, grid);
        REQUIRE(exact.fully_valid());
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(std::abs(numeric.at(i, 0) - exact.at(i, 0)) < 1e-7);
    }
}

TEST_CASE("exact solution at the reference point matches rk45 to 1e-8") {
    const CaseParams p(CScalar(1.0, 0.0), CScalar(-0.5, 0.0));
    const TrigPoly g = case_study_g(p.a);
    const auto field = [&g](const CVector& y, CVector& d) { d[0] = g.eval(y[0]); };
    const TimeGrid grid(0.0, 0.7, 7);
    const Trajectory numeric = rk45(field, {p.x0}, grid, 1e-12, 1e-14);
    CHECK(std::abs(numeric.at(7, 0) - exact_solution(p, 0.7)) < 1e-8);
}

TEST_CASE("blow-up detection") {
    SUBCASE("seed built from the quarter-period root") {
        // x0 = i ln(1 - e^{i pi/2}) makes the log argument vanish at pi/2.
        const CScalar x0 =
            CScalar(0.0, 1.0) * principal_log(1.0 - std::exp(CScalar(0.0, kPi / 2.0)));
        const CaseParams p(CScalar(1.0, 0.0), x0);
        const auto t0 = detect_blowup(p, 2.0 * kPi);
        REQUIRE(t0.has_value());
        CHECK(std::abs(*t0 - kPi / 2.0) < 1e-7);
        CHECK_THROWS_AS(exact_solution(p, 2.0), BlowUpReached);
    }
    SUBCASE("convergent seed never blows up") {
        const CaseParams p(CScalar(0.0, -1.0), CScalar(1.5, 0.0));
        CHECK_FALSE(detect_blowup(p, 30.0).has_value());
    }
    SUBCASE("real part of e^{ix0} equal to 1/2 forces a root") {
        const CScalar c(0.5, 0.7);
        const CScalar x0 = CScalar(0.0, -1.0) * principal_log(c);  // e^{ix0} = c
        const CaseParams p(CScalar(1.0, 0.0), x0);
        CHECK(detect_blowup(p, 2.0 * kPi).has_value());
    }
    CHECK_THROWS_AS(
        detect_blowup(CaseParams(CScalar(1.0, 0.0), CScalar(0.0, 0.0)), 0.0),
        PreconditionError);
}

TEST_CASE("trajectory classification") {
    // Small real displacement circulates around the equilibrium.
    CHECK(classify_trajectory(CaseParams(CScalar(1.0, 0.0), CScalar(-0.5, 0.0))).tag ==
          TrajectoryTag::LimitCycle);
    // Larger displacement beyond the unit circle drifts.
    CHECK(classify_trajectory(CaseParams(CScalar(1.0, 0.0), CScalar(-1.5, 0.0))).tag ==
          TrajectoryTag::Diverges);
    CHECK(classify_trajectory(CaseParams(CScalar(0.0, -1.0), CScalar(1.5, 0.0))).tag ==
          TrajectoryTag::Converges);
    CHECK(classify_trajectory(CaseParams(CScalar(0.0, 1.0), CScalar(0.0, 0.0))).tag ==
          TrajectoryTag::Equilibrium);
    CHECK(classify_trajectory(CaseParams(CScalar(0.0, 1.0),
                                         CScalar(2.0 * kPi, 0.0))).tag ==
          TrajectoryTag::Equilibrium);
    CHECK(classify_trajectory(CaseParams(CScalar(0.0, 1.0), CScalar(-0.5, 0.0))).tag ==
          TrajectoryTag::Diverges);

    // The boundary circle for real a is the blow-up set; precedence gives
    // the blow-up tag there.
    const auto boundary =
        classify_trajectory(CaseParams(CScalar(1.0, 0.0), CScalar(-kPi / 3.0, 0.0)));
    CHECK(boundary.tag == TrajectoryTag::BlowUp);
    REQUIRE(boundary.blowup_time.has_value());

    // All three panel seeds blow up.
    for (const CScalar a : {CScalar(1.0, 0.0), CScalar(0.0, 1.0), CScalar(0.0, -1.0)}) {
        const CScalar x0 =
            CScalar(0.0, 1.0) *
            principal_log(1.0 - std::exp(CScalar(0.0, 1.0) * a * (kPi / 2.0)));
        CHECK(classify_trajectory(CaseParams(a, x0)).tag == TrajectoryTag::BlowUp);
    }
}

TEST_CASE("closed-form section components") {
    SUBCASE("k = N keeps the single phase term") {
        const CaseParams p(CScalar(0.0, 1.0), CScalar(0.4, 0.3));
        for (int N : {1, 3, 6}) {
            const CScalar expect = std::exp(CScalar(0.0, static_cast<double>(N)) *
                                            (p.a * 0.37 + p.x0));
            CHECK(std::abs(exact_z(p, N, N, 0.37) - expect) < 1e-13);
        }
    }
    SUBCASE("k = 1 is the geometric partial sum") {
        const CaseParams p(CScalar(1.0, 0.0), CScalar(0.3, 0.2));
        const int N = 4;
        const double t = 0.4;
        const CScalar i1(0.0, 1.0);
        const CScalar u = -std::exp(i1 * p.x0) * (std::exp(i1 * p.a * t) - 1.0);
        CScalar sum(0.0, 0.0), upow(1.0, 0.0);
        for (int l = 0; l < N; ++l) {
            sum += upow;
            upow *= u;
        }
        const CScalar expect = std::exp(i1 * (p.a * t + p.x0)) * sum;
        CHECK(std::abs(exact_z(p, 1, N, t) - expect) < 1e-13);
    }
    SUBCASE("matches the solved section") {
        const CaseParams p(CScalar(0.0, 1.0), CScalar(0.4, 0.3));
        const int N = 6;
        const auto sec = build_concise_cf(case_study_g(p.a), N);
        const TimeGrid grid(0.0, 0.25, 10);
        const Trajectory traj = solve_concise_cf(sec, p.x0, grid);
        for (int k = 1; k <= N; ++k)
            CHECK(std::abs(traj.at(10, static_cast<std::size_t>(k - 1)) -
                           exact_z(p, k, N, 0.25)) < 1e-9);
    }
    CHECK_THROWS_AS(exact_z(CaseParams(CScalar(1.0, 0.0), CScalar(0.0, 0.0)), 3, 2, 0.1),
                    PreconditionError);
}

TEST_CASE("closed-form error") {
    const CaseParams p0(CScalar(1.0, 0.0), CScalar(0.0, 0.0));
    for (int N : {1, 5}) CHECK(exact_error(p0, N, 0.0) == 0.0);

    // 2 sin(pi/6) = 1.
    CHECK(exact_error(p0, 1, kPi / 3.0) == doctest::Approx(1.0).epsilon(1e-12));

    for (int draw = 0; draw < 30; ++draw) {
        const double phi = uniform(-kPi / 2.0, kPi / 2.0);
        const CScalar x0(uniform(-2.0, 2.0), uniform(-1.0, 1.0));
        const CaseParams p(phi, x0);
        const int N = 1 + static_cast<int>(uniform(0.0, 9.0));
        double t = uniform(0.01, 0.5);
        if (const auto t0 = detect_blowup(p, 1.0)) t = std::min(t, 0.9 * *t0);
        const CScalar x = exact_solution(p, t);
        const CScalar ratio = exact_z(p, 1, N, t) *
                                  std::exp(CScalar(0.0, -1.0) * x) -
                              CScalar(1.0, 0.0);
        CHECK(std::abs(std::abs(ratio) - exact_error(p, N, t)) < 1e-10);
    }
}

TEST_CASE("h surface") {
    CHECK(h_phi(0.3, 0.0) == doctest::Approx(0.0));
    CHECK(h_phi(0.0, kPi / 3.0) == doctest::Approx(1.0).epsilon(1e-14));
    for (double t : {0.2, 1.0, 4.0}) {
        const double expect = (1.0 - std::exp(-t)) * (1.0 - std::exp(-t));
        CHECK(h_phi(kPi / 2.0, t) == doctest::Approx(expect).epsilon(1e-13));
        CHECK(h_phi(kPi / 2.0, t) < 1.0);
    }
    CHECK_THROWS_AS(h_phi(2.0, 0.1), PreconditionError);
    CHECK_THROWS_AS(h_phi(0.1, -0.1), PreconditionError);
}

TEST_CASE("actual time range") {
    CHECK(actual_time_range(0.0, 0.0) == doctest::Approx(kPi / 3.0).epsilon(1e-12));
    CHECK(std::isinf(actual_time_range(0.0, 2.0)));

    // (e^t - 1)^2 reaches 1 at ln 2.
    CHECK(actual_time_range(-kPi / 2.0, 0.0) ==
          doctest::Approx(std::numbers::ln2).epsilon(1e-7));

    SUBCASE("nondecreasing in the imaginary part at fixed phi") {
        for (double phi : {-1.2, -0.4}) {
            double prev = 0.0;
            for (double v : {-0.5, 0.0, 0.5, 1.0}) {
                const double T = actual_time_range(phi, v);
                CHECK(T >= prev - 1e-9);
                prev = T;
            }
        }
    }
    SUBCASE("positive rotation keeps h below 1") {
        CHECK(std::isinf(actual_time_range(kPi / 2.0, 0.0)));
        CHECK(actual_time_range(kPi / 2.0, -0.5) > 0.0);
        CHECK(std::isfinite(actual_time_range(kPi / 2.0, -0.5)));
    }
}

TEST_CASE("guaranteed time range constants") {
    CHECK(cf_guaranteed_time_range(0.0) ==
          doctest::Approx(0.052415377286926856).epsilon(1e-14));
    CHECK(cf_guaranteed_time_range(2.0) ==
          doctest::Approx(0.0070936499310801617).epsilon(1e-14));
    CHECK(cf_guaranteed_time_range(-2.0) == cf_guaranteed_time_range(2.0));
}

TEST_CASE("whole-line convergence window") {
    for (double phi : {0.3, 1.0, kPi / 2.0})
        CHECK(global_window_holds(phi, std::numbers::ln2 + 0.01));
    CHECK_FALSE(global_window_holds(kPi / 2.0, 0.0));
    for (double phi : {0.3, 1.0, kPi / 2.0}) CHECK_FALSE(global_window_holds(phi, -1.0));
    CHECK_THROWS_AS(global_window_holds(-0.1, 0.0), PreconditionError);
}

TEST_CASE("exponential convergence exactly below the sharp horizon") {
    const double phi = -0.8;
    const double v = 0.2;
    const CaseParams p(phi, CScalar(0.7, v));
    const double T = actual_time_range(phi, v);
    REQUIRE(std::isfinite(T));

    // Below the horizon the per-order ratio is < 1, beyond it is > 1.
    const double t_in = 0.8 * T;
    const double t_out = 1.2 * T;
    const double q_in = std::exp(-v) * std::sqrt(h_phi(phi, t_in));
    const double q_out = std::exp(-v) * std::sqrt(h_phi(phi, t_out));
    CHECK(q_in < 1.0);
    CHECK(q_out > 1.0);
    CHECK(exact_error(p, 12, t_in) < exact_error(p, 6, t_in));
    CHECK(exact_error(p, 12, t_out) > exact_error(p, 6, t_out));
}
