#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>

#include "carlift/carleman.hpp"
#include "carlift/experiments.hpp"
#include "carlift/io.hpp"

using namespace carlift;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("carlift_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

GridSpec small_carleman_spec() {
    GridSpec spec;
    spec.scheme = Scheme::Carleman;
    spec.re_range = {-1.0, 1.0};
    spec.im_range = {-1.0, 1.0};
    spec.nx = 5;
    spec.ny = 5;
    spec.N = 4;
    spec.T_star = 0.3;
    spec.a = CScalar(0.0, -1.0);
    spec.time_samples = 64;
    return spec;
}

}  // namespace

TEST_CASE("carleman error grid basics") {
    const GridSpec spec = small_carleman_spec();
    const ErrorGrid grid = error_grid_carleman(spec);

    // Center cell x0 = 0: both the state and its lift vanish identically.
    CHECK(grid.value(2, 2) == -5.0);
    CHECK_FALSE(grid.flagged(2, 2));

    for (double v : grid.values) {
        CHECK(v >= -5.0);
        CHECK(v <= 2.0);
    }
    for (char p : grid.provenance) CHECK(p == 'e');

    GridSpec bad = spec;
    bad.scheme = Scheme::CarlemanFourier;
    CHECK_THROWS_AS(error_grid_carleman(bad), PreconditionError);
    bad = spec;
    bad.nx = 1;
    CHECK_THROWS_AS(error_grid_carleman(bad), PreconditionError);
}

TEST_CASE("non-equilibrium family solves through rk45 and grows the center error") {
    GridSpec off = small_carleman_spec();
    off.a = CScalar(1.0, 0.0);
    off.b = CScalar(4.0 / 3.0, 0.0);
    const ErrorGrid shifted = error_grid_carleman(off);
    for (char p : shifted.provenance) CHECK(p == 'r');
    for (double v : shifted.values) {
        CHECK(v >= -5.0);
        CHECK(v <= 2.0);
    }

    // At the origin the equilibrium family has literally zero error while
    // the shifted family keeps a positive (if tiny) truncation error; the
    // comparison lives below the clamp floor, so test it unclamped.
    const auto raw_center_error = [](CScalar b) {
        const TrigPoly g = case_study_g(CScalar(1.0, 0.0), b);
        const int N = 10;
        const CarlemanSection sec = build_carleman_section(g.maclaurin(N), N);
        const TimeGrid tg(0.0, 0.5, 255);
        const Trajectory lifted = solve_finite_section(sec, CScalar(0.0, 0.0), tg);
        const auto field = [&g](const CVector& y, CVector& d) { d[0] = g.eval(y[0]); };
        const Trajectory ref = rk45(field, {CScalar(0.0, 0.0)}, tg, 1e-12, 1e-14);
        double worst = 0.0;
        for (std::size_t i = 0; i < tg.size(); ++i) {
            const CScalar d = lifted.at(i, 0) - ref.at(i, 0);
            worst = std::max(worst,
                             std::abs(std::exp(CScalar(0.0, 1.0) * d) - CScalar(1.0, 0.0)));
        }
        return worst;
    };
    const double err_b1 = raw_center_error(CScalar(1.0, 0.0));
    const double err_b43 = raw_center_error(CScalar(4.0 / 3.0, 0.0));
    CHECK(err_b1 == 0.0);
    CHECK(err_b43 > 1e-12);
    CHECK(err_b43 > err_b1);
}

TEST_CASE("cf error grid: closed form, linearity in N, real-shift invariance") {
    GridSpec spec;
    spec.scheme = Scheme::CarlemanFourier;
    spec.phi = 0.0;
    spec.re_range = {-1.0, 1.0};
    spec.im_range = {-0.15, 0.15};
    spec.nx = 3;
    spec.ny = 3;
    spec.T_star = 0.5;
    spec.time_samples = 128;

    spec.N = 10;
    const ErrorGrid g10 = error_grid_cf(spec);
    spec.N = 5;
    const ErrorGrid g5 = error_grid_cf(spec);

    for (int iy = 0; iy < spec.ny; ++iy) {
        const double im = spec.im_at(iy);
        const double closed10 = cf_closed_form_error(0.0, im, 0.5, 10, 128);
        const double closed5 = cf_closed_form_error(0.0, im, 0.5, 5, 128);
        CHECK(closed10 == doctest::Approx(2.0 * closed5).epsilon(1e-12));
        for (int ix = 0; ix < spec.nx; ++ix) {
            CHECK_FALSE(g10.flagged(ix, iy));
            CHECK(g10.value(ix, iy) == doctest::Approx(closed10).epsilon(1e-6));
            CHECK(g5.value(ix, iy) == doctest::Approx(closed5).epsilon(1e-6));
            // Real shifts leave the error untouched.
            CHECK(std::abs(g10.value(ix, iy) - g10.value(0, iy)) < 1e-6);
        }
    }
}

TEST_CASE("grid evaluation is independent of the worker count") {
    GridSpec spec = small_carleman_spec();
    spec.workers = 1;
    const ErrorGrid serial = error_grid_carleman(spec);
    spec.workers = 4;
    const ErrorGrid parallel = error_grid_carleman(spec);
    REQUIRE(serial.values.size() == parallel.values.size());
    for (std::size_t i = 0; i < serial.values.size(); ++i) {
        CHECK(serial.values[i] == parallel.values[i]);
        CHECK(serial.flags[i] == parallel.flags[i]);
    }
}

TEST_CASE("grid CSV and PNG emission") {
    const fs::path dir = fresh_dir("grid_io");
    const GridSpec spec = small_carleman_spec();
    const ErrorGrid grid = error_grid_carleman(spec);

    write_grid_csv(grid, dir / "g.csv");
    const std::string csv = read_text_file(dir / "g.csv");
    CHECK(csv.starts_with("re_x0,im_x0,value,flag,provenance\n"));
    // Header plus one row per cell.
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + spec.nx * spec.ny);

    write_grid_meta(grid, dir / "g.meta.json", {});
    const auto meta = nlohmann::json::parse(read_text_file(dir / "g.meta.json"));
    CHECK(meta["spec"]["nx"] == spec.nx);
    CHECK(meta["clamp"][0] == -5.0);

    write_grid_png(grid, dir / "g.png");
    const std::string png = read_text_file(dir / "g.png");
    REQUIRE(png.size() > 8);
    CHECK(png.substr(1, 3) == "PNG");
}

TEST_CASE("figure smoke: h surface emitted deterministically") {
    const fs::path dir1 = fresh_dir("fig3a");
    const fs::path dir2 = fresh_dir("fig3b");
    const auto files1 = reproduce_figure("fig3-left", dir1);
    const auto files2 = reproduce_figure("fig3-left", dir2);
    REQUIRE(files1.size() == 1);
    REQUIRE(files2.size() == 1);
    CHECK(read_text_file(files1[0]) == read_text_file(files2[0]));

    const std::string csv = read_text_file(files1[0]);
    CHECK(csv.starts_with("phi,t,value\n"));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 101 * 251);

    CHECK_THROWS_AS(reproduce_figure("fig9", dir1), UnknownFigureId);
}

TEST_CASE("figure ids enumerate the supported set") {
    const auto& ids = figure_ids();
    REQUIRE(ids.size() == 7);
    CHECK(ids.front() == "fig1");
    CHECK(ids.back() == "fig5");
}
