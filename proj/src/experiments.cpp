#include "carlift/experiments.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "carlift/carleman.hpp"
#include "carlift/carleman_fourier.hpp"
#include "carlift/casestudy.hpp"
#include "carlift/io.hpp"
#include "carlift/raster.hpp"

namespace carlift {

namespace {

constexpr double kClampLo = -5.0;
constexpr double kClampHi = 2.0;
constexpr double kPi = std::numbers::pi;

double clamp_error(double e) { return std::max(std::min(e, kClampHi), kClampLo); }

void parallel_for(std::size_t total, int workers, const std::function<void(std::size_t)>& body) {
    if (workers <= 1 || total < 2) {
        for (std::size_t i = 0; i < total; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1))
            body(i);
    };
    std::vector<std::thread> pool;
    const int n_threads = std::min<int>(workers, static_cast<int>(total));
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int w = 0; w < n_threads; ++w) pool.emplace_back(run);
    for (auto& th : pool) th.join();
}

bool is_case_study(const GridSpec& spec) {
    return std::abs(spec.b - CScalar(1.0, 0.0)) <= 1e-12 &&
           std::abs(std::abs(spec.a) - 1.0) <= 1e-12;
}

// log10 |e^{i d} - 1|; overflow of the exponential maps to +infinity.
double log10_exp_error(CScalar d) {
    const double mag = std::abs(std::exp(CScalar(0.0, 1.0) * d) - CScalar(1.0, 0.0));
    return std::log10(mag);
}

struct CellResult {
    double value;
    bool flagged;
    char provenance;
};

}  // namespace

double GridSpec::re_at(int ix) const {
    if (nx == 1) return re_range[0];
    return re_range[0] + (re_range[1] - re_range[0]) * ix / (nx - 1.0);
}

double GridSpec::im_at(int iy) const {
    if (ny == 1) return im_range[0];
    return im_range[0] + (im_range[1] - im_range[0]) * iy / (ny - 1.0);
}

nlohmann::json GridSpec::to_json() const {
    return nlohmann::json{
        {"scheme", scheme == Scheme::Carleman ? "carleman" : "carleman-fourier"},
        {"re_range", {re_range[0], re_range[1]}},
        {"im_range", {im_range[0], im_range[1]}},
        {"nx", nx},
        {"ny", ny},
        {"tstar", T_star},
        {"N", N},
        {"a", {a.real(), a.imag()}},
        {"b", {b.real(), b.imag()}},
        {"phi", phi},
        {"time_samples", time_samples},
        {"workers", workers},
    };
}

double ErrorGrid::value(int ix, int iy) const {
    return values[static_cast<std::size_t>(iy) * spec.nx + ix];
}

bool ErrorGrid::flagged(int ix, int iy) const {
    return flags[static_cast<std::size_t>(iy) * spec.nx + ix] != 0;
}

ErrorGrid error_grid_carleman(const GridSpec& spec) {
    if (spec.scheme != Scheme::Carleman)
        throw PreconditionError("error_grid_carleman: spec.scheme must be Carleman");
    if (spec.nx < 2 || spec.ny < 2 || !(spec.T_star > 0.0))
        throw PreconditionError("error_grid_carleman: need nx, ny >= 2 and T_star > 0");

    const TrigPoly g = case_study_g(spec.a, spec.b);
    const MaclaurinSeries mac = g.maclaurin(std::max(spec.N, 1));
    const CarlemanSection section = build_carleman_section(mac, spec.N);
    const TimeGrid tg(0.0, spec.T_star,
                      static_cast<std::size_t>(spec.time_samples - 1));
    const bool exact_ref = is_case_study(spec);

    ErrorGrid out;
    out.spec = spec;
    const std::size_t cells = static_cast<std::size_t>(spec.nx) * spec.ny;
    out.values.assign(cells, 0.0);
    out.flags.assign(cells, 0);
    out.provenance.assign(cells, exact_ref ? 'e' : 'r');

    parallel_for(cells, spec.workers, [&](std::size_t cell) {
        const int ix = static_cast<int>(cell % spec.nx);
        const int iy = static_cast<int>(cell / spec.nx);
        const CScalar x0(spec.re_at(ix), spec.im_at(iy));

        Trajectory reference;
        if (exact_ref) {
            reference = exact_trajectory(CaseParams(spec.a, x0), tg);
        } else {
            try {
                const auto field = [&g](const CVector& y, CVector& dydt) {
                    dydt[0] = g.eval(y[0]);
                };
                reference = rk45(field, {x0}, tg, 1e-10, 1e-12);
            } catch (const StepSizeUnderflow&) {
                out.values[cell] = kClampHi;
                out.flags[cell] = 1;
                return;
            }
        }
        if (!reference.fully_valid()) {
            out.values[cell] = kClampHi;
            out.flags[cell] = 1;
            return;
        }

        Trajectory lifted;
        try {
            lifted = solve_finite_section(section, x0, tg);
        } catch (const StepSizeUnderflow&) {
            out.values[cell] = kClampHi;
            return;
        }

        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < tg.size(); ++i) {
            double e;
            if (i >= lifted.valid_count)
                e = std::numeric_limits<double>::infinity();
            else
                e = log10_exp_error(lifted.at(i, 0) - reference.at(i, 0));
            worst = std::max(worst, e);
        }
        out.values[cell] = clamp_error(worst);
    });
    return out;
}

ErrorGrid error_grid_cf(const GridSpec& spec) {
    if (spec.scheme != Scheme::CarlemanFourier)
        throw PreconditionError("error_grid_cf: spec.scheme must be CarlemanFourier");
    if (spec.nx < 2 || spec.ny < 2 || !(spec.T_star > 0.0))
        throw PreconditionError("error_grid_cf: need nx, ny >= 2 and T_star > 0");

    const CScalar a = std::exp(CScalar(0.0, spec.phi));
    const TrigPoly g = case_study_g(a);
    const ConciseCFSection section = build_concise_cf(g, spec.N);
    const TimeGrid tg(0.0, spec.T_star,
                      static_cast<std::size_t>(spec.time_samples - 1));

    ErrorGrid out;
    out.spec = spec;
    const std::size_t cells = static_cast<std::size_t>(spec.nx) * spec.ny;
    out.values.assign(cells, 0.0);
    out.flags.assign(cells, 0);
    out.provenance.assign(cells, 'e');

    parallel_for(cells, spec.workers, [&](std::size_t cell) {
        const int ix = static_cast<int>(cell % spec.nx);
        const int iy = static_cast<int>(cell / spec.nx);
        const CScalar x0(spec.re_at(ix), spec.im_at(iy));

        const Trajectory reference = exact_trajectory(CaseParams(a, x0), tg);
        if (!reference.fully_valid()) {
            out.values[cell] = kClampHi;
            out.flags[cell] = 1;
            return;
        }
        const Trajectory lifted = solve_concise_cf(section, x0, tg);

        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < tg.size(); ++i) {
            const CScalar ratio =
                lifted.at(i, 0) *
                    std::exp(CScalar(0.0, -1.0) * reference.at(i, 0)) -
                CScalar(1.0, 0.0);
            worst = std::max(worst, std::log10(std::abs(ratio)));
        }
        out.values[cell] = clamp_error(worst);
    });
    return out;
}

double cf_closed_form_error(double phi, double im_x0, double T_star, int N,
                            int time_samples) {
    const TimeGrid tg(0.0, T_star, static_cast<std::size_t>(time_samples - 1));
    double h_max = 0.0;
    for (std::size_t i = 0; i < tg.size(); ++i)
        h_max = std::max(h_max, h_phi(phi, tg[i]));
    return N * (-im_x0 * std::log10(std::numbers::e) + 0.5 * std::log10(h_max));
}

void write_grid_csv(const ErrorGrid& grid, const std::filesystem::path& path) {
    std::string csv = "re_x0,im_x0,value,flag,provenance\n";
    for (int iy = 0; iy < grid.spec.ny; ++iy) {
        for (int ix = 0; ix < grid.spec.nx; ++ix) {
            const std::size_t cell = static_cast<std::size_t>(iy) * grid.spec.nx + ix;
            csv += format_double(grid.spec.re_at(ix));
            csv += ',';
            csv += format_double(grid.spec.im_at(iy));
            csv += ',';
            csv += format_double(grid.values[cell]);
            csv += ',';
            csv += grid.flags[cell] ? '1' : '0';
            csv += ',';
            csv += grid.provenance[cell] == 'e' ? "exact" : "rk45";
            csv += '\n';
        }
    }
    write_text_file(path, csv);
}

void write_grid_meta(const ErrorGrid& grid, const std::filesystem::path& path,
                     const nlohmann::json& notes) {
    nlohmann::json meta{{"spec", grid.spec.to_json()},
                        {"clamp", {kClampLo, kClampHi}}};
    if (!notes.is_null()) meta["notes"] = notes;
    write_text_file(path, meta.dump(2) + "\n");
}

void write_grid_png(const ErrorGrid& grid, const std::filesystem::path& path) {
    RgbImage img;
    img.width = static_cast<std::size_t>(grid.spec.nx);
    img.height = static_cast<std::size_t>(grid.spec.ny);
    img.pixels.assign(3 * img.width * img.height, 0);
    const Colormap& cm = Colormap::sequential();
    for (int iy = 0; iy < grid.spec.ny; ++iy) {
        for (int ix = 0; ix < grid.spec.nx; ++ix) {
            const std::size_t y = static_cast<std::size_t>(grid.spec.ny - 1 - iy);
            if (grid.flagged(ix, iy)) {
                img.set(static_cast<std::size_t>(ix), y, 255, 0, 255);
                continue;
            }
            std::uint8_t rgb[3];
            map_value(cm, grid.value(ix, iy), kClampLo, kClampHi, rgb);
            img.set(static_cast<std::size_t>(ix), y, rgb[0], rgb[1], rgb[2]);
        }
    }
    write_png(path, img);
}

namespace {

struct PanelToken {
    CScalar value;
    std::string token;
};

const std::vector<PanelToken>& a_panels() {
    static const std::vector<PanelToken> panels = {
        {CScalar(0.0, -1.0), "minus_i"},
        {CScalar(1.0, 0.0), "1"},
        {CScalar(0.0, 1.0), "i"},
    };
    return panels;
}

std::vector<std::filesystem::path> emit_grid(const ErrorGrid& grid,
                                             const std::filesystem::path& out_dir,
                                             const std::string& stem,
                                             const FigureOptions& opts,
                                             const nlohmann::json& notes = {}) {
    std::vector<std::filesystem::path> written;
    const auto csv = out_dir / (stem + ".csv");
    write_grid_csv(grid, csv);
    written.push_back(csv);
    const auto meta = out_dir / (stem + ".meta.json");
    write_grid_meta(grid, meta, notes);
    written.push_back(meta);
    if (opts.png) {
        const auto png = out_dir / (stem + ".png");
        write_grid_png(grid, png);
        written.push_back(png);
    }
    return written;
}

std::vector<std::filesystem::path> figure1(const std::filesystem::path& out_dir,
                                           const FigureOptions& opts) {
    std::vector<std::filesystem::path> written;
    for (const auto& panel : a_panels()) {
        for (int N : {1, 5, 10}) {
            GridSpec spec;
            spec.scheme = Scheme::Carleman;
            spec.a = panel.value;
            spec.N = N;
            spec.T_star = 0.5;
            spec.workers = opts.workers;
            const ErrorGrid grid = error_grid_carleman(spec);
            const std::string stem =
                "fig1_a_" + panel.token + "_N" + std::to_string(N);
            for (auto& p : emit_grid(grid, out_dir, stem, opts)) written.push_back(p);
        }
    }
    return written;
}

std::vector<std::filesystem::path> figure2(const std::filesystem::path& out_dir,
                                           const FigureOptions& opts) {
    std::vector<std::filesystem::path> written;
    const std::vector<std::pair<double, std::string>> b_rows = {
        {2.0 / 3.0, "2over3"}, {4.0 / 3.0, "4over3"}};
    for (const auto& [b, b_tok] : b_rows) {
        for (const auto& panel : a_panels()) {
            GridSpec spec;
            spec.scheme = Scheme::Carleman;
            spec.a = panel.value;
            spec.b = CScalar(b, 0.0);
            spec.N = 10;
            spec.T_star = 0.5;
            spec.workers = opts.workers;
            const ErrorGrid grid = error_grid_carleman(spec);
            const std::string stem = "fig2_b_" + b_tok + "_a_" + panel.token;
            for (auto& p : emit_grid(grid, out_dir, stem, opts)) written.push_back(p);
        }
    }
    return written;
}

std::vector<std::filesystem::path> figure3_left(const std::filesystem::path& out_dir,
                                                const FigureOptions& opts) {
    std::vector<std::filesystem::path> written;
    const int n_phi = 101, n_t = 251;
    std::string csv = "phi,t,value\n";
    std::vector<double> surface(static_cast<std::size_t>(n_phi) * n_t);
    for (int i = 0; i < n_phi; ++i) {
        const double phi = -kPi / 2.0 + kPi * i / (n_phi - 1.0);
        for (int j = 0; j < n_t; ++j) {
            const double t = 5.0 * j / (n_t - 1.0);
            const double v = std::min(h_phi(phi, t), 10.0);
            surface[static_cast<std::size_t>(i) * n_t + j] = v;
            csv += format_double(phi);
            csv += ',';
            csv += format_double(t);
            csv += ',';
            csv += format_double(v);
            csv += '\n';
        }
    }
    const auto path = out_dir / "fig3_left.csv";
    write_text_file(path, csv);
    written.push_back(path);
    if (opts.png) {
        RgbImage img;
        img.width = n_t;
        img.height = n_phi;
        img.pixels.assign(3 * img.width * img.height, 0);
        const Colormap& cm = Colormap::sequential();
        for (int i = 0; i < n_phi; ++i)
            for (int j = 0; j < n_t; ++j) {
                std::uint8_t rgb[3];
                map_value(cm, surface[static_cast<std::size_t>(i) * n_t + j], 0.0,
                          10.0, rgb);
                img.set(static_cast<std::size_t>(j),
                        static_cast<std::size_t>(n_phi - 1 - i), rgb[0], rgb[1],
                        rgb[2]);
            }
        const auto png = out_dir / "fig3_left.png";
        write_png(png, img);
        written.push_back(png);
    }
    return written;
}

std::vector<std::filesystem::path> figure3_right(const std::filesystem::path& out_dir,
                                                 const FigureOptions& opts) {
    std::vector<std::filesystem::path> written;
    const int n_phi = 101;
    const double cap = 3.0;
    std::string csv = "phi,T_actual_im0,T_actual_im2,T_cf_im0,T_cf_im2\n";
    std::vector<std::array<double, 4>> rows(n_phi);
    parallel_for(static_cast<std::size_t>(n_phi), opts.workers, [&](std::size_t i) {
        const double phi = -kPi / 2.0 + (kPi / 2.0) * static_cast<double>(i) / (n_phi - 1.0);
        rows[i] = {std::min(actual_time_range(phi, 0.0), cap),
                   std::min(actual_time_range(phi, 2.0), cap),
                   cf_guaranteed_time_range(0.0), cf_guaranteed_time_range(2.0)};
    });
    for (int i = 0; i < n_phi; ++i) {
        const double phi = -kPi / 2.0 + (kPi / 2.0) * i / (n_phi - 1.0);
        csv += format_double(phi);
        for (double v : rows[static_cast<std::size_t>(i)]) {
            csv += ',';
            csv += format_double(v);
        }
        csv += '\n';
    }
    const auto path = out_dir / "fig3_right.csv";
    write_text_file(path, csv);
    written.push_back(path);
    if (opts.png) {
        // Simple curve raster: one column per phi sample, values bottom-up.
        const int width = n_phi, height = 160;
        RgbImage img;
        img.width = static_cast<std::size_t>(width);
        img.height = static_cast<std::size_t>(height);
        img.pixels.assign(3 * img.width * img.height, 255);
        const std::uint8_t colors[4][3] = {
            {0, 150, 0}, {0, 0, 220}, {220, 0, 0}, {200, 0, 200}};
        for (int i = 0; i < width; ++i)
            for (int c = 0; c < 4; ++c) {
                const double v = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
                int y = height - 1 - static_cast<int>(std::lround(v / cap * (height - 1)));
                y = std::clamp(y, 0, height - 1);
                img.set(static_cast<std::size_t>(i), static_cast<std::size_t>(y),
                        colors[c][0], colors[c][1], colors[c][2]);
            }
        const auto png = out_dir / "fig3_right.png";
        write_png(png, img);
        written.push_back(png);
    }
    return written;
}

// Carleman-Fourier error over the (phi, Im x0) plane at Re x0 = 0.
std::vector<std::filesystem::path> figure4_top(const std::filesystem::path& out_dir,
                                               const FigureOptions& opts) {
    std::vector<std::filesystem::path> written;
    const std::vector<std::pair<double, std::string>> t_panels = {
        {2.0, "2"}, {0.5, "1over2"}, {0.25, "1over4"}};
    const int n_phi = 41, n_im = 41, N = 10, time_samples = 256;
    for (const auto& [T_star, tok] : t_panels) {
        GridSpec spec;  // records the panel in the meta file
        spec.scheme = Scheme::CarlemanFourier;
        spec.re_range = {-kPi / 2.0, kPi / 2.0};
        spec.im_range = {-2.0, 2.0};
        spec.nx = n_phi;
        spec.ny = n_im;
        spec.N = N;
        spec.T_star = T_star;
        spec.time_samples = time_samples;
        spec.workers = opts.workers;

        ErrorGrid grid;
        grid.spec = spec;
        const std::size_t cells = static_cast<std::size_t>(n_phi) * n_im;
        grid.values.assign(cells, 0.0);
        grid.flags.assign(cells, 0);
        grid.provenance.assign(cells, 'e');
        const TimeGrid tg(0.0, T_star, static_cast<std::size_t>(time_samples - 1));
        parallel_for(cells, opts.workers, [&](std::size_t cell) {
            const int ix = static_cast<int>(cell % n_phi);
            const int iy = static_cast<int>(cell / n_phi);
            const double phi = spec.re_at(ix);
            const CScalar x0(0.0, spec.im_at(iy));
            const CScalar a = std::exp(CScalar(0.0, phi));
            const Trajectory reference = exact_trajectory(CaseParams(a, x0), tg);
            if (!reference.fully_valid()) {
                grid.values[cell] = kClampHi;
                grid.flags[cell] = 1;
                return;
            }
            const ConciseCFSection section = build_concise_cf(case_study_g(a), N);
            const Trajectory lifted = solve_concise_cf(section, x0, tg);
            double worst = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < tg.size(); ++i) {
                const CScalar ratio =
                    lifted.at(i, 0) *
                        std::exp(CScalar(0.0, -1.0) * reference.at(i, 0)) -
                    CScalar(1.0, 0.0);
                worst = std::max(worst, std::log10(std::abs(ratio)));
            }
            grid.values[cell] = clamp_error(worst);
        });

        // The stored "re" axis is phi here; note it in the sidecar.
        const std::string stem = "fig4_top_T_" + tok;
        {
            std::string csv = "phi,im_x0,value,flag,provenance\n";
            for (int iy = 0; iy < n_im; ++iy)
                for (int ix = 0; ix < n_phi; ++ix) {
                    const std::size_t cell = static_cast<std::size_t>(iy) * n_phi + ix;
                    csv += format_double(spec.re_at(ix));
                    csv += ',';
                    csv += format_double(spec.im_at(iy));
                    csv += ',';
                    csv += format_double(grid.values[cell]);
                    csv += ',';
                    csv += grid.flags[cell] ? '1' : '0';
                    csv += ",exact\n";
                }
            const auto path = out_dir / (stem + ".csv");
            write_text_file(path, csv);
            written.push_back(path);
        }
        const auto meta = out_dir / (stem + ".meta.json");
        write_grid_meta(grid, meta,
                        nlohmann::json{{"x_axis", "phi"}, {"y_axis", "im_x0"}});
        written.push_back(meta);
        if (opts.png) {
            const auto png = out_dir / (stem + ".png");
            write_grid_png(grid, png);
            written.push_back(png);
        }

        // Level curve of zero error: Im x0 = (1/2) ln max h(phi, .).
        std::string level = "phi,im_x0\n";
        for (int ix = 0; ix < n_phi; ++ix) {
            const double phi = spec.re_at(ix);
            double h_max = 0.0;
            for (std::size_t i = 0; i < tg.size(); ++i)
                h_max = std::max(h_max, h_phi(phi, tg[i]));
            level += format_double(phi);
            level += ',';
            level += format_double(0.5 * std::log(h_max));
            level += '\n';
        }
        const auto level_path = out_dir / ("fig4_top_level_T_" + tok + ".csv");
        write_text_file(level_path, level);
        written.push_back(level_path);
    }
    return written;
}

std::vector<std::filesystem::path> figure4_bottom(const std::filesystem::path& out_dir,
                                                  const FigureOptions& opts) {
    std::vector<std::filesystem::path> written;
    const std::vector<std::pair<double, std::string>> phi_panels = {
        {-kPi / 2.0, "minus_pi_over_2"}, {0.0, "0"}, {kPi / 2.0, "pi_over_2"}};
    for (const auto& [phi, tok] : phi_panels) {
        GridSpec spec;
        spec.scheme = Scheme::CarlemanFourier;
        spec.phi = phi;
        spec.N = 10;
        spec.T_star = 0.5;
        spec.workers = opts.workers;
        const ErrorGrid grid = error_grid_cf(spec);
        const std::string stem = "fig4_bottom_phi_" + tok;
        const nlohmann::json notes{
            {"re_range_assumption",
             "real-axis range taken as [-2, 2] to match the imaginary axis"}};
        for (auto& p : emit_grid(grid, out_dir, stem, opts, notes)) written.push_back(p);
    }
    return written;
}

const char* tag_name(TrajectoryTag tag) {
    switch (tag) {
        case TrajectoryTag::BlowUp: return "blowup";
        case TrajectoryTag::LimitCycle: return "limit_cycle";
        case TrajectoryTag::Converges: return "converges";
        case TrajectoryTag::Diverges: return "diverges";
        case TrajectoryTag::Equilibrium: return "equilibrium";
        case TrajectoryTag::Unclassified: return "unclassified";
    }
    return "unclassified";
}

std::vector<std::filesystem::path> figure5(const std::filesystem::path& out_dir,
                                           const FigureOptions& opts) {
    std::vector<std::filesystem::path> written;
    const std::vector<PanelToken> panels = {
        {CScalar(1.0, 0.0), "1"}, {CScalar(0.0, 1.0), "i"}, {CScalar(0.0, -1.0), "minus_i"}};
    const int n_re = 25, n_im = 13;
    for (const auto& panel : panels) {
        const CScalar a = panel.value;
        const TrigPoly g = case_study_g(a);

        std::string field = "re_x,im_x,re_f,im_f\n";
        for (int iy = 0; iy < n_im; ++iy)
            for (int ix = 0; ix < n_re; ++ix) {
                const CScalar x(-kPi + 2.0 * kPi * ix / (n_re - 1.0),
                                -kPi / 2.0 + kPi * iy / (n_im - 1.0));
                const CScalar f = g.eval(x);
                field += format_double(x.real());
                field += ',';
                field += format_double(x.imag());
                field += ',';
                field += format_double(f.real());
                field += ',';
                field += format_double(f.imag());
                field += '\n';
            }
        const auto field_path = out_dir / ("fig5_field_a_" + panel.token + ".csv");
        write_text_file(field_path, field);
        written.push_back(field_path);

        // Seeds from the panel captions: the blow-up seed plus the panel's
        // reference initial states.
        std::vector<CScalar> seeds;
        seeds.push_back(CScalar(0.0, 1.0) *
                        principal_log(1.0 - std::exp(CScalar(0.0, 1.0) * a * (kPi / 2.0))));
        if (panel.token == "1") {
            seeds.push_back(CScalar(-0.5, 0.0));
            seeds.push_back(CScalar(-1.5, 0.0));
        } else if (panel.token == "i") {
            seeds.push_back(CScalar(-0.5, 0.0));
        } else {
            seeds.push_back(CScalar(1.5, 0.0));
        }

        std::string traj_csv = "traj_id,class,t,re_x,im_x\n";
        int traj_id = 0;
        for (const CScalar& x0 : seeds) {
            const CaseParams p(a, x0);
            const TrajectoryClass cls = classify_trajectory(p);
            double t_end = 12.0;
            if (cls.tag == TrajectoryTag::BlowUp)
                t_end = 0.95 * cls.blowup_time.value();
            const TimeGrid tg(0.0, t_end, 600);
            const auto field_fn = [&g](const CVector& y, CVector& dydt) {
                dydt[0] = g.eval(y[0]);
            };
            Trajectory traj;
            try {
                traj = rk45(field_fn, {x0}, tg, 1e-10, 1e-12);
            } catch (const StepSizeUnderflow&) {
                ++traj_id;
                continue;
            }
            for (std::size_t i = 0; i < traj.valid_count; ++i) {
                traj_csv += std::to_string(traj_id);
                traj_csv += ',';
                traj_csv += tag_name(cls.tag);
                traj_csv += ',';
                traj_csv += format_double(traj.times[i]);
                traj_csv += ',';
                traj_csv += format_double(traj.at(i, 0).real());
                traj_csv += ',';
                traj_csv += format_double(traj.at(i, 0).imag());
                traj_csv += '\n';
            }
            ++traj_id;
        }
        const auto traj_path = out_dir / ("fig5_trajectories_a_" + panel.token + ".csv");
        write_text_file(traj_path, traj_csv);
        written.push_back(traj_path);

        if (opts.png) {
            // Field magnitude backdrop with trajectory overdraw.
            const int width = 240, height = 120;
            RgbImage img;
            img.width = static_cast<std::size_t>(width);
            img.height = static_cast<std::size_t>(height);
            img.pixels.assign(3 * img.width * img.height, 0);
            const Colormap& cm = Colormap::sequential();
            for (int y = 0; y < height; ++y)
                for (int x = 0; x < width; ++x) {
                    const CScalar z(-kPi + 2.0 * kPi * x / (width - 1.0),
                                    kPi / 2.0 - kPi * y / (height - 1.0));
                    std::uint8_t rgb[3];
                    map_value(cm, std::abs(g.eval(z)), 0.0, 4.0, rgb);
                    img.set(static_cast<std::size_t>(x), static_cast<std::size_t>(y),
                            rgb[0], rgb[1], rgb[2]);
                }
            const auto png = out_dir / ("fig5_field_a_" + panel.token + ".png");
            write_png(png, img);
            written.push_back(png);
        }
    }
    return written;
}

}  // namespace

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids = {
        "fig1", "fig2", "fig3-left", "fig3-right", "fig4-top", "fig4-bottom", "fig5"};
    return ids;
}

std::vector<std::filesystem::path> reproduce_figure(const std::string& id,
                                                    const std::filesystem::path& out_dir,
                                                    const FigureOptions& opts) {
    std::filesystem::create_directories(out_dir);
    if (id == "fig1") return figure1(out_dir, opts);
    if (id == "fig2") return figure2(out_dir, opts);
    if (id == "fig3-left") return figure3_left(out_dir, opts);
    if (id == "fig3-right") return figure3_right(out_dir, opts);
    if (id == "fig4-top") return figure4_top(out_dir, opts);
    if (id == "fig4-bottom") return figure4_bottom(out_dir, opts);
    if (id == "fig5") return figure5(out_dir, opts);
    throw UnknownFigureId("reproduce_figure: unknown id " + id);
}

}  // namespace carlift
