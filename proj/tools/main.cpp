#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "carlift/carleman.hpp"
#include "carlift/carleman_fourier.hpp"
#include "carlift/casestudy.hpp"
#include "carlift/experiments.hpp"
#include "carlift/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace carlift;

namespace {

/// Bad command-line or config input; maps to exit code 2.
struct UsageFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

CScalar parse_complex(const std::string& s) {
    const auto comma = s.find(',');
    try {
        if (comma == std::string::npos) return CScalar(std::stod(s), 0.0);
        return CScalar(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
    } catch (const std::exception&) {
        throw UsageFailure("cannot parse complex value '" + s + "' (want re,im)");
    }
}

json load_json_file(const fs::path& path) {
    try {
        return json::parse(read_text_file(path));
    } catch (const std::exception& e) {
        throw UsageFailure("cannot read JSON file " + path.string() + ": " + e.what());
    }
}

CScalar complex_from_json(const json& j, const char* key) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw UsageFailure(std::string("config key '") + key + "' must be [re, im]");
    return CScalar(j[0].get<double>(), j[1].get<double>());
}

json complex_to_json(CScalar z) { return json::array({z.real(), z.imag()}); }

/// Flags override config-file values which override defaults.
struct Resolver {
    json cfg = json::object();

    void load(const std::string& config_path) {
        if (config_path.empty()) return;
        cfg = load_json_file(config_path);
        if (!cfg.is_object()) throw UsageFailure("config file must hold a JSON object");
    }

    template <typename T>
    T pick(const CLI::Option* opt, const T& flag_value, const char* key,
           const T& default_value) const {
        if (opt != nullptr && opt->count() > 0) return flag_value;
        if (cfg.contains(key)) {
            try {
                return cfg.at(key).get<T>();
            } catch (const std::exception&) {
                throw UsageFailure(std::string("config key '") + key +
                                   "' has the wrong type");
            }
        }
        return default_value;
    }

    CScalar pick_complex(const CLI::Option* opt, const std::string& flag_str,
                         const char* key, CScalar default_value) const {
        if (opt != nullptr && opt->count() > 0) return parse_complex(flag_str);
        if (cfg.contains(key)) return complex_from_json(cfg.at(key), key);
        return default_value;
    }
};

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    int workers = 4;
    bool png = false;

    CLI::Option* config_opt = nullptr;
    CLI::Option* out_opt = nullptr;
    CLI::Option* workers_opt = nullptr;
    CLI::Option* png_opt = nullptr;

    void attach(CLI::App* cmd) {
        config_opt = cmd->add_option("--config", config_path, "JSON config file");
        out_opt = cmd->add_option("--out", out_dir, "output directory");
        workers_opt = cmd->add_option("--workers", workers, "worker pool size");
        png_opt = cmd->add_flag("--png", png, "also render PNG rasters");
    }

    fs::path resolve_out(const Resolver& r) const {
        if (out_opt->count() > 0) return out_dir;
        if (r.cfg.contains("out")) return r.cfg.at("out").get<std::string>();
        if (const char* env = std::getenv("CARLEMAN_LIFT_OUT")) return env;
        return "out";
    }

    int resolve_workers(const Resolver& r) const {
        const int w = r.pick(workers_opt, workers, "workers", 4);
        if (w < 1) throw UsageFailure("--workers must be at least 1");
        return w;
    }

    bool resolve_png(const Resolver& r) const {
        return png_opt->count() > 0 ? png : r.pick<bool>(nullptr, false, "png", false);
    }
};

struct GSpecFlags {
    std::string g_path;
    std::string a_str = "1,0";
    std::string b_str = "1,0";
    double phi = 0.0;

    CLI::Option* g_opt = nullptr;
    CLI::Option* a_opt = nullptr;
    CLI::Option* b_opt = nullptr;
    CLI::Option* phi_opt = nullptr;

    void attach(CLI::App* cmd) {
        g_opt = cmd->add_option("--g", g_path, "governing function as TrigPoly JSON");
        a_opt = cmd->add_option("--a", a_str, "parameter a as re,im");
        b_opt = cmd->add_option("--b", b_str, "parameter b as re,im");
        phi_opt = cmd->add_option("--phi", phi, "sets a = e^{i phi}");
    }

    /// The governing function: an explicit TrigPoly file wins, otherwise the
    /// a (1 - b e^{ix}) family from --a/--phi/--b.
    TrigPoly resolve(const Resolver& r, json& resolved) const {
        const std::string path = r.pick<std::string>(g_opt, g_path, "g", "");
        if (!path.empty()) {
            json j = load_json_file(path);
            resolved["g"] = j;
            try {
                return TrigPoly::from_json(j);
            } catch (const PreconditionError& e) {
                throw UsageFailure(e.what());
            }
        }
        CScalar a = r.pick_complex(a_opt, a_str, "a", CScalar(1.0, 0.0));
        if (phi_opt->count() > 0 || r.cfg.contains("phi")) {
            const double p = r.pick(phi_opt, phi, "phi", 0.0);
            a = std::exp(CScalar(0.0, p));
            resolved["phi"] = p;
        }
        const CScalar b = r.pick_complex(b_opt, b_str, "b", CScalar(1.0, 0.0));
        resolved["a"] = complex_to_json(a);
        resolved["b"] = complex_to_json(b);
        return case_study_g(a, b);
    }
};

void write_resolved_config(const fs::path& out_dir, const json& resolved) {
    write_text_file(out_dir / "resolved_config.json", resolved.dump(2) + "\n");
}

std::string matrix_csv(const ComplexMatrix& m) {
    std::string out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j > 0) out += ',';
            out += format_complex(m(i, j));
        }
        out += '\n';
    }
    return out;
}

json matrix_summary(const ComplexMatrix& m) {
    std::size_t upper_band = 0;
    std::size_t lower_band = 0;
    bool upper_triangular = true;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (m(i, j) == CScalar(0.0, 0.0)) continue;
            if (j > i) upper_band = std::max(upper_band, j - i);
            if (j < i) {
                lower_band = std::max(lower_band, i - j);
                upper_triangular = false;
            }
        }
    return json{{"rows", m.rows()},
                {"cols", m.cols()},
                {"upper_bandwidth", upper_band},
                {"lower_bandwidth", lower_band},
                {"upper_triangular", upper_triangular}};
}

bool is_unit_case_study(const TrigPoly& g) {
    return g.degree() == 1 && g.coeff(-1) == CScalar(0.0, 0.0) &&
           std::abs(std::abs(g.coeff(0)) - 1.0) <= 1e-12 &&
           std::abs(g.coeff(1) + g.coeff(0)) <= 1e-12;
}

// ---------------------------------------------------------------------------
// lift

int cmd_lift(const Resolver& r, const CommonFlags& common, const GSpecFlags& gspec,
             const std::string& scheme, int N) {
    json resolved{{"command", "lift"}, {"scheme", scheme}, {"N", N}};
    const TrigPoly g = gspec.resolve(r, resolved);
    const fs::path out_dir = common.resolve_out(r);
    fs::create_directories(out_dir);
    resolved["out"] = out_dir.string();

    ComplexMatrix matrix;
    if (scheme == "carleman") {
        matrix = build_carleman_section(g.maclaurin(std::max(N, 1)), N).A;
    } else if (scheme == "cf") {
        matrix = build_cf_section(g, N).B;
    } else if (scheme == "concise-cf") {
        matrix = build_concise_cf(g, N).G;
    } else {
        throw UsageFailure("unknown scheme '" + scheme +
                           "' (want carleman|cf|concise-cf)");
    }

    write_text_file(out_dir / "matrix.csv", matrix_csv(matrix));
    write_text_file(out_dir / "summary.json", matrix_summary(matrix).dump(2) + "\n");
    write_resolved_config(out_dir, resolved);
    return 0;
}

// ---------------------------------------------------------------------------
// solve

int cmd_solve(const Resolver& r, const CommonFlags& common, const GSpecFlags& gspec,
              const std::string& scheme, int N, const std::string& x0_str, double t1,
              int steps) {
    if (steps < 1) throw UsageFailure("--steps must be at least 1");
    if (!(t1 > 0.0)) throw UsageFailure("--t1 must be positive");

    json resolved{{"command", "solve"}, {"scheme", scheme}, {"N", N},
                  {"t1", t1},           {"steps", steps}};
    const TrigPoly g = gspec.resolve(r, resolved);
    const CScalar x0v = parse_complex(x0_str);
    resolved["x0"] = complex_to_json(x0v);
    const fs::path out_dir = common.resolve_out(r);
    fs::create_directories(out_dir);
    resolved["out"] = out_dir.string();

    const TimeGrid grid(0.0, t1, static_cast<std::size_t>(steps));

    Trajectory traj;
    std::string comp_prefix;
    if (scheme == "carleman") {
        traj = solve_finite_section(
            build_carleman_section(g.maclaurin(std::max(N, 1)), N), x0v, grid);
        comp_prefix = "x";
    } else if (scheme == "cf") {
        traj = solve_cf_section(build_cf_section(g, N), x0v, grid);
        comp_prefix = "y";
    } else if (scheme == "concise-cf") {
        traj = solve_concise_cf(build_concise_cf(g, N), x0v, grid);
        comp_prefix = "z";
    } else {
        throw UsageFailure("unknown scheme '" + scheme +
                           "' (want carleman|cf|concise-cf)");
    }

    std::optional<Trajectory> reference;
    if (is_unit_case_study(g))
        reference = exact_trajectory(CaseParams(g.coeff(0), x0v), grid);

    std::string csv = "t";
    for (std::size_t c = 0; c < traj.dimension(); ++c) {
        csv += "," + comp_prefix + std::to_string(c + 1) + "_re";
        csv += "," + comp_prefix + std::to_string(c + 1) + "_im";
    }
    if (reference) csv += ",ref_re,ref_im,error,flag";
    csv += '\n';

    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < traj.size(); ++i) {
        csv += format_double(traj.times[i]);
        const bool sol_ok = i < traj.valid_count;
        for (std::size_t c = 0; c < traj.dimension(); ++c) {
            const CScalar v = sol_ok ? traj.at(i, c) : CScalar(nan, nan);
            csv += ',' + format_double(v.real()) + ',' + format_double(v.imag());
        }
        if (reference) {
            const bool ref_ok = i < reference->valid_count;
            if (ref_ok && sol_ok) {
                const CScalar x = reference->at(i, 0);
                double err;
                if (scheme == "carleman")
                    err = std::abs(traj.at(i, 0) - x);
                else
                    err = std::abs(traj.at(i, 0) * std::exp(CScalar(0.0, -1.0) * x) -
                                   CScalar(1.0, 0.0));
                csv += ',' + format_double(x.real()) + ',' + format_double(x.imag());
                csv += ',' + format_double(err) + ",0";
            } else {
                csv += ",nan,nan,nan,1";
            }
        }
        csv += '\n';
    }
    write_text_file(out_dir / "trajectory.csv", csv);
    write_resolved_config(out_dir, resolved);
    return 0;
}

// ---------------------------------------------------------------------------
// bounds

int cmd_bounds(const Resolver& r, const CommonFlags& common, const GSpecFlags& gspec,
               const std::string& x0_str, std::vector<int> N_list, double R_flag,
               const CLI::Option* R_opt, double M0_flag, const CLI::Option* M0_opt,
               double C0_flag, const CLI::Option* C0_opt, double R0_flag,
               const CLI::Option* R0_opt, const std::string& scheme) {
    json resolved{{"command", "bounds"}, {"scheme", scheme}};
    const TrigPoly g = gspec.resolve(r, resolved);
    const CScalar x0 = parse_complex(x0_str);
    resolved["x0"] = complex_to_json(x0);
    if (N_list.empty()) N_list = {1, 5, 10};
    resolved["N"] = N_list;
    const fs::path out_dir = common.resolve_out(r);
    fs::create_directories(out_dir);
    resolved["out"] = out_dir.string();

    bool strip_violated = false;
    json report{{"x0", complex_to_json(x0)}, {"scheme", scheme}};

    const auto curve = [&](auto bound_fn, double T) {
        json t_arr = json::array(), b_arr = json::array();
        for (int i = 0; i < 64; ++i) {
            const double t = T * i / 63.0;
            t_arr.push_back(t);
            b_arr.push_back(bound_fn(t));
        }
        return json{{"t", t_arr}, {"bound", b_arr}};
    };

    // Carleman side.
    {
        const BoundConstants def = default_bound_constants(g);
        const double C0 = r.pick(C0_opt, C0_flag, "C0", def.C0);
        const double R0 = r.pick(R0_opt, R0_flag, "R0", def.R0);
        const auto rep = make_carleman_bound_report(C0, R0, x0);
        json entry{{"C0", rep.C0},
                   {"R0", rep.R0},
                   {"tilde_R0", rep.tilde_R0},
                   {"T_star", rep.T_star}};
        if (std::isfinite(rep.T_star) && rep.T_star > 0.0) {
            json curves = json::array();
            for (int N : N_list) {
                json c = curve([&](double t) { return rep.bound(N, t); }, rep.T_star);
                c["N"] = N;
                curves.push_back(c);
            }
            entry["curves"] = curves;
        }
        report["carleman"] = entry;

        if (std::abs(x0) > 0.0) {
            const double M0 = r.pick(M0_opt, M0_flag, "M0", 2.0 * std::abs(x0));
            try {
                report["local_state_bound"] =
                    json{{"M0", M0}, {"T", local_state_bound(C0, R0, x0, M0)}};
            } catch (const InvalidBound& e) {
                report["local_state_bound"] = json{{"M0", M0}, {"invalid", e.what()}};
            }
        } else {
            report["local_state_bound"] = json{{"skipped", "x0 is zero"}};
        }
    }

    // Carleman-Fourier side.
    {
        const double R = r.pick(R_opt, R_flag, "R", optimal_R(x0));
        try {
            const CFBoundReport rep = cf_bound_report(g, x0, R);
            json entry{{"R", rep.R},
                       {"D0", rep.D0},
                       {"C0", rep.C0},
                       {"T_cf_star", rep.T_cf_star}};
            json curves = json::array();
            for (int N : N_list) {
                json c = curve([&](double t) { return rep.bound(N, t); }, rep.T_cf_star);
                c["N"] = N;
                curves.push_back(c);
            }
            entry["curves"] = curves;
            if (is_unit_case_study(g)) {
                const CFBoundReport cs = cf_bound_report_case_study(x0, R);
                entry["case_study"] = json{{"D0", cs.D0}, {"T_cf_star", cs.T_cf_star}};
            }
            report["carleman_fourier"] = entry;
        } catch (const InitialOutOfStrip& e) {
            report["carleman_fourier"] = json{{"R", R}, {"strip_violation", e.what()}};
            strip_violated = true;
        }
        report["cf_guaranteed_time_range"] = cf_guaranteed_time_range(x0.imag());

        try {
            const GlobalRateParams rate = global_rate(g, x0, R);
            report["global_rate"] =
                json{{"mu0", rate.mu0}, {"R", rate.R}, {"rate", rate.rate}};
        } catch (const AssumptionViolated& e) {
            report["global_rate"] = json{{"invalid", e.what()}};
        }
    }

    write_text_file(out_dir / "bounds.json", report.dump(2) + "\n");
    write_resolved_config(out_dir, resolved);
    std::cout << report.dump(2) << "\n";
    return strip_violated ? 3 : 0;
}

// ---------------------------------------------------------------------------
// grid

int cmd_grid(const Resolver& r, const CommonFlags& common, const GSpecFlags& gspec,
             const std::string& scheme_flag, const CLI::Option* scheme_opt,
             int N_flag, const CLI::Option* N_opt, double tstar_flag,
             const CLI::Option* tstar_opt) {
    const std::string scheme =
        r.pick<std::string>(scheme_opt, scheme_flag, "scheme", "carleman");
    const fs::path out_dir = common.resolve_out(r);
    fs::create_directories(out_dir);
    const int workers = common.resolve_workers(r);
    const bool png = common.resolve_png(r);

    GridSpec base;
    base.workers = workers;
    if (r.cfg.contains("re_range"))
        base.re_range = {r.cfg["re_range"][0].get<double>(),
                         r.cfg["re_range"][1].get<double>()};
    if (r.cfg.contains("im_range"))
        base.im_range = {r.cfg["im_range"][0].get<double>(),
                         r.cfg["im_range"][1].get<double>()};
    base.nx = r.pick<int>(nullptr, 0, "nx", 41);
    base.ny = r.pick<int>(nullptr, 0, "ny", 41);
    base.T_star = r.pick(tstar_opt, tstar_flag, "tstar", 0.5);
    base.time_samples = r.pick<int>(nullptr, 0, "time_samples", 256);

    std::vector<int> N_values;
    if (N_opt->count() > 0) {
        N_values = {N_flag};
    } else if (r.cfg.contains("N")) {
        if (r.cfg["N"].is_array())
            N_values = r.cfg["N"].get<std::vector<int>>();
        else
            N_values = {r.cfg["N"].get<int>()};
    } else {
        N_values = {10};
    }

    json resolved{{"command", "grid"},
                  {"scheme", scheme},
                  {"out", out_dir.string()},
                  {"workers", workers},
                  {"png", png},
                  {"N", N_values},
                  {"nx", base.nx},
                  {"ny", base.ny},
                  {"tstar", base.T_star},
                  {"time_samples", base.time_samples},
                  {"re_range", {base.re_range[0], base.re_range[1]}},
                  {"im_range", {base.im_range[0], base.im_range[1]}}};

    std::vector<fs::path> written;
    if (scheme == "carleman") {
        std::vector<CScalar> a_values;
        if (gspec.a_opt->count() > 0) {
            a_values = {parse_complex(gspec.a_str)};
        } else if (r.cfg.contains("a") && r.cfg["a"].is_array() &&
                   !r.cfg["a"].empty() && r.cfg["a"][0].is_array()) {
            for (const auto& av : r.cfg["a"]) a_values.push_back(complex_from_json(av, "a"));
        } else if (r.cfg.contains("a")) {
            a_values = {complex_from_json(r.cfg["a"], "a")};
        } else {
            a_values = {CScalar(1.0, 0.0)};
        }
        const CScalar b = r.pick_complex(gspec.b_opt, gspec.b_str, "b", CScalar(1.0, 0.0));
        resolved["b"] = complex_to_json(b);
        json a_json = json::array();
        for (auto a : a_values) a_json.push_back(complex_to_json(a));
        resolved["a"] = a_json;

        for (std::size_t ai = 0; ai < a_values.size(); ++ai) {
            for (int N : N_values) {
                GridSpec spec = base;
                spec.scheme = Scheme::Carleman;
                spec.a = a_values[ai];
                spec.b = b;
                spec.N = N;
                const ErrorGrid grid = error_grid_carleman(spec);
                const std::string stem =
                    "grid_a" + std::to_string(ai) + "_N" + std::to_string(N);
                write_grid_csv(grid, out_dir / (stem + ".csv"));
                write_grid_meta(grid, out_dir / (stem + ".meta.json"), {});
                if (png) write_grid_png(grid, out_dir / (stem + ".png"));
                written.push_back(out_dir / (stem + ".csv"));
            }
        }
    } else if (scheme == "cf" || scheme == "concise-cf") {
        std::vector<double> phi_values;
        if (gspec.phi_opt->count() > 0) {
            phi_values = {gspec.phi};
        } else if (r.cfg.contains("phi") && r.cfg["phi"].is_array()) {
            phi_values = r.cfg["phi"].get<std::vector<double>>();
        } else if (r.cfg.contains("phi")) {
            phi_values = {r.cfg["phi"].get<double>()};
        } else {
            phi_values = {0.0};
        }
        resolved["phi"] = phi_values;

        for (std::size_t pi = 0; pi < phi_values.size(); ++pi) {
            for (int N : N_values) {
                GridSpec spec = base;
                spec.scheme = Scheme::CarlemanFourier;
                spec.phi = phi_values[pi];
                spec.N = N;
                const ErrorGrid grid = error_grid_cf(spec);
                const std::string stem =
                    "grid_phi" + std::to_string(pi) + "_N" + std::to_string(N);
                write_grid_csv(grid, out_dir / (stem + ".csv"));
                write_grid_meta(grid, out_dir / (stem + ".meta.json"), {});
                if (png) write_grid_png(grid, out_dir / (stem + ".png"));
                written.push_back(out_dir / (stem + ".csv"));
            }
        }
    } else {
        throw UsageFailure("unknown scheme '" + scheme + "'");
    }

    write_resolved_config(out_dir, resolved);
    std::cout << "wrote " << written.size() << " grid file(s) to " << out_dir.string()
              << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// figure

int cmd_figure(const Resolver& r, const CommonFlags& common, const std::string& id) {
    const fs::path out_dir = common.resolve_out(r);
    fs::create_directories(out_dir);
    FigureOptions opts;
    opts.workers = common.resolve_workers(r);
    opts.png = common.resolve_png(r);
    const auto files = reproduce_figure(id, out_dir, opts);
    json resolved{{"command", "figure"},
                  {"id", id},
                  {"out", out_dir.string()},
                  {"workers", opts.workers},
                  {"png", opts.png}};
    write_resolved_config(out_dir, resolved);
    std::cout << "wrote " << files.size() << " file(s) to " << out_dir.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// classify

int cmd_classify(const Resolver& r, const CommonFlags& common, const GSpecFlags& gspec,
                 const std::string& x0_str) {
    json resolved{{"command", "classify"}};
    CScalar a = r.pick_complex(gspec.a_opt, gspec.a_str, "a", CScalar(1.0, 0.0));
    if (gspec.phi_opt->count() > 0 || r.cfg.contains("phi"))
        a = std::exp(CScalar(0.0, r.pick(gspec.phi_opt, gspec.phi, "phi", 0.0)));
    const CScalar x0 = parse_complex(x0_str);
    resolved["a"] = complex_to_json(a);
    resolved["x0"] = complex_to_json(x0);
    const fs::path out_dir = common.resolve_out(r);
    fs::create_directories(out_dir);
    resolved["out"] = out_dir.string();

    const TrajectoryClass cls = classify_trajectory(CaseParams(a, x0));
    const char* name = "unclassified";
    switch (cls.tag) {
        case TrajectoryTag::BlowUp: name = "blowup"; break;
        case TrajectoryTag::LimitCycle: name = "limit_cycle"; break;
        case TrajectoryTag::Converges: name = "converges"; break;
        case TrajectoryTag::Diverges: name = "diverges"; break;
        case TrajectoryTag::Equilibrium: name = "equilibrium"; break;
        case TrajectoryTag::Unclassified: name = "unclassified"; break;
    }
    json result{{"class", name}};
    if (cls.blowup_time) result["blowup_time"] = *cls.blowup_time;
    write_text_file(out_dir / "classification.json", result.dump(2) + "\n");
    write_resolved_config(out_dir, resolved);
    std::cout << result.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Carleman and Carleman-Fourier finite-section toolkit"};
    app.require_subcommand(1);

    // lift
    auto* lift = app.add_subcommand("lift", "dump a section matrix");
    CommonFlags lift_common;
    GSpecFlags lift_g;
    lift_common.attach(lift);
    lift_g.attach(lift);
    std::string lift_scheme = "carleman";
    int lift_N = 3;
    auto* lift_scheme_opt = lift->add_option("--scheme", lift_scheme, "carleman|cf|concise-cf");
    auto* lift_N_opt = lift->add_option("--N", lift_N, "truncation order");

    // solve
    auto* solve = app.add_subcommand("solve", "solve a finite section");
    CommonFlags solve_common;
    GSpecFlags solve_g;
    solve_common.attach(solve);
    solve_g.attach(solve);
    std::string solve_scheme = "carleman";
    int solve_N = 8;
    std::string solve_x0 = "0,0";
    double solve_t1 = 1.0;
    int solve_steps = 200;
    auto* solve_scheme_opt = solve->add_option("--scheme", solve_scheme, "carleman|cf|concise-cf");
    auto* solve_N_opt = solve->add_option("--N", solve_N, "truncation order");
    auto* solve_x0_opt = solve->add_option("--x0", solve_x0, "initial state re,im");
    auto* solve_t1_opt = solve->add_option("--t1", solve_t1, "end time");
    auto* solve_steps_opt = solve->add_option("--steps", solve_steps, "sample count");

    // bounds
    auto* bounds = app.add_subcommand("bounds", "evaluate convergence bounds");
    CommonFlags bounds_common;
    GSpecFlags bounds_g;
    bounds_common.attach(bounds);
    bounds_g.attach(bounds);
    std::string bounds_scheme = "cf";
    std::string bounds_x0 = "0,0";
    std::vector<int> bounds_N;
    double bounds_R = 0.0, bounds_M0 = 0.0, bounds_C0 = 0.0, bounds_R0 = 0.0;
    auto* bounds_scheme_opt = bounds->add_option("--scheme", bounds_scheme, "scheme label");
    auto* bounds_x0_opt = bounds->add_option("--x0", bounds_x0, "initial state re,im");
    auto* bounds_N_opt =
        bounds->add_option("--N", bounds_N, "orders (comma separated)")->delimiter(',');
    auto* bounds_R_opt = bounds->add_option("--R", bounds_R, "radius parameter");
    auto* bounds_M0_opt = bounds->add_option("--M0", bounds_M0, "containment radius");
    auto* bounds_C0_opt = bounds->add_option("--C0", bounds_C0, "envelope constant");
    auto* bounds_R0_opt = bounds->add_option("--R0", bounds_R0, "envelope radius");

    // grid
    auto* grid = app.add_subcommand("grid", "sweep an error surface");
    CommonFlags grid_common;
    GSpecFlags grid_g;
    grid_common.attach(grid);
    grid_g.attach(grid);
    std::string grid_scheme = "carleman";
    int grid_N = 10;
    double grid_tstar = 0.5;
    auto* grid_scheme_opt = grid->add_option("--scheme", grid_scheme, "carleman|cf");
    auto* grid_N_opt = grid->add_option("--N", grid_N, "truncation order");
    auto* grid_tstar_opt = grid->add_option("--tstar", grid_tstar, "time horizon");

    // figure
    auto* figure = app.add_subcommand("figure", "reproduce a figure file set");
    CommonFlags figure_common;
    figure_common.attach(figure);
    std::string figure_id;
    figure->add_option("--id", figure_id, "figure id")->required();

    // classify
    auto* classify = app.add_subcommand("classify", "classify a trajectory");
    CommonFlags classify_common;
    GSpecFlags classify_g;
    classify_common.attach(classify);
    classify_g.attach(classify);
    std::string classify_x0 = "0,0";
    auto* classify_x0_opt = classify->add_option("--x0", classify_x0, "initial state re,im");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (lift->parsed()) {
            Resolver r;
            r.load(lift_common.config_opt->count() ? lift_common.config_path : "");
            const std::string scheme =
                r.pick<std::string>(lift_scheme_opt, lift_scheme, "scheme", "carleman");
            const int N = r.pick(lift_N_opt, lift_N, "N", 3);
            return cmd_lift(r, lift_common, lift_g, scheme, N);
        }
        if (solve->parsed()) {
            Resolver r;
            r.load(solve_common.config_opt->count() ? solve_common.config_path : "");
            const std::string scheme =
                r.pick<std::string>(solve_scheme_opt, solve_scheme, "scheme", "carleman");
            const int N = r.pick(solve_N_opt, solve_N, "N", 8);
            std::string x0 = solve_x0;
            if (solve_x0_opt->count() == 0 && r.cfg.contains("x0")) {
                const CScalar v = complex_from_json(r.cfg["x0"], "x0");
                x0 = format_double(v.real()) + "," + format_double(v.imag());
            }
            const double t1 = r.pick(solve_t1_opt, solve_t1, "t1", 1.0);
            const int steps = r.pick(solve_steps_opt, solve_steps, "steps", 200);
            return cmd_solve(r, solve_common, solve_g, scheme, N, x0, t1, steps);
        }
        if (bounds->parsed()) {
            Resolver r;
            r.load(bounds_common.config_opt->count() ? bounds_common.config_path : "");
            std::string x0 = bounds_x0;
            if (bounds_x0_opt->count() == 0 && r.cfg.contains("x0")) {
                const CScalar v = complex_from_json(r.cfg["x0"], "x0");
                x0 = format_double(v.real()) + "," + format_double(v.imag());
            }
            const std::string scheme =
                r.pick<std::string>(bounds_scheme_opt, bounds_scheme, "scheme", "cf");
            std::vector<int> N_list = bounds_N;
            if (bounds_N_opt->count() == 0 && r.cfg.contains("N"))
                N_list = r.cfg["N"].get<std::vector<int>>();
            return cmd_bounds(r, bounds_common, bounds_g, x0, N_list, bounds_R,
                              bounds_R_opt, bounds_M0, bounds_M0_opt, bounds_C0,
                              bounds_C0_opt, bounds_R0, bounds_R0_opt, scheme);
        }
        if (grid->parsed()) {
            Resolver r;
            r.load(grid_common.config_opt->count() ? grid_common.config_path : "");
            return cmd_grid(r, grid_common, grid_g, grid_scheme, grid_scheme_opt,
                            grid_N, grid_N_opt, grid_tstar, grid_tstar_opt);
        }
        if (figure->parsed()) {
            Resolver r;
            r.load(figure_common.config_opt->count() ? figure_common.config_path : "");
            return cmd_figure(r, figure_common, figure_id);
        }
        if (classify->parsed()) {
            Resolver r;
            r.load(classify_common.config_opt->count() ? classify_common.config_path : "");
            std::string x0 = classify_x0;
            if (classify_x0_opt->count() == 0 && r.cfg.contains("x0")) {
                const CScalar v = complex_from_json(r.cfg["x0"], "x0");
                x0 = format_double(v.real()) + "," + format_double(v.imag());
            }
            return cmd_classify(r, classify_common, classify_g, x0);
        }
    } catch (const UsageFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const UnknownFigureId& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
