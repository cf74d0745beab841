#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "carlift/numerics.hpp"

namespace carlift {

enum class Scheme { Carleman, CarlemanFourier };

/// One error-surface sweep: a rectangle of initial states, a truncation
/// order, a time horizon, and the scheme parameters.
struct GridSpec {
    std::array<double, 2> re_range{-2.0, 2.0};
    std::array<double, 2> im_range{-2.0, 2.0};
    int nx = 41;
    int ny = 41;
    double T_star = 0.5;
    int N = 10;
    Scheme scheme = Scheme::Carleman;
    CScalar a{1.0, 0.0};  // Carleman scheme parameter (with b)
    CScalar b{1.0, 0.0};
    double phi = 0.0;     // Carleman-Fourier scheme parameter, a = e^{i phi}
    int time_samples = 256;
    int workers = 1;

    double re_at(int ix) const;
    double im_at(int iy) const;

    nlohmann::json to_json() const;
};

/// Worst-case-over-time log10 errors, clamped to [-5, 2]. Cells whose
/// reference solution blows up before T_star carry the ceiling value and a
/// flag. Row-major with the imaginary axis ascending across rows.
struct ErrorGrid {
    GridSpec spec;
    std::vector<double> values;
    std::vector<std::uint8_t> flags;
    std::vector<char> provenance;  // 'e' closed form, 'r' rk45

    double value(int ix, int iy) const;
    bool flagged(int ix, int iy) const;
};

/// max over a uniform time grid of log10 |e^{i(x_{1,N}(t) - x(t))} - 1| per
/// cell, clamped; the reference is the closed-form solution when b = 1 and
/// |a| = 1, otherwise rk45.
ErrorGrid error_grid_carleman(const GridSpec& spec);

/// max over a uniform time grid of log10 |z_{1,N}(t) e^{-ix(t)} - 1| per
/// cell (solver-based; the closed form below is the cross-check).
ErrorGrid error_grid_cf(const GridSpec& spec);

/// Closed-form counterpart of error_grid_cf values (unclamped):
/// N (-Im x0 log10 e + (1/2) log10 max h(phi, t)) with the max taken over
/// the same uniform time grid.
double cf_closed_form_error(double phi, double im_x0, double T_star, int N,
                            int time_samples);

void write_grid_csv(const ErrorGrid& grid, const std::filesystem::path& path);

void write_grid_meta(const ErrorGrid& grid, const std::filesystem::path& path,
                     const nlohmann::json& notes);

void write_grid_png(const ErrorGrid& grid, const std::filesystem::path& path);

struct FigureOptions {
    bool png = false;
    int workers = 1;
};

/// Emits the file set of one figure id (fig1, fig2, fig3-left, fig3-right,
/// fig4-top, fig4-bottom, fig5) into out_dir and returns the written paths.
/// Throws UnknownFigureId for anything else.
std::vector<std::filesystem::path> reproduce_figure(const std::string& id,
                                                    const std::filesystem::path& out_dir,
                                                    const FigureOptions& opts = {});

/// All valid figure ids in emission order.
const std::vector<std::string>& figure_ids();

}  // namespace carlift
