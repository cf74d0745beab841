#pragma once

#include <vector>

#include <json.hpp>

#include "carlift/numerics.hpp"

namespace carlift {

/// Maclaurin coefficients c_0 .. c_{n_max} of a governing function.
struct MaclaurinSeries {
    std::vector<CScalar> coeffs;

    int n_max() const { return static_cast<int>(coeffs.size()) - 1; }
    CScalar c(int n) const { return coeffs[static_cast<std::size_t>(n)]; }
};

/// Trigonometric polynomial g(x) = sum over m in [-M, M] of g_m e^{imx},
/// immutable after construction.
class TrigPoly {
public:
    /// coeffs holds g_{-M} .. g_M in frequency order (size 2M + 1).
    TrigPoly(int degree, std::vector<CScalar> coeffs);

    int degree() const { return degree_; }

    /// g_m; zero outside [-M, M].
    CScalar coeff(int m) const;

    CScalar eval(CScalar x) const;

    /// True iff g_m = 0 for every m < 0. The test is exact, not tolerance
    /// based; callers constructing from measured data must pre-round.
    bool has_nonnegative_frequencies_only() const;

    /// Maclaurin re-expansion: c_n = sum_m g_m (im)^n / n!.
    MaclaurinSeries maclaurin(int n_max) const;

    nlohmann::json to_json() const;
    static TrigPoly from_json(const nlohmann::json& j);

private:
    int degree_;
    std::vector<CScalar> coeffs_;
};

/// Constants (C0, R0) such that |c_n| <= C0 R0^{n-1} / n! for every computed
/// Maclaurin coefficient, with R0 = max(M, 1) and C0 the smallest admissible
/// value over n in [1, n_scan].
struct BoundConstants {
    double C0;
    double R0;
};

BoundConstants default_bound_constants(const TrigPoly& g, int n_scan = 40);

}  // namespace carlift
