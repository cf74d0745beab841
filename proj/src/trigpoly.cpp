#include "carlift/trigpoly.hpp"

#include <algorithm>
#include <cmath>

namespace carlift {

TrigPoly::TrigPoly(int degree, std::vector<CScalar> coeffs)
    : degree_(degree), coeffs_(std::move(coeffs)) {
    if (degree < 0)
        throw PreconditionError("TrigPoly: degree must be nonnegative");
    if (coeffs_.size() != static_cast<std::size_t>(2 * degree + 1))
        throw PreconditionError("TrigPoly: need exactly 2M+1 coefficients");
}

CScalar TrigPoly::coeff(int m) const {
    if (m < -degree_ || m > degree_) return CScalar(0.0, 0.0);
    return coeffs_[static_cast<std::size_t>(m + degree_)];
}

CScalar TrigPoly::eval(CScalar x) const {
    CScalar sum(0.0, 0.0);
    for (int m = -degree_; m <= degree_; ++m) {
        const CScalar gm = coeff(m);
        if (gm == CScalar(0.0, 0.0)) continue;
        sum += gm * std::exp(CScalar(0.0, 1.0) * static_cast<double>(m) * x);
    }
    return sum;
}

bool TrigPoly::has_nonnegative_frequencies_only() const {
    for (int m = -degree_; m < 0; ++m)
        if (coeff(m) != CScalar(0.0, 0.0)) return false;
    return true;
}

MaclaurinSeries TrigPoly::maclaurin(int n_max) const {
    if (n_max < 1)
        throw PreconditionError("maclaurin: n_max must be at least 1");
    MaclaurinSeries out;
    out.coeffs.assign(static_cast<std::size_t>(n_max) + 1, CScalar(0.0, 0.0));
    for (int m = -degree_; m <= degree_; ++m) {
        const CScalar gm = coeff(m);
        if (gm == CScalar(0.0, 0.0)) continue;
        // Running product g_m (im)^n / n!.
        CScalar term = gm;
        out.coeffs[0] += term;
        for (int n = 1; n <= n_max; ++n) {
            term *= CScalar(0.0, static_cast<double>(m)) / static_cast<double>(n);
            out.coeffs[static_cast<std::size_t>(n)] += term;
        }
    }
    return out;
}

nlohmann::json TrigPoly::to_json() const {
    nlohmann::json coeffs = nlohmann::json::array();
    for (int m = -degree_; m <= degree_; ++m) {
        const CScalar gm = coeff(m);
        coeffs.push_back({m, gm.real(), gm.imag()});
    }
    return nlohmann::json{{"M", degree_}, {"coeffs", coeffs}};
}

TrigPoly TrigPoly::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("M") || !j.contains("coeffs"))
        throw PreconditionError("TrigPoly::from_json: need object with M and coeffs");
    if (!j["M"].is_number_integer())
        throw PreconditionError("TrigPoly::from_json: M must be an integer");
    const int degree = j["M"].get<int>();
    if (degree < 0)
        throw PreconditionError("TrigPoly::from_json: M must be nonnegative");
    std::vector<CScalar> coeffs(static_cast<std::size_t>(2 * degree + 1),
                                CScalar(0.0, 0.0));
    std::vector<bool> seen(coeffs.size(), false);
    if (!j["coeffs"].is_array())
        throw PreconditionError("TrigPoly::from_json: coeffs must be an array");
    for (const auto& entry : j["coeffs"]) {
        if (!entry.is_array() || entry.size() != 3 || !entry[0].is_number_integer() ||
            !entry[1].is_number() || !entry[2].is_number())
            throw PreconditionError(
                "TrigPoly::from_json: coefficient entries are [m, re, im]");
        const int m = entry[0].get<int>();
        if (m < -degree || m > degree)
            throw PreconditionError("TrigPoly::from_json: frequency outside [-M, M]");
        const std::size_t idx = static_cast<std::size_t>(m + degree);
        if (seen[idx])
            throw PreconditionError("TrigPoly::from_json: duplicate frequency");
        seen[idx] = true;
        coeffs[idx] = CScalar(entry[1].get<double>(), entry[2].get<double>());
    }
    return TrigPoly(degree, std::move(coeffs));
}

BoundConstants default_bound_constants(const TrigPoly& g, int n_scan) {
    const double R0 = std::max(g.degree(), 1);
    // |c_n| n! / R0^{n-1} = |sum_m g_m (im)^n| / R0^{n-1}; track the powers
    // directly so no factorial is ever formed.
    double C0 = 0.0;
    const int M = g.degree();
    std::vector<CScalar> pow_im(static_cast<std::size_t>(2 * M + 1));
    for (int m = -M; m <= M; ++m)
        pow_im[static_cast<std::size_t>(m + M)] = CScalar(1.0, 0.0);
    double r_pow = 1.0;  // R0^{n-1}, starting at n = 1
    for (int n = 1; n <= n_scan; ++n) {
        CScalar s(0.0, 0.0);
        for (int m = -M; m <= M; ++m) {
            auto& p = pow_im[static_cast<std::size_t>(m + M)];
            p *= CScalar(0.0, static_cast<double>(m));
            s += g.coeff(m) * p;
        }
        C0 = std::max(C0, std::abs(s) / r_pow);
        r_pow *= R0;
    }
    return {C0, R0};
}

}  // namespace carlift
