#include "isoflow/pressure.hpp"

#include <cmath>

#include "isoflow/errors.hpp"

namespace isoflow {

double xlnx(double x) {
    if (x < 0) throw InvalidParams("xlnx: negative argument");
    return x > 0 ? x * std::log(x) : 0.0;
}

PressureLaw PressureLaw::isothermal(double kappa) {
    if (!(kappa > 0)) throw InvalidParams("PressureLaw: kappa = P'(0) must be > 0");
    PressureLaw law;
    law.kind_ = Kind::Isothermal;
    law.kappa_ = kappa;
    return law;
}

PressureLaw PressureLaw::with_powers(double kappa, std::vector<std::pair<double, double>> powers) {
    if (!(kappa > 0)) throw InvalidParams("PressureLaw: kappa = P'(0) must be > 0");
    for (const auto& [kj, gj] : powers) {
        if (!(kj > 0)) throw InvalidParams("PressureLaw: power coefficients must be > 0");
        if (!(gj > 1)) throw InvalidParams("PressureLaw: power exponents must be > 1");
    }
    PressureLaw law;
    law.kind_ = powers.empty() ? Kind::Isothermal : Kind::IsothermalPlusPowers;
    law.kappa_ = kappa;
    law.powers_ = std::move(powers);
    return law;
}

PressureLaw PressureLaw::exponential() {
    PressureLaw law;
    law.kind_ = Kind::Exponential;
    law.kappa_ = 1.0;
    return law;
}

PressureLaw PressureLaw::custom(std::function<double(double)> p, std::function<double(double)> p1,
                                std::function<double(double)> p2) {
    PressureLaw law;
    law.kind_ = Kind::Custom;
    law.p_ = std::move(p);
    law.p1_ = std::move(p1);
    law.p2_ = std::move(p2);
    law.kappa_ = law.p1_(0.0);
    if (!(law.kappa_ > 0)) throw InvalidParams("PressureLaw: custom law needs P'(0) > 0");
    return law;
}

double PressureLaw::p(double rho) const {
    switch (kind_) {
        case Kind::Isothermal:
            return kappa_ * rho;
        case Kind::IsothermalPlusPowers: {
            double v = kappa_ * rho;
            for (const auto& [kj, gj] : powers_) v += kj * std::pow(rho, gj);
            return v;
        }
        case Kind::Exponential:
            return std::exp(rho);
        case Kind::Custom:
            return p_(rho);
    }
    return 0.0;
}

double PressureLaw::p1(double rho) const {
    switch (kind_) {
        case Kind::Isothermal:
            return kappa_;
        case Kind::IsothermalPlusPowers: {
            double v = kappa_;
            for (const auto& [kj, gj] : powers_) v += kj * gj * std::pow(rho, gj - 1.0);
            return v;
        }
        case Kind::Exponential:
            return std::exp(rho);
        case Kind::Custom:
            return p1_(rho);
    }
    return 0.0;
}

double PressureLaw::p2(double rho) const {
    switch (kind_) {
        case Kind::Isothermal:
            return 0.0;
        case Kind::IsothermalPlusPowers: {
            double v = 0.0;
            for (const auto& [kj, gj] : powers_) v += kj * gj * (gj - 1.0) * std::pow(rho, gj - 2.0);
            return v;
        }
        case Kind::Exponential:
            return std::exp(rho);
        case Kind::Custom:
            return p2_(rho);
    }
    return 0.0;
}

double PressureLaw::Gpp(double sigma) const {
    if (sigma < 0) throw InvalidParams("Gpp: sigma must be >= 0");
    switch (kind_) {
        case Kind::Isothermal:
            return 0.0;
        case Kind::IsothermalPlusPowers: {
            double v = 0.0;
            for (const auto& [kj, gj] : powers_) v += kj * gj * std::pow(sigma, gj - 2.0);
            return v;
        }
        default:
            break;
    }
    // (P'(sigma) - P'(0))/sigma loses precision near 0; the mean-value form
    // P''(sigma/2) agrees to O(sigma^2).
    if (sigma < 1e-5) return p2(0.5 * sigma);
    return (p1(sigma) - kappa_) / sigma;
}

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth > 48)
        throw QuadratureFailure("eval_G: adaptive Simpson recursion depth exceeded");
    if (std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 0);
}

}  // namespace

double PressureLaw::G(double u) const {
    if (u < 0) throw InvalidParams("G: u must be >= 0");
    if (u == 0) return 0.0;
    switch (kind_) {
        case Kind::Isothermal:
            return 0.0;
        case Kind::IsothermalPlusPowers: {
            // Double antiderivative of k_j g_j s^{g_j - 2}: k_j u^{g_j}/(g_j - 1).
            double v = 0.0;
            for (const auto& [kj, gj] : powers_) v += kj * std::pow(u, gj) / (gj - 1.0);
            return v;
        }
        default: {
            // Swap the order of integration: G(u) = int_0^u (u - s) G''(s) ds.
            auto integrand = [this, u](double s) { return (u - s) * Gpp(s); };
            return adaptive_simpson(integrand, 0.0, u, 1e-10);
        }
    }
}

double PressureLaw::F(double rho) const {
    if (rho < 0) throw InvalidParams("F: rho must be >= 0");
    return kappa_ * xlnx(rho) + G(rho);
}

double PressureLaw::excess_pressure(double sigma) const {
    if (sigma < 0) throw InvalidParams("excess_pressure: sigma must be >= 0");
    return p(sigma) - p(0.0) - sigma * kappa_;
}

}  // namespace isoflow
