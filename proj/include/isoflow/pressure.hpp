#ifndef ISOFLOW_PRESSURE_HPP
#define ISOFLOW_PRESSURE_HPP

#include <functional>
#include <utility>
#include <vector>

namespace isoflow {

// A convex pressure law P with P'(0) > 0, together with the derived
// functionals used by the rescaled-system energies:
//   G(u) = int_0^u int_0^v (P'(s) - P'(0))/s ds dv,
//   F(rho) = P'(0) rho ln(rho) + G(rho),
//   excess(sigma) = P(sigma) - P(0) - sigma P'(0)  (>= 0 by convexity).
// Closed forms are used for the isothermal and power laws; the exponential
// and custom laws evaluate G by adaptive Simpson quadrature (tol 1e-10).
class PressureLaw {
public:
    enum class Kind { Isothermal, IsothermalPlusPowers, Exponential, Custom };

    static PressureLaw isothermal(double kappa);
    // P(rho) = kappa*rho + sum_j k_j rho^{gamma_j}, k_j > 0, gamma_j > 1.
    static PressureLaw with_powers(double kappa, std::vector<std::pair<double, double>> powers);
    static PressureLaw exponential();  // P(rho) = e^rho, so P'(0) = 1
    // Arbitrary C^2 law; p2 is needed for the removable singularity of the
    // G-integrand at 0.
    static PressureLaw custom(std::function<double(double)> p, std::function<double(double)> p1,
                              std::function<double(double)> p2);

    Kind kind() const { return kind_; }
    double kappa() const { return kappa_; }  // P'(0)
    const std::vector<std::pair<double, double>>& powers() const { return powers_; }

    double p(double rho) const;
    double p1(double rho) const;
    double p2(double rho) const;

    double G(double u) const;
    double F(double rho) const;
    double excess_pressure(double sigma) const;
    // G''(sigma) = (P'(sigma) - P'(0))/sigma, continuously extended at 0.
    double Gpp(double sigma) const;

private:
    PressureLaw() = default;

    Kind kind_ = Kind::Isothermal;
    double kappa_ = 1.0;
    std::vector<std::pair<double, double>> powers_;
    std::function<double(double)> p_, p1_, p2_;
};

// rho*ln(rho) with the continuous extension 0 at rho = 0.
double xlnx(double x);

}  // namespace isoflow

#endif
