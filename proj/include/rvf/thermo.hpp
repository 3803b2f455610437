#pragma once

// Equation-of-state engine over the independent variables (F, s), where F is
// the index of the fluid and s the specific entropy. Families expose r(F,s),
// theta(F,s) and a pressure closure p(F,s); the remaining state follows from
//   rho + p = r F,   rho = r (1 + eps).
//
// Two side conditions are checked over declared domain boxes:
//   sound speed:  dr/dF >= r/F   (sound waves at most at light speed)
//   temperature:  theta  > 0

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "rvf/tensor.hpp"

namespace rvf {

struct ThermoState {
    double F = 1.0;
    double s = 1.0;
    double r = 1.0;
    double theta = 1.0;
    double p = 0.0;
    double rho = 1.0;
    double eps = 0.0;
    double dr_dF = 1.0;
    double dr_ds = 0.0;
};

struct DomainBox {
    double F_min = 0.5, F_max = 4.0;
    double s_min = 0.1, s_max = 3.0;
};

class EquationOfState {
public:
    enum class Family { PowerLaw, AffineIndex, Tabulated };

    // r = c F^a, theta = theta0 + theta_s * s, p = c (F^{a+1} - 1)/(a+1)
    static EquationOfState power_law(double c, double a, double theta0, double theta_s = 0.0);

    // ideal-gas closure in (F, s): adiabatic index gamma, entropy factor K0 e^{beta s};
    // valid for F > 1, with closed-form p and eps
    static EquationOfState affine_index(double gamma, double K0, double beta);

    // full (F_i, s_j) grid of r and theta, monotone cubic interpolation in both
    // directions; pressure integrates the F-interpolant from F_grid.front()
    static EquationOfState tabulated(std::vector<double> F_grid, std::vector<double> s_grid,
                                     std::vector<std::vector<double>> r_table,
                                     std::vector<std::vector<double>> theta_table);

    // CSV with header "F,s,r,theta", rows forming a complete grid
    static EquationOfState tabulated_from_csv(const std::string& path);

    double r(double F, double s) const;
    double dr_dF(double F, double s) const;
    double dr_ds(double F, double s) const;
    double theta(double F, double s) const;
    double p(double F, double s) const;

    ThermoState eval(double F, double s) const;

    const DomainBox& domain() const;
    EquationOfState& with_domain(const DomainBox& box);
    Family family() const;
    const std::string& name() const;
    // closed-form family parameters; empty for tabulated data
    std::map<std::string, double> parameters() const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    DomainBox domain_{};
    explicit EquationOfState(std::shared_ptr<const Impl> impl);
};

struct ConditionEntry {
    std::string condition;
    bool pass = true;
    double worst_margin = 0.0;  // min over samples of the condition margin
    double F_at = 0.0, s_at = 0.0;
};

struct ConditionReport {
    ConditionEntry sound_speed;
    ConditionEntry temperature;
    bool all_pass() const { return sound_speed.pass && temperature.pass; }
};

// grid scan plus local refinement around the worst point of each condition
ConditionReport check_conditions(const EquationOfState& eos, const DomainBox& box,
                                 int grid_n = 64, int refine_rounds = 24);

// C^a = F u^a for a normalized velocity; throws NormalizationError / DomainError
Vec4 dynamic_velocity(const Metric4Jet& g, double F, const Vec4& u, double tol = 1e-9);

} // namespace rvf
