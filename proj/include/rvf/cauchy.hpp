#pragma once

// Sequential determination of time derivatives on an initial slice from the
// Cauchy data (metric, its time slope, velocity, entropy, index), for the
// incompressible and irrotational viscous-fluid systems coupled to gravity in
// harmonic coordinates.
//
// All fields live as space-time Taylor jets around one point of the slice
// {x0 = 0}. Each step imposes the time-Taylor coefficients of one equation
// and solves the resulting linear system for the next unknown coefficient
// block. The build runs in an adapted frame with u^i = 0 at the base point
// (a slice-preserving shear), mirroring the frame in which the scalar and
// 3x3 solves of the current-acceleration step are classically displayed.

#include <optional>
#include <string>
#include <vector>

#include "rvf/jet.hpp"
#include "rvf/tensor.hpp"
#include "rvf/thermo.hpp"

namespace rvf {

using JetVec4 = std::array<TaylorJet, 4>;
using JetMat4 = std::array<std::array<TaylorJet, 4>, 4>;

JetVec4 make_jet_vec4(int degree);
JetMat4 make_jet_mat4(int degree);

struct SliceData {
    int jet_degree = 5;
    JetMat4 g;       // t^0 and t^1 coefficients are data; higher orders get filled
    JetVec4 u;       // covariant components, t^0 coefficients are data
    TaylorJet s;     // t^0
    TaylorJet F;     // t^0

    SliceData() : SliceData(5) {}
    explicit SliceData(int degree);

    static SliceData constant_state(const Mat4& g_point, const Vec4& u_lower, double s0,
                                    double F0, int degree = 5);
};

enum class CauchyTarget { Incompressible, Irrotational };

struct CauchyOptions {
    double kappa = 0.0;
    double vartheta = 1.0;
    double gravity = 1.0;  // coupling constant in front of T
    CauchyTarget target = CauchyTarget::Irrotational;
    double constraint_tol = 1e-8;
    bool check_constraints = true;
    Eigen::Matrix3d spatial_frame = Eigen::Matrix3d::Identity();  // extra adapted-frame freedom
};

struct StepReport {
    std::string name;
    double residual = 0.0;     // imposed coefficients after the solve
    double condition = 0.0;
    int rank = 0;
    int unknown_count = 0;
    bool rank_deficient = false;
    bool used_wave_fallback = false;
    double determinant = 0.0;           // current-acceleration step only
    double expected_determinant = 0.0;  // 2 vartheta^3 (pi00)^3
};

struct HierarchyEntry {
    std::string name;
    std::string producing_step;
    std::vector<double> values;  // flattened, original-frame components
    std::vector<std::string> depends_on;
    std::optional<double> oracle_delta;
};

struct CompatibilityReport {
    // residuals of the fourth-order metric equation, the third-order entropy
    // equation and the fourth-order current equation, evaluated on the
    // completed hierarchy at the stated differentiation depths
    double metric_depth0 = 0.0, metric_depth1 = 0.0;
    double entropy_depth0 = 0.0, entropy_depth1 = 0.0;
    double current_depth0 = 0.0;
    double max_abs() const;
};

struct CauchyHierarchy {
    std::vector<HierarchyEntry> entries;
    std::vector<StepReport> reports;

    Vec4 d0_u = Vec4::Zero();
    double d0_s = 0.0;
    double d0_F = 0.0;
    Vec4 d0_C = Vec4::Zero();
    Mat4 d00_g = Mat4::Zero();
    Vec4 d00_C = Vec4::Zero();
    Mat4 omega = Mat4::Zero();
    double d00_s = 0.0;
    Mat4 d000_g = Mat4::Zero();
    Vec4 d000_C = Vec4::Zero();
    Mat4 d0_omega = Mat4::Zero();
    Mat4 d0000_g = Mat4::Zero();
    double d000_s = 0.0;

    double constraint_residual = 0.0;
    double incompressibility_residual = 0.0;
    double vorticity_residual = 0.0;  // meaningful for the irrotational target

    std::optional<CompatibilityReport> compatibility;

    const HierarchyEntry* find(const std::string& name) const;
};

// the 3x3 current-acceleration system in a frame with u^i = 0: matrix
// vartheta (delta_i^j pi^00 + pi_i^0 pi^{j0}) and its closed-form determinant
struct CurrentAccelerationSystem {
    Eigen::Matrix3d matrix;
    double det = 0.0;
    double expected_det = 0.0;  // 2 vartheta^3 (pi^00)^3
    double pi00 = 0.0;
};

// assembles the system after shearing to the adapted frame (u^i = 0 at the
// point, slice preserved); throws NotTimelike for non-timelike u
CurrentAccelerationSystem assemble_d00C_system(const Mat4& g_point, const Vec4& u_up,
                                               double vartheta);

class CauchyLadder {
public:
    CauchyLadder(SliceData slice, EquationOfState eos, CauchyOptions opt);
    ~CauchyLadder();
    CauchyLadder(CauchyLadder&&) noexcept;
    CauchyLadder& operator=(CauchyLadder&&) noexcept;

    // steps in determination order; each runs its missing prerequisites
    Vec4 step_d0_u();
    double step_d0_s();
    double step_d0_F();
    Vec4 step_d0_C();
    Mat4 step_d00_g();
    Vec4 step_d00_C();
    Mat4 step_omega();
    double step_d00_s();
    Mat4 step_d000_g();
    Vec4 step_d000_C();
    Mat4 step_d0_omega();
    Mat4 step_d0000_g();
    double step_d000_s();

    // continues the ladder one more rung and evaluates the compatibility
    // residuals at depths (1, 1, 0)
    CompatibilityReport compatibility();

    // runs everything and packages entries, reports and diagnostics
    CauchyHierarchy finish(bool with_compatibility = true);

    const std::vector<StepReport>& reports() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

CauchyHierarchy build_hierarchy(const SliceData& slice, const EquationOfState& eos,
                                const CauchyOptions& opt);

// declared determination order; the audit checks it is a topological order of
// the entry dependency graph
std::vector<std::string> hierarchy_order();
bool audit_dependency_order(const CauchyHierarchy& h);

// fixture interchange
SliceData slice_from_json_file(const std::string& path, EquationOfState* eos_out,
                               CauchyOptions* opt_out);
std::string hierarchy_to_json(const CauchyHierarchy& h);

} // namespace rvf
