#pragma once

// Point-wise Lorentzian tensor algebra on finite jets.
//
// Conventions used throughout:
//   - indices run 0..3, metric signature (+,-,-,-)
//   - component arrays are stored covariant unless a name says otherwise
//   - derivative slots come first: d1(a,b) = d_a X_b, d2[a](b,c) = d_a d_b X_c
//   - Christoffel: Gamma^l_{mn} = chris[l](m,n)
//   - Riemann: R^r_{smn} = riem[r][s](m,n), Ricci R_{sn} = R^m_{smn}

#include <Eigen/Dense>
#include <array>
#include <optional>

#include "rvf/errors.hpp"

namespace rvf {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;
using Ten3 = std::array<Mat4, 4>;                 // T[a](b,c)
using Ten4 = std::array<std::array<Mat4, 4>, 4>;  // T[a][b](c,d)

inline Ten3 zero_ten3() {
    Ten3 t;
    for (auto& m : t) m.setZero();
    return t;
}

inline Ten4 zero_ten4() {
    Ten4 t;
    for (auto& row : t)
        for (auto& m : row) m.setZero();
    return t;
}

// Metric with partial derivatives up to second order at one point.
// d1g[c](a,b) = d_c g_{ab};  d2g[c][d](a,b) = d_c d_d g_{ab}.
struct Metric4Jet {
    Mat4 g = Mat4::Identity();
    Ten3 d1g = zero_ten3();
    Ten4 d2g = zero_ten4();
    int order = 2;  // highest derivative order actually supplied

    static Metric4Jet minkowski();

    // inverse metric; throws SingularMetric when det(g) vanishes
    Mat4 inverse() const;

    // true when the eigenvalue pattern is exactly (+,-,-,-)
    bool has_lorentzian_signature() const;

    // throws SingularMetric unless symmetric, invertible and of signature (+,-,-,-)
    void validate() const;
};

struct ScalarJet {
    double value = 0.0;
    Vec4 d1 = Vec4::Zero();
    Mat4 d2 = Mat4::Zero();
    int order = 1;
};

struct CovectorJet {
    Vec4 value = Vec4::Zero();
    Mat4 d1 = Mat4::Zero();   // d1(a,b) = d_a C_b
    Ten3 d2 = zero_ten3();    // d2[a](b,c) = d_a d_b C_c, symmetric in (a,b)
    int order = 1;
};

struct VectorJet {
    Vec4 value = Vec4::Zero();
    Mat4 d1 = Mat4::Zero();   // d1(a,b) = d_a V^b
    int order = 1;
};

struct CurvaturePack {
    Ten3 christoffel = zero_ten3();   // Gamma^l_{mn} = christoffel[l](m,n)
    Ten4 riemann = zero_ten4();       // R^r_{smn} = riemann[r][s](m,n)
    Mat4 ricci = Mat4::Zero();
    double scalar = 0.0;
};

// v_a = g_{ab} v^b
Vec4 lower_index(const Metric4Jet& g, const Vec4& v);
// v^a = g^{ab} v_b
Vec4 raise_index(const Metric4Jet& g, const Vec4& w);

// squared g-norm of a vector (upper-index components)
double norm_squared(const Metric4Jet& g, const Vec4& v);
// squared inverse-metric norm of a covector
double conorm_squared(const Metric4Jet& g, const Vec4& xi);

// pi_{ab} = g_{ab} - u_a u_b for a normalized velocity u (upper components).
// Throws NormalizationError when |u.u - 1| > tol.
Mat4 projection(const Metric4Jet& g, const Vec4& u, double tol = 1e-9);

// mixed projector pi_a^b = delta_a^b - u_a u^b
Mat4 projection_mixed(const Metric4Jet& g, const Vec4& u, double tol = 1e-9);

// Gamma^l_{mn} from the metric 1-jet
Ten3 christoffel(const Metric4Jet& g);

// dGamma[k][l](m,n) = d_k Gamma^l_{mn}; needs the metric 2-jet
Ten4 christoffel_derivative(const Metric4Jet& g);

// Christoffel, Riemann, Ricci and scalar curvature; needs the metric 2-jet
CurvaturePack curvature(const Metric4Jet& g);

// nabla_a of fields given by 1-jets. Results are laid out as d1 above.
Vec4 covariant_derivative(const Metric4Jet& g, const ScalarJet& f);
Mat4 covariant_derivative(const Metric4Jet& g, const CovectorJet& w);
Mat4 covariant_derivative(const Metric4Jet& g, const VectorJet& v);
// nabla_a T_{bc} for a covariant 2-tensor with first partials dT[a](b,c)
Ten3 covariant_derivative_tensor02(const Metric4Jet& g, const Mat4& T, const Ten3& dT);

// N[a](b,c) = nabla_a nabla_b C_c; needs metric and covector 2-jets
Ten3 second_covariant_derivative(const Metric4Jet& g, const CovectorJet& w);

} // namespace rvf
