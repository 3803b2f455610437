#include "rvf/tensor.hpp"

#include <cmath>

namespace rvf {

Metric4Jet Metric4Jet::minkowski() {
    Metric4Jet m;
    m.g = Mat4::Zero();
    m.g(0, 0) = 1.0;
    m.g(1, 1) = m.g(2, 2) = m.g(3, 3) = -1.0;
    return m;
}

Mat4 Metric4Jet::inverse() const {
    Eigen::FullPivLU<Mat4> lu(g);
    if (!lu.isInvertible())
        throw SingularMetric("metric determinant vanishes");
    return lu.inverse();
}

bool Metric4Jet::has_lorentzian_signature() const {
    Eigen::SelfAdjointEigenSolver<Mat4> es(g);
    if (es.info() != Eigen::Success) return false;
    int pos = 0, neg = 0;
    for (int i = 0; i < 4; ++i) {
        if (es.eigenvalues()[i] > 0.0) ++pos;
        if (es.eigenvalues()[i] < 0.0) ++neg;
    }
    return pos == 1 && neg == 3;
}

void Metric4Jet::validate() const {
    if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw SingularMetric("metric is not symmetric");
    if (std::abs(g.determinant()) < 1e-14)
        throw SingularMetric("metric determinant vanishes");
    if (!has_lorentzian_signature())
        throw SingularMetric("metric signature is not (+,-,-,-)");
}

Vec4 lower_index(const Metric4Jet& g, const Vec4& v) {
    return g.g * v;
}

Vec4 raise_index(const Metric4Jet& g, const Vec4& w) {
    return g.inverse() * w;
}

double norm_squared(const Metric4Jet& g, const Vec4& v) {
    return v.dot(g.g * v);
}

double conorm_squared(const Metric4Jet& g, const Vec4& xi) {
    return xi.dot(g.inverse() * xi);
}

Mat4 projection(const Metric4Jet& g, const Vec4& u, double tol) {
    const double n = norm_squared(g, u);
    if (std::abs(n - 1.0) > tol)
        throw NormalizationError("u.u = " + std::to_string(n) + ", expected 1");
    const Vec4 ul = g.g * u;
    return g.g - ul * ul.transpose();
}

Mat4 projection_mixed(const Metric4Jet& g, const Vec4& u, double tol) {
    const double n = norm_squared(g, u);
    if (std::abs(n - 1.0) > tol)
        throw NormalizationError("u.u = " + std::to_string(n) + ", expected 1");
    const Vec4 ul = g.g * u;
    return Mat4::Identity() - ul * u.transpose();  // pi_a^b, row = a
}

Ten3 christoffel(const Metric4Jet& g) {
    if (g.order < 1) throw InsufficientJet("christoffel needs a metric 1-jet");
    const Mat4 ginv = g.inverse();
    Ten3 gam = zero_ten3();
    for (int l = 0; l < 4; ++l)
        for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n) {
                double s = 0.0;
                for (int r = 0; r < 4; ++r)
                    s += ginv(l, r) * (g.d1g[m](r, n) + g.d1g[n](r, m) - g.d1g[r](m, n));
                gam[l](m, n) = 0.5 * s;
            }
    return gam;
}

Ten4 christoffel_derivative(const Metric4Jet& g) {
    if (g.order < 2) throw InsufficientJet("christoffel_derivative needs a metric 2-jet");
    const Mat4 ginv = g.inverse();
    // d_k g^{lr} = -g^{la} (d_k g_{ab}) g^{br}
    Ten3 dginv = zero_ten3();
    for (int k = 0; k < 4; ++k) dginv[k] = -ginv * g.d1g[k] * ginv;
    Ten4 dgam = zero_ten4();
    for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
            for (int m = 0; m < 4; ++m)
                for (int n = 0; n < 4; ++n) {
                    double s = 0.0;
                    for (int r = 0; r < 4; ++r) {
                        s += dginv[k](l, r) * (g.d1g[m](r, n) + g.d1g[n](r, m) - g.d1g[r](m, n));
                        s += ginv(l, r) * (g.d2g[k][m](r, n) + g.d2g[k][n](r, m) - g.d2g[k][r](m, n));
                    }
                    dgam[k][l](m, n) = 0.5 * s;
                }
    return dgam;
}

CurvaturePack curvature(const Metric4Jet& g) {
    if (g.order < 2) throw InsufficientJet("curvature needs a metric 2-jet");
    CurvaturePack out;
    out.christoffel = christoffel(g);
    const Ten4 dgam = christoffel_derivative(g);
    const auto& gam = out.christoffel;
    for (int r = 0; r < 4; ++r)
        for (int s = 0; s < 4; ++s)
            for (int m = 0; m < 4; ++m)
                for (int n = 0; n < 4; ++n) {
                    double e = dgam[m][r](n, s) - dgam[n][r](m, s);
                    for (int l = 0; l < 4; ++l)
                        e += gam[r](m, l) * gam[l](n, s) - gam[r](n, l) * gam[l](m, s);
                    out.riemann[r][s](m, n) = e;
                }
    for (int s = 0; s < 4; ++s)
        for (int n = 0; n < 4; ++n) {
            double e = 0.0;
            for (int m = 0; m < 4; ++m) e += out.riemann[m][s](m, n);
            out.ricci(s, n) = e;
        }
    const Mat4 ginv = g.inverse();
    out.scalar = (ginv.transpose().cwiseProduct(out.ricci)).sum();
    return out;
}

Vec4 covariant_derivative(const Metric4Jet& g, const ScalarJet& f) {
    if (f.order < 1) throw InsufficientJet("covariant_derivative needs a 1-jet");
    (void)g;
    return f.d1;
}

Mat4 covariant_derivative(const Metric4Jet& g, const CovectorJet& w) {
    if (w.order < 1) throw InsufficientJet("covariant_derivative needs a 1-jet");
    const Ten3 gam = christoffel(g);
    Mat4 out;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            double e = w.d1(a, b);
            for (int l = 0; l < 4; ++l) e -= gam[l](a, b) * w.value[l];
            out(a, b) = e;
        }
    return out;
}

Mat4 covariant_derivative(const Metric4Jet& g, const VectorJet& v) {
    if (v.order < 1) throw InsufficientJet("covariant_derivative needs a 1-jet");
    const Ten3 gam = christoffel(g);
    Mat4 out;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            double e = v.d1(a, b);
            for (int l = 0; l < 4; ++l) e += gam[b](a, l) * v.value[l];
            out(a, b) = e;
        }
    return out;
}

Ten3 covariant_derivative_tensor02(const Metric4Jet& g, const Mat4& T, const Ten3& dT) {
    const Ten3 gam = christoffel(g);
    Ten3 out = zero_ten3();
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c) {
                double e = dT[a](b, c);
                for (int l = 0; l < 4; ++l)
                    e -= gam[l](a, b) * T(l, c) + gam[l](a, c) * T(b, l);
                out[a](b, c) = e;
            }
    return out;
}

Ten3 second_covariant_derivative(const Metric4Jet& g, const CovectorJet& w) {
    if (w.order < 2) throw InsufficientJet("second_covariant_derivative needs a 2-jet");
    const Ten3 gam = christoffel(g);
    const Ten4 dgam = christoffel_derivative(g);
    // D(a,b) = nabla_a w_b, and its raw partials d_c D(a,b)
    Mat4 D;
    Ten3 dD = zero_ten3();
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            double e = w.d1(a, b);
            for (int l = 0; l < 4; ++l) e -= gam[l](a, b) * w.value[l];
            D(a, b) = e;
            for (int c = 0; c < 4; ++c) {
                double de = w.d2[c](a, b);
                for (int l = 0; l < 4; ++l)
                    de -= dgam[c][l](a, b) * w.value[l] + gam[l](a, b) * w.d1(c, l);
                dD[c](a, b) = de;
            }
        }
    return covariant_derivative_tensor02(g, D, dD);
}

} // namespace rvf
