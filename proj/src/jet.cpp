#include "rvf/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace rvf {

namespace {

int total(const MultiIndex& m) { return m[0] + m[1] + m[2] + m[3]; }

struct LayoutCache {
    std::mutex mu;
    std::map<int, JetLayout> layouts;
    std::map<int, std::vector<std::array<int32_t, 3>>> products;
};

LayoutCache& cache() {
    static LayoutCache c;
    return c;
}

JetLayout build_layout(int degree) {
    JetLayout L;
    L.degree = degree;
    for (int d = 0; d <= degree; ++d)
        for (int k0 = d; k0 >= 0; --k0)
            for (int k1 = d - k0; k1 >= 0; --k1)
                for (int k2 = d - k0 - k1; k2 >= 0; --k2)
                    L.monomials.push_back({k0, k1, k2, d - k0 - k1 - k2});
    L.shift_up.resize(L.monomials.size());
    for (size_t i = 0; i < L.monomials.size(); ++i)
        for (int d = 0; d < 4; ++d) {
            MultiIndex m = L.monomials[i];
            ++m[d];
            L.shift_up[i][d] = total(m) <= degree ? L.position(m) : -1;
        }
    return L;
}

const std::vector<std::array<int32_t, 3>>& product_table(int degree) {
    auto& c = cache();
    std::lock_guard<std::mutex> lock(c.mu);
    auto it = c.products.find(degree);
    if (it != c.products.end()) return it->second;
    const JetLayout& L = JetLayout::of(degree);
    std::vector<std::array<int32_t, 3>> tab;
    const int n = L.size();
    for (int a = 0; a < n; ++a) {
        const auto& ma = L.monomials[a];
        const int da = total(ma);
        for (int b = 0; b < n; ++b) {
            const auto& mb = L.monomials[b];
            if (da + total(mb) > degree) continue;
            const MultiIndex mc = {ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2], ma[3] + mb[3]};
            tab.push_back({(int32_t)a, (int32_t)b, (int32_t)L.position(mc)});
        }
    }
    return c.products.emplace(degree, std::move(tab)).first->second;
}

} // namespace

int JetLayout::position(const MultiIndex& m) const {
    const int d = total(m);
    if (d > degree) throw DomainError("multi-index beyond jet truncation");
    // monomials of total degree < d come first
    int start = 0;
    for (int q = 0; q < d; ++q) start += (q + 1) * (q + 2) * (q + 3) / 6;
    for (size_t i = start; i < monomials.size(); ++i)
        if (monomials[i] == m) return (int)i;
    throw DomainError("multi-index not found in layout");
}

const JetLayout& JetLayout::of(int degree) {
    auto& c = cache();
    std::lock_guard<std::mutex> lock(c.mu);
    auto it = c.layouts.find(degree);
    if (it == c.layouts.end()) it = c.layouts.emplace(degree, build_layout(degree)).first;
    return it->second;
}

TaylorJet::TaylorJet(int degree, double constant)
    : layout_(&JetLayout::of(degree)), c_(layout_->size(), 0.0), valid_(degree) {
    c_[0] = constant;
}

TaylorJet TaylorJet::coordinate(int degree, int dim, double scale) {
    TaylorJet j(degree);
    MultiIndex m = {0, 0, 0, 0};
    m[dim] = 1;
    j.set_coefficient(m, scale);
    return j;
}

double TaylorJet::coefficient(const MultiIndex& m) const {
    if (total(m) > valid_) throw InsufficientJet("coefficient beyond the valid order of this jet");
    return c_[layout_->position(m)];
}

void TaylorJet::set_coefficient(const MultiIndex& m, double v) {
    c_[layout_->position(m)] = v;
}

double TaylorJet::derivative(const MultiIndex& m) const {
    double fact = 1.0;
    for (int d = 0; d < 4; ++d)
        for (int k = 2; k <= m[d]; ++k) fact *= k;
    return coefficient(m) * fact;
}

TaylorJet& TaylorJet::operator+=(const TaylorJet& o) {
    if (layout_ != o.layout_) throw DomainError("jet degree mismatch");
    for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    valid_ = std::min(valid_, o.valid_);
    return *this;
}

TaylorJet& TaylorJet::operator-=(const TaylorJet& o) {
    if (layout_ != o.layout_) throw DomainError("jet degree mismatch");
    for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    valid_ = std::min(valid_, o.valid_);
    return *this;
}

TaylorJet& TaylorJet::operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
}

TaylorJet TaylorJet::operator*(const TaylorJet& o) const {
    if (layout_ != o.layout_) throw DomainError("jet degree mismatch");
    TaylorJet out(degree());
    out.valid_ = std::min(valid_, o.valid_);
    const auto& tab = product_table(degree());
    const double* a = c_.data();
    const double* b = o.c_.data();
    double* r = out.c_.data();
    for (const auto& e : tab) r[e[2]] += a[e[0]] * b[e[1]];
    return out;
}

TaylorJet TaylorJet::analytic(const std::function<double(int)>& series_coeff, double) const {
    // sum_k a_k e^k with e = f - f(0); e has no constant term so the series
    // truncates at the jet degree
    TaylorJet e = *this;
    e.c_[0] = 0.0;
    TaylorJet out(degree(), series_coeff(0));
    out.valid_ = valid_;
    TaylorJet epow(degree(), 1.0);
    epow.valid_ = valid_;
    for (int k = 1; k <= degree(); ++k) {
        epow = epow * e;
        TaylorJet term = epow;
        term *= series_coeff(k);
        out += term;
    }
    return out;
}

TaylorJet TaylorJet::reciprocal() const {
    const double f0 = c_[0];
    if (f0 == 0.0) throw DomainError("reciprocal of a jet with zero constant term");
    std::vector<double> a(degree() + 1);
    double p = 1.0 / f0;
    for (int k = 0; k <= degree(); ++k) {
        a[k] = p;
        p *= -1.0 / f0;
    }
    return analytic([a](int k) { return a[k]; }, f0);
}

TaylorJet TaylorJet::operator/(const TaylorJet& o) const { return *this * o.reciprocal(); }

TaylorJet TaylorJet::sqrt() const {
    const double f0 = c_[0];
    if (!(f0 > 0.0)) throw DomainError("sqrt of a jet needs a positive constant term");
    std::vector<double> a(degree() + 1);
    a[0] = std::sqrt(f0);
    double coef = a[0];
    for (int k = 1; k <= degree(); ++k) {
        coef *= (0.5 - (k - 1)) / k / f0;
        a[k] = coef;
    }
    return analytic([a](int k) { return a[k]; }, f0);
}

TaylorJet TaylorJet::pow(double alpha) const {
    const double f0 = c_[0];
    if (!(f0 > 0.0)) throw DomainError("pow of a jet needs a positive constant term");
    std::vector<double> a(degree() + 1);
    a[0] = std::pow(f0, alpha);
    double coef = a[0];
    for (int k = 1; k <= degree(); ++k) {
        coef *= (alpha - (k - 1)) / k / f0;
        a[k] = coef;
    }
    return analytic([a](int k) { return a[k]; }, f0);
}

TaylorJet TaylorJet::exp() const {
    const double e0 = std::exp(c_[0]);
    std::vector<double> a(degree() + 1);
    double f = 1.0;
    for (int k = 0; k <= degree(); ++k) {
        if (k > 0) f *= k;
        a[k] = e0 / f;
    }
    return analytic([a](int k) { return a[k]; }, c_[0]);
}

TaylorJet TaylorJet::log() const {
    const double f0 = c_[0];
    if (!(f0 > 0.0)) throw DomainError("log of a jet needs a positive constant term");
    std::vector<double> a(degree() + 1);
    a[0] = std::log(f0);
    double p = 1.0 / f0;
    for (int k = 1; k <= degree(); ++k) {
        a[k] = (k % 2 ? 1.0 : -1.0) * p / k;
        p /= f0;
    }
    return analytic([a](int k) { return a[k]; }, f0);
}

TaylorJet TaylorJet::derive(int dim) const {
    TaylorJet out(degree());
    out.valid_ = std::max(0, valid_ - 1);
    const auto& L = *layout_;
    for (int i = 0; i < L.size(); ++i) {
        const int up = L.shift_up[i][dim];
        if (up < 0) continue;
        out.c_[i] = c_[up] * (L.monomials[i][dim] + 1);
    }
    return out;
}

TaylorJet TaylorJet::compose_linear(const std::array<std::array<double, 4>, 4>& A) const {
    const int N = degree();
    std::array<std::vector<TaylorJet>, 4> pw;
    for (int d = 0; d < 4; ++d) {
        pw[d].reserve(N + 1);
        pw[d].push_back(TaylorJet(N, 1.0));
        TaylorJet X(N);
        for (int col = 0; col < 4; ++col)
            if (A[d][col] != 0.0) X += TaylorJet::coordinate(N, col, A[d][col]);
        for (int k = 1; k <= N; ++k) pw[d].push_back(pw[d][k - 1] * X);
    }
    TaylorJet out(N);
    const auto& L = *layout_;
    for (int i = 0; i < L.size(); ++i) {
        if (c_[i] == 0.0) continue;
        const auto& m = L.monomials[i];
        TaylorJet term = pw[0][m[0]] * pw[1][m[1]];
        term = term * pw[2][m[2]];
        term = term * pw[3][m[3]];
        term *= c_[i];
        out += term;
    }
    out.valid_ = valid_;
    return out;
}

TaylorJet TaylorJet::drop_t_orders_above(int tmax) const {
    TaylorJet out = *this;
    const auto& L = *layout_;
    for (int i = 0; i < L.size(); ++i)
        if (L.monomials[i][0] > tmax) out.c_[i] = 0.0;
    return out;
}

double TaylorJet::max_abs_coefficient() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
}

} // namespace rvf
