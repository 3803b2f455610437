#pragma once

// Truncated Taylor polynomials in the four coordinates (x0..x3) up to a fixed
// total degree. All field data inside the slice-data ladder is carried this
// way: differentiating an expression in time is reading off a higher
// t-coefficient of its jet.
//
// Coefficient convention: coefficient(k) stores the Taylor coefficient
// f_(k) = D^k f(0) / k!, so derivatives carry factorials.

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "rvf/errors.hpp"

namespace rvf {

using MultiIndex = std::array<int, 4>;

// shared index tables for one truncation degree
struct JetLayout {
    int degree;
    std::vector<MultiIndex> monomials;           // graded order
    std::vector<std::array<int, 4>> shift_up;    // position of m + e_d, -1 past truncation
    int size() const { return (int)monomials.size(); }
    int position(const MultiIndex& m) const;
    static const JetLayout& of(int degree);      // cached per degree
};

class TaylorJet {
public:
    TaylorJet() : TaylorJet(4) {}
    explicit TaylorJet(int degree, double constant = 0.0);

    static TaylorJet constant(int degree, double v) { return TaylorJet(degree, v); }
    static TaylorJet coordinate(int degree, int dim, double scale = 1.0);

    int degree() const { return layout_->degree; }
    int valid_order() const { return valid_; }
    TaylorJet& set_valid_order(int v) { valid_ = v; return *this; }

    double value() const { return c_[0]; }
    // Taylor coefficient at the multi-index (not the derivative)
    double coefficient(const MultiIndex& m) const;
    void set_coefficient(const MultiIndex& m, double v);
    // derivative value D^m f(0) = coefficient * m!
    double derivative(const MultiIndex& m) const;

    const std::vector<double>& raw() const { return c_; }
    std::vector<double>& raw() { return c_; }

    TaylorJet& operator+=(const TaylorJet& o);
    TaylorJet& operator-=(const TaylorJet& o);
    TaylorJet& operator*=(double s);
    friend TaylorJet operator+(TaylorJet a, const TaylorJet& b) { return a += b; }
    friend TaylorJet operator-(TaylorJet a, const TaylorJet& b) { return a -= b; }
    friend TaylorJet operator*(TaylorJet a, double s) { return a *= s; }
    friend TaylorJet operator*(double s, TaylorJet a) { return a *= s; }
    friend TaylorJet operator-(TaylorJet a) { return a *= -1.0; }
    friend TaylorJet operator+(TaylorJet a, double s) {
        a.c_[0] += s;
        return a;
    }
    friend TaylorJet operator-(TaylorJet a, double s) {
        a.c_[0] -= s;
        return a;
    }

    TaylorJet operator*(const TaylorJet& o) const;
    TaylorJet operator/(const TaylorJet& o) const;

    TaylorJet reciprocal() const;
    TaylorJet sqrt() const;    // needs a positive constant term
    TaylorJet pow(double alpha) const;
    TaylorJet exp() const;
    TaylorJet log() const;     // needs a positive constant term

    // partial derivative along dim; the result is valid one order lower
    TaylorJet derive(int dim) const;

    // g(x) = f(A x) for a constant linear map A (rows = output slots of A x)
    TaylorJet compose_linear(const std::array<std::array<double, 4>, 4>& A) const;

    // restriction coefficients: the jet with every coefficient above the given
    // t-order (index 0) removed
    TaylorJet drop_t_orders_above(int tmax) const;

    double max_abs_coefficient() const;

private:
    const JetLayout* layout_;
    std::vector<double> c_;
    int valid_;

    // composition with a power series sum_k a_k (f - f0)^k
    TaylorJet analytic(const std::function<double(int)>& series_coeff, double at_value) const;
};

} // namespace rvf
