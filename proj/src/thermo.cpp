#include "rvf/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "rvf/errors.hpp"

namespace rvf {

namespace {

// Fritsch-Carlson monotone cubic interpolant with analytic derivative and
// running antiderivative
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const size_t n = x_.size();
        if (n < 2 || y_.size() != n) throw DomainError("interpolant needs >= 2 knots");
        for (size_t i = 0; i + 1 < n; ++i)
            if (!(x_[i + 1] > x_[i])) throw DomainError("interpolant knots must increase");
        m_.assign(n, 0.0);
        std::vector<double> d(n - 1);
        for (size_t k = 0; k + 1 < n; ++k) d[k] = (y_[k + 1] - y_[k]) / (x_[k + 1] - x_[k]);
        m_[0] = d[0];
        m_[n - 1] = d[n - 2];
        for (size_t k = 1; k + 1 < n; ++k)
            m_[k] = (d[k - 1] * d[k] > 0.0) ? 0.5 * (d[k - 1] + d[k]) : 0.0;
        for (size_t k = 0; k + 1 < n; ++k) {
            if (d[k] == 0.0) {
                m_[k] = m_[k + 1] = 0.0;
                continue;
            }
            const double a = m_[k] / d[k], b = m_[k + 1] / d[k];
            const double s2 = a * a + b * b;
            if (s2 > 9.0) {
                const double tau = 3.0 / std::sqrt(s2);
                m_[k] = tau * a * d[k];
                m_[k + 1] = tau * b * d[k];
            }
        }
        // cumulative integral of the cubic pieces up to each knot
        I_.assign(n, 0.0);
        for (size_t k = 0; k + 1 < n; ++k) {
            const double h = x_[k + 1] - x_[k];
            I_[k + 1] = I_[k] + h * (0.5 * (y_[k] + y_[k + 1]) + h * (m_[k] - m_[k + 1]) / 12.0);
        }
    }

    double value(double x) const { return piece(x).v; }
    double derivative(double x) const { return piece(x).dv; }
    double integral(double x) const { return piece(x).iv; }

private:
    struct Eval {
        double v, dv, iv;
    };
    Eval piece(double x) const {
        const size_t n = x_.size();
        size_t k = std::upper_bound(x_.begin(), x_.end(), x) - x_.begin();
        k = (k == 0) ? 0 : std::min(k - 1, n - 2);
        const double h = x_[k + 1] - x_[k];
        const double t = (x - x_[k]) / h;
        const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
        const double h10 = t * (1 - t) * (1 - t);
        const double h01 = t * t * (3 - 2 * t);
        const double h11 = t * t * (t - 1);
        const double v = h00 * y_[k] + h10 * h * m_[k] + h01 * y_[k + 1] + h11 * h * m_[k + 1];
        const double dh00 = 6 * t * (t - 1);
        const double dh10 = (1 - t) * (1 - 3 * t);
        const double dh01 = -dh00;
        const double dh11 = t * (3 * t - 2);
        const double dv = (dh00 * y_[k] + dh01 * y_[k + 1]) / h + dh10 * m_[k] + dh11 * m_[k + 1];
        // antiderivatives of the Hermite basis on [0,1], scaled by h
        const double H00 = t * t * (t * t / 2 - t) + t;       // int h00
        const double H10 = t * t * (t * t / 4 - 2 * t / 3 + 0.5);
        const double H01 = t * t * t * (1 - t / 2);
        const double H11 = t * t * t * (t / 4 - 1.0 / 3.0);
        const double iv = I_[k] + h * (H00 * y_[k] + H01 * y_[k + 1]) + h * h * (H10 * m_[k] + H11 * m_[k + 1]);
        return {v, dv, iv};
    }
    std::vector<double> x_, y_, m_;
    std::vector<double> I_;
};

} // namespace

struct EquationOfState::Impl {
    Family family = Family::PowerLaw;
    std::string name;

    // power law
    double c = 1.0, a = 1.0, theta0 = 1.0, theta_s = 0.0;
    // affine index
    double gamma = 4.0 / 3.0, K0 = 1.0, beta = 1.0;
    // tabulated
    std::vector<double> Fg, sg;
    std::vector<MonotoneCubic> rows_r, rows_theta;  // one F-interpolant per s knot

    double r(double F, double s) const {
        switch (family) {
            case Family::PowerLaw: return c * std::pow(F, a);
            case Family::AffineIndex: return std::pow(arg(F, s), 1.0 / (gamma - 1.0));
            case Family::Tabulated: return across_s(F, s, rows_r, Eval::Value);
        }
        return 0.0;
    }
    double dr_dF(double F, double s) const {
        switch (family) {
            case Family::PowerLaw: return c * a * std::pow(F, a - 1.0);
            case Family::AffineIndex: return r(F, s) / ((gamma - 1.0) * (F - 1.0));
            case Family::Tabulated: return across_s(F, s, rows_r, Eval::DF);
        }
        return 0.0;
    }
    double dr_ds(double F, double s) const {
        switch (family) {
            case Family::PowerLaw: return 0.0;
            case Family::AffineIndex: return -beta * r(F, s) / (gamma - 1.0);
            case Family::Tabulated: return across_s(F, s, rows_r, Eval::DS);
        }
        return 0.0;
    }
    double theta(double F, double s) const {
        switch (family) {
            case Family::PowerLaw: return theta0 + theta_s * s;
            case Family::AffineIndex: return beta * (F - 1.0) / gamma;
            case Family::Tabulated: return across_s(F, s, rows_theta, Eval::Value);
        }
        return 0.0;
    }
    double p(double F, double s) const {
        switch (family) {
            case Family::PowerLaw: return c * (std::pow(F, a + 1.0) - 1.0) / (a + 1.0);
            case Family::AffineIndex: return (gamma - 1.0) * r(F, s) * (F - 1.0) / gamma;
            case Family::Tabulated: return across_s(F, s, rows_r, Eval::Integral);
        }
        return 0.0;
    }

private:
    double arg(double F, double s) const {
        if (F <= 1.0) throw DomainError("affine-index family requires F > 1");
        return (F - 1.0) * (gamma - 1.0) / (gamma * K0 * std::exp(beta * s));
    }
    enum class Eval { Value, DF, DS, Integral };
    double across_s(double F, double s, const std::vector<MonotoneCubic>& rows, Eval what) const {
        std::vector<double> col(sg.size());
        for (size_t j = 0; j < sg.size(); ++j) {
            switch (what) {
                case Eval::Value: col[j] = rows[j].value(F); break;
                case Eval::DF: col[j] = rows[j].derivative(F); break;
                case Eval::DS: col[j] = rows[j].value(F); break;
                case Eval::Integral: col[j] = rows[j].integral(F); break;
            }
        }
        MonotoneCubic through(sg, col);
        return what == Eval::DS ? through.derivative(s) : through.value(s);
    }
};

EquationOfState::EquationOfState(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

EquationOfState EquationOfState::power_law(double c, double a, double theta0, double theta_s) {
    if (c <= 0.0) throw DomainError("power_law: c must be positive");
    auto impl = std::make_shared<Impl>();
    impl->family = Family::PowerLaw;
    impl->c = c;
    impl->a = a;
    impl->theta0 = theta0;
    impl->theta_s = theta_s;
    std::ostringstream os;
    os << "power_law(c=" << c << ",a=" << a << ")";
    impl->name = os.str();
    EquationOfState eos{std::move(impl)};
    eos.domain_ = DomainBox{0.5, 4.0, 0.1, 3.0};
    return eos;
}

EquationOfState EquationOfState::affine_index(double gamma, double K0, double beta) {
    if (gamma <= 1.0 || K0 <= 0.0 || beta <= 0.0)
        throw DomainError("affine_index: need gamma > 1, K0 > 0, beta > 0");
    auto impl = std::make_shared<Impl>();
    impl->family = Family::AffineIndex;
    impl->gamma = gamma;
    impl->K0 = K0;
    impl->beta = beta;
    std::ostringstream os;
    os << "affine_index(gamma=" << gamma << ")";
    impl->name = os.str();
    EquationOfState eos{std::move(impl)};
    eos.domain_ = DomainBox{1.05, 4.0, 0.1, 3.0};
    return eos;
}

EquationOfState EquationOfState::tabulated(std::vector<double> F_grid, std::vector<double> s_grid,
                                           std::vector<std::vector<double>> r_table,
                                           std::vector<std::vector<double>> theta_table) {
    auto impl = std::make_shared<Impl>();
    impl->family = Family::Tabulated;
    impl->name = "tabulated";
    impl->Fg = std::move(F_grid);
    impl->sg = std::move(s_grid);
    if (impl->sg.size() != r_table.size() || impl->sg.size() != theta_table.size())
        throw DomainError("tabulated: table rows must match the s grid");
    for (size_t j = 0; j < impl->sg.size(); ++j) {
        impl->rows_r.emplace_back(impl->Fg, r_table[j]);
        impl->rows_theta.emplace_back(impl->Fg, theta_table[j]);
    }
    DomainBox box{impl->Fg.front(), impl->Fg.back(), impl->sg.front(), impl->sg.back()};
    EquationOfState eos{std::move(impl)};
    eos.domain_ = box;
    return eos;
}

EquationOfState EquationOfState::tabulated_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open EOS table: " + path);
    std::string line;
    if (!std::getline(in, line)) throw DomainError("empty EOS table: " + path);
    auto strip = [](std::string s) {
        s.erase(std::remove_if(s.begin(), s.end(), [](char ch) { return std::isspace((unsigned char)ch); }), s.end());
        return s;
    };
    if (strip(line) != "F,s,r,theta")
        throw DomainError("EOS table must start with header F,s,r,theta");
    std::map<double, std::map<double, std::pair<double, double>>> by_s;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (strip(line).empty()) continue;
        std::istringstream ls(line);
        double F, s, r, th;
        char c1, c2, c3;
        if (!(ls >> F >> c1 >> s >> c2 >> r >> c3 >> th) || c1 != ',' || c2 != ',' || c3 != ',')
            throw DomainError("bad EOS table row at line " + std::to_string(lineno));
        by_s[s][F] = {r, th};
    }
    if (by_s.empty()) throw DomainError("EOS table has no rows");
    std::vector<double> sg, Fg;
    for (const auto& [s, row] : by_s) sg.push_back(s);
    for (const auto& [F, v] : by_s.begin()->second) Fg.push_back(F);
    std::vector<std::vector<double>> rt, tt;
    for (const auto& [s, row] : by_s) {
        if (row.size() != Fg.size()) throw DomainError("EOS table is not a complete grid");
        std::vector<double> rr, th;
        size_t i = 0;
        for (const auto& [F, v] : row) {
            if (F != Fg[i++]) throw DomainError("EOS table is not a complete grid");
            rr.push_back(v.first);
            th.push_back(v.second);
        }
        rt.push_back(rr);
        tt.push_back(th);
    }
    return tabulated(Fg, sg, rt, tt);
}

double EquationOfState::r(double F, double s) const { return impl_->r(F, s); }
double EquationOfState::dr_dF(double F, double s) const { return impl_->dr_dF(F, s); }
double EquationOfState::dr_ds(double F, double s) const { return impl_->dr_ds(F, s); }
double EquationOfState::theta(double F, double s) const { return impl_->theta(F, s); }
double EquationOfState::p(double F, double s) const { return impl_->p(F, s); }

ThermoState EquationOfState::eval(double F, double s) const {
    if (!(F > 0.0) || !(s > 0.0))
        throw DomainError("eval requires F > 0 and s > 0");
    ThermoState st;
    st.F = F;
    st.s = s;
    st.r = impl_->r(F, s);
    st.theta = impl_->theta(F, s);
    st.p = impl_->p(F, s);
    st.rho = st.r * F - st.p;
    st.eps = F - 1.0 - st.p / st.r;
    st.dr_dF = impl_->dr_dF(F, s);
    st.dr_ds = impl_->dr_ds(F, s);
    if (!(st.r > 0.0)) throw DomainError("state has r <= 0");
    if (!(st.theta > 0.0)) throw DomainError("state has theta <= 0");
    return st;
}

const DomainBox& EquationOfState::domain() const { return domain_; }

EquationOfState& EquationOfState::with_domain(const DomainBox& box) {
    domain_ = box;
    return *this;
}

EquationOfState::Family EquationOfState::family() const { return impl_->family; }
const std::string& EquationOfState::name() const { return impl_->name; }

std::map<std::string, double> EquationOfState::parameters() const {
    switch (impl_->family) {
        case Family::PowerLaw:
            return {{"c", impl_->c}, {"a", impl_->a}, {"theta0", impl_->theta0},
                    {"theta_s", impl_->theta_s}};
        case Family::AffineIndex:
            return {{"gamma", impl_->gamma}, {"K0", impl_->K0}, {"beta", impl_->beta}};
        case Family::Tabulated:
            return {};
    }
    return {};
}

namespace {

struct WorstPoint {
    double margin = std::numeric_limits<double>::infinity();
    double F = 0.0, s = 0.0;
};

template <typename Fn>
WorstPoint scan_worst(const DomainBox& box, int n, Fn&& margin) {
    WorstPoint w;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double F = box.F_min + (box.F_max - box.F_min) * i / (n - 1.0);
            const double s = box.s_min + (box.s_max - box.s_min) * j / (n - 1.0);
            const double m = margin(F, s);
            if (m < w.margin) w = {m, F, s};
        }
    return w;
}

template <typename Fn>
WorstPoint refine_worst(const DomainBox& box, WorstPoint w, int rounds, Fn&& margin) {
    double hF = (box.F_max - box.F_min) / 16.0;
    double hs = (box.s_max - box.s_min) / 16.0;
    for (int round = 0; round < rounds; ++round) {
        WorstPoint best = w;
        for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj) {
                const double F = std::clamp(w.F + di * hF, box.F_min, box.F_max);
                const double s = std::clamp(w.s + dj * hs, box.s_min, box.s_max);
                const double m = margin(F, s);
                if (m < best.margin) best = {m, F, s};
            }
        w = best;
        hF *= 0.6;
        hs *= 0.6;
    }
    return w;
}

} // namespace

ConditionReport check_conditions(const EquationOfState& eos, const DomainBox& box,
                                 int grid_n, int refine_rounds) {
    if (!(box.F_min > 0.0) || !(box.s_min > 0.0) || box.F_max <= box.F_min || box.s_max <= box.s_min)
        throw DomainError("check_conditions needs a positive, nonempty domain box");

    ConditionReport rep;

    auto m5 = [&](double F, double s) { return eos.dr_dF(F, s) - eos.r(F, s) / F; };
    auto w5 = refine_worst(box, scan_worst(box, grid_n, m5), refine_rounds, m5);
    rep.sound_speed.condition = "dr/dF >= r/F";
    rep.sound_speed.worst_margin = w5.margin;
    rep.sound_speed.F_at = w5.F;
    rep.sound_speed.s_at = w5.s;
    rep.sound_speed.pass = w5.margin >= -1e-12 * std::max(1.0, std::abs(eos.r(w5.F, w5.s) / w5.F));

    auto m6 = [&](double F, double s) { return eos.theta(F, s); };
    auto w6 = refine_worst(box, scan_worst(box, grid_n, m6), refine_rounds, m6);
    rep.temperature.condition = "theta > 0";
    rep.temperature.worst_margin = w6.margin;
    rep.temperature.F_at = w6.F;
    rep.temperature.s_at = w6.s;
    rep.temperature.pass = w6.margin > 0.0;

    return rep;
}

Vec4 dynamic_velocity(const Metric4Jet& g, double F, const Vec4& u, double tol) {
    if (!(F > 0.0)) throw DomainError("dynamic velocity requires F > 0");
    const double n = norm_squared(g, u);
    if (std::abs(n - 1.0) > tol)
        throw NormalizationError("u.u = " + std::to_string(n) + ", expected 1");
    return F * u;
}

} // namespace rvf
