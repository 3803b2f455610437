#include "rvf/evolution.hpp"

#include <cmath>
#include <thread>

#include "rvf/errors.hpp"

namespace rvf {

ModelSystem1p1 ModelSystem1p1::decoupled() { return ModelSystem1p1{1.0, 0.3, 0, 0, 0, 0, 0, 0, 0, 0}; }

ModelSystem1p1 ModelSystem1p1::default_coupled() {
    ModelSystem1p1 m;
    m.C0 = 1.0;
    m.C1 = 0.3;
    m.a1 = 0.08; m.a2 = 0.05; m.a3 = 0.06;
    m.b1 = 0.07; m.b2 = 0.04; m.b3 = 0.05;
    m.c1 = 0.03; m.c3 = 0.06;
    return m;
}

double ModelSystem1p1::max_speed() const {
    if (!(C0 > 0.0) || std::abs(C1) >= C0)
        throw DomainError("model transport vector must be timelike with C0 > 0");
    return 1.0;  // wave factors dominate; the flow factor is slower
}

InitialData1p1 InitialData1p1::zero(int n) {
    InitialData1p1 d;
    d.g.assign(5, std::vector<double>(n, 0.0));
    d.s.assign(4, std::vector<double>(n, 0.0));
    d.C.assign(4, std::vector<double>(n, 0.0));
    return d;
}

double bump_function(double x, double center, double halfwidth) {
    const double xi = (x - center) / halfwidth;
    if (std::abs(xi) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - xi * xi)) * std::exp(1.0);
}

namespace {

// state layout: 11 periodic fields
//   g-slot:  phi, phi_t, w  (= box phi), w_t
//   s-slot:  phi, phi_t, v  (= box phi)
//   C-slot:  phi, phi_t, w, w_t
// plus the transported unit-norm surrogate pair (U0, U1)
constexpr int GP = 0, GPT = 1, GW = 2, GWT = 3;
constexpr int SP = 4, SPT = 5, SV = 6;
constexpr int CP = 7, CPT = 8, CW = 9, CWT = 10;
constexpr int U0 = 11, U1 = 12;
constexpr int NFIELDS = 13;

struct Mesh {
    int n;
    double dx;
    int wrap(int i) const { return ((i % n) + n) % n; }
};

// fourth-order centered first and second derivatives; wider centered stencils
// for the third and fourth derivatives used by the couplings
struct Stencil {
    const std::vector<double>& f;
    const Mesh& m;
    double d1(int i) const {
        return (-f[m.wrap(i + 2)] + 8 * f[m.wrap(i + 1)] - 8 * f[m.wrap(i - 1)] + f[m.wrap(i - 2)]) /
               (12 * m.dx);
    }
    double d2(int i) const {
        return (-f[m.wrap(i + 2)] + 16 * f[m.wrap(i + 1)] - 30 * f[i] + 16 * f[m.wrap(i - 1)] -
                f[m.wrap(i - 2)]) /
               (12 * m.dx * m.dx);
    }
    double d3(int i) const {
        return (f[m.wrap(i + 2)] - 2 * f[m.wrap(i + 1)] + 2 * f[m.wrap(i - 1)] - f[m.wrap(i - 2)]) /
               (2 * m.dx * m.dx * m.dx);
    }
    double d4(int i) const {
        return (f[m.wrap(i + 2)] - 4 * f[m.wrap(i + 1)] + 6 * f[i] - 4 * f[m.wrap(i - 1)] +
                f[m.wrap(i - 2)]) /
               (m.dx * m.dx * m.dx * m.dx);
    }
};

using State = std::array<std::vector<double>, NFIELDS>;

void rhs(const ModelSystem1p1& mod, const Mesh& mesh, const State& y, State& dy, int threads) {
    const int n = mesh.n;
    auto run_chunk = [&](int lo, int hi) {
        Stencil gp{y[GP], mesh}, gw{y[GW], mesh};
        Stencil sp{y[SP], mesh}, sv{y[SV], mesh};
        Stencil cp{y[CP], mesh}, cw{y[CW], mesh};
        Stencil cpt{y[CPT], mesh}, gpt{y[GPT], mesh};
        Stencil u0{y[U0], mesh}, u1{y[U1], mesh};
        for (int i = lo; i < hi; ++i) {
            // second-order reductions of the two squared-wave slots
            dy[GP][i] = y[GPT][i];
            dy[GPT][i] = gp.d2(i) + y[GW][i];
            dy[GW][i] = y[GWT][i];
            dy[GWT][i] = gw.d2(i) + mod.a1 * gp.d3(i) + mod.a2 * sp.d2(i) + mod.a3 * cp.d2(i);

            // transport-of-wave slot
            dy[SP][i] = y[SPT][i];
            dy[SPT][i] = sp.d2(i) + y[SV][i];
            dy[SV][i] = (mod.b1 * gp.d3(i) + mod.b2 * sp.d2(i) + mod.b3 * cp.d2(i) -
                         mod.C1 * sv.d1(i)) /
                        mod.C0;

            dy[CP][i] = y[CPT][i];
            dy[CPT][i] = cp.d2(i) + y[CW][i];
            dy[CW][i] = y[CWT][i];
            dy[CWT][i] = cw.d2(i) + mod.c1 * gp.d4(i) + mod.c3 * cp.d3(i);

            // unit-norm surrogate: C^mu d_mu U = P_perp W with W built from the
            // wave slots; the projection keeps U0^2 - U1^2 exactly conserved
            const double W0 = 0.2 * cp.d1(i);
            const double W1 = 0.2 * gp.d1(i);
            const double uu0 = y[U0][i], uu1 = y[U1][i];
            const double nrm = uu0 * uu0 - uu1 * uu1;
            const double UW = uu0 * W0 - uu1 * W1;  // Minkowski pairing
            const double P0 = W0 - UW * uu0 / nrm;
            const double P1 = W1 - UW * uu1 / nrm;
            // transport derivative: dt U = (P - C1 dx U) / C0
            dy[U0][i] = (P0 - mod.C1 * u0.d1(i)) / mod.C0;
            dy[U1][i] = (P1 - mod.C1 * u1.d1(i)) / mod.C0;
        }
    };
    if (threads <= 1) {
        run_chunk(0, n);
        return;
    }
    std::vector<std::thread> pool;
    const int chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const int lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(run_chunk, lo, hi);
    }
    for (auto& th : pool) th.join();
}

} // namespace

Evolution1p1Result evolve(const ModelSystem1p1& model, const Grid1p1& grid,
                          const InitialData1p1& data, int threads) {
    const double vmax = model.max_speed();
    if (grid.cfl * vmax > 0.5 + 1e-12)
        throw DomainError("CFL violation: cfl * maxspeed must stay at or below 0.5");
    if (grid.n < 8) throw DomainError("grid too small");
    if (data.g.size() != 5 || data.s.size() != 4 || data.C.size() != 4)
        throw DomainError("initial data must carry derivative orders g:0..4, s:0..3, C:0..3");
    for (const auto* block : {&data.g, &data.s, &data.C})
        for (const auto& row : *block)
            if ((int)row.size() != grid.n) throw DomainError("initial data size mismatch");

    const Mesh mesh{grid.n, grid.dx()};
    State y;
    for (auto& f : y) f.assign(grid.n, 0.0);

    // stack initialization from time-derivative profiles:
    //   w = phi_tt - phi_xx, w_t = phi_ttt - (phi_t)_xx
    auto second_minus_xx = [&](const std::vector<double>& f2, const std::vector<double>& f0,
                               std::vector<double>& out) {
        Stencil s0{f0, mesh};
        for (int i = 0; i < grid.n; ++i) out[i] = f2[i] - s0.d2(i);
    };
    y[GP] = data.g[0];
    y[GPT] = data.g[1];
    second_minus_xx(data.g[2], data.g[0], y[GW]);
    second_minus_xx(data.g[3], data.g[1], y[GWT]);
    y[SP] = data.s[0];
    y[SPT] = data.s[1];
    second_minus_xx(data.s[2], data.s[0], y[SV]);
    y[CP] = data.C[0];
    y[CPT] = data.C[1];
    second_minus_xx(data.C[2], data.C[0], y[CW]);
    second_minus_xx(data.C[3], data.C[1], y[CWT]);
    for (int i = 0; i < grid.n; ++i) {
        y[U0][i] = 1.0;  // unitary at time zero
        y[U1][i] = 0.0;
    }

    const double dt = grid.cfl * mesh.dx / vmax;
    const long steps = (long)std::ceil(grid.horizon / dt - 1e-12);

    Evolution1p1Result out;
    auto snapshot = [&](double t) {
        out.times.push_back(t);
        out.snapshots.push_back({y[GP], y[SP], y[CP]});
    };
    snapshot(0.0);

    State k1, k2, k3, k4, tmp;
    for (auto* st : {&k1, &k2, &k3, &k4, &tmp})
        for (auto& f : *st) f.assign(grid.n, 0.0);

    double drift = 0.0;
    for (long step = 0; step < steps; ++step) {
        const double h = std::min(dt, grid.horizon - step * dt);
        rhs(model, mesh, y, k1, threads);
        for (int f = 0; f < NFIELDS; ++f)
            for (int i = 0; i < grid.n; ++i) tmp[f][i] = y[f][i] + 0.5 * h * k1[f][i];
        rhs(model, mesh, tmp, k2, threads);
        for (int f = 0; f < NFIELDS; ++f)
            for (int i = 0; i < grid.n; ++i) tmp[f][i] = y[f][i] + 0.5 * h * k2[f][i];
        rhs(model, mesh, tmp, k3, threads);
        for (int f = 0; f < NFIELDS; ++f)
            for (int i = 0; i < grid.n; ++i) tmp[f][i] = y[f][i] + h * k3[f][i];
        rhs(model, mesh, tmp, k4, threads);
        for (int f = 0; f < NFIELDS; ++f)
            for (int i = 0; i < grid.n; ++i)
                y[f][i] += h / 6.0 * (k1[f][i] + 2 * k2[f][i] + 2 * k3[f][i] + k4[f][i]);

        for (int i = 0; i < grid.n; ++i) {
            const double v = y[GP][i] + y[SP][i] + y[CP][i];
            if (!std::isfinite(v))
                throw NumericalFailure("solution lost finiteness at step " + std::to_string(step),
                                       step);
            drift = std::max(drift, std::abs(y[U0][i] * y[U0][i] - y[U1][i] * y[U1][i] - 1.0));
        }
        if ((step + 1) % grid.save_stride == 0 || step + 1 == steps)
            snapshot(std::min((step + 1) * dt, grid.horizon));
    }
    out.norm_surrogate_drift = drift;
    out.steps = steps;
    return out;
}

DodResult domain_of_dependence_test(const ModelSystem1p1& model, const Grid1p1& grid,
                                    const InitialData1p1& background, const DodSpec& spec,
                                    bool expect_influence, int threads) {
    const double half = 0.5 * spec.bump_width;
    const double cone_lo = spec.bump_center - half - grid.horizon;
    const double cone_hi = spec.bump_center + half + grid.horizon;

    // periodic interval overlap against the slope-one causal future
    auto overlaps = [&](double lo, double hi) {
        for (int shift = -1; shift <= 1; ++shift) {
            const double a = lo + shift * grid.length, b = hi + shift * grid.length;
            if (a < cone_hi && b > cone_lo) return true;
        }
        return false;
    };
    const bool probe_in_cone = overlaps(spec.probe_lo, spec.probe_hi);
    if (probe_in_cone && !expect_influence)
        throw GeometryError("probe region intersects the causal future of the bump support");

    InitialData1p1 bumped = background;
    auto& slot = spec.bump_slot == 0 ? bumped.g : (spec.bump_slot == 1 ? bumped.s : bumped.C);
    for (int i = 0; i < grid.n; ++i) {
        const double x = i * grid.dx();
        double v = 0.0;
        for (int shift = -1; shift <= 1; ++shift)
            v += bump_function(x + shift * grid.length, spec.bump_center, half);
        slot[0][i] += spec.bump_amplitude * v;
    }

    const auto base = evolve(model, grid, background, threads);
    const auto pert = evolve(model, grid, bumped, threads);

    DodResult out;
    out.tolerance = spec.tolerance;
    out.expected_influence = probe_in_cone;
    for (size_t k = 0; k < base.snapshots.size(); ++k)
        for (int slot_i = 0; slot_i < 3; ++slot_i)
            for (int i = 0; i < grid.n; ++i) {
                const double x = i * grid.dx();
                bool in_probe = false;
                for (int shift = -1; shift <= 1; ++shift) {
                    const double xs = x + shift * grid.length;
                    if (xs >= spec.probe_lo && xs <= spec.probe_hi) in_probe = true;
                }
                if (!in_probe) continue;
                out.leak = std::max(out.leak,
                                    std::abs(base.snapshots[k][slot_i][i] -
                                             pert.snapshots[k][slot_i][i]));
            }
    out.pass = probe_in_cone ? false : out.leak < spec.tolerance;
    return out;
}

std::vector<SpeedScanRow> speed_scan(const EquationOfState& eos, double F_lo, double F_hi,
                                     int n_states, double s_fixed, double kappa, double vartheta) {
    if (n_states < 2 || !(F_hi > F_lo)) throw DomainError("speed_scan needs an increasing F range");
    std::vector<SpeedScanRow> rows;
    const auto g = Metric4Jet::minkowski();
    for (int k = 0; k < n_states; ++k) {
        const double F = F_lo + (F_hi - F_lo) * k / (n_states - 1.0);
        SpeedScanRow row;
        row.F = F;
        row.s = s_fixed;
        const auto st = eos.eval(F, s_fixed);
        row.p_plus_rho = st.p + st.rho;

        const auto modes = naive_acoustic_speeds(eos, F, s_fixed, kappa, vartheta, {1, 0, 0});
        for (const auto& m : modes) row.max_speed_naive = std::max(row.max_speed_naive, m.phase_speed);
        row.naive_superluminal = row.max_speed_naive > 1.0 + 1e-9;

        // rest-frame state: the irrotational system's characteristic families
        const Vec4 C(F, 0, 0, 0);
        double v = max_normal_speed(symbol_flow(C), 64);
        v = std::max(v, max_normal_speed(symbol_light(g), 64));
        v = std::max(v, max_normal_speed(symbol_quartic(g), 64));
        row.max_speed_lichnerowicz = v;

        row.flow_hyperbolic = is_hyperbolic(symbol_entropy(g, C), lower_index(g, C), 64).hyperbolic;
        row.metric_hyperbolic = is_hyperbolic(symbol_light(g), Vec4(1, 0, 0, 0), 64).hyperbolic;
        rows.push_back(row);
    }
    return rows;
}

} // namespace rvf
