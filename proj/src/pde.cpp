#include "xva/pde.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "xva/closed_form.hpp"
#include "xva/errors.hpp"
#include "xva/kernels.hpp"

namespace xva {

PdeGrid PdeGrid::make(const MarketModel& m, const ClaimSpec& spec, int nx, int nt) {
    const double T = spec.maturity;
    const double x0 = std::log(m.equity().S0);
    const double width = 6.0 * m.sigma() * std::sqrt(T);
    const double drift = m.rD() - 0.5 * m.sigma() * m.sigma();
    const double lo = x0 - width + std::min(0.0, drift) * T;
    const double hi = x0 + width + std::max(0.0, drift) * T;
    PdeGrid g;
    g.nx = nx;
    g.nt = nt;
    g.T = T;
    g.x_min = lo;
    g.x_max = hi;
    g.validate(m);
    // One spare interval so the window still covers [lo, hi] after snapping log S0 to a node.
    const double dx = (hi - lo) / (nx - 2);
    const double j0 = std::ceil((x0 - lo) / dx);
    g.x_min = x0 - j0 * dx;
    g.x_max = g.x_min + (nx - 1) * dx;
    return g;
}

void PdeGrid::validate(const MarketModel& m) const {
    const double x0 = std::log(m.equity().S0);
    if (nx < 4) throw InvalidModel("PDE grid needs at least 4 space nodes");
    if (nt < 1) throw InvalidModel("PDE grid needs at least 1 time step");
    if (!(T > 0)) throw InvalidModel("PDE grid needs T > 0");
    if (!(x_min < x0 && x0 < x_max)) throw InvalidModel("log S0 must lie strictly inside the grid");
}

bool PdeSolution::has(Side side) const { return !field(side).empty(); }

const std::vector<double>& PdeSolution::field(Side side) const {
    return side == Side::seller ? u_seller : u_buyer;
}

double PdeSolution::vhat(int n, int j) const {
    if (claim.vanilla()) return agent_value(model, claim, grid.t(n), std::exp(grid.x(j))).value;
    return what[n * grid.nx + j];
}

namespace {

double central_or_onesided(const double* row, int j, int nx, double dx, bool* one_sided) {
    if (j == 0) {
        if (one_sided) *one_sided = true;
        return (-3.0 * row[0] + 4.0 * row[1] - row[2]) / (2.0 * dx);
    }
    if (j == nx - 1) {
        if (one_sided) *one_sided = true;
        return (3.0 * row[nx - 1] - 4.0 * row[nx - 2] + row[nx - 3]) / (2.0 * dx);
    }
    if (one_sided) *one_sided = false;
    return (row[j + 1] - row[j - 1]) / (2.0 * dx);
}

}  // namespace

double PdeSolution::vhat_x(int n, int j) const {
    if (claim.vanilla()) {
        const double s = std::exp(grid.x(j));
        return s * agent_value(model, claim, grid.t(n), s).delta;
    }
    return central_or_onesided(&what[n * grid.nx], j, grid.nx, grid.dx(), nullptr);
}

namespace {

// Factored tridiagonal matrix; Thomas algorithm.
class Tridiag {
public:
    Tridiag(const std::vector<double>& sub, const std::vector<double>& diag,
            const std::vector<double>& sup)
        : sub_(sub), cp_(diag.size()), inv_(diag.size()) {
        const size_t n = diag.size();
        double prev = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double den = diag[i] - (i ? sub[i] * prev : 0.0);
            inv_[i] = 1.0 / den;
            cp_[i] = i + 1 < n ? sup[i] * inv_[i] : 0.0;
            prev = cp_[i];
        }
    }

    void solve(double* d) const {
        const size_t n = inv_.size();
        d[0] *= inv_[0];
        for (size_t i = 1; i < n; ++i) d[i] = (d[i] - sub_[i] * d[i - 1]) * inv_[i];
        for (size_t i = n - 1; i-- > 0;) d[i] -= cp_[i] * d[i + 1];
    }

private:
    std::vector<double> sub_, cp_, inv_;
};

// Discretization of a u_xx + b u_x - r u with S-linear boundary rows eliminated.
struct Scheme {
    int N;
    double c;                // dt/2: weight of the implicit operator in both step types
    double lo, di, up;       // a u_xx + b u_x stencil
    double p1, p2, q1, q2;   // u0 = p1 u1 + p2 u2 ; u_{N-1} = q1 u_{N-2} + q2 u_{N-3}

    Scheme(const MarketModel& m, const PdeGrid& g) : N(g.nx) {
        const double a = 0.5 * m.sigma() * m.sigma();
        const double b = m.rD() - a;
        const double dx = g.dx();
        c = 0.5 * g.dt();
        lo = a / (dx * dx) - b / (2.0 * dx);
        di = -2.0 * a / (dx * dx);
        up = a / (dx * dx) + b / (2.0 * dx);
        const double q = std::exp(dx);
        p1 = 1.0 + 1.0 / q;
        p2 = -1.0 / q;
        q1 = 1.0 + q;
        q2 = -q;
    }

    Tridiag implicit_matrix(double r) const {
        const int n = N - 2;
        std::vector<double> sub(n, -c * lo), diag(n, 1.0 - c * (di - r)), sup(n, -c * up);
        sub[0] = 0.0;
        sup[n - 1] = 0.0;
        diag[0] += -c * lo * p1;
        sup[0] += -c * lo * p2;
        diag[n - 1] += -c * up * q1;
        sub[n - 1] += -c * up * q2;
        return Tridiag(sub, diag, sup);
    }

    void extrapolate(double* u) const {
        u[0] = p1 * u[1] + p2 * u[2];
        u[N - 1] = q1 * u[N - 2] + q2 * u[N - 3];
    }

    // out[i] = u[i+1] + c (A u)[i+1] for the interior
    void explicit_part(const double* u, double r, double* out) const {
        for (int j = 1; j < N - 1; ++j)
            out[j - 1] = u[j] + c * (lo * u[j - 1] + (di - r) * u[j] + up * u[j + 1]);
    }
};

int rannacher_steps(const PdeOptions& o, int nt) {
    return std::min(nt, (std::max(o.rannacher_half_steps, 0) + 1) / 2);
}

void march_agent(const MarketModel& m, const ClaimSpec& spec, const PdeGrid& g,
                 const PdeOptions& opts, std::vector<double>& w) {
    const int N = g.nx, nt = g.nt;
    const double r = m.rD();
    Scheme sc(m, g);
    Tridiag M = sc.implicit_matrix(r);
    w.assign(static_cast<size_t>(nt + 1) * N, 0.0);
    double* last = &w[static_cast<size_t>(nt) * N];
    for (int j = 0; j < N; ++j) last[j] = payoff(spec, std::exp(g.x(j)));
    // The march starts from cell averages so the kink does not pollute the first steps;
    // the stored terminal row keeps the exact payoff.
    std::vector<double> start(N);
    const double h = 0.5 * g.dx();
    for (int j = 0; j < N; ++j) start[j] = payoff_cell_average(spec, g.x(j) - h, g.x(j) + h);

    std::vector<double> rhs(N - 2);
    const int ran = rannacher_steps(opts, nt);
    for (int n = nt - 1; n >= 0; --n) {
        const double* old = n == nt - 1 ? start.data() : &w[static_cast<size_t>(n + 1) * N];
        double* cur = &w[static_cast<size_t>(n) * N];
        if (nt - 1 - n < ran) {
            std::copy(old, old + N, cur);
            for (int half = 0; half < 2; ++half) {
                std::copy(cur + 1, cur + N - 1, rhs.begin());
                M.solve(rhs.data());
                std::copy(rhs.begin(), rhs.end(), cur + 1);
                sc.extrapolate(cur);
            }
        } else {
            sc.explicit_part(old, r, rhs.data());
            M.solve(rhs.data());
            std::copy(rhs.begin(), rhs.end(), cur + 1);
            sc.extrapolate(cur);
        }
    }
}

// Agent value and sigma * (log-space delta) on the interior at time t.
struct AgentRow {
    std::vector<double> vhat, zhat;
};

class AgentSource {
public:
    AgentSource(const MarketModel& m, const ClaimSpec& spec, const PdeGrid& g,
                const std::vector<double>& w)
        : m_(m), spec_(spec), g_(g), w_(w) {}

    // Rows are cached by time; the marching loop asks for the same level repeatedly.
    const AgentRow& at(double t) const {
        if (t != cached_t_) {
            cached_ = compute(t);
            cached_t_ = t;
        }
        return cached_;
    }

private:
    AgentRow compute(double t) const {
        const int N = g_.nx;
        AgentRow row{std::vector<double>(N - 2), std::vector<double>(N - 2)};
        const double sigma = m_.sigma();
        if (spec_.vanilla()) {
            for (int j = 1; j < N - 1; ++j) {
                const double s = std::exp(g_.x(j));
                const auto av = agent_value(m_, spec_, t, s);
                row.vhat[j - 1] = av.value;
                row.zhat[j - 1] = sigma * s * av.delta;
            }
            return row;
        }
        // grid surface, linear in time between levels
        const double pos = std::clamp(t / g_.dt(), 0.0, static_cast<double>(g_.nt));
        const int n0 = std::min(static_cast<int>(pos), g_.nt - 1);
        const double wt = pos - n0;
        const double* a = &w_[static_cast<size_t>(n0) * N];
        const double* b = &w_[static_cast<size_t>(n0 + 1) * N];
        const double dx = g_.dx();
        for (int j = 1; j < N - 1; ++j) {
            row.vhat[j - 1] = (1 - wt) * a[j] + wt * b[j];
            const double da = (a[j + 1] - a[j - 1]) / (2 * dx), db = (b[j + 1] - b[j - 1]) / (2 * dx);
            row.zhat[j - 1] = sigma * ((1 - wt) * da + wt * db);
        }
        return row;
    }

    const MarketModel& m_;
    const ClaimSpec& spec_;
    const PdeGrid& g_;
    const std::vector<double>& w_;
    mutable AgentRow cached_;
    mutable double cached_t_ = std::nan("");
};

class SideSolver {
public:
    SideSolver(const MarketModel& m, Side side, const PdeGrid& g, const PdeOptions& opts,
               const AgentSource& agent)
        : m_(m), side_(side), g_(g), opts_(opts), agent_(agent), sc_(m, g),
          M_(sc_.implicit_matrix(0.0)) {}

    void run(std::vector<double>& u, std::vector<StepDiagnostics>& diag) {
        const int N = g_.nx, nt = g_.nt;
        u.assign(static_cast<size_t>(nt + 1) * N, 0.0);
        diag.assign(nt, {});
        std::vector<double> g_old(N - 2, 0.0), expl(N - 2);
        bool have_g_old = false;
        const int ran = rannacher_steps(opts_, nt);
        const double dt = g_.dt();

        for (int n = nt - 1; n >= 0; --n) {
            const double* old = &u[static_cast<size_t>(n + 1) * N];
            double* cur = &u[static_cast<size_t>(n) * N];
            std::copy(old, old + N, cur);
            if (nt - 1 - n < ran) {
                const double t_mid = g_.t(n + 1) - 0.5 * dt;
                for (int half = 0; half < 2; ++half) {
                    const double t_new = half == 0 ? t_mid : g_.t(n);
                    std::copy(cur + 1, cur + N - 1, expl.begin());
                    picard(t_new, expl, cur, n, diag[n]);
                }
                have_g_old = false;
            } else {
                if (!have_g_old) driver_at(g_.t(n + 1), old, agent_.at(g_.t(n + 1)), g_old);
                sc_.explicit_part(old, 0.0, expl.data());
                for (int i = 0; i < N - 2; ++i) expl[i] += sc_.c * g_old[i];
                picard(g_.t(n), expl, cur, n, diag[n]);
            }
            driver_at(g_.t(n), cur, agent_.at(g_.t(n)), g_old);
            have_g_old = true;
        }
    }

private:
    // g on the interior with z = sigma (u_x + what_x)
    void driver_at(double t, const double* u, const AgentRow& ag, std::vector<double>& out) {
        const int N = g_.nx;
        const double k = m_.sigma() / (2.0 * g_.dx());
        z_.resize(N - 2);
        for (int j = 1; j < N - 1; ++j) z_[j - 1] = k * (u[j + 1] - u[j - 1]) + ag.zhat[j - 1];
        out.resize(N - 2);
        if (opts_.parallel)
            kernels::driver_row_omp(m_, side_, t, u + 1, z_.data(), ag.vhat.data(), out.data(), N - 2);
        else
            kernels::driver_row_serial(m_, side_, t, u + 1, z_.data(), ag.vhat.data(), out.data(), N - 2);
    }

    // Solves M u = expl + c g(u) in place on `cur` (which holds the initial guess).
    void picard(double t_new, const std::vector<double>& expl, double* cur, int n,
                StepDiagnostics& d) {
        const int N = g_.nx;
        const AgentRow& ag = agent_.at(t_new);
        std::vector<double> next(N), gv;
        double resid = 0.0;
        int worst = -1;
        for (int k = 1; k <= opts_.max_picard; ++k) {
            driver_at(t_new, cur, ag, gv);
            for (int i = 0; i < N - 2; ++i) next[i + 1] = expl[i] + sc_.c * gv[i];
            M_.solve(next.data() + 1);
            sc_.extrapolate(next.data());
            auto [r, idx] = opts_.parallel ? kernels::max_abs_diff_omp(next.data(), cur, N)
                                           : kernels::max_abs_diff_serial(next.data(), cur, N);
            std::copy(next.begin(), next.end(), cur);
            resid = r;
            worst = idx;
            d.picard_iterations++;
            d.residual = r;
            if (!std::isfinite(r))
                throw NumericalError("non-finite value in PDE solve", r, n, worst);
            if (r < opts_.picard_tol) return;
        }
        throw NumericalError("Picard iteration did not converge (residual " + std::to_string(resid) +
                                 " at time index " + std::to_string(n) + ", node " +
                                 std::to_string(worst) + ")",
                             resid, n, worst);
    }

    const MarketModel& m_;
    Side side_;
    const PdeGrid& g_;
    const PdeOptions& opts_;
    AgentSource agent_;  // own copy: the row cache is per side
    Scheme sc_;
    Tridiag M_;
    std::vector<double> z_;
};

}  // namespace

PdeSolution solve(const MarketModel& m, const ClaimSpec& spec, const PdeGrid& grid,
                  const PdeOptions& opts) {
    spec.validate();
    grid.validate(m);
    if (std::abs(grid.T - spec.maturity) > 1e-14 * spec.maturity)
        throw InvalidModel("grid horizon differs from claim maturity");
    PdeSolution sol{grid, m, spec, {}, {}, {}, {}, {}};
    march_agent(m, spec, grid, opts, sol.what);
    AgentSource agent(m, spec, grid, sol.what);

    std::exception_ptr err[2];
    auto run_side = [&](Side side, int slot) {
        try {
            SideSolver s(m, side, grid, opts, agent);
            if (side == Side::seller)
                s.run(sol.u_seller, sol.diag_seller);
            else
                s.run(sol.u_buyer, sol.diag_buyer);
        } catch (...) {
            err[slot] = std::current_exception();
        }
    };
#pragma omp parallel sections num_threads(2) if (opts.parallel)
    {
#pragma omp section
        if (opts.solve_seller) run_side(Side::seller, 0);
#pragma omp section
        if (opts.solve_buyer) run_side(Side::buyer, 1);
    }
    for (auto& e : err)
        if (e) std::rethrow_exception(e);
    return sol;
}

namespace {

struct Locator {
    int n, j;
    double wt, wx;
};

Locator locate(const PdeGrid& g, double t, double s) {
    const double x = std::log(s);
    const double eps = 1e-12;
    if (t < -eps || t > g.T + eps) throw std::out_of_range("time outside PDE grid");
    if (x < g.x_min - eps || x > g.x_max + eps) throw std::out_of_range("price outside PDE grid");
    const double pt = std::clamp(t / g.dt(), 0.0, static_cast<double>(g.nt));
    const double px = std::clamp((x - g.x_min) / g.dx(), 0.0, static_cast<double>(g.nx - 1));
    Locator l;
    l.n = std::min(static_cast<int>(pt), g.nt - 1);
    l.j = std::min(static_cast<int>(px), g.nx - 2);
    l.wt = pt - l.n;
    l.wx = px - l.j;
    return l;
}

template <class F>
double bilinear(const Locator& l, F f) {
    return (1 - l.wt) * ((1 - l.wx) * f(l.n, l.j) + l.wx * f(l.n, l.j + 1)) +
           l.wt * ((1 - l.wx) * f(l.n + 1, l.j) + l.wx * f(l.n + 1, l.j + 1));
}

double node_ux(const PdeSolution& sol, Side side, int n, int j, bool* one_sided) {
    const int N = sol.grid.nx;
    return central_or_onesided(&sol.field(side)[static_cast<size_t>(n) * N], j, N, sol.grid.dx(),
                               one_sided);
}

void require_side(const PdeSolution& sol, Side side) {
    if (!sol.has(side)) throw std::logic_error("requested side was not solved");
}

}  // namespace

double xva_at(const PdeSolution& sol, double t, double s, Side side) {
    require_side(sol, side);
    const auto l = locate(sol.grid, t, s);
    return bilinear(l, [&](int n, int j) { return sol.u(side, n, j); });
}

double what_at(const PdeSolution& sol, double t, double s) {
    const auto l = locate(sol.grid, t, s);
    const int N = sol.grid.nx;
    return bilinear(l, [&](int n, int j) { return sol.what[static_cast<size_t>(n) * N + j]; });
}

StrategyRow strategy_at_node(const PdeSolution& sol, Side side, int n, int j) {
    require_side(sol, side);
    bool one_sided = false;
    const double s = std::exp(sol.grid.x(j));
    const double ux = node_ux(sol, side, n, j, &one_sided);
    auto row = assemble_strategy(sol.model, side, sol.grid.t(n), sol.grid.T, s, sol.u(side, n, j),
                                 ux / s, sol.vhat(n, j));
    row.one_sided = one_sided;
    return row;
}

StrategyRow strategies(const PdeSolution& sol, double t, double s, Side side) {
    require_side(sol, side);
    const auto l = locate(sol.grid, t, s);
    bool one_sided = false;
    const double u = bilinear(l, [&](int n, int j) { return sol.u(side, n, j); });
    const double ux = bilinear(l, [&](int n, int j) {
        bool os = false;
        double v = node_ux(sol, side, n, j, &os);
        one_sided = one_sided || os;
        return v;
    });
    const double vh = sol.claim.vanilla() ? agent_value(sol.model, sol.claim, t, s).value
                                          : what_at(sol, t, s);
    auto row = assemble_strategy(sol.model, side, t, sol.grid.T, s, u, ux / s, vh);
    row.one_sided = one_sided;
    return row;
}

std::vector<StrategyRow> strategy_field(const PdeSolution& sol, Side side, int n) {
    std::vector<StrategyRow> rows;
    rows.reserve(sol.grid.nx);
    for (int j = 0; j < sol.grid.nx; ++j) rows.push_back(strategy_at_node(sol, side, n, j));
    return rows;
}

std::vector<ConvergenceRow> convergence_study(const MarketModel& m, const ClaimSpec& spec,
                                              const std::vector<std::pair<int, int>>& grids,
                                              const PdeOptions& opts) {
    symmetric_rates(m);
    const double s0 = m.equity().S0;
    const double ref = closed_form_xva(m, spec, 0.0, s0, Side::seller);
    PdeOptions o = opts;
    o.solve_buyer = false;
    std::vector<ConvergenceRow> rows;
    double prev_err = 0, prev_dx = 0;
    for (auto [nx, nt] : grids) {
        const auto g = PdeGrid::make(m, spec, nx, nt);
        const auto sol = solve(m, spec, g, o);
        ConvergenceRow r;
        r.nx = nx;
        r.nt = nt;
        r.value = xva_at(sol, 0.0, s0, Side::seller);
        r.reference = ref;
        r.error = std::abs(r.value - ref);
        r.order = rows.empty() ? std::nan("") : std::log(prev_err / r.error) / std::log(prev_dx / g.dx());
        prev_err = r.error;
        prev_dx = g.dx();
        rows.push_back(r);
    }
    return rows;
}

}  // namespace xva
