#include "xva/lattice.hpp"

#include <cmath>
#include <string>

#include "xva/errors.hpp"

namespace xva {

double OracleSolution::s(const MarketModel& m, int k, int j) const {
    // same expression as the induction so terminal payoffs match bit for bit
    const double sigma = m.sigma(), drift = m.rD() - 0.5 * sigma * sigma;
    return m.equity().S0 * std::exp(drift * k * dt + sigma * (2 * j - k) * std::sqrt(dt));
}

namespace {

struct SideState {
    Side side;
    std::vector<double> next, cur, z;
};

void check_step(const MarketModel& m, const ClaimSpec& spec, const kernels::StepStats& st,
                const LatticeOptions& opts, int k, int n_steps) {
    if (std::isfinite(st.residual) && st.residual <= opts.tol) return;
    const double lip = lipschitz_g_u(m);
    const int suggest = static_cast<int>(std::ceil(4.0 * lip * spec.maturity)) + 1;
    throw NumericalError("lattice fixed point did not converge at step " + std::to_string(k) +
                             " of " + std::to_string(n_steps) + " (residual " +
                             std::to_string(st.residual) + "); try n_steps >= " +
                             std::to_string(std::max(suggest, 2 * n_steps)),
                         st.residual, k, st.worst);
}

// Backward induction for one or two sides; fields recorded for the first side only.
void induct(const MarketModel& m, const ClaimSpec& spec, int n_steps, Level level,
            std::vector<SideState>& sides, const LatticeOptions& opts, OracleSolution* rec) {
    spec.validate();
    if (n_steps < 1) throw InvalidModel("lattice needs at least one step");
    const double T = spec.maturity, dt = T / n_steps, sq = std::sqrt(dt);
    const double sigma = m.sigma(), drift = m.rD() - 0.5 * sigma * sigma, s0 = m.equity().S0;

    auto spot = [&](int k, int j) { return s0 * std::exp(drift * k * dt + sigma * (2 * j - k) * sq); };

    for (auto& sd : sides) {
        sd.next.assign(n_steps + 1, 0.0);
        if (level == Level::value)
            for (int j = 0; j <= n_steps; ++j) sd.next[j] = payoff(spec, spot(n_steps, j));
        sd.cur.assign(n_steps + 1, 0.0);
        sd.z.assign(n_steps + 1, 0.0);
    }
    if (rec && opts.keep_fields) {
        const size_t total = static_cast<size_t>(n_steps + 1) * (n_steps + 2) / 2;
        rec->U.assign(total, 0.0);
        rec->Z.assign(total, 0.0);
        const size_t off = static_cast<size_t>(n_steps) * (n_steps + 1) / 2;
        std::copy(sides[0].next.begin(), sides[0].next.end(), rec->U.begin() + off);
    }

    std::vector<double> vhat(n_steps + 1), zhat(n_steps + 1);
    for (int k = n_steps - 1; k >= 0; --k) {
        const double t = k * dt;
        for (int j = 0; j <= k; ++j) {
            const double s = spot(k, j);
            const auto av = agent_value(m, spec, t, s);
            vhat[j] = av.value;
            zhat[j] = sigma * s * av.delta;
        }
        for (auto& sd : sides) {
            kernels::LatticeStepInput in{&m,          sd.side, level,   t,        dt,
                                         sd.next.data(), vhat.data(), zhat.data(), k + 1,
                                         opts.tol,    opts.max_iter};
            auto st = opts.parallel ? kernels::lattice_step_omp(in, sd.cur.data(), sd.z.data())
                                    : kernels::lattice_step_serial(in, sd.cur.data(), sd.z.data());
            check_step(m, spec, st, opts, k, n_steps);
            if (rec && &sd == &sides[0]) rec->max_iterations = std::max(rec->max_iterations, st.iterations);
            std::swap(sd.next, sd.cur);
        }
        if (rec && opts.keep_fields) {
            const size_t off = static_cast<size_t>(k) * (k + 1) / 2;
            std::copy(sides[0].next.begin(), sides[0].next.begin() + k + 1, rec->U.begin() + off);
            std::copy(sides[0].z.begin(), sides[0].z.begin() + k + 1, rec->Z.begin() + off);
        }
    }
}

}  // namespace

OracleSolution solve_reduced(const MarketModel& m, const ClaimSpec& spec, int n_steps, Level level,
                             Side side, const LatticeOptions& opts) {
    OracleSolution sol;
    sol.n_steps = n_steps;
    sol.dt = spec.maturity / std::max(n_steps, 1);
    sol.level = level;
    sol.side = side;
    std::vector<SideState> sides{{side, {}, {}, {}}};
    induct(m, spec, n_steps, level, sides, opts, &sol);
    sol.U0 = sides[0].next[0];
    sol.Z0 = sides[0].z[0];
    return sol;
}

BandResult band(const MarketModel& m, const ClaimSpec& spec, int n_steps, const LatticeOptions& opts) {
    std::vector<SideState> sides{{Side::buyer, {}, {}, {}}, {Side::seller, {}, {}, {}}};
    LatticeOptions o = opts;
    o.keep_fields = false;
    induct(m, spec, n_steps, Level::xva, sides, o, nullptr);
    return {sides[0].next[0], sides[1].next[0], sides[0].z[0], sides[1].z[0]};
}

}  // namespace xva
