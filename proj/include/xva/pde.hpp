#pragma once

#include <vector>

#include "xva/claim.hpp"
#include "xva/strategy.hpp"

namespace xva {

// Uniform log-price grid with nx nodes and nt time steps.
struct PdeGrid {
    double x_min = 0, x_max = 0;
    int nx = 0, nt = 0;
    double T = 0;

    double dx() const { return (x_max - x_min) / (nx - 1); }
    double dt() const { return T / nt; }
    double x(int j) const { return x_min + j * dx(); }
    double t(int n) const { return n * dt(); }

    // Six-sigma window around log S0 widened by the drift, shifted so log S0 is a node.
    static PdeGrid make(const MarketModel& m, const ClaimSpec& spec, int nx, int nt);
    void validate(const MarketModel& m) const;  // throws InvalidModel
};

struct PdeOptions {
    double picard_tol = 1e-10;
    int max_picard = 50;
    int rannacher_half_steps = 4;
    bool solve_seller = true, solve_buyer = true;
    bool parallel = false;  // OpenMP inside one solve (row kernels and the two sides)
};

struct StepDiagnostics {
    int picard_iterations = 0;  // summed over sub-steps of this time step
    double residual = 0.0;      // final increment of the last sub-step
};

struct PdeSolution {
    PdeGrid grid;
    MarketModel model;
    ClaimSpec claim;
    // (nt+1) x nx row-major, row n is time t_n = n*dt.
    std::vector<double> what, u_seller, u_buyer;
    std::vector<StepDiagnostics> diag_seller, diag_buyer;  // index n: step from t_{n+1} to t_n

    bool has(Side side) const;
    const std::vector<double>& field(Side side) const;
    double u(Side side, int n, int j) const { return field(side)[n * grid.nx + j]; }
    // Agent value and its log-space derivative at a node; closed form for vanilla claims.
    double vhat(int n, int j) const;
    double vhat_x(int n, int j) const;
};

PdeSolution solve(const MarketModel& m, const ClaimSpec& spec, const PdeGrid& grid,
                  const PdeOptions& opts = {});

// Bilinear interpolation of u^side (or of the agent surface with what_at).
double xva_at(const PdeSolution& sol, double t, double s, Side side);
double what_at(const PdeSolution& sol, double t, double s);

// Replication at a node; stock position xi = u_x / s.
StrategyRow strategy_at_node(const PdeSolution& sol, Side side, int n, int j);
// Same at an off-grid point, u and u_x interpolated bilinearly.
StrategyRow strategies(const PdeSolution& sol, double t, double s, Side side);
std::vector<StrategyRow> strategy_field(const PdeSolution& sol, Side side, int n);

struct ConvergenceRow {
    int nx = 0, nt = 0;
    double value = 0, reference = 0, error = 0;
    double order = 0;  // log(e_prev / e) / log(dx_prev / dx); NaN on the first row
};

// Seller XVA at (0, S0) against the closed form; symmetric rates only.
std::vector<ConvergenceRow> convergence_study(const MarketModel& m, const ClaimSpec& spec,
                                              const std::vector<std::pair<int, int>>& grids,
                                              const PdeOptions& opts = {});

}  // namespace xva
