#pragma once

#include <utility>
#include <vector>

#include "xva/market_model.hpp"

namespace xva {

enum class ClaimKind { call, put, custom };

// European claim Phi(S_T). Custom payoffs are piecewise linear through `knots`
// (s_i, Phi(s_i)), s_i increasing and positive, extended linearly beyond both ends.
// `notional` scales the payoff; a negative notional is the opposite position.
struct ClaimSpec {
    ClaimKind kind = ClaimKind::call;
    double strike = 1.0;
    double maturity = 1.0;
    double notional = 1.0;
    std::vector<std::pair<double, double>> knots;

    bool vanilla() const { return kind != ClaimKind::custom; }
    void validate() const;  // throws InvalidModel
};

struct AgentValuation {
    double value;
    double delta;
};

double payoff(const ClaimSpec& spec, double s);
// Mean of payoff(e^x) over [x_lo, x_hi]; smooths the kink for the first PDE steps.
double payoff_cell_average(const ClaimSpec& spec, double x_lo, double x_hi);

// Black-Scholes value and delta with drift and discount rD. At t = T returns the
// payoff and its right derivative.
AgentValuation agent_value(const MarketModel& model, const ClaimSpec& spec, double t, double s);

// Plain Black-Scholes call on one unit, tau = T - t > 0.
AgentValuation bs_call(double r, double sigma, double s, double k, double tau);

double norm_cdf(double x);

}  // namespace xva
