#pragma once

#include <random>

#include "xva/market_model.hpp"

namespace xva::test {

// rr = rD = 0.05, rc = 0.01, symmetric funding rate rf.
inline RateSet symmetric_rates(double rf) {
    RateSet r;
    r.rf_plus = r.rf_minus = rf;
    r.rr_plus = r.rr_minus = r.rD = 0.05;
    r.rc_plus = r.rc_minus = 0.01;
    return r;
}

inline MarketModel no_default_model(double rf, double alpha) {
    CreditParams c;
    c.alpha = alpha;
    c.defaultable = false;
    return MarketModel(symmetric_rates(rf), c, EquityParams{});
}

inline MarketModel symmetric_default_model(double rf, double alpha, double mu_I = 0.16,
                                           double mu_C = 0.21) {
    CreditParams c;
    c.alpha = alpha;
    c.mu_I = mu_I;
    c.mu_C = mu_C;
    return MarketModel(symmetric_rates(rf), c, EquityParams{});
}

// Random model satisfying the necessary conditions (and usually the arbitrage-free ones).
inline MarketModel random_model(std::mt19937_64& g) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RateSet r;
    r.rD = 0.1 * u(g);
    r.rr_plus = 0.1 * u(g);
    r.rr_minus = r.rr_plus + 0.05 * u(g);
    r.rf_plus = r.rr_plus + (r.rr_minus - r.rr_plus) * u(g);
    r.rf_minus = std::max(r.rf_plus, r.rr_minus) + 0.1 * u(g);
    r.rc_plus = r.rf_minus * u(g);
    r.rc_minus = r.rf_minus * u(g);
    CreditParams c;
    c.mu_I = std::max(r.rf_minus, r.rD) + 0.01 + 0.3 * u(g);
    c.mu_C = std::max(r.rf_minus, r.rD) + 0.01 + 0.3 * u(g);
    c.L_I = u(g);
    c.L_C = u(g);
    c.alpha = u(g);
    EquityParams e;
    e.sigma = 0.1 + 0.3 * u(g);
    return MarketModel(r, c, e);
}

}  // namespace xva::test
