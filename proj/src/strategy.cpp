#include "xva/strategy.hpp"

#include <cmath>

namespace xva {

double StrategyRow::wealth() const {
    return xi * s + xi_I * P_I + xi_C * P_C + xi_f * B_f + psi_r * B_r - psi_c * B_c;
}

double StrategyRow::after_default(Party who) const {
    return who == Party::I ? xva - xi_I * P_I : xva - xi_C * P_C;
}

namespace {

struct Dollars {
    double own_bond, cpty_bond, funding;
};

// Seller dollar positions in the two bonds and the funding account.
Dollars seller_dollars(const MarketModel& m, double xva, double vhat) {
    const double alpha = m.alpha();
    if (!m.credit().defaultable) return {0.0, 0.0, xva - alpha * vhat};
    const auto th = closeout(m, vhat);
    return {xva - th.theta_tilde_I, xva - th.theta_tilde_C,
            th.theta_tilde_I + th.theta_tilde_C - xva - alpha * vhat};
}

}  // namespace

StrategyRow assemble_strategy(const MarketModel& m, Side side, double t, double T, double s,
                              double xva, double xi, double vhat) {
    Dollars d;
    if (side == Side::seller) {
        d = seller_dollars(m, xva, vhat);
    } else {
        auto r = seller_dollars(m, -xva, -vhat);
        d = {-r.own_bond, -r.cpty_bond, -r.funding};
    }

    StrategyRow row;
    row.t = t;
    row.s = s;
    row.xva = xva;
    row.vhat = vhat;
    row.xi = xi;

    const auto& c = m.credit();
    row.P_I = std::exp(-c.mu_I * (T - t));
    row.P_C = std::exp(-c.mu_C * (T - t));
    row.xi_I = d.own_bond / row.P_I;
    row.xi_C = d.cpty_bond / row.P_C;

    const double repo_dollars = -xi * s;
    row.B_r = accrual(m.rate_repo(repo_dollars), 0.0, t);
    row.psi_r = repo_dollars / row.B_r;

    const double coll = m.alpha() * vhat;
    row.B_c = accrual(m.rate_collateral(coll), 0.0, t);
    row.psi_c = -coll / row.B_c;

    row.funding_dollars = d.funding;
    row.B_f = accrual(m.rate_funding(d.funding), 0.0, t);
    row.xi_f = d.funding / row.B_f;
    return row;
}

}  // namespace xva
