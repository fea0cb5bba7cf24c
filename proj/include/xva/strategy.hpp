#pragma once

#include "xva/drivers.hpp"

namespace xva {

// Pre-default replication of the XVA at one (t, s). Share counts plus the
// account values they multiply; funding_dollars = xi_f * B_f.
struct StrategyRow {
    double t = 0, s = 0, xva = 0, vhat = 0;
    double xi = 0;     // stock
    double xi_I = 0;   // own bond
    double xi_C = 0;   // counterparty bond
    double psi_r = 0;  // repo account
    double psi_c = 0;  // collateral account
    double xi_f = 0;   // funding account
    double funding_dollars = 0;
    double B_f = 1, B_r = 1, B_c = 1, P_I = 1, P_C = 1;
    bool one_sided = false;  // stock delta taken from a one-sided difference

    // xi s + xi_I P_I + xi_C P_C + xi_f B_f + psi_r B_r - psi_c B_c; equals xva.
    double wealth() const;
    // xva after the bond of `who` jumps to zero.
    double after_default(Party who) const;
};

// Builds the bond, repo, collateral and funding legs from the XVA level, its stock
// position and the agent value. Buyer legs are the reflection of the seller legs.
StrategyRow assemble_strategy(const MarketModel& m, Side side, double t, double T, double s,
                              double xva, double xi, double vhat);

}  // namespace xva
