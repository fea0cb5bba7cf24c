#pragma once

#include <algorithm>

#include "xva/market_model.hpp"

namespace xva {

enum class Side { buyer, seller };

inline double pos(double x) { return x > 0 ? x : 0.0; }
inline double neg(double x) { return x < 0 ? -x : 0.0; }

// v is wealth (value level) or XVA (xva level) depending on the caller.
struct DriverArgs {
    double t = 0, v = 0, z = 0, zI = 0, zC = 0, vhat = 0;

    DriverArgs reflected() const { return {t, -v, -z, -zI, -zC, -vhat}; }
};

struct CloseoutValues {
    double theta_I, theta_C;              // wealth after close-out
    double theta_tilde_I, theta_tilde_C;  // same, net of vhat
};

CloseoutValues closeout(const MarketModel& m, double vhat);

double f_plus(const MarketModel& m, const DriverArgs& a);
double f_minus(const MarketModel& m, const DriverArgs& a);
double f_side(const MarketModel& m, Side side, const DriverArgs& a);

// XVA-level generator; a.v is the XVA.
double f_tilde(const MarketModel& m, Side side, const DriverArgs& a);

// Reduced drivers after substituting the jump integrands by their close-out values.
// z is the full Brownian integrand, agent hedge included.
double g_reduced(const MarketModel& m, Side side, double t, double u, double z, double vhat);
double g_value(const MarketModel& m, Side side, double t, double v, double z, double vhat);

// L1 Lipschitz bound of f_plus in (v, z, zI, zC, vhat).
double lipschitz_f(const MarketModel& m);
// Lipschitz bound of g_reduced in u (z held fixed).
double lipschitz_g_u(const MarketModel& m);

}  // namespace xva
