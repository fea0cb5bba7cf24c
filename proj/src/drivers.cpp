#include "xva/drivers.hpp"

#include <cmath>

namespace xva {

CloseoutValues closeout(const MarketModel& m, double vhat) {
    const auto& c = m.credit();
    double exposure = (1.0 - c.alpha) * vhat;
    double ti = -c.L_I * pos(exposure);
    double tc = c.L_C * neg(exposure);
    return {vhat + ti, vhat + tc, ti, tc};
}

double f_plus(const MarketModel& m, const DriverArgs& a) {
    const auto& r = m.rates();
    const double sigma = m.sigma();
    const double y = a.v + a.zI + a.zC - m.alpha() * a.vhat;
    const double coll = m.alpha() * a.vhat;
    return -(r.rf_plus * pos(y) - r.rf_minus * neg(y)
             + (r.rD - r.rr_minus) * pos(a.z) / sigma - (r.rD - r.rr_plus) * neg(a.z) / sigma
             - r.rD * a.zI - r.rD * a.zC
             + r.rc_plus * pos(coll) - r.rc_minus * neg(coll));
}

double f_minus(const MarketModel& m, const DriverArgs& a) { return -f_plus(m, a.reflected()); }

double f_side(const MarketModel& m, Side side, const DriverArgs& a) {
    return side == Side::seller ? f_plus(m, a) : f_minus(m, a);
}

namespace {

double f_tilde_seller(const MarketModel& m, const DriverArgs& a) {
    DriverArgs w = a;
    w.v = a.v + a.vhat;
    return f_plus(m, w) + m.rD() * a.vhat;
}

double g_reduced_seller(const MarketModel& m, double t, double u, double z, double vhat) {
    if (!m.credit().defaultable) return f_tilde_seller(m, {t, u, z, 0.0, 0.0, vhat});
    const double hI = m.risk_neutral_intensity(Party::I);
    const double hC = m.risk_neutral_intensity(Party::C);
    const auto th = closeout(m, vhat);
    const double zI = th.theta_tilde_I - u, zC = th.theta_tilde_C - u;
    return hI * zI + hC * zC + f_tilde_seller(m, {t, u, z, zI, zC, vhat});
}

double g_value_seller(const MarketModel& m, double t, double v, double z, double vhat) {
    if (!m.credit().defaultable) return f_plus(m, {t, v, z, 0.0, 0.0, vhat});
    const double hI = m.risk_neutral_intensity(Party::I);
    const double hC = m.risk_neutral_intensity(Party::C);
    const auto th = closeout(m, vhat);
    const double zI = th.theta_I - v, zC = th.theta_C - v;
    return hI * zI + hC * zC + f_plus(m, {t, v, z, zI, zC, vhat});
}

}  // namespace

double f_tilde(const MarketModel& m, Side side, const DriverArgs& a) {
    if (side == Side::seller) return f_tilde_seller(m, a);
    return -f_tilde_seller(m, a.reflected());
}

double g_reduced(const MarketModel& m, Side side, double t, double u, double z, double vhat) {
    if (side == Side::seller) return g_reduced_seller(m, t, u, z, vhat);
    return -g_reduced_seller(m, t, -u, -z, -vhat);
}

double g_value(const MarketModel& m, Side side, double t, double v, double z, double vhat) {
    if (side == Side::seller) return g_value_seller(m, t, v, z, vhat);
    return -g_value_seller(m, t, -v, -z, -vhat);
}

double lipschitz_f(const MarketModel& m) {
    const auto& r = m.rates();
    double rf = std::max(r.rf_plus, r.rf_minus);
    double rr = std::max(std::abs(r.rD - r.rr_plus), std::abs(r.rD - r.rr_minus)) / m.sigma();
    double rc = std::max(r.rc_plus, r.rc_minus);
    return std::max({rf, rr, rf + r.rD, m.alpha() * (rf + rc)});
}

double lipschitz_g_u(const MarketModel& m) {
    const auto& r = m.rates();
    double rf = std::max(r.rf_plus, r.rf_minus);
    if (!m.credit().defaultable) return rf;
    double hI = m.risk_neutral_intensity(Party::I), hC = m.risk_neutral_intensity(Party::C);
    // u enters y with coefficient -1 and each jump integrand with coefficient -1
    return hI + hC + rf + 2.0 * r.rD;
}

}  // namespace xva
