#include "xva/closed_form.hpp"

#include <cmath>

#include "xva/errors.hpp"

namespace xva {

SymmetricRates symmetric_rates(const MarketModel& m) {
    const auto& r = m.rates();
    if (!r.symmetric()) throw InvalidModel("closed forms need symmetric rates (rf+=rf-, rc+=rc-, rD=rr+=rr-)");
    return {r.rf_plus, r.rr_plus, r.rc_plus};
}

double beta_piterbarg(const MarketModel& m, double tau) {
    auto [rf, rr, rc] = symmetric_rates(m);
    if (rf == rr) throw DegenerateRates("rf == rr: use xva_piterbarg_limit");
    return (std::exp((rr - rf) * tau) - 1.0) * (1.0 - m.alpha() * (rf - rc) / (rf - rr));
}

double xva_piterbarg(const MarketModel& m, double vhat, double tau) {
    return beta_piterbarg(m, tau) * vhat;
}

double price_piterbarg(const MarketModel& m, double vhat, double tau) {
    auto [rf, rr, rc] = symmetric_rates(m);
    if (rf == rr) throw DegenerateRates("rf == rr");
    double g = std::exp((rr - rf) * tau);
    return g * vhat + m.alpha() * (rf - rc) * vhat * (1.0 - g) / (rf - rr);
}

double xva_piterbarg_limit(const MarketModel& m, double vhat, double tau) {
    auto [rf, rr, rc] = symmetric_rates(m);
    double d = rf - rr;
    double em1 = std::expm1(-d * tau);
    double ratio = d == 0 ? tau : -em1 / d;  // (1 - e^{-d tau}) / d
    return (em1 + m.alpha() * (rf - rc) * ratio) * vhat;
}

double strategy_piterbarg(const MarketModel& m, const ClaimSpec& spec, double t, double s) {
    return beta_piterbarg(m, spec.maturity - t) * agent_value(m, spec, t, s).delta;
}

XvaDecomposition xva_piterbarg_defaults(const MarketModel& m, double vhat, double tau) {
    auto [rf, rr, rc] = symmetric_rates(m);
    const auto& c = m.credit();
    XvaDecomposition d;
    d.eta = c.mu_I + c.mu_C - rf;
    if (d.eta == rr) throw DegenerateRates("eta == rr");
    d.kernel = -std::expm1(-(d.eta - rr) * tau) / (d.eta - rr);
    const double a = (1.0 - c.alpha) * vhat;
    d.funding_term = ((rr - rf) + c.alpha * (rf - rc)) * d.kernel * vhat;
    d.cva_term = (c.mu_C - rf) * c.L_C * d.kernel * neg(a);
    d.dva_term = -(c.mu_I - rf) * c.L_I * d.kernel * pos(a);
    d.total = d.funding_term + d.cva_term + d.dva_term;
    return d;
}

double a_factor(const MarketModel& m, double tau) {
    auto [rf, rr, rc] = symmetric_rates(m);
    const auto& c = m.credit();
    double k = xva_piterbarg_defaults(m, 1.0, tau).kernel;
    return ((rr - rf) + c.alpha * (rf - rc) - c.L_I * (1.0 - c.alpha) * (c.mu_I - rf)) * k;
}

namespace {

// dXVA/dvhat on the side of zero that vhat sits on.
double defaults_slope(const MarketModel& m, double vhat, double tau) {
    auto [rf, rr, rc] = symmetric_rates(m);
    const auto& c = m.credit();
    double k = xva_piterbarg_defaults(m, 1.0, tau).kernel;
    double slope = (rr - rf) + c.alpha * (rf - rc);
    if (vhat > 0) slope -= (c.mu_I - rf) * c.L_I * (1.0 - c.alpha);
    if (vhat < 0) slope -= (c.mu_C - rf) * c.L_C * (1.0 - c.alpha);
    return slope * k;
}

}  // namespace

StrategyRow strategies_piterbarg_defaults(const MarketModel& m, const ClaimSpec& spec, double t,
                                          double s) {
    if (!m.credit().defaultable) throw InvalidModel("model is default-free");
    return closed_form_strategy(m, spec, t, s, Side::seller);
}

double closed_form_xva(const MarketModel& m, const ClaimSpec& spec, double t, double s,
                       Side side) {
    return closed_form_strategy(m, spec, t, s, side).xva;
}

StrategyRow closed_form_strategy(const MarketModel& m, const ClaimSpec& spec, double t, double s,
                                 Side side) {
    const double tau = spec.maturity - t;
    const auto av = agent_value(m, spec, t, s);
    const double sg = side == Side::seller ? 1.0 : -1.0;
    const double v = sg * av.value, dl = sg * av.delta;
    double xva, xi;
    if (m.credit().defaultable) {
        xva = xva_piterbarg_defaults(m, v, tau).total;
        xi = defaults_slope(m, v, tau) * dl;
    } else {
        double b = beta_piterbarg(m, tau);
        xva = b * v;
        xi = b * dl;
    }
    return assemble_strategy(m, side, t, spec.maturity, s, sg * xva, sg * xi, av.value);
}

}  // namespace xva
