#pragma once

#include "xva/claim.hpp"
#include "xva/strategy.hpp"

namespace xva {

// Symmetric regime: rf+ = rf-, rc+ = rc-, rD = rr+ = rr-.
struct SymmetricRates {
    double rf, rr, rc;
};

SymmetricRates symmetric_rates(const MarketModel& m);  // throws InvalidModel otherwise

struct XvaDecomposition {
    double funding_term = 0, dva_term = 0, cva_term = 0, total = 0;
    double eta = 0;
    double kernel = 0;  // (1 - exp(-(eta - rr) tau)) / (eta - rr)
};

// Default-free, tau = T - t.
double beta_piterbarg(const MarketModel& m, double tau);  // throws DegenerateRates if rf == rr
double xva_piterbarg(const MarketModel& m, double vhat, double tau);
double price_piterbarg(const MarketModel& m, double vhat, double tau);
// Same value through expm1; continuous through rf == rr. Reference use only.
double xva_piterbarg_limit(const MarketModel& m, double vhat, double tau);
double strategy_piterbarg(const MarketModel& m, const ClaimSpec& spec, double t, double s);

// With defaults.
XvaDecomposition xva_piterbarg_defaults(const MarketModel& m, double vhat, double tau);
double a_factor(const MarketModel& m, double tau);
StrategyRow strategies_piterbarg_defaults(const MarketModel& m, const ClaimSpec& spec, double t,
                                          double s);

// Dispatches on m.credit().defaultable. The formulas above are the seller's; the
// buyer's value is their reflection (-XVA of the seller of -Phi). Without defaults
// the two coincide.
double closed_form_xva(const MarketModel& m, const ClaimSpec& spec, double t, double s,
                       Side side = Side::seller);
StrategyRow closed_form_strategy(const MarketModel& m, const ClaimSpec& spec, double t, double s,
                                 Side side = Side::seller);

}  // namespace xva
