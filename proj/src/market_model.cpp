#include "xva/market_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "xva/errors.hpp"

namespace xva {

namespace {

std::string fmt(const char* f, double a, double b) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw InvalidModel(msg);
}

}  // namespace

bool ValidationReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

bool ValidationReport::ok(const std::string& group) const {
    return std::all_of(checks.begin(), checks.end(),
                       [&](const Check& c) { return c.group != group || c.passed; });
}

std::vector<Check> ValidationReport::failures() const {
    std::vector<Check> out;
    for (const auto& c : checks)
        if (!c.passed) out.push_back(c);
    return out;
}

std::string ValidationReport::to_string() const {
    std::ostringstream os;
    for (const auto& c : checks)
        os << (c.passed ? "PASS " : "FAIL ") << c.group << ": " << c.name << "  (" << c.detail
           << ")\n";
    return os.str();
}

MarketModel::MarketModel(const RateSet& r, const CreditParams& c, const EquityParams& e,
                         Validation v)
    : rates_(r), credit_(c), equity_(e) {
    for (double x : {r.rf_plus, r.rf_minus, r.rr_plus, r.rr_minus, r.rc_plus, r.rc_minus, r.rD,
                     c.mu_I, c.mu_C}) {
        require(std::isfinite(x), "non-finite rate");
        require(x >= 0.0, "negative rates are not supported");
    }
    require(c.L_I >= 0 && c.L_I <= 1 && c.L_C >= 0 && c.L_C <= 1, "loss rates must lie in [0,1]");
    require(c.alpha >= 0 && c.alpha <= 1, "collateralization level must lie in [0,1]");
    require(std::isfinite(e.S0) && e.S0 > 0, "S0 must be positive");
    require(std::isfinite(e.sigma) && e.sigma > 0, "sigma must be positive");
    if (c.defaultable) {
        h_I_ = c.mu_I - r.rD;
        h_C_ = c.mu_C - r.rD;
    }
    if (v == Validation::necessary) {
        auto rep = validate_necessary();
        if (!rep.ok()) throw InvalidModel("model fails necessary rate conditions:\n" + rep.to_string());
    }
}

double MarketModel::risk_neutral_intensity(Party p) const {
    if (!credit_.defaultable) return 0.0;
    double h = p == Party::I ? h_I_ : h_C_;
    if (!(h > 0)) throw InvalidModel("bond return rate must exceed rD for a valuation measure to exist");
    return h;
}

ValidationReport MarketModel::validate_necessary() const {
    const auto& r = rates_;
    ValidationReport rep;
    rep.checks.push_back({"rr+ <= rf-", "necessary", r.rr_plus <= r.rf_minus,
                          fmt("%g vs %g", r.rr_plus, r.rf_minus)});
    rep.checks.push_back({"rf+ <= rf-", "necessary", r.rf_plus <= r.rf_minus,
                          fmt("%g vs %g", r.rf_plus, r.rf_minus)});
    if (credit_.defaultable) {
        double lhs = std::max(r.rf_plus, r.rD), rhs = std::min(credit_.mu_I, credit_.mu_C);
        rep.checks.push_back({"max(rf+, rD) < min(mu_I, mu_C)", "necessary", lhs < rhs,
                              fmt("%g vs %g", lhs, rhs)});
    }
    return rep;
}

ValidationReport MarketModel::validate_arbitrage_free() const {
    const auto& r = rates_;
    ValidationReport rep = validate_necessary();
    rep.checks.push_back({"rr+ <= rf+", "rate_chain", r.rr_plus <= r.rf_plus,
                          fmt("%g vs %g", r.rr_plus, r.rf_plus)});
    rep.checks.push_back({"rf+ <= rr-", "rate_chain", r.rf_plus <= r.rr_minus,
                          fmt("%g vs %g", r.rf_plus, r.rr_minus)});
    double rc = std::max(r.rc_plus, r.rc_minus);
    rep.checks.push_back({"max(rc+, rc-) <= rf-", "comparison", rc <= r.rf_minus,
                          fmt("%g vs %g", rc, r.rf_minus)});
    if (credit_.defaultable) {
        double mu = std::min(credit_.mu_I, credit_.mu_C);
        rep.checks.push_back({"rf- <= min(mu_I, mu_C)", "comparison", r.rf_minus <= mu,
                              fmt("%g vs %g", r.rf_minus, mu)});
    }
    return rep;
}

MarketModel MarketModel::with_rates(const RateSet& r, Validation v) const {
    return MarketModel(r, credit_, equity_, v);
}

MarketModel MarketModel::with_credit(const CreditParams& c, Validation v) const {
    return MarketModel(rates_, c, equity_, v);
}

double accrual(double rate, double from_t, double to_t) {
    if (to_t < from_t) throw std::invalid_argument("accrual: to_t < from_t");
    return std::exp(rate * (to_t - from_t));
}

MarketModel benchmark_model() { return MarketModel(); }

}  // namespace xva
