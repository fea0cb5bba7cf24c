#include "xva/claim.hpp"

#include <cmath>

#include "xva/errors.hpp"

namespace xva {

namespace {

// Custom payoff as a + b*s + sum_i c_i (s - k_i)^+.
struct CallBasis {
    double a = 0, b = 0;
    std::vector<std::pair<double, double>> calls;  // (strike, weight)
};

CallBasis decompose(const ClaimSpec& spec) {
    CallBasis cb;
    if (spec.kind == ClaimKind::call) {
        cb.calls.emplace_back(spec.strike, 1.0);
        return cb;
    }
    if (spec.kind == ClaimKind::put) {  // K - s + (s - K)^+
        cb.a = spec.strike;
        cb.b = -1.0;
        cb.calls.emplace_back(spec.strike, 1.0);
        return cb;
    }
    const auto& kn = spec.knots;
    auto slope = [&](size_t i) {
        return (kn[i + 1].second - kn[i].second) / (kn[i + 1].first - kn[i].first);
    };
    double m0 = slope(0);
    cb.a = kn[0].second - m0 * kn[0].first;
    cb.b = m0;
    for (size_t i = 1; i + 1 < kn.size(); ++i) {
        double dm = slope(i) - slope(i - 1);
        if (dm != 0) cb.calls.emplace_back(kn[i].first, dm);
    }
    return cb;
}

}  // namespace

void ClaimSpec::validate() const {
    if (!(maturity > 0) || !std::isfinite(maturity)) throw InvalidModel("maturity must be positive");
    if (!std::isfinite(notional)) throw InvalidModel("notional must be finite");
    if (kind != ClaimKind::custom) {
        if (!(strike > 0) || !std::isfinite(strike)) throw InvalidModel("strike must be positive");
        return;
    }
    if (knots.size() < 2) throw InvalidModel("custom payoff needs at least two knots");
    for (size_t i = 0; i < knots.size(); ++i) {
        if (!(knots[i].first > 0) || !std::isfinite(knots[i].second))
            throw InvalidModel("custom knots must have positive abscissae and finite values");
        if (i > 0 && !(knots[i].first > knots[i - 1].first))
            throw InvalidModel("custom knots must be strictly increasing");
    }
}

double payoff_cell_average(const ClaimSpec& spec, double x_lo, double x_hi) {
    if (!(x_hi > x_lo)) return payoff(spec, std::exp(x_lo));
    const double h = x_hi - x_lo;
    const auto cb = decompose(spec);
    const double e_lo = std::exp(x_lo), e_hi = std::exp(x_hi);
    double v = cb.a + cb.b * (e_hi - e_lo) / h;
    for (auto [k, w] : cb.calls) {
        const double lk = std::log(k);
        if (lk >= x_hi) continue;
        const double l = std::max(x_lo, lk);
        v += w * ((e_hi - std::exp(l)) - k * (x_hi - l)) / h;
    }
    return spec.notional * v;
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double payoff(const ClaimSpec& spec, double s) {
    switch (spec.kind) {
        case ClaimKind::call: return spec.notional * std::max(s - spec.strike, 0.0);
        case ClaimKind::put: return spec.notional * std::max(spec.strike - s, 0.0);
        case ClaimKind::custom: {
            auto cb = decompose(spec);
            double v = cb.a + cb.b * s;
            for (auto [k, w] : cb.calls) v += w * std::max(s - k, 0.0);
            return spec.notional * v;
        }
    }
    return 0.0;
}

AgentValuation bs_call(double r, double sigma, double s, double k, double tau) {
    double sq = sigma * std::sqrt(tau);
    double d1 = (std::log(s / k) + (r + 0.5 * sigma * sigma) * tau) / sq;
    double d2 = d1 - sq;
    double n1 = norm_cdf(d1);
    return {s * n1 - k * std::exp(-r * tau) * norm_cdf(d2), n1};
}

AgentValuation agent_value(const MarketModel& model, const ClaimSpec& spec, double t, double s) {
    const double tau = spec.maturity - t;
    const double r = model.rD(), sigma = model.sigma();
    const double n = spec.notional;

    if (tau <= 0) {
        // right derivative at the kinks
        double d = 0;
        switch (spec.kind) {
            case ClaimKind::call: d = s >= spec.strike ? 1.0 : 0.0; break;
            case ClaimKind::put: d = s >= spec.strike ? 0.0 : -1.0; break;
            case ClaimKind::custom: {
                auto cb = decompose(spec);
                d = cb.b;
                for (auto [k, w] : cb.calls)
                    if (s >= k) d += w;
                break;
            }
        }
        return {payoff(spec, s), n * d};
    }

    switch (spec.kind) {
        case ClaimKind::call: {
            auto c = bs_call(r, sigma, s, spec.strike, tau);
            return {n * c.value, n * c.delta};
        }
        case ClaimKind::put: {
            // parity
            auto c = bs_call(r, sigma, s, spec.strike, tau);
            return {n * (c.value - s + spec.strike * std::exp(-r * tau)), n * (c.delta - 1.0)};
        }
        case ClaimKind::custom: {
            auto cb = decompose(spec);
            double v = cb.a * std::exp(-r * tau) + cb.b * s, d = cb.b;
            for (auto [k, w] : cb.calls) {
                auto c = bs_call(r, sigma, s, k, tau);
                v += w * c.value;
                d += w * c.delta;
            }
            return {n * v, n * d};
        }
    }
    return {0, 0};
}

}  // namespace xva
