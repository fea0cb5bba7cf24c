#pragma once

#include <string>
#include <vector>

namespace xva {

struct RateSet {
    double rf_plus = 0.05, rf_minus = 0.08;   // funding lend / borrow
    double rr_plus = 0.05, rr_minus = 0.05;   // repo lend / borrow
    double rc_plus = 0.01, rc_minus = 0.01;   // collateral posted / received
    double rD = 0.01;                         // valuation agent discount rate

    bool symmetric() const {
        return rf_plus == rf_minus && rc_plus == rc_minus && rD == rr_plus && rD == rr_minus;
    }
};

struct CreditParams {
    double mu_I = 0.21, mu_C = 0.16;
    double L_I = 0.5, L_C = 0.5;
    double alpha = 0.9;
    // false switches both names to default-free: intensities and jump integrands vanish.
    bool defaultable = true;
};

struct EquityParams {
    double S0 = 1.0;
    double sigma = 0.2;
    double mu_phys = 0.0;  // unused in valuation
};

enum class Party { I, C };

struct Check {
    std::string name;
    std::string group;  // "necessary", "rate_chain" or "comparison"
    bool passed;
    std::string detail;
};

struct ValidationReport {
    std::vector<Check> checks;
    bool ok() const;
    bool ok(const std::string& group) const;
    std::vector<Check> failures() const;
    std::string to_string() const;
};

class MarketModel {
public:
    enum class Validation { necessary, none };

    MarketModel() : MarketModel(RateSet{}, CreditParams{}, EquityParams{}) {}
    // Always rejects negative/non-finite rates and out-of-range L, alpha, S0, sigma.
    // With Validation::necessary also rejects models failing validate_necessary().
    MarketModel(const RateSet& r, const CreditParams& c, const EquityParams& e,
                Validation v = Validation::necessary);

    const RateSet& rates() const { return rates_; }
    const CreditParams& credit() const { return credit_; }
    const EquityParams& equity() const { return equity_; }

    double sigma() const { return equity_.sigma; }
    double rD() const { return rates_.rD; }
    double alpha() const { return credit_.alpha; }

    double rate_repo(double position) const {
        return position > 0 ? rates_.rr_plus : position < 0 ? rates_.rr_minus : 0.0;
    }
    double rate_funding(double position) const {
        return position > 0 ? rates_.rf_plus : position < 0 ? rates_.rf_minus : 0.0;
    }
    double rate_collateral(double collateral) const {
        return collateral > 0 ? rates_.rc_plus : collateral < 0 ? rates_.rc_minus : 0.0;
    }

    // h^Q = mu - rD; zero when the model is default-free.
    double risk_neutral_intensity(Party p) const;

    ValidationReport validate_necessary() const;
    ValidationReport validate_arbitrage_free() const;

    // Copies with one block replaced; same validation policy as the constructor.
    MarketModel with_rates(const RateSet& r, Validation v = Validation::necessary) const;
    MarketModel with_credit(const CreditParams& c, Validation v = Validation::necessary) const;

private:
    RateSet rates_;
    CreditParams credit_;
    EquityParams equity_;
    double h_I_ = 0.0, h_C_ = 0.0;
};

double accrual(double rate, double from_t, double to_t);

// Benchmark parameter set used throughout the numerical study.
MarketModel benchmark_model();

}  // namespace xva
