#pragma once

#include <string>
#include <string_view>

#include "xva/claim.hpp"
#include "xva/market_model.hpp"

namespace xva {

// Flat `key = value` run description; '#' starts a comment. Unknown keys are errors.
// See README for the schema.
struct RunConfig {
    RateSet rates;
    CreditParams credit;
    EquityParams equity;
    ClaimSpec claim;

    int nx = 400, nt = 400, steps = 2000;
    std::string engine = "pde";
    std::string figure;
    std::string out;
    bool allow_violations = false;

    // Sweep axis; empty sweep_key means the command's default axis.
    std::string sweep_key;
    double sweep_from = 0, sweep_to = 0;
    int sweep_points = 0;

    MarketModel model() const;  // validated unless allow_violations
};

// Applies one key; throws std::invalid_argument naming the key on bad input.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);
bool is_numeric_key(std::string_view key);

RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

double parse_double(std::string_view s);  // full string, throws std::invalid_argument
int parse_int(std::string_view s);

}  // namespace xva
