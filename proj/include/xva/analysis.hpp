#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xva/config.hpp"
#include "xva/strategy.hpp"

namespace xva {

enum class Engine { closed, pde, lattice, all };
Engine parse_engine(std::string_view name);  // throws std::invalid_argument
const char* engine_name(Engine e);

struct Resolution {
    int nx = 400, nt = 400, steps = 2000;
};

// XVA of both sides at (0, S0) with the replication of each side.
struct PointResult {
    double buyer = 0, seller = 0, vhat = 0;
    StrategyRow buyer_strategy, seller_strategy;
    double width() const { return seller - buyer; }
};

// engine must not be Engine::all. Closed forms need symmetric rates and a vanilla claim.
PointResult evaluate(const MarketModel& m, const ClaimSpec& spec, Engine engine,
                     const Resolution& res);

std::vector<double> linspace(double a, double b, int n);

struct SweepRow {
    double x;
    PointResult r;
};

// Sets `key` to each x on a copy of cfg and evaluates; points run concurrently,
// rows come back in the order of xs.
std::vector<SweepRow> sweep(const RunConfig& cfg, std::string_view key,
                            const std::vector<double>& xs, Engine engine);

struct TableRow {
    int table;  // 1 or 2
    double alpha, rf_minus, mu_C;
    PointResult r;
};
std::vector<TableRow> funding_tables(const RunConfig& cfg, Engine engine);

// Fixed-format CSV: 10 significant digits, '\n' line ends.
std::string fmt_num(double v);

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    void add(std::vector<double> nums);
    std::string str() const;
};

struct CommandOutput {
    std::string csv;     // empty when the command has no tabular output
    std::string report;  // human-readable lines for stdout
    int exit_code = 0;
};

CommandOutput cmd_value(const RunConfig& cfg, Engine engine);
CommandOutput cmd_band(const RunConfig& cfg, Engine engine);
CommandOutput cmd_table(const RunConfig& cfg, Engine engine);
// Starts from figure_preset(id), then applies `overrides` (config text).
CommandOutput cmd_figure(std::string_view id, std::string_view overrides,
                         std::optional<Engine> engine, const Resolution& res);
CommandOutput cmd_validate(const RunConfig& cfg);
CommandOutput cmd_convergence(const RunConfig& cfg);

std::vector<std::string> figure_ids();
RunConfig figure_preset(std::string_view id);

}  // namespace xva
