#include "xva/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <sstream>
#include <stdexcept>

#include "xva/closed_form.hpp"
#include "xva/errors.hpp"
#include "xva/lattice.hpp"
#include "xva/pde.hpp"

namespace xva {

Engine parse_engine(std::string_view name) {
    if (name == "closed") return Engine::closed;
    if (name == "pde") return Engine::pde;
    if (name == "lattice") return Engine::lattice;
    if (name == "all") return Engine::all;
    throw std::invalid_argument("engine must be closed, pde, lattice or all");
}

const char* engine_name(Engine e) {
    switch (e) {
        case Engine::closed: return "closed";
        case Engine::pde: return "pde";
        case Engine::lattice: return "lattice";
        case Engine::all: return "all";
    }
    return "?";
}

PointResult evaluate(const MarketModel& m, const ClaimSpec& spec, Engine engine,
                     const Resolution& res) {
    const double s0 = m.equity().S0;
    PointResult p;
    p.vhat = agent_value(m, spec, 0.0, s0).value;
    switch (engine) {
        case Engine::closed: {
            if (!spec.vanilla()) throw InvalidModel("closed forms need a vanilla claim");
            p.seller_strategy = closed_form_strategy(m, spec, 0.0, s0, Side::seller);
            p.buyer_strategy = closed_form_strategy(m, spec, 0.0, s0, Side::buyer);
            break;
        }
        case Engine::pde: {
            const auto sol = solve(m, spec, PdeGrid::make(m, spec, res.nx, res.nt));
            p.seller_strategy = strategies(sol, 0.0, s0, Side::seller);
            p.buyer_strategy = strategies(sol, 0.0, s0, Side::buyer);
            p.vhat = p.seller_strategy.vhat;
            break;
        }
        case Engine::lattice: {
            const auto b = band(m, spec, res.steps);
            const double k = 1.0 / (m.sigma() * s0);
            p.seller_strategy = assemble_strategy(m, Side::seller, 0.0, spec.maturity, s0, b.seller,
                                                  b.z_seller * k, p.vhat);
            p.buyer_strategy = assemble_strategy(m, Side::buyer, 0.0, spec.maturity, s0, b.buyer,
                                                 b.z_buyer * k, p.vhat);
            break;
        }
        case Engine::all: throw std::invalid_argument("evaluate: pick a single engine");
    }
    p.seller = p.seller_strategy.xva;
    p.buyer = p.buyer_strategy.xva;
    return p;
}

std::vector<double> linspace(double a, double b, int n) {
    if (n < 1) throw std::invalid_argument("linspace needs at least one point");
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return xs;
}

namespace {

Resolution resolution(const RunConfig& c) { return {c.nx, c.nt, c.steps}; }

RunConfig with_value(RunConfig c, std::string_view key, double x) {
    if (!is_numeric_key(key)) throw std::invalid_argument("cannot sweep over '" + std::string(key) + "'");
    apply_setting(c, key, fmt_num(x));
    return c;
}

// Runs fn(i) for i in [0, n) on the OpenMP pool; rethrows the first failure.
template <class F>
void parallel_points(int n, F fn) {
    std::vector<std::exception_ptr> errs(n);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        try {
            fn(i);
        } catch (...) {
            errs[i] = std::current_exception();
        }
    }
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

}  // namespace

std::vector<SweepRow> sweep(const RunConfig& cfg, std::string_view key,
                            const std::vector<double>& xs, Engine engine) {
    std::vector<SweepRow> rows(xs.size());
    parallel_points(static_cast<int>(xs.size()), [&](int i) {
        RunConfig c = with_value(cfg, key, xs[i]);
        rows[i] = {xs[i], evaluate(c.model(), c.claim, engine, resolution(c))};
    });
    return rows;
}

std::vector<TableRow> funding_tables(const RunConfig& cfg, Engine engine) {
    std::vector<TableRow> rows;
    for (double a : {0.0, 0.25, 0.75, 1.0})
        for (double rf : {0.08, 0.15}) rows.push_back({1, a, rf, cfg.credit.mu_C, {}});
    for (double rf : {0.08, 0.1, 0.15, 0.2}) rows.push_back({2, cfg.credit.alpha, rf, 0.16, {}});
    parallel_points(static_cast<int>(rows.size()), [&](int i) {
        RunConfig c = cfg;
        c.credit.alpha = rows[i].alpha;
        c.rates.rf_minus = rows[i].rf_minus;
        c.credit.mu_C = rows[i].mu_C;
        rows[i].r = evaluate(c.model(), c.claim, engine, resolution(c));
    });
    return rows;
}

std::string fmt_num(double v) {
    if (v == 0) v = 0;  // no "-0"
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void Csv::add(std::vector<double> nums) {
    std::vector<std::string> r;
    r.reserve(nums.size());
    for (double v : nums) r.push_back(fmt_num(v));
    rows.push_back(std::move(r));
}

std::string Csv::str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
}

namespace {

bool closed_applicable(const RunConfig& c) { return c.rates.symmetric() && c.claim.vanilla(); }

std::string label(double v) { return fmt_num(v); }

}  // namespace

CommandOutput cmd_value(const RunConfig& cfg, Engine engine) {
    const MarketModel m = cfg.model();
    std::vector<Engine> engines;
    if (engine == Engine::all) {
        if (closed_applicable(cfg)) engines.push_back(Engine::closed);
        engines.push_back(Engine::pde);
        engines.push_back(Engine::lattice);
    } else {
        if (engine == Engine::closed && !closed_applicable(cfg))
            throw InvalidModel("closed-form engine needs symmetric rates and a vanilla claim");
        engines.push_back(engine);
    }
    std::vector<PointResult> res(engines.size());
    parallel_points(static_cast<int>(engines.size()),
                    [&](int i) { res[i] = evaluate(m, cfg.claim, engines[i], resolution(cfg)); });

    CommandOutput out;
    Csv csv;
    csv.header = {"engine", "vhat", "xva_buyer", "xva_seller", "width", "xi_stock", "xi_I", "xi_C",
                  "funding_dollars"};
    std::ostringstream rep;
    for (size_t i = 0; i < engines.size(); ++i) {
        const auto& r = res[i];
        const auto& st = r.seller_strategy;
        std::vector<std::string> row{engine_name(engines[i])};
        for (double v : {r.vhat, r.buyer, r.seller, r.width(), st.xi, st.xi_I, st.xi_C, st.funding_dollars})
            row.push_back(fmt_num(v));
        csv.rows.push_back(row);
        rep << engine_name(engines[i]) << ": vhat=" << fmt_num(r.vhat) << " buyer=" << fmt_num(r.buyer)
            << " seller=" << fmt_num(r.seller) << " width=" << fmt_num(r.width()) << "\n";
    }
    for (size_t i = 0; i < engines.size(); ++i)
        for (size_t j = i + 1; j < engines.size(); ++j)
            rep << engine_name(engines[i]) << " - " << engine_name(engines[j])
                << ": buyer " << fmt_num(res[i].buyer - res[j].buyer) << " seller "
                << fmt_num(res[i].seller - res[j].seller) << "\n";
    out.csv = csv.str();
    out.report = rep.str();
    return out;
}

CommandOutput cmd_band(const RunConfig& cfg, Engine engine) {
    if (engine == Engine::all) throw std::invalid_argument("band takes a single engine");
    if (engine == Engine::closed && !closed_applicable(cfg))
        throw InvalidModel("closed-form engine needs symmetric rates and a vanilla claim");
    const int n = cfg.sweep_points > 0 ? cfg.sweep_points : 21;
    const bool custom_range = cfg.sweep_points > 0 || cfg.sweep_from != 0 || cfg.sweep_to != 0;
    const auto xs = custom_range ? linspace(cfg.sweep_from, cfg.sweep_to, n) : linspace(0.0, 1.0, n);
    const auto rows = sweep(cfg, "alpha", xs, engine);
    Csv csv;
    csv.header = {"alpha", "xva_buyer", "xva_seller", "width", "xi_stock", "xi_I", "xi_C", "funding_dollars"};
    for (const auto& r : rows) {
        const auto& st = r.r.seller_strategy;
        csv.add({r.x, r.r.buyer, r.r.seller, r.r.width(), st.xi, st.xi_I, st.xi_C, st.funding_dollars});
    }
    return {csv.str(), "", 0};
}

CommandOutput cmd_table(const RunConfig& cfg, Engine engine) {
    if (engine == Engine::all || engine == Engine::closed)
        throw std::invalid_argument("table needs the pde or lattice engine");
    const auto rows = funding_tables(cfg, engine);
    Csv csv;
    csv.header = {"table", "alpha", "rf_minus", "mu_C", "funding_seller", "funding_buyer",
                  "xva_seller", "xva_buyer", "funding_total_seller", "funding_total_buyer"};
    for (const auto& r : rows) {
        const auto &s = r.r.seller_strategy, &b = r.r.buyer_strategy;
        csv.add({double(r.table), r.alpha, r.rf_minus, r.mu_C, s.funding_dollars, b.funding_dollars,
                 r.r.seller, r.r.buyer, s.funding_dollars + s.vhat, b.funding_dollars + b.vhat});
    }
    return {csv.str(), "", 0};
}

CommandOutput cmd_validate(const RunConfig& cfg) {
    const MarketModel m(cfg.rates, cfg.credit, cfg.equity, MarketModel::Validation::none);
    const auto rep = m.validate_arbitrage_free();
    CommandOutput out;
    out.report = rep.to_string();
    out.report += rep.ok() ? "all conditions hold\n" : "violations found\n";
    out.exit_code = rep.ok() || cfg.allow_violations ? 0 : 1;
    return out;
}

CommandOutput cmd_convergence(const RunConfig& cfg) {
    const MarketModel m = cfg.model();
    if (!m.rates().symmetric())
        throw InvalidModel("convergence study needs symmetric rates (closed-form reference)");
    std::vector<std::pair<int, int>> grids;
    for (int k = 0; k < 4; ++k) {
        int nt = (cfg.nx > 0 ? std::max(cfg.nx / 8, 4) : 50) << k;
        grids.emplace_back(nt + 1, nt);
    }
    const auto rows = convergence_study(m, cfg.claim, grids);
    Csv csv;
    csv.header = {"nx", "nt", "value", "reference", "error", "order"};
    for (const auto& r : rows) csv.add({double(r.nx), double(r.nt), r.value, r.reference, r.error, r.order});
    return {csv.str(), "", 0};
}

// ---------------------------------------------------------------- figures

std::vector<std::string> figure_ids() {
    return {"fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig_alphahc", "fig_hcalpha"};
}

RunConfig figure_preset(std::string_view id) {
    RunConfig c;  // benchmark
    auto set = [&](std::string_view text) { c = parse_config(text, c); };
    if (id == "fig4") {
        set("rD = 0.05\nrr = 0.05\nrc = 0.01\nsigma = 0.2\ndefaults = false\nalpha = 0\nrf = 0.08\n"
            "sweep = rf\nsweep_from = 0.06\nsweep_to = 0.15\nsweep_points = 19\nengine = closed\n");
    } else if (id == "fig5") {
        set("rD = 0.05\nrr = 0.05\nrc = 0.01\nsigma = 0.2\nalpha = 0.25\nL = 0.5\nmu_I = 0.2\nmu_C = 0.25\n"
            "rf = 0.08\nsweep = rf\nsweep_from = 0.05\nsweep_to = 0.15\nsweep_points = 21\nengine = closed\n");
    } else if (id == "fig6" || id == "fig7") {
        set("rD = 0.05\nrr = 0.05\nrc = 0.01\nsigma = 0.2\nL = 0.5\nrf = 0.08\n"
            "sweep = rf\nsweep_from = 0.05\nsweep_to = 0.15\nsweep_points = 21\nengine = closed\n");
        set(id == "fig6" ? "mu_I = 0.16\nmu_C = 0.21\n" : "mu_I = 0.51\nmu_C = 0.51\n");
    } else if (id == "fig8") {
        set("sweep = alpha\nsweep_from = 0\nsweep_to = 1\nsweep_points = 21\nengine = pde\n");
    } else if (id == "fig9") {
        set("sweep = rr_minus\nsweep_from = 0.05\nsweep_to = 0.15\nsweep_points = 11\nengine = pde\n");
    } else if (id == "fig_alphahc") {
        set("sweep = alpha\nsweep_from = 0\nsweep_to = 1\nsweep_points = 21\nengine = pde\n");
    } else if (id == "fig_hcalpha") {
        set("sweep = mu_C\nsweep_from = 0.08\nsweep_to = 0.4\nsweep_points = 17\nengine = pde\n");
    } else {
        throw std::invalid_argument("unknown figure '" + std::string(id) + "'");
    }
    c.figure = std::string(id);
    return c;
}

namespace {

struct Series {
    std::string label;       // column suffix
    std::string overrides;   // config text applied before the sweep
};

// Evaluates every (series, x) point concurrently.
std::vector<std::vector<SweepRow>> sweep_series(const RunConfig& base, const std::vector<Series>& series,
                                                const std::vector<double>& xs, Engine engine) {
    const int ns = static_cast<int>(series.size()), nxs = static_cast<int>(xs.size());
    std::vector<RunConfig> cfgs;
    for (const auto& s : series) cfgs.push_back(parse_config(s.overrides, base));
    std::vector<std::vector<SweepRow>> out(ns, std::vector<SweepRow>(nxs));
    parallel_points(ns * nxs, [&](int idx) {
        const int si = idx / nxs, xi = idx % nxs;
        RunConfig c = with_value(cfgs[si], base.sweep_key, xs[xi]);
        out[si][xi] = {xs[xi], evaluate(c.model(), c.claim, engine, resolution(c))};
    });
    return out;
}

using Column = std::pair<std::string, double (*)(const SweepRow&)>;

std::string series_csv(const std::string& axis, const std::vector<Series>& series,
                       const std::vector<std::vector<SweepRow>>& data, const std::vector<Column>& cols) {
    Csv csv;
    csv.header.push_back(axis);
    for (const auto& s : series)
        for (const auto& c : cols) csv.header.push_back(c.first + "_" + s.label);
    for (size_t i = 0; i < data[0].size(); ++i) {
        std::vector<double> row{data[0][i].x};
        for (size_t si = 0; si < series.size(); ++si)
            for (const auto& c : cols) row.push_back(c.second(data[si][i]));
        csv.add(row);
    }
    return csv.str();
}

double col_seller(const SweepRow& r) { return r.r.seller; }
double col_buyer(const SweepRow& r) { return r.r.buyer; }
double col_xi(const SweepRow& r) { return r.r.seller_strategy.xi; }
double col_xi_buyer(const SweepRow& r) { return r.r.buyer_strategy.xi; }
double col_xi_I(const SweepRow& r) { return r.r.seller_strategy.xi_I; }
double col_xi_C(const SweepRow& r) { return r.r.seller_strategy.xi_C; }

std::vector<Series> alpha_series(std::initializer_list<double> alphas) {
    std::vector<Series> s;
    for (double a : alphas) s.push_back({"alpha" + label(a), "alpha = " + fmt_num(a) + "\n"});
    return s;
}

}  // namespace

CommandOutput cmd_figure(std::string_view id, std::string_view overrides, std::optional<Engine> engine_opt,
                         const Resolution& res) {
    RunConfig base = figure_preset(id);
    base.nx = res.nx;
    base.nt = res.nt;
    base.steps = res.steps;
    base = parse_config(overrides, base);
    const Engine engine = engine_opt ? *engine_opt : parse_engine(base.engine);
    if (engine == Engine::all) throw std::invalid_argument("figure takes a single engine");
    const auto xs = linspace(base.sweep_from, base.sweep_to, std::max(base.sweep_points, 1));
    const std::string axis = base.sweep_key;

    if (id == "fig5") {
        // decomposition in percent of vhat, two credit scenarios
        std::vector<RunConfig> scen{base, parse_config("mu_I = 0.55\nmu_C = 0.55\n", base)};
        Csv csv;
        csv.header = {axis};
        for (const char* tag : {"left", "right"})
            for (const char* part : {"funding_pct", "dva_pct", "cva_pct", "total_pct"})
                csv.header.push_back(std::string(part) + "_" + tag);
        for (double x : xs) {
            std::vector<double> row{x};
            for (const auto& sc : scen) {
                RunConfig c = with_value(sc, axis, x);
                const auto m = c.model();
                const double v = agent_value(m, c.claim, 0.0, m.equity().S0).value;
                const auto d = xva_piterbarg_defaults(m, v, c.claim.maturity);
                for (double part : {d.funding_term, d.dva_term, d.cva_term, d.total})
                    row.push_back(v != 0 ? 100.0 * part / v : 0.0);
            }
            csv.add(row);
        }
        return {csv.str(), "", 0};
    }

    std::vector<Series> series;
    std::vector<Column> cols;
    if (id == "fig4") {
        series = alpha_series({0.0, 0.25, 0.5, 0.75, 1.0});
        cols = {{"xva", col_seller}, {"xi", col_xi}};
    } else if (id == "fig6" || id == "fig7") {
        series = alpha_series({0.0, 0.25, 0.5, 0.75, 1.0});
        cols = {{"xva", col_seller}, {"xi", col_xi}, {"xi_I", col_xi_I}, {"xi_C", col_xi_C}};
    } else if (id == "fig8") {
        for (double rf : {0.08, 0.1, 0.15, 0.2})
            series.push_back({"rfm" + label(rf), "rf_minus = " + fmt_num(rf) + "\n"});
        cols = {{"xva_buyer", col_buyer}, {"xva_seller", col_seller}, {"xi", col_xi},
                {"xi_I", col_xi_I}, {"xi_C", col_xi_C}};
    } else if (id == "fig9") {
        for (double rr : {0.01, 0.03, 0.05})
            series.push_back({"rrp" + label(rr), "rr_plus = " + fmt_num(rr) + "\n"});
        cols = {{"xva_buyer", col_buyer}, {"xva_seller", col_seller}, {"xi_seller", col_xi},
                {"xi_buyer", col_xi_buyer}};
    } else if (id == "fig_alphahc") {
        for (double mc : {0.16, 0.21, 0.26})
            series.push_back({"muC" + label(mc), "mu_C = " + fmt_num(mc) + "\n"});
        cols = {{"xva_buyer", col_buyer}, {"xva_seller", col_seller}, {"xi", col_xi},
                {"xi_I", col_xi_I}, {"xi_C", col_xi_C}};
    } else if (id == "fig_hcalpha") {
        series = alpha_series({0.0, 0.25, 0.5, 0.75, 1.0});
        cols = {{"xva_seller", col_seller}, {"xi", col_xi}, {"xi_I", col_xi_I}, {"xi_C", col_xi_C}};
    }
    const auto data = sweep_series(base, series, xs, engine);
    return {series_csv(axis, series, data, cols), "", 0};
}

}  // namespace xva
