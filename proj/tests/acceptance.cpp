// One PASS/FAIL line per acceptance criterion, with the measured quantity.
// Exit status: 0 when every failing criterion is listed in --known-failures,
// so an unexpected regression still breaks the build while documented gaps stay visible.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "xva/analysis.hpp"
#include "xva/closed_form.hpp"
#include "xva/lattice.hpp"
#include "xva/pde.hpp"

using namespace xva;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

PdeSolution solve400(const MarketModel& m, const ClaimSpec& c) { return solve(m, c, PdeGrid::make(m, c, 400, 400)); }

Outcome c1_closed_pde_no_defaults() {
    ClaimSpec call;
    double worst = 0, slowest = 0;
    for (double a : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const MarketModel m = test::no_default_model(0.08, a);
        const auto t0 = std::chrono::steady_clock::now();
        const auto sol = solve400(m, call);
        slowest = std::max(slowest, seconds_since(t0));
        worst = std::max(worst, std::abs(xva_at(sol, 0, 1, Side::seller) - closed_form_xva(m, call, 0, 1)));
    }
    return {worst < 1e-4 && slowest < 5.0, fmt("max |pde - closed| = %.3e (< 1e-4), slowest solve %.3f s (< 5 s)", worst, slowest)};
}

Outcome c2_closed_pde_defaults() {
    ClaimSpec call;
    double worst = 0;
    const auto rfs = linspace(0.05, 0.15, 10);
    for (double a : {0.0, 0.25, 0.5, 0.75, 1.0})
        for (double rf : rfs) {
            const MarketModel m = test::symmetric_default_model(rf, a, 0.16, 0.21);
            const auto sol = solve400(m, call);
            for (Side s : {Side::seller, Side::buyer})
                worst = std::max(worst, std::abs(xva_at(sol, 0, 1, s) - closed_form_xva(m, call, 0, 1, s)));
        }
    return {worst < 2e-4, fmt("10 rf points x 5 alphas x both sides: max |pde - closed| = %.3e (< 2e-4)", worst)};
}

Outcome c3_triple_agreement() {
    ClaimSpec call;
    double worst = 0;
    std::vector<MarketModel> models;
    for (double a : {0.0, 0.5, 1.0}) models.push_back(test::no_default_model(0.08, a));
    for (double rf : {0.05, 0.1, 0.15})
        for (double a : {0.25, 0.9}) models.push_back(test::symmetric_default_model(rf, a, 0.16, 0.21));
    for (const auto& m : models) {
        const auto sol = solve400(m, call);
        const auto lat = band(m, call, 2000);
        for (Side s : {Side::seller, Side::buyer}) {
            const double p = xva_at(sol, 0, 1, s), c = closed_form_xva(m, call, 0, 1, s);
            const double l = s == Side::seller ? lat.seller : lat.buyer;
            worst = std::max({worst, std::abs(p - c), std::abs(p - l), std::abs(l - c)});
        }
    }
    return {worst < 5e-4, fmt("%g symmetric regimes: max pairwise disagreement %.3e (< 5e-4)", double(models.size()), worst)};
}

const TableRow* find_row(const std::vector<TableRow>& rows, int table, double alpha, double rf) {
    for (const auto& r : rows)
        if (r.table == table && std::abs(r.alpha - alpha) < 1e-12 && std::abs(r.rf_minus - rf) < 1e-12) return &r;
    return nullptr;
}

Outcome check_table(const std::vector<TableRow>& rows, int table,
                    const std::vector<std::tuple<double, double, double, double>>& expect) {
    bool ok = true;
    std::ostringstream os;
    for (const auto& [alpha, rf, seller, buyer] : expect) {
        const auto* r = find_row(rows, table, alpha, rf);
        const double s = r->r.seller_strategy.funding_dollars, b = r->r.buyer_strategy.funding_dollars;
        const bool hit = std::abs(s - seller) <= 2e-3 && std::abs(b - buyer) <= 2e-3;
        ok &= hit;
        os << fmt("[a=%.2f rf-=%.2f seller %.4f vs %.4f, ", alpha, rf, s, seller)
           << fmt("buyer %.4f vs %.4f] ", b, buyer);
    }
    os << "(tol 2e-3)";
    return {ok, os.str()};
}

Outcome c4_table1(const std::vector<TableRow>& rows) {
    return check_table(rows, 1, {{0.0, 0.08, 0.0039, 0.0403}, {0.25, 0.08, 0.0249, 0.0257}, {1.0, 0.08, -0.0182, -0.018}});
}

Outcome c5_table2(const std::vector<TableRow>& rows) {
    return check_table(rows, 2, {{0.9, 0.08, -0.0124, -0.0123}});
}

Outcome c6_band_ordering() {
    std::mt19937_64 g(2024);
    ClaimSpec call;
    int tried = 0, accepted = 0, bad = 0;
    double worst = 1e300;
    while (accepted < 50) {
        ++tried;
        const MarketModel m = test::random_model(g);
        if (!m.validate_arbitrage_free().ok()) continue;
        ++accepted;
        const auto sol = solve400(m, call);
        const double w = xva_at(sol, 0, 1, Side::seller) - xva_at(sol, 0, 1, Side::buyer);
        worst = std::min(worst, w);
        if (w < -1e-6) ++bad;
    }
    return {bad == 0, fmt("%g of 50 arbitrage-free sets have seller < buyer - 1e-6; min width %.3e", bad, worst)};
}

Outcome c7_band_monotone() {
    RunConfig lo, hi;
    hi.rates.rf_minus = 0.15;
    const auto xs = linspace(0, 1, 21);
    const auto a = sweep(lo, "alpha", xs, Engine::pde), b = sweep(hi, "alpha", xs, Engine::pde);
    int bad = 0;
    double margin = 1e300;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double d = b[i].r.width() - a[i].r.width();
        margin = std::min(margin, d);
        if (!(d > 0)) ++bad;
    }
    return {bad == 0, fmt("width(rf-=0.15) - width(rf-=0.08) min over 21 alphas %.3e; %g violations", margin, bad)};
}

Outcome c8_buyer_repo() {
    RunConfig base = figure_preset("fig9");
    const auto xs = linspace(base.sweep_from, base.sweep_to, base.sweep_points);
    double worst = 0;
    std::ostringstream os;
    for (double rrp : {0.01, 0.03, 0.05}) {
        RunConfig c = base;
        c.rates.rr_plus = rrp;
        const auto rows = sweep(c, "rr_minus", xs, Engine::pde);
        double lo = 1e300, hi = -1e300;
        for (const auto& r : rows) lo = std::min(lo, r.r.buyer), hi = std::max(hi, r.r.buyer);
        worst = std::max(worst, hi - lo);
        os << fmt("rr+=%.2f: buyer range %.3e; ", rrp, hi - lo);
    }
    os << "(< 1e-5)";
    return {worst < 1e-5, os.str()};
}

Outcome c9_drivers() {
    std::mt19937_64 g(9);
    std::uniform_real_distribution<double> u(-1, 1), gam(1e-3, 10);
    double refl = 0, homo = 0, shift = 0, coll = 0;
    for (int i = 0; i < 1000; ++i) {
        const MarketModel m = test::random_model(g);
        const DriverArgs a{0, u(g), u(g), u(g), u(g), u(g)};
        refl = std::max(refl, std::abs(f_minus(m, a) + f_plus(m, a.reflected())));
        refl = std::max(refl, std::abs(g_reduced(m, Side::buyer, 0, a.v, a.z, a.vhat) +
                                       g_reduced(m, Side::seller, 0, -a.v, -a.z, -a.vhat)));
        const double k = gam(g);
        const DriverArgs b{0, k * a.v, k * a.z, k * a.zI, k * a.zC, k * a.vhat};
        const double fa = f_plus(m, a);
        homo = std::max(homo, std::abs(f_plus(m, b) - k * fa) / std::max(1.0, std::abs(k * fa)));
        for (Side s : {Side::seller, Side::buyer}) {
            DriverArgs w = a;
            w.v += a.vhat;
            shift = std::max(shift, std::abs(f_tilde(m, s, a) - f_side(m, s, w) - m.rD() * a.vhat));
        }
        const MarketModel sym = test::no_default_model(0.06 + 0.05 * (u(g) + 1), 0.5 * (u(g) + 1));
        coll = std::max(coll, std::abs(g_reduced(sym, Side::seller, 0, a.v, a.z, a.vhat) -
                                       g_reduced(sym, Side::buyer, 0, a.v, a.z, a.vhat)));
    }
    const bool ok = refl == 0 && homo <= 1e-12 && shift <= 1e-12 && coll <= 1e-12;
    return {ok, fmt("1000 tuples: reflection %.1e (exact), homogeneity %.1e, level shift %.1e, symmetric collapse %.1e", refl,
                    homo, shift, coll)};
}

Outcome c10_agent_surface() {
    const MarketModel m = benchmark_model();
    ClaimSpec call;
    const auto sol = solve400(m, call);
    const auto& g = sol.grid;
    double worst = 0;
    for (int n = 0; n < g.nt; ++n)
        for (int j = 1; j + 1 < g.nx; ++j)
            worst = std::max(worst, std::abs(sol.what[n * g.nx + j] - agent_value(m, call, g.t(n), std::exp(g.x(j))).value));
    double dworst = 0;
    for (double t : {0.0, 0.5, 0.9})
        for (double s : {0.7, 0.9, 1.0, 1.1, 1.4}) {
            const double h = 1e-5 * s;
            const double fd = (agent_value(m, call, t, s + h).value - agent_value(m, call, t, s - h).value) / (2 * h);
            dworst = std::max(dworst, std::abs(fd - agent_value(m, call, t, s).delta) / std::abs(fd));
        }
    return {worst < 1e-4 && dworst < 1e-6,
            fmt("max interior grid error %.3e (< 1e-4); delta vs finite difference %.3e relative (< 1e-6)", worst, dworst)};
}

Outcome c11_wealth_identity() {
    const MarketModel m = benchmark_model();
    ClaimSpec call;
    const auto sol = solve400(m, call);
    std::mt19937_64 g(11);
    std::uniform_int_distribution<int> jn(1, sol.grid.nx - 2), nn(0, sol.grid.nt - 1);
    double worst = 0;
    for (int k = 0; k < 100; ++k) {
        const int n = nn(g), j = jn(g);
        for (Side s : {Side::seller, Side::buyer}) {
            const auto row = strategy_at_node(sol, s, n, j);
            worst = std::max(worst, std::abs(row.wealth() - row.xva));
        }
    }
    return {worst <= 1e-8, fmt("100 interior nodes x both sides: max |wealth - xva| = %.3e (<= 1e-8)", worst)};
}

Outcome c12_convergence() {
    ClaimSpec call;
    std::ostringstream os;
    bool ok = true;
    const std::vector<std::pair<int, int>> grids{{51, 50}, {101, 100}, {201, 200}, {401, 400}};
    for (const auto& m : {test::no_default_model(0.08, 0.0), test::symmetric_default_model(0.1, 0.5, 0.16, 0.21)}) {
        const auto rows = convergence_study(m, call, grids);
        for (size_t i = 1; i < rows.size(); ++i) {
            ok &= rows[i].order >= 1.8;
            os << fmt("%.2f ", rows[i].order);
        }
        os << "| ";
    }
    os << "(orders >= 1.8)";
    return {ok, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> known;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--known-failures") {
            std::stringstream ss(argv[i + 1]);
            std::string tok;
            while (std::getline(ss, tok, ',')) known.insert(std::stoi(tok));
        }

    RunConfig bench;
    const auto tables = funding_tables(bench, Engine::pde);

    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"closed form vs PDE, symmetric without defaults", c1_closed_pde_no_defaults},
        {"closed form vs PDE, symmetric with defaults", c2_closed_pde_defaults},
        {"lattice vs PDE vs closed form", c3_triple_agreement},
        {"funding positions, first table", [&] { return c4_table1(tables); }},
        {"funding positions, second table", [&] { return c5_table2(tables); }},
        {"band ordering on random arbitrage-free sets", c6_band_ordering},
        {"band width increases with rf-", c7_band_monotone},
        {"buyer XVA insensitive to rr-", c8_buyer_repo},
        {"driver property suite", c9_drivers},
        {"agent surface vs Black-Scholes", c10_agent_surface},
        {"wealth identity of the replication", c11_wealth_identity},
        {"PDE convergence order", c12_convergence},
    };
    int unexpected = 0, failed = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s  %2d  %s: %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) {
            ++failed;
            if (!known.count(id)) ++unexpected;
        }
    }
    std::printf("%d of %zu criteria pass; %d failure(s) outside the known list\n",
                static_cast<int>(criteria.size()) - failed, criteria.size(), unexpected);
    return unexpected == 0 ? 0 : 1;
}
