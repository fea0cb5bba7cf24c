#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "xva/closed_form.hpp"
#include "xva/errors.hpp"
#include "xva/lattice.hpp"
#include "xva/pde.hpp"

using namespace xva;

namespace {

ClaimSpec zero_claim() {
    ClaimSpec c;
    c.kind = ClaimKind::custom;
    c.knots = {{0.5, 0.0}, {2.0, 0.0}};
    return c;
}

PdeSolution solve_on(const MarketModel& m, const ClaimSpec& c, int nx = 400, int nt = 400) {
    return solve(m, c, PdeGrid::make(m, c, nx, nt));
}

}  // namespace

TEST_CASE("grid contains log S0 as a node and covers six deviations") {
    const MarketModel m = benchmark_model();
    ClaimSpec call;
    const auto g = PdeGrid::make(m, call, 400, 400);
    const double pos0 = (std::log(m.equity().S0) - g.x_min) / g.dx();
    CHECK(std::abs(pos0 - std::round(pos0)) < 1e-9);
    CHECK(g.x_min <= -6 * 0.2 - 0.01);
    CHECK(g.x_max >= 6 * 0.2 - 0.01);
    CHECK_THROWS_AS(PdeGrid::make(m, call, 3, 10), InvalidModel);
    CHECK_THROWS_AS(PdeGrid::make(m, call, 10, 0), InvalidModel);
}

TEST_CASE("zero claim gives zero surfaces") {
    const MarketModel m = benchmark_model();
    const auto sol = solve_on(m, zero_claim(), 60, 40);
    for (double x : sol.what) CHECK(x == 0.0);
    for (double x : sol.u_seller) CHECK(x == 0.0);
    for (double x : sol.u_buyer) CHECK(x == 0.0);
}

TEST_CASE("terminal rows and node-aligned queries") {
    const MarketModel m = benchmark_model();
    ClaimSpec call;
    const auto sol = solve_on(m, call, 120, 60);
    const auto& g = sol.grid;
    for (int j = 0; j < g.nx; ++j) {
        CHECK(sol.u(Side::seller, g.nt, j) == 0.0);
        CHECK(sol.what[g.nt * g.nx + j] == payoff(call, std::exp(g.x(j))));
    }
    CHECK(xva_at(sol, 1.0, 1.3, Side::buyer) == 0.0);
    CHECK(xva_at(sol, g.t(7), std::exp(g.x(33)), Side::seller) == sol.u(Side::seller, 7, 33));
}

TEST_CASE("agent surface matches Black-Scholes") {
    const MarketModel m = benchmark_model();
    ClaimSpec call;
    const auto sol = solve_on(m, call);
    const auto& g = sol.grid;
    // the first step after maturity carries the implicit-Euler start-up error at the strike
    double smooth = 0, first = 0;
    for (int n = 0; n < g.nt; ++n)
        for (int j = 1; j + 1 < g.nx; ++j) {
            const double e = std::abs(sol.what[n * g.nx + j] - agent_value(m, call, g.t(n), std::exp(g.x(j))).value);
            double& bucket = n < g.nt - 3 ? smooth : first;
            bucket = std::max(bucket, e);
        }
    CHECK(smooth < 1e-4);
    CHECK(first < 3e-4);
    CHECK(payoff_cell_average(call, -0.1, 0.1) > 0.0);
    CHECK(payoff_cell_average(call, 0.1, 0.3) == doctest::Approx((std::exp(0.3) - std::exp(0.1)) / 0.2 - 1).epsilon(1e-13));
}

TEST_CASE("symmetric rates without defaults: PDE equals closed form, both sides equal") {
    ClaimSpec call;
    for (double a : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const MarketModel m = test::no_default_model(0.08, a);
        const auto sol = solve_on(m, call);
        const double cf = closed_form_xva(m, call, 0, 1);
        CHECK(std::abs(xva_at(sol, 0, 1, Side::seller) - cf) < 1e-4);
        double worst = 0;
        for (size_t i = 0; i < sol.u_seller.size(); ++i)
            worst = std::max(worst, std::abs(sol.u_seller[i] - sol.u_buyer[i]));
        CHECK(worst < 1e-9);
        CHECK(std::abs(xva_at(sol, 0.37, 1.123, Side::seller) - closed_form_xva(m, call, 0.37, 1.123)) < 2e-4);
    }
}

TEST_CASE("symmetric rates with defaults: PDE equals closed form on both sides") {
    ClaimSpec call;
    for (double rf : {0.05, 0.1, 0.15}) {
        const MarketModel m = test::symmetric_default_model(rf, 0.5);
        const auto sol = solve_on(m, call);
        CHECK(std::abs(xva_at(sol, 0, 1, Side::seller) - closed_form_xva(m, call, 0, 1)) < 1e-4);
        CHECK(std::abs(xva_at(sol, 0, 1, Side::buyer) - closed_form_xva(m, call, 0, 1, Side::buyer)) < 1e-4);
        for (Side s : {Side::seller, Side::buyer}) {
            const auto p = strategies(sol, 0, 1, s);
            const auto c = closed_form_strategy(m, call, 0, 1, s);
            CHECK(std::abs(p.xi - c.xi) < 5e-4);
            CHECK(std::abs(p.xi_I - c.xi_I) < 5e-4);
            CHECK(std::abs(p.xi_C - c.xi_C) < 5e-4);
        }
    }
}

TEST_CASE("buyer of a claim is the reflected seller of its negative") {
    const MarketModel m = benchmark_model();
    ClaimSpec call, short_call;
    short_call.notional = -1;
    const auto a = solve_on(m, call, 200, 100);
    const auto b = solve_on(m, short_call, 200, 100);
    double worst = 0;
    for (size_t i = 0; i < a.u_buyer.size(); ++i) worst = std::max(worst, std::abs(a.u_buyer[i] + b.u_seller[i]));
    CHECK(worst <= 1e-12);
}

TEST_CASE("wealth identity and collateral leg at interior nodes") {
    ClaimSpec call;
    const MarketModel m = benchmark_model();
    const auto sol = solve_on(m, call, 200, 100);
    std::mt19937_64 g(41);
    std::uniform_int_distribution<int> jn(1, sol.grid.nx - 2), nn(0, sol.grid.nt - 1);
    for (int k = 0; k < 100; ++k)
        for (Side s : {Side::seller, Side::buyer}) {
            const auto row = strategy_at_node(sol, s, nn(g), jn(g));
            CHECK(std::abs(row.wealth() - row.xva) <= 1e-8);
            CHECK_FALSE(row.one_sided);
        }
    CHECK(strategy_at_node(sol, Side::seller, 0, 0).one_sided);

    CreditParams c = m.credit();
    c.alpha = 1;
    const MarketModel full = m.with_credit(c);
    const auto fs = solve_on(full, call, 100, 50);
    const auto row = strategy_at_node(fs, Side::seller, 10, 50);
    CHECK(row.psi_c == doctest::Approx(-row.vhat / row.B_c).epsilon(1e-14));
}

TEST_CASE("benchmark: band values and lattice agreement") {
    const MarketModel m = benchmark_model();
    ClaimSpec call;
    const auto sol = solve_on(m, call);
    const auto lat = band(m, call, 2000);
    CHECK(std::abs(xva_at(sol, 0, 1, Side::seller) - lat.seller) < 5e-4);
    CHECK(std::abs(xva_at(sol, 0, 1, Side::buyer) - lat.buyer) < 5e-4);
    for (const auto& d : sol.diag_seller) CHECK(d.residual <= 1e-10);
}

TEST_CASE("custom payoff runs through the grid agent surface") {
    const MarketModel m = test::no_default_model(0.08, 0.3);
    ClaimSpec spread;
    spread.kind = ClaimKind::custom;
    spread.knots = {{0.5, 0.0}, {0.9, 0.0}, {1.1, 0.2}, {2.0, 0.2}};
    ClaimSpec c1, c2;
    c1.strike = 0.9;
    c2.strike = 1.1;
    const double ref = closed_form_xva(m, c1, 0, 1) - closed_form_xva(m, c2, 0, 1);  // linear driver
    const auto sol = solve_on(m, spread);
    CHECK(std::abs(xva_at(sol, 0, 1, Side::seller) - ref) < 2e-4);
}

TEST_CASE("convergence order and degenerate grids") {
    ClaimSpec call;
    const MarketModel m = test::no_default_model(0.08, 0.0);
    const auto rows = convergence_study(m, call, {{51, 50}, {101, 100}, {201, 200}, {401, 400}});
    REQUIRE(rows.size() == 4);
    CHECK(std::isnan(rows[0].order));
    CHECK(rows.back().order >= 1.8);

    const auto one = convergence_study(m, call, {{41, 1}});
    CHECK(std::isfinite(one[0].error));

    const auto zero = convergence_study(m, zero_claim(), {{41, 20}, {81, 40}});
    for (const auto& r : zero) CHECK(r.error == 0.0);

    CHECK_THROWS_AS(convergence_study(benchmark_model(), call, {{41, 20}}), InvalidModel);
}

TEST_CASE("parallel solve equals serial solve") {
    const MarketModel m = benchmark_model();
    ClaimSpec call;
    PdeOptions par;
    par.parallel = true;
    const auto g = PdeGrid::make(m, call, 300, 80);
    const auto a = solve(m, call, g);
    const auto b = solve(m, call, g, par);
    CHECK(a.u_seller == b.u_seller);
    CHECK(a.u_buyer == b.u_buyer);
}

TEST_CASE("Picard failure is reported, never silent") {
    const MarketModel m = benchmark_model();
    ClaimSpec call;
    PdeOptions o;
    o.max_picard = 1;
    CHECK_THROWS_AS(solve(m, call, PdeGrid::make(m, call, 100, 10), o), NumericalError);
}
