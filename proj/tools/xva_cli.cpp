#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "xva/analysis.hpp"
#include "xva/errors.hpp"

namespace {

struct Flags {
    std::string config, engine, out, figure_id;
    bool allow_violations = false;
    std::optional<int> nx, nt, steps;
};

xva::RunConfig load(const Flags& f) {
    xva::RunConfig c = f.config.empty() ? xva::RunConfig{} : xva::load_config(f.config);
    if (f.allow_violations) c.allow_violations = true;
    if (f.nx) c.nx = *f.nx;
    if (f.nt) c.nt = *f.nt;
    if (f.steps) c.steps = *f.steps;
    if (!f.out.empty()) c.out = f.out;
    if (!f.engine.empty()) c.engine = f.engine;
    if (c.nx < 4 || c.nt < 1 || c.steps < 1) throw std::invalid_argument("resolutions must be positive (nx >= 4)");
    return c;
}

void emit(const xva::CommandOutput& o, const std::string& out) {
    std::cout << o.report;
    if (o.csv.empty()) return;
    if (out.empty()) {
        std::cout << o.csv;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot write " + out);
    f << o.csv;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"XVA valuation under asymmetric rates, collateral and default risk"};
    app.require_subcommand(1);
    Flags f;
    auto common = [&](CLI::App* s) {
        s->add_option("--config", f.config, "key = value run description")->check(CLI::ExistingFile);
        s->add_option("--engine", f.engine, "closed | pde | lattice | all");
        s->add_option("--out", f.out, "CSV output path (default stdout)");
        s->add_flag("--allow-violations", f.allow_violations, "run even if rate conditions fail");
        s->add_option("--nx", f.nx, "PDE space nodes");
        s->add_option("--nt", f.nt, "PDE time steps");
        s->add_option("--steps", f.steps, "lattice time steps");
    };
    auto* value = app.add_subcommand("value", "XVA of both sides at t = 0");
    auto* band = app.add_subcommand("band", "buyer/seller band swept over alpha");
    auto* table = app.add_subcommand("table", "funding-account positions, two tables");
    auto* figure = app.add_subcommand("figure", "plot data for one figure");
    auto* validate = app.add_subcommand("validate", "check the rate conditions");
    auto* conv = app.add_subcommand("convergence", "PDE error against the closed form");
    for (auto* s : {value, band, table, figure, validate, conv}) common(s);
    figure->add_option("--id", f.figure_id, "figure id")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        xva::CommandOutput out;
        if (*figure) {
            std::string text = f.config.empty() ? "" : read_file(f.config);
            if (f.allow_violations) text += "\nallow_violations = true\n";
            std::optional<xva::Engine> eng;
            if (!f.engine.empty()) eng = xva::parse_engine(f.engine);
            xva::Resolution res;
            if (f.nx) res.nx = *f.nx;
            if (f.nt) res.nt = *f.nt;
            if (f.steps) res.steps = *f.steps;
            out = xva::cmd_figure(f.figure_id, text, eng, res);
            emit(out, f.out);
            return out.exit_code;
        }
        const xva::RunConfig cfg = load(f);
        if (*value) out = xva::cmd_value(cfg, xva::parse_engine(cfg.engine));
        else if (*band) out = xva::cmd_band(cfg, xva::parse_engine(cfg.engine));
        else if (*table) out = xva::cmd_table(cfg, xva::parse_engine(cfg.engine));
        else if (*validate) out = xva::cmd_validate(cfg);
        else out = xva::cmd_convergence(cfg);
        emit(out, cfg.out);
        return out.exit_code;
    } catch (const xva::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const xva::DegenerateRates& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
