#include "xva/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace xva {

namespace {

std::string_view trim(std::string_view s) {
    const char* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

bool parse_bool(std::string_view v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::invalid_argument("expected a boolean, got '" + std::string(v) + "'");
}

std::vector<std::pair<double, double>> parse_knots(std::string_view v) {
    std::vector<std::pair<double, double>> out;
    while (!v.empty()) {
        auto comma = v.find(',');
        auto item = trim(v.substr(0, comma));
        auto colon = item.find(':');
        if (colon == std::string_view::npos)
            throw std::invalid_argument("knot '" + std::string(item) + "' is not s:payoff");
        out.emplace_back(parse_double(trim(item.substr(0, colon))), parse_double(trim(item.substr(colon + 1))));
        if (comma == std::string_view::npos) break;
        v.remove_prefix(comma + 1);
    }
    return out;
}

using Setter = std::function<void(RunConfig&, double)>;

const std::map<std::string, Setter, std::less<>>& numeric_keys() {
    static const std::map<std::string, Setter, std::less<>> keys = {
        {"sigma", [](RunConfig& c, double v) { c.equity.sigma = v; }},
        {"S0", [](RunConfig& c, double v) { c.equity.S0 = v; }},
        {"mu_phys", [](RunConfig& c, double v) { c.equity.mu_phys = v; }},
        {"rf_plus", [](RunConfig& c, double v) { c.rates.rf_plus = v; }},
        {"rf_minus", [](RunConfig& c, double v) { c.rates.rf_minus = v; }},
        {"rf", [](RunConfig& c, double v) { c.rates.rf_plus = c.rates.rf_minus = v; }},
        {"rr_plus", [](RunConfig& c, double v) { c.rates.rr_plus = v; }},
        {"rr_minus", [](RunConfig& c, double v) { c.rates.rr_minus = v; }},
        {"rr", [](RunConfig& c, double v) { c.rates.rr_plus = c.rates.rr_minus = v; }},
        {"rc_plus", [](RunConfig& c, double v) { c.rates.rc_plus = v; }},
        {"rc_minus", [](RunConfig& c, double v) { c.rates.rc_minus = v; }},
        {"rc", [](RunConfig& c, double v) { c.rates.rc_plus = c.rates.rc_minus = v; }},
        {"rD", [](RunConfig& c, double v) { c.rates.rD = v; }},
        {"mu_I", [](RunConfig& c, double v) { c.credit.mu_I = v; }},
        {"mu_C", [](RunConfig& c, double v) { c.credit.mu_C = v; }},
        {"mu", [](RunConfig& c, double v) { c.credit.mu_I = c.credit.mu_C = v; }},
        {"L_I", [](RunConfig& c, double v) { c.credit.L_I = v; }},
        {"L_C", [](RunConfig& c, double v) { c.credit.L_C = v; }},
        {"L", [](RunConfig& c, double v) { c.credit.L_I = c.credit.L_C = v; }},
        {"alpha", [](RunConfig& c, double v) { c.credit.alpha = v; }},
        {"strike", [](RunConfig& c, double v) { c.claim.strike = v; }},
        {"maturity", [](RunConfig& c, double v) { c.claim.maturity = v; }},
        {"notional", [](RunConfig& c, double v) { c.claim.notional = v; }},
        {"sweep_from", [](RunConfig& c, double v) { c.sweep_from = v; }},
        {"sweep_to", [](RunConfig& c, double v) { c.sweep_to = v; }},
    };
    return keys;
}

}  // namespace

double parse_double(std::string_view s) {
    s = trim(s);
    double v = 0;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
        throw std::invalid_argument("not a number: '" + std::string(s) + "'");
    return v;
}

int parse_int(std::string_view s) {
    s = trim(s);
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
        throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
    return v;
}

bool is_numeric_key(std::string_view key) { return numeric_keys().count(key) > 0; }

void apply_setting(RunConfig& c, std::string_view key, std::string_view value) {
    value = trim(value);
    try {
        if (auto it = numeric_keys().find(key); it != numeric_keys().end()) {
            it->second(c, parse_double(value));
        } else if (key == "defaults") {
            c.credit.defaultable = parse_bool(value);
        } else if (key == "claim") {
            if (value == "call") c.claim.kind = ClaimKind::call;
            else if (value == "put") c.claim.kind = ClaimKind::put;
            else if (value == "custom") c.claim.kind = ClaimKind::custom;
            else throw std::invalid_argument("claim must be call, put or custom");
        } else if (key == "knots") {
            c.claim.knots = parse_knots(value);
        } else if (key == "nx") {
            c.nx = parse_int(value);
        } else if (key == "nt") {
            c.nt = parse_int(value);
        } else if (key == "steps") {
            c.steps = parse_int(value);
        } else if (key == "engine") {
            c.engine = std::string(value);
        } else if (key == "figure") {
            c.figure = std::string(value);
        } else if (key == "out") {
            c.out = std::string(value);
        } else if (key == "allow_violations") {
            c.allow_violations = parse_bool(value);
        } else if (key == "sweep") {
            c.sweep_key = std::string(value);
        } else if (key == "sweep_points") {
            c.sweep_points = parse_int(value);
        } else {
            throw std::invalid_argument("unknown key");
        }
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("config key '" + std::string(key) + "': " + e.what());
    }
}

RunConfig parse_config(std::string_view text, RunConfig base) {
    int line_no = 0;
    while (!text.empty()) {
        auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("line " + std::to_string(line_no) + ": expected key = value");
        try {
            apply_setting(base, trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

MarketModel RunConfig::model() const {
    return MarketModel(rates, credit, equity,
                       allow_violations ? MarketModel::Validation::none
                                        : MarketModel::Validation::necessary);
}

}  // namespace xva
