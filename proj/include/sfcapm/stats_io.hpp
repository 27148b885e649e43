#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sfcapm/calibration.hpp"
#include "sfcapm/errors.hpp"

namespace sfcapm {

// Input file did not parse or failed validation; treated as a user input
// error (exit code 1), unlike numerical failures (exit code 2).
class parse_error : public error {
public:
    explicit parse_error(const std::string& what) : error(what) {}
};

// Parsed statistics file plus everything the caller may want to warn about.
struct StatsFile {
    EconomyStatistics stats;
    std::vector<std::string> unknown_keys;
    bool beta_provided = false;
};

namespace io_detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline double parse_number(std::string_view text, const std::string& field,
                           const std::string& where) {
    const std::string_view t = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw parse_error(where + ": invalid number for '" + field + "': '" +
                          std::string(t) + "'");
    return value;
}

struct FieldSet {
    double mean_equity_return = 0.0;
    double mean_risk_free_rate = 0.0;
    double mean_consumption_growth = 0.0;
    double sd_consumption_growth = 0.0;
    double beta = 0.99;
    bool has_re = false, has_rf = false, has_gr = false, has_sd = false, has_beta = false;

    // Returns false for unknown keys.
    bool assign(const std::string& key, double value, const std::string& where) {
        auto set = [&](double& slot, bool& flag) {
            if (flag) throw parse_error(where + ": duplicate field '" + key + "'");
            slot = value;
            flag = true;
        };
        if (key == "mean_equity_return") set(mean_equity_return, has_re);
        else if (key == "mean_risk_free_rate") set(mean_risk_free_rate, has_rf);
        else if (key == "mean_consumption_growth") set(mean_consumption_growth, has_gr);
        else if (key == "sd_consumption_growth") set(sd_consumption_growth, has_sd);
        else if (key == "beta") set(beta, has_beta);
        else return false;
        return true;
    }

    StatsFile finish() const {
        auto require = [](bool present, const char* name) {
            if (!present)
                throw parse_error(std::string("missing required field '") + name + "'");
        };
        require(has_re, "mean_equity_return");
        require(has_rf, "mean_risk_free_rate");
        require(has_gr, "mean_consumption_growth");
        require(has_sd, "sd_consumption_growth");

        auto positive = [](double v, const char* name) {
            if (!(v > 0.0) || !std::isfinite(v))
                throw parse_error(std::string("field '") + name +
                                  "' must be positive and finite");
        };
        positive(mean_equity_return, "mean_equity_return");
        positive(mean_risk_free_rate, "mean_risk_free_rate");
        positive(mean_consumption_growth, "mean_consumption_growth");
        positive(sd_consumption_growth, "sd_consumption_growth");
        if (!(beta > 0.0 && beta <= 1.0))
            throw parse_error("field 'beta' must be in (0,1]");

        StatsFile out;
        out.stats = {mean_equity_return, mean_risk_free_rate, mean_consumption_growth,
                     sd_consumption_growth, beta};
        out.beta_provided = has_beta;
        return out;
    }
};

} // namespace io_detail

// Flat key = value format, one field per line, '#' starts a comment.
inline StatsFile parse_stats_keyvalue(const std::string& text) {
    io_detail::FieldSet fields;
    std::vector<std::string> unknown;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto body = io_detail::trim(line);
        if (body.empty()) continue;
        const std::string where = "line " + std::to_string(lineno);
        const auto eq = body.find('=');
        if (eq == std::string_view::npos)
            throw parse_error(where + ": expected 'key = value', got '" + std::string(body) +
                              "'");
        const std::string key{io_detail::trim(body.substr(0, eq))};
        if (key.empty()) throw parse_error(where + ": empty key");
        const double value = io_detail::parse_number(body.substr(eq + 1), key, where);
        if (!fields.assign(key, value, where)) unknown.push_back(key);
    }
    StatsFile out = fields.finish();
    out.unknown_keys = std::move(unknown);
    return out;
}

// Structured alternative: a flat JSON object with the same keys.
inline StatsFile parse_stats_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw parse_error("stats JSON must be a flat object");
    io_detail::FieldSet fields;
    std::vector<std::string> unknown;
    for (const auto& [key, value] : doc.items()) {
        if (!value.is_number())
            throw parse_error("field '" + key + "' must be a number");
        if (!fields.assign(key, value.get<double>(), "field '" + key + "'"))
            unknown.push_back(key);
    }
    StatsFile out = fields.finish();
    out.unknown_keys = std::move(unknown);
    return out;
}

inline StatsFile parse_stats_text(const std::string& text, bool looks_like_json) {
    if (looks_like_json) return parse_stats_json(text);
    return parse_stats_keyvalue(text);
}

inline StatsFile parse_stats_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open stats file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    const bool json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
    return parse_stats_text(text, json || (first != std::string::npos && text[first] == '{'));
}

} // namespace sfcapm
