#include "damctl/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace damctl {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    parts.push_back(cur);
    return parts;
}

double parse_number(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size() || !std::isfinite(v))
            throw ConfigError("bad " + what + ": '" + s + "'");
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("bad " + what + ": '" + s + "'");
    }
}

int parse_int(const std::string& s, const std::string& what) {
    double v = parse_number(s, what);
    int i = static_cast<int>(v);
    if (double(i) != v) throw ConfigError(what + " must be an integer: '" + s + "'");
    return i;
}

std::vector<double> parse_number_list(const std::string& s, char sep,
                                      const std::string& what) {
    std::vector<double> out;
    for (const auto& tok : split(s, sep)) out.push_back(parse_number(trim(tok), what));
    return out;
}

} // namespace

DistributionSpec parse_dist_spec(const std::string& text) {
    std::string t = trim(text);
    std::size_t colon = t.find(':');
    if (colon == std::string::npos)
        throw ConfigError("distribution spec '" + t + "' needs 'family:params'");
    std::string family = t.substr(0, colon);
    std::string params = t.substr(colon + 1);
    try {
        if (family == "exp") {
            return DistributionSpec::exponential(parse_number(params, "exp rate"));
        }
        if (family == "erlang") {
            auto parts = split(params, ',');
            if (parts.size() != 2)
                throw ConfigError("erlang spec needs 'shape,rate': '" + t + "'");
            return DistributionSpec::erlang(parse_int(trim(parts[0]), "erlang shape"),
                                            parse_number(trim(parts[1]), "erlang rate"));
        }
        if (family == "hyperexp") {
            auto groups = split(params, ';');
            if (groups.size() != 2)
                throw ConfigError("hyperexp spec needs 'weights;rates': '" + t + "'");
            return DistributionSpec::hyper_exponential(
                parse_number_list(groups[0], '|', "hyperexp weight"),
                parse_number_list(groups[1], '|', "hyperexp rate"));
        }
        if (family == "det") {
            return DistributionSpec::deterministic(parse_number(params, "det value"));
        }
    } catch (const DomainError& e) {
        throw ConfigError("distribution spec '" + t + "': " + e.what());
    }
    throw ConfigError("unknown distribution family '" + family +
                      "' (expected exp|erlang|hyperexp|det)");
}

std::string format_dist_spec(const DistributionSpec& spec) { return spec.name(); }

CostModel parse_cost_spec(const std::string& text) {
    std::string t = trim(text);
    std::size_t colon = t.find(':');
    if (colon == std::string::npos)
        throw ConfigError("cost spec '" + t + "' needs 'kind:params'");
    std::string kind = t.substr(0, colon);
    std::string params = t.substr(colon + 1);
    try {
        if (kind == "constant") {
            return CostModel::constant(parse_number(params, "constant cost"));
        }
        if (kind == "linear") {
            auto parts = split(params, ',');
            if (parts.size() != 2)
                throw ConfigError("linear cost needs 'c_top,c_bottom': '" + t + "'");
            return CostModel::linear(parse_number(trim(parts[0]), "linear c_top"),
                                     parse_number(trim(parts[1]), "linear c_bottom"));
        }
        if (kind == "table") {
            auto parts = split(params, ',');
            if (parts.size() != 2)
                throw ConfigError("table cost needs 'file.csv,rule': '" + t + "'");
            std::string path = trim(parts[0]);
            std::string rule_name = trim(parts[1]);
            ExtensionRule rule;
            if (rule_name == "repeat-last")
                rule = ExtensionRule::RepeatLast;
            else if (rule_name == "stretch")
                rule = ExtensionRule::Stretch;
            else
                throw ConfigError("unknown table extension rule '" + rule_name +
                                  "' (expected repeat-last|stretch)");
            std::ifstream in(path);
            if (!in) throw IoError("cannot open cost table '" + path + "'");
            std::vector<double> values;
            std::string line;
            int lineno = 0;
            while (std::getline(in, line)) {
                ++lineno;
                std::string v = trim(line);
                if (v.empty()) continue;
                values.push_back(
                    parse_number(v, path + ":" + std::to_string(lineno) + " cost"));
            }
            return CostModel::table(std::move(values), rule);
        }
    } catch (const DomainError& e) {
        throw ConfigError("cost spec '" + t + "': " + e.what());
    }
    throw ConfigError("unknown cost kind '" + kind +
                      "' (expected constant|linear|table)");
}

std::vector<double> parse_value_grid(const std::string& text) {
    std::string t = trim(text);
    if (t.find(':') != std::string::npos) {
        auto parts = split(t, ':');
        if (parts.size() != 3)
            throw ConfigError("grid '" + t + "' needs 'start:stop:step'");
        double start = parse_number(trim(parts[0]), "grid start");
        double stop = parse_number(trim(parts[1]), "grid stop");
        double step = parse_number(trim(parts[2]), "grid step");
        if (step <= 0.0) throw ConfigError("grid step must be positive");
        if (stop < start) throw ConfigError("grid stop below start");
        std::vector<double> out;
        int n = static_cast<int>(std::floor((stop - start) / step + 1e-9));
        for (int i = 0; i <= n; ++i) out.push_back(start + step * i);
        return out;
    }
    auto values = parse_number_list(t, ',', "grid value");
    if (values.empty()) throw ConfigError("empty value grid");
    return values;
}

KeyValues parse_key_values(const std::string& text) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected key=value, got '" + t + "'");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        auto it = std::find_if(kv.begin(), kv.end(),
                               [&key](const auto& p) { return p.first == key; });
        if (it != kv.end())
            it->second = value;
        else
            kv.emplace_back(key, value);
    }
    return kv;
}

std::string serialize_key_values(const KeyValues& kv) {
    std::string out;
    for (const auto& [k, v] : kv) {
        out += k;
        out += " = ";
        out += v;
        out += "\n";
    }
    return out;
}

KeyValues load_key_values(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_key_values(buf.str());
}

} // namespace damctl
