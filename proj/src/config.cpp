#include "l1rates/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace l1rates {

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n\"");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n\"");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& raw) {
    const std::string s = trim(raw);
    T value{};
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || s.empty())
        throw ConfigError("key '" + key + "': cannot parse '" + s + "' as a number");
    return value;
}

bool parse_bool(const std::string& key, const std::string& raw) {
    const std::string s = trim(raw);
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw ConfigError("key '" + key + "': expected true or false, got '" + s + "'");
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& raw) {
    std::vector<T> out;
    for (const auto& item : split(raw, ',')) out.push_back(parse_number<T>(key, item));
    return out;
}

std::vector<std::pair<Index, double>> parse_support(const std::string& key, const std::string& raw) {
    std::vector<std::pair<Index, double>> out;
    for (const auto& item : split(raw, ';')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw ConfigError("key '" + key + "': expected 'index:value' entries, got '" + item + "'");
        out.emplace_back(parse_number<Index>(key, item.substr(0, colon)),
                         parse_number<double>(key, item.substr(colon + 1)));
    }
    return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"problem.N", [](auto& c, auto& k, auto& v) { c.problem.N = parse_number<Index>(k, v); }},
        {"problem.delta", [](auto& c, auto& k, auto& v) { c.problem.delta = parse_number<double>(k, v); }},
        {"problem.seed", [](auto& c, auto& k, auto& v) { c.problem.seed = parse_number<std::uint64_t>(k, v); }},
        {"problem.sparse_support", [](auto& c, auto& k, auto& v) { c.problem.sparse_support = parse_support(k, v); }},
        {"problem.sigma_model.nu_hat",
         [](auto& c, auto& k, auto& v) { c.problem.sigma_model.value().nu_hat = parse_number<double>(k, v); }},
        {"problem.sigma_model.K",
         [](auto& c, auto& k, auto& v) { c.problem.sigma_model.value().K = parse_number<double>(k, v); }},
        {"problem.tail_model.mu_hat",
         [](auto& c, auto& k, auto& v) { c.problem.tail_model.value().mu_hat = parse_number<double>(k, v); }},
        {"problem.tail_model.K1",
         [](auto& c, auto& k, auto& v) { c.problem.tail_model.value().K1 = parse_number<double>(k, v); }},
        {"problem.tail_model.signs", [](auto& c, auto& k, auto& v) { c.problem.signs = parse_list<int>(k, v); }},
        {"sweep.delta_min", [](auto& c, auto& k, auto& v) { c.sweep.delta_min = parse_number<double>(k, v); }},
        {"sweep.delta_max", [](auto& c, auto& k, auto& v) { c.sweep.delta_max = parse_number<double>(k, v); }},
        {"sweep.num_points", [](auto& c, auto& k, auto& v) { c.sweep.num_points = parse_number<int>(k, v); }},
        {"sweep.seeds", [](auto& c, auto& k, auto& v) { c.sweep.seeds = parse_list<std::uint64_t>(k, v); }},
        {"param_choice.tau1", [](auto& c, auto& k, auto& v) { c.param_choice.tau1 = parse_number<double>(k, v); }},
        {"param_choice.tau2", [](auto& c, auto& k, auto& v) { c.param_choice.tau2 = parse_number<double>(k, v); }},
        {"param_choice.tau", [](auto& c, auto& k, auto& v) { c.param_choice.tau = parse_number<double>(k, v); }},
        {"param_choice.zeta", [](auto& c, auto& k, auto& v) { c.param_choice.zeta = parse_number<double>(k, v); }},
        {"param_choice.alpha0", [](auto& c, auto& k, auto& v) { c.param_choice.alpha0 = parse_number<double>(k, v); }},
        {"param_choice.max_bisections",
         [](auto& c, auto& k, auto& v) { c.param_choice.max_bisections = parse_number<int>(k, v); }},
        {"outputs.dir", [](auto& c, auto&, auto& v) { c.outputs.dir = trim(v); }},
        {"outputs.emit_phi_grid", [](auto& c, auto& k, auto& v) { c.outputs.emit_phi_grid = parse_bool(k, v); }},
        {"outputs.R_grid", [](auto& c, auto& k, auto& v) { c.outputs.R_grid = parse_list<double>(k, v); }},
        {"outputs.dist_N", [](auto& c, auto& k, auto& v) { c.outputs.dist_N = parse_list<Index>(k, v); }},
        {"phi_grid.t_min", [](auto& c, auto& k, auto& v) { c.phi_grid.t_min = parse_number<double>(k, v); }},
        {"phi_grid.t_max", [](auto& c, auto& k, auto& v) { c.phi_grid.t_max = parse_number<double>(k, v); }},
        {"phi_grid.num_points", [](auto& c, auto& k, auto& v) { c.phi_grid.num_points = parse_number<int>(k, v); }},
    };
    return table;
}

const std::vector<std::string> kSections = {"problem",      "problem.sigma_model", "problem.tail_model", "sweep",
                                            "param_choice", "outputs",             "phi_grid"};

}  // namespace

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(source + ":" + std::to_string(e.line()) + ": " + e.message());
    }

    ExperimentConfig config;
    for (const auto& [section, body] : tree) {
        if (std::find(kSections.begin(), kSections.end(), section) == kSections.end())
            throw ConfigError(source + ": unknown section or top-level key '" + section + "'");
        if (section == "problem.sigma_model") config.problem.sigma_model.emplace();
        if (section == "problem.tail_model") config.problem.tail_model.emplace();
    }
    for (const auto& [section, body] : tree) {
        for (const auto& [name, value] : body) {
            const std::string key = section + "." + name;
            const auto it = setters().find(key);
            if (it == setters().end()) throw ConfigError(source + ": unknown key '" + key + "'");
            try {
                it->second(config, key, value.data());
            } catch (const ConfigError& e) {
                throw ConfigError(source + ": " + e.what());
            }
        }
    }
    try {
        config.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(source + ": " + e.what());
    }
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, path);
}

void ExperimentConfig::validate() const {
    const auto& p = problem;
    if (p.N < 1) throw ConfigError("problem.N must be positive");
    if (!p.sigma_model) throw ConfigError("section [problem.sigma_model] is required");
    if (!(p.sigma_model->nu_hat > 0.0) || !(p.sigma_model->K > 0.0))
        throw ConfigError("problem.sigma_model needs nu_hat > 0 and K > 0");
    if (p.tail_model.has_value() == !p.sparse_support.empty())
        throw ConfigError("exactly one of [problem.tail_model] or problem.sparse_support must be given");
    if (p.tail_model && (!(p.tail_model->mu_hat > 1.0) || !(p.tail_model->K1 > 0.0)))
        throw ConfigError("problem.tail_model needs mu_hat > 1 and K1 > 0");
    for (int s : p.signs)
        if (s != 1 && s != -1) throw ConfigError("problem.tail_model.signs entries must be 1 or -1");
    for (const auto& [index, value] : p.sparse_support)
        if (index < 1 || index > p.N)
            throw ConfigError("problem.sparse_support index " + std::to_string(index) + " exceeds N = " +
                              std::to_string(p.N));
    if (!(p.delta >= 0.0)) throw ConfigError("problem.delta must be >= 0");

    if (!(sweep.delta_min > 0.0) || !(sweep.delta_min < sweep.delta_max))
        throw ConfigError("sweep needs 0 < delta_min < delta_max");
    if (sweep.num_points < 2) throw ConfigError("sweep.num_points must be >= 2");
    if (sweep.seeds.empty()) throw ConfigError("sweep.seeds must not be empty");

    try {
        param_choice.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    for (std::size_t i = 0; i < outputs.R_grid.size(); ++i)
        if (!(outputs.R_grid[i] > 0.0) || (i > 0 && !(outputs.R_grid[i] > outputs.R_grid[i - 1])))
            throw ConfigError("outputs.R_grid must be positive and ascending");
    for (Index n : outputs.dist_N)
        if (n < 1) throw ConfigError("outputs.dist_N entries must be positive");

    if (!(phi_grid.t_min > 0.0) || !(phi_grid.t_min < phi_grid.t_max))
        throw ConfigError("phi_grid needs 0 < t_min < t_max");
    if (phi_grid.num_points < 2) throw ConfigError("phi_grid.num_points must be >= 2");
}

ProblemFamily build_family(const ProblemConfig& problem) { return build_family(problem, problem.N); }

ProblemFamily build_family(const ProblemConfig& problem, Index N) {
    if (!problem.sigma_model) throw ConfigError("problem has no sigma model");
    auto op = DiagonalOperator::power_law(N, *problem.sigma_model);
    if (problem.tail_model) return {std::move(op), DecaySequence::power_law(N, *problem.tail_model, problem.signs)};
    return {std::move(op), DecaySequence::sparse(N, problem.sparse_support)};
}

}  // namespace l1rates
