#include "corrector/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "corrector/errors.hpp"

namespace corrector {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

struct ParseCursor {
    std::string source;
    int line = 0;

    [[noreturn]] void fail(const std::string& message) const {
        throw Error(Errc::ConfigError, source + ":" + std::to_string(line) + ": " + message);
    }
};

double parse_number(const ParseCursor& at, const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) at.fail("empty number");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE) {
        at.fail("cannot parse number '" + t + "'");
    }
    return v;
}

long parse_integer(const ParseCursor& at, const std::string& text) {
    const double v = parse_number(at, text);
    const long i = static_cast<long>(v);
    if (static_cast<double>(i) != v) at.fail("expected an integer, got '" + trim(text) + "'");
    return i;
}

bool parse_switch(const ParseCursor& at, const std::string& text) {
    const std::string t = lower(trim(text));
    if (t == "on" || t == "true" || t == "1") return true;
    if (t == "off" || t == "false" || t == "0") return false;
    at.fail("expected on/off, got '" + trim(text) + "'");
}

Eigen::VectorXd parse_vector(const ParseCursor& at, const std::string& text) {
    std::vector<double> entries;
    std::stringstream stream(text);
    std::string cell;
    while (std::getline(stream, cell, ',')) {
        entries.push_back(parse_number(at, cell));
    }
    if (entries.empty()) at.fail("empty vector");
    Eigen::VectorXd v(static_cast<Eigen::Index>(entries.size()));
    for (std::size_t i = 0; i < entries.size(); ++i) v(static_cast<Eigen::Index>(i)) = entries[i];
    return v;
}

Eigen::MatrixXd parse_matrix(const ParseCursor& at, const std::string& text) {
    std::vector<Eigen::VectorXd> rows;
    std::stringstream stream(text);
    std::string row;
    while (std::getline(stream, row, ';')) {
        rows.push_back(parse_vector(at, row));
    }
    if (rows.empty()) at.fail("empty matrix");
    const Eigen::Index cols = rows.front().size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) at.fail("matrix rows have unequal lengths");
        m.row(static_cast<Eigen::Index>(i)) = rows[i];
    }
    return m;
}

struct SeenKeys {
    bool marketSection = false;
    bool assets = false, mu = false, r = false, sigma = false, beta = false, p = false,
         lambda = false, epsilon = false;
    bool overrideSigma = false, overrideAlpha = false, overrideLambda = false;
};

void finalize(ExperimentConfig& config, const SeenKeys& seen, const std::string& source) {
    ParseCursor at{source, 0};
    if (seen.marketSection) {
        const char* missing = nullptr;
        if (!seen.assets) missing = "assets";
        else if (!seen.mu) missing = "mu";
        else if (!seen.r) missing = "r";
        else if (!seen.sigma) missing = "sigma";
        else if (!seen.beta) missing = "beta";
        else if (!seen.p) missing = "p";
        else if (!seen.lambda) missing = "lambda";
        else if (!seen.epsilon) missing = "epsilon";
        if (missing) at.fail(std::string("[market] is missing key '") + missing + "'");
        const int d = config.market.d;
        if (d < 1 || d > 3) at.fail("[market] assets must be 1, 2 or 3");
        if (config.market.mu.size() != d) at.fail("[market] mu length must equal assets");
        if (config.market.sigma.rows() != d || config.market.sigma.cols() != d)
            at.fail("[market] sigma must be assets x assets");
        if (config.market.lambda.rows() != d + 1 || config.market.lambda.cols() != d + 1)
            at.fail("[market] lambda must be (assets+1) x (assets+1)");
        config.hasMarket = true;
    }
    if (config.corrector.present) {
        const auto& ov = config.corrector;
        if (!seen.overrideSigma || !seen.overrideAlpha || !seen.overrideLambda)
            at.fail("[corrector] needs sigma_eff, alpha_bar and lambda");
        const Eigen::Index d = ov.sigmaEff.rows();
        if (d < 1 || d > 3 || ov.sigmaEff.cols() != d) at.fail("[corrector] sigma_eff must be square, dimension 1 to 3");
        if (ov.alphaBar.rows() != d || ov.alphaBar.cols() != d)
            at.fail("[corrector] alpha_bar must match sigma_eff");
        if (ov.lambda.rows() != d + 1 || ov.lambda.cols() != d + 1)
            at.fail("[corrector] lambda must be (dimension+1) square");
    }
    if (!config.hasMarket && !config.corrector.present) {
        throw Error(Errc::ConfigError,
                    source + ": config defines neither [market] nor [corrector]");
    }
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text, const std::string& sourceName) {
    ExperimentConfig config;
    config.name = sourceName;
    SeenKeys seen;
    ParseCursor at{sourceName, 0};
    std::string section;

    std::stringstream stream(text);
    std::string raw;
    while (std::getline(stream, raw)) {
        ++at.line;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') at.fail("unterminated section header");
            section = lower(trim(line.substr(1, line.size() - 2)));
            if (section != "market" && section != "corrector" && section != "solver" &&
                section != "run" && section != "validation" && section != "output") {
                at.fail("unknown section [" + section + "]");
            }
            if (section == "market") seen.marketSection = true;
            if (section == "corrector") config.corrector.present = true;
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) at.fail("expected key = value");
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) at.fail("empty key");
        if (value.empty()) at.fail("key '" + key + "' has no value");
        if (section.empty()) at.fail("key '" + key + "' appears before any section");

        if (section == "market") {
            if (key == "assets") {
                config.market.d = static_cast<int>(parse_integer(at, value));
                seen.assets = true;
            } else if (key == "mu") {
                config.market.mu = parse_vector(at, value);
                seen.mu = true;
            } else if (key == "r") {
                config.market.r = parse_number(at, value);
                seen.r = true;
            } else if (key == "sigma") {
                config.market.sigma = parse_matrix(at, value);
                seen.sigma = true;
            } else if (key == "beta") {
                config.market.beta = parse_number(at, value);
                seen.beta = true;
            } else if (key == "p") {
                config.market.p = parse_number(at, value);
                seen.p = true;
            } else if (key == "lambda") {
                config.market.lambda = parse_matrix(at, value);
                seen.lambda = true;
            } else if (key == "epsilon") {
                config.market.epsilon = parse_number(at, value);
                seen.epsilon = true;
            } else {
                at.fail("unknown key '" + key + "' in [market]");
            }
        } else if (section == "corrector") {
            if (key == "sigma_eff") {
                config.corrector.sigmaEff = parse_matrix(at, value);
                seen.overrideSigma = true;
            } else if (key == "alpha_bar") {
                config.corrector.alphaBar = parse_matrix(at, value);
                seen.overrideAlpha = true;
            } else if (key == "lambda") {
                config.corrector.lambda = parse_matrix(at, value);
                seen.overrideLambda = true;
            } else {
                at.fail("unknown key '" + key + "' in [corrector]");
            }
        } else if (section == "solver") {
            if (key == "radius") {
                if (lower(value) == "auto") {
                    config.solver.radius = 0.0;
                } else {
                    config.solver.radius = parse_number(at, value);
                    if (!(config.solver.radius > 0.0)) at.fail("radius must be positive or auto");
                }
            } else if (key == "n") {
                config.solver.n = static_cast<int>(parse_integer(at, value));
            } else if (key == "tol_a") {
                config.solver.tolA = parse_number(at, value);
            } else if (key == "tol_switch") {
                config.solver.tolSwitch = parse_number(at, value);
            } else if (key == "max_iters") {
                config.solver.maxIters = static_cast<int>(parse_integer(at, value));
            } else if (key == "backend") {
                const std::string b = lower(value);
                if (b == "auto") config.solver.backend = LinearBackend::Auto;
                else if (b == "direct") config.solver.backend = LinearBackend::Direct;
                else if (b == "iterative") config.solver.backend = LinearBackend::Iterative;
                else at.fail("backend must be auto, direct or iterative");
            } else if (key == "cost_convention") {
                const std::string c = lower(value);
                if (c == "sigma") config.solver.costTranspose = false;
                else if (c == "sigma-transpose") config.solver.costTranspose = true;
                else at.fail("cost_convention must be sigma or sigma-transpose");
            } else if (key == "min_radius") {
                config.solver.minRadius = parse_number(at, value);
            } else if (key == "margin") {
                config.solver.margin = parse_number(at, value);
            } else {
                at.fail("unknown key '" + key + "' in [solver]");
            }
        } else if (section == "run") {
            if (key == "mode") {
                const std::string m = lower(value);
                if (m == "policy-iteration") config.run.mode = RunMode::PolicyIteration;
                else if (m == "discounted") config.run.mode = RunMode::Discounted;
                else if (m == "both") config.run.mode = RunMode::Both;
                else at.fail("mode must be policy-iteration, discounted or both");
            } else if (key == "eta") {
                config.run.eta = parse_number(at, value);
                if (!(config.run.eta > 0.0)) at.fail("eta must be positive");
            } else {
                at.fail("unknown key '" + key + "' in [run]");
            }
        } else if (section == "validation") {
            if (key == "mc") {
                config.validation.mc = parse_switch(at, value);
            } else if (key == "mc_horizon") {
                config.validation.horizon = parse_number(at, value);
            } else if (key == "mc_dt") {
                config.validation.dt = parse_number(at, value);
            } else if (key == "mc_paths") {
                config.validation.paths = static_cast<int>(parse_integer(at, value));
            } else if (key == "seed") {
                const long s = parse_integer(at, value);
                if (s < 0) at.fail("seed must be nonnegative");
                config.validation.seed = static_cast<std::uint64_t>(s);
            } else {
                at.fail("unknown key '" + key + "' in [validation]");
            }
        } else if (section == "output") {
            if (key == "directory") {
                config.output.directory = value;
            } else if (key == "csv") {
                config.output.csv = parse_switch(at, value);
            } else if (key == "image") {
                config.output.image = parse_switch(at, value);
            } else if (key == "scale") {
                config.output.scale = static_cast<int>(parse_integer(at, value));
            } else {
                at.fail("unknown key '" + key + "' in [output]");
            }
        }
    }

    finalize(config, seen, sourceName);
    return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw Error(Errc::ConfigError, "cannot open config file " + path);
    }
    std::stringstream buffer;
    buffer << file.rdbuf();
    return parse_config_text(buffer.str(), path);
}

namespace {

// Shared frictionless backdrop for the built-in two-asset experiments: the
// drift is reverse-engineered so the optimal holding is exactly piBar in
// every asset, keeping the no-transaction maps centered at a common point.
MarketParams gallery_market(const Eigen::MatrixXd& sigma, const Eigen::MatrixXd& lambda) {
    MarketParams params;
    params.d = static_cast<int>(sigma.rows());
    params.r = 0.02;
    params.beta = 0.1;
    params.p = 0.5;
    params.epsilon = 0.1;
    params.sigma = sigma;
    params.lambda = lambda;
    const double piBar = 0.02;
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(params.d);
    params.mu = params.r * ones + (1.0 - params.p) * piBar * (sigma * sigma.transpose() * ones);
    return params;
}

Eigen::MatrixXd cash_only_costs(double cost1, double cost2) {
    Eigen::MatrixXd lambda(3, 3);
    lambda << 0.0, cost1, cost2, cost1, 0.0, kInf, cost2, kInf, 0.0;
    return lambda;
}

Eigen::MatrixXd volatility(double a11, double a12, double a21, double a22) {
    Eigen::MatrixXd sigma(2, 2);
    sigma << a11, a12, a21, a22;
    return sigma;
}

ExperimentConfig gallery_config(const std::string& name, const Eigen::MatrixXd& sigma,
                                const Eigen::MatrixXd& lambda) {
    ExperimentConfig config;
    config.name = name;
    config.hasMarket = true;
    config.market = gallery_market(sigma, lambda);
    config.solver.n = 201;
    config.output.directory = name;
    return config;
}

}  // namespace

const std::vector<std::pair<std::string, std::string>>& preset_descriptions() {
    static const std::vector<std::pair<std::string, std::string>> presets = {
        {"oracle-1d",
         "single asset, unit effective coefficients, symmetric cost 0.001; matches the "
         "closed-form scalar solution"},
        {"fig-uncorrelated",
         "two independent unit-volatility assets, cash transfers only at 0.001; rectangular "
         "no-transaction region"},
        {"fig-neg-correlation",
         "negatively correlated assets (off-diagonal volatility -0.25), cash transfers only; "
         "region sheared along the main diagonal"},
        {"fig-pos-correlation",
         "positively correlated assets (off-diagonal volatility 0.25), cash transfers only; "
         "region sheared along the anti-diagonal"},
        {"fig-higher-corr-neg",
         "asymmetric volatility rows (1, -0.25) and (-0.1, 1), cash transfers only"},
        {"fig-higher-corr-pos",
         "asymmetric volatility rows (1, 0.25) and (0.1, 1), cash transfers only"},
        {"fig-asymmetric",
         "cash cost 0.001 for asset 1 and 0.002 for asset 2; band widths differ per axis"},
        {"fig-all-transfers",
         "every transfer allowed at cost 0.001; direct asset swaps carve a non-convex region"},
        {"fig-all-transfers-asymmetric",
         "asset swaps at 0.001 with cash legs 0.001 and 0.002; all seven binding patterns "
         "appear"},
    };
    return presets;
}

ExperimentConfig preset_config(const std::string& name) {
    if (name == "oracle-1d") {
        ExperimentConfig config;
        config.name = name;
        config.corrector.present = true;
        config.corrector.sigmaEff = Eigen::MatrixXd::Identity(1, 1);
        config.corrector.alphaBar = Eigen::MatrixXd::Identity(1, 1);
        Eigen::MatrixXd lambda(2, 2);
        lambda << 0.0, 0.001, 0.001, 0.0;
        config.corrector.lambda = lambda;
        config.solver.n = 141;
        config.output.directory = name;
        return config;
    }
    if (name == "fig-uncorrelated") {
        return gallery_config(name, Eigen::MatrixXd::Identity(2, 2),
                              cash_only_costs(0.001, 0.001));
    }
    if (name == "fig-neg-correlation") {
        return gallery_config(name, volatility(1.0, -0.25, -0.25, 1.0),
                              cash_only_costs(0.001, 0.001));
    }
    if (name == "fig-pos-correlation") {
        return gallery_config(name, volatility(1.0, 0.25, 0.25, 1.0),
                              cash_only_costs(0.001, 0.001));
    }
    if (name == "fig-higher-corr-neg") {
        return gallery_config(name, volatility(1.0, -0.25, -0.1, 1.0),
                              cash_only_costs(0.001, 0.001));
    }
    if (name == "fig-higher-corr-pos") {
        return gallery_config(name, volatility(1.0, 0.25, 0.1, 1.0),
                              cash_only_costs(0.001, 0.001));
    }
    if (name == "fig-asymmetric") {
        return gallery_config(name, Eigen::MatrixXd::Identity(2, 2),
                              cash_only_costs(0.001, 0.002));
    }
    if (name == "fig-all-transfers") {
        Eigen::MatrixXd lambda(3, 3);
        lambda << 0.0, 0.001, 0.001, 0.001, 0.0, 0.001, 0.001, 0.001, 0.0;
        return gallery_config(name, Eigen::MatrixXd::Identity(2, 2), lambda);
    }
    if (name == "fig-all-transfers-asymmetric") {
        Eigen::MatrixXd lambda(3, 3);
        lambda << 0.0, 0.001, 0.002, 0.001, 0.0, 0.001, 0.002, 0.001, 0.0;
        return gallery_config(name, Eigen::MatrixXd::Identity(2, 2), lambda);
    }
    throw Error(Errc::ConfigError, "unknown preset '" + name + "'");
}

}  // namespace corrector
