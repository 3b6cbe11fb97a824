#pragma once

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pacflab/common.hpp"
#include "pacflab/model.hpp"

namespace pacflab {

/// Resolved model source for the command-line front end. Exactly one source
/// is active, recorded by `kind`; `source` echoes how it was specified so the
/// run manifest can reproduce the configuration verbatim.
struct ModelInput {
    enum class Kind { farima, power_law, white_noise, autocov_csv };
    Kind kind = Kind::farima;
    FarimaSpec spec;             // kind == farima (white_noise keeps the default spec)
    double d = 0.0;              // kind == power_law: gamma_n = (1+n)^{-(1-2d)}
    std::vector<double> gamma;   // kind == autocov_csv
    std::string source;          // manifest echo

    bool is_farima() const { return kind == Kind::farima || kind == Kind::white_noise; }
};

namespace detail {

inline FarimaSpec spec_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw config_error("model JSON must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k != "d" && k != "phi" && k != "theta")
            throw config_error("unknown key in model JSON: \"" + k +
                               "\" (expected d, phi, theta)");
    }
    double d = 0.0;
    std::vector<double> phi{1.0}, theta{1.0};
    try {
        if (j.contains("d")) d = j.at("d").get<double>();
        if (j.contains("phi")) phi = j.at("phi").get<std::vector<double>>();
        if (j.contains("theta")) theta = j.at("theta").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("model JSON has a wrongly-typed field: ") + e.what());
    }
    return FarimaSpec(d, std::move(phi), std::move(theta));  // throws model_error if invalid
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw config_error("cannot open model file: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

/// Parses an autocovariance CSV with header "n,gamma" and contiguous lags
/// starting at 0.
inline std::vector<double> parse_autocov_csv(const std::string& text, const std::string& where) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw config_error(where + ": empty CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    {
        std::string squashed;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) squashed += c;
        if (squashed != "n,gamma")
            throw config_error(where + ": expected header \"n,gamma\", got \"" + line + "\"");
    }
    std::vector<double> gamma;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw config_error(where + ": line " + std::to_string(lineno) + " has no comma");
        std::size_t n = 0;
        double g = 0.0;
        try {
            std::size_t used = 0;
            n = std::stoul(line.substr(0, comma), &used);
            g = std::stod(line.substr(comma + 1));
        } catch (const std::exception&) {
            throw config_error(where + ": line " + std::to_string(lineno) +
                               " is not \"<n>,<gamma>\": " + line);
        }
        if (n != gamma.size())
            throw config_error(where + ": lags must be contiguous from 0; line " +
                               std::to_string(lineno) + " has n=" + std::to_string(n) +
                               ", expected " + std::to_string(gamma.size()));
        gamma.push_back(g);
    }
    if (gamma.empty()) throw config_error(where + ": no data rows");
    if (!(gamma[0] > 0.0)) throw model_error(where + ": gamma_0 must be positive");
    for (std::size_t n = 1; n < gamma.size(); ++n)
        if (std::abs(gamma[n]) > gamma[0])
            throw model_error(where + ": |gamma_" + std::to_string(n) +
                              "| exceeds gamma_0 (not an autocovariance)");
    return gamma;
}

inline bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace detail

/// Resolves the --model argument plus the scalar/vector parameter flags into
/// a ModelInput. Accepted forms for `model_arg`:
///   - inline JSON:        '{"d":0.3,"phi":[1,-0.5],"theta":[1]}'
///   - builtin name:       builtin:farima | builtin:power_law | builtin:white_noise
///   - file path:          *.json (model spec) or *.csv (autocovariance n,gamma)
///   - empty string:       model built from --d/--phi/--theta alone
/// `d_set` reports whether --d was passed (so builtin:power_law can insist on it).
inline ModelInput resolve_model(const std::string& model_arg, bool d_set, double d_flag,
                                const std::vector<double>& phi_flag,
                                const std::vector<double>& theta_flag) {
    ModelInput mi;
    const bool have_param_flags = d_set || !phi_flag.empty() || !theta_flag.empty();

    auto make_farima = [&](double d, std::vector<double> phi, std::vector<double> theta,
                           const std::string& echo) {
        mi.kind = ModelInput::Kind::farima;
        mi.spec = FarimaSpec(d, std::move(phi), std::move(theta));
        mi.source = echo;
    };

    if (model_arg.empty()) {
        if (!have_param_flags)
            throw config_error("no model specified: pass --model or --d/--phi/--theta");
        make_farima(d_flag, phi_flag.empty() ? std::vector<double>{1.0} : phi_flag,
                    theta_flag.empty() ? std::vector<double>{1.0} : theta_flag, "flags");
        return mi;
    }

    if (model_arg.rfind("builtin:", 0) == 0) {
        const std::string name = model_arg.substr(8);
        if (name == "farima") {
            make_farima(d_flag, phi_flag.empty() ? std::vector<double>{1.0} : phi_flag,
                        theta_flag.empty() ? std::vector<double>{1.0} : theta_flag, model_arg);
        } else if (name == "white_noise") {
            if (have_param_flags)
                throw config_error("builtin:white_noise takes no --d/--phi/--theta");
            mi.kind = ModelInput::Kind::white_noise;
            mi.spec = FarimaSpec(0.0, {1.0}, {1.0});
            mi.source = model_arg;
        } else if (name == "power_law") {
            if (!d_set) throw config_error("builtin:power_law requires --d");
            if (!phi_flag.empty() || !theta_flag.empty())
                throw config_error("builtin:power_law takes only --d");
            if (!(d_flag < 0.5))
                throw model_error("builtin:power_law requires d < 1/2 (got " +
                                  std::to_string(d_flag) + ")");
            mi.kind = ModelInput::Kind::power_law;
            mi.d = d_flag;
            mi.source = model_arg;
        } else {
            throw config_error("unknown builtin model \"" + name +
                               "\" (known: farima, power_law, white_noise)");
        }
        return mi;
    }

    // Inline JSON vs file path.
    std::string text;
    std::string where;
    const auto first = model_arg.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && model_arg[first] == '{') {
        text = model_arg;
        where = "--model";
    } else if (detail::ends_with(model_arg, ".csv")) {
        if (have_param_flags)
            throw config_error("an autocovariance CSV model takes no --d/--phi/--theta");
        mi.kind = ModelInput::Kind::autocov_csv;
        mi.gamma = detail::parse_autocov_csv(detail::read_text_file(model_arg), model_arg);
        mi.source = model_arg;
        return mi;
    } else if (detail::ends_with(model_arg, ".json")) {
        text = detail::read_text_file(model_arg);
        where = model_arg;
    } else {
        throw config_error("--model must be inline JSON, builtin:<name>, a .json file, "
                           "or a .csv autocovariance file; got \"" + model_arg + "\"");
    }

    if (have_param_flags)
        throw config_error("pass the model either as JSON or via --d/--phi/--theta, not both");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw config_error(where + ": JSON parse error: " + e.what());
    }
    mi.kind = ModelInput::Kind::farima;
    mi.spec = detail::spec_from_json(j);
    mi.source = model_arg;
    return mi;
}

/// Manifest echo of a resolved model.
inline nlohmann::json model_to_json(const ModelInput& mi) {
    nlohmann::json j;
    switch (mi.kind) {
        case ModelInput::Kind::farima:
        case ModelInput::Kind::white_noise:
            j["kind"] = (mi.kind == ModelInput::Kind::white_noise) ? "white_noise" : "farima";
            j["d"] = mi.spec.d;
            j["phi"] = mi.spec.phi;
            j["theta"] = mi.spec.theta;
            break;
        case ModelInput::Kind::power_law:
            j["kind"] = "power_law";
            j["d"] = mi.d;
            break;
        case ModelInput::Kind::autocov_csv:
            j["kind"] = "autocov_csv";
            j["path"] = mi.source;
            j["rows"] = mi.gamma.size();
            break;
    }
    j["source"] = mi.source;
    return j;
}

}  // namespace pacflab
