#include "pfaudit/posterior_io.hpp"

#include <charconv>
#include <map>
#include <sstream>

#include "pfaudit/csv.hpp"

namespace pfaudit {

namespace {

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ',';
        out += parts[i];
    }
    return out;
}

std::string join_doubles(const Eigen::VectorXd& v) {
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_double(v(i));
    }
    return out;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string field;
    for (char c : text) {
        if (c == ',') {
            out.push_back(field);
            field.clear();
        } else {
            field += c;
        }
    }
    if (!text.empty()) out.push_back(field);
    return out;
}

double parse_double(const std::string& text, const std::string& origin, const std::string& key) {
    double value = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw ValidationError(origin + ": cannot parse " + key + " value '" + text + "'");
    return value;
}

Eigen::VectorXd parse_vector(const std::string& text, const std::string& origin,
                             const std::string& key) {
    const auto parts = split_list(text);
    Eigen::VectorXd v(static_cast<Eigen::Index>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = parse_double(parts[i], origin, key);
    return v;
}

} // namespace

std::string posterior_to_text(const PosteriorArtifact& artifact) {
    std::ostringstream out;
    out << "# pfaudit posterior artifact v1\n";
    for (const auto& w : artifact.warnings) out << "# warning: " << w << "\n";
    out << "model: bayes_logistic\n"
        << "arm: " << artifact.arm << "\n"
        << "input: " << artifact.input << "\n"
        << "p: " << artifact.posterior.dim() << "\n"
        << "features: " << join(artifact.feature_names) << "\n"
        << "prior_std: " << format_double(artifact.fit_config.prior_std) << "\n"
        << "learning_rate: " << format_double(artifact.fit_config.learning_rate) << "\n"
        << "steps: " << artifact.fit_config.steps << "\n"
        << "mc_samples: " << artifact.fit_config.mc_samples << "\n"
        << "seed: " << artifact.fit_config.seed << "\n"
        << "final_elbo: " << format_double(artifact.final_elbo) << "\n"
        << "mu: " << join_doubles(artifact.posterior.mu) << "\n"
        << "log_sigma: " << join_doubles(artifact.posterior.log_sigma) << "\n";
    return out.str();
}

PosteriorArtifact posterior_from_text(const std::string& text, const std::string& origin) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    PosteriorArtifact artifact;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.rfind("# warning: ", 0) == 0) {
            artifact.warnings.push_back(line.substr(11));
            continue;
        }
        if (line[0] == '#') continue;
        const auto colon = line.find(": ");
        if (colon == std::string::npos)
            throw ValidationError(origin + ": malformed line '" + line + "'");
        kv[line.substr(0, colon)] = line.substr(colon + 2);
    }

    auto require = [&](const std::string& key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) throw ValidationError(origin + ": missing key '" + key + "'");
        return it->second;
    };

    if (require("model") != "bayes_logistic")
        throw ValidationError(origin + ": unknown model '" + kv["model"] + "'");
    artifact.arm = require("arm");
    if (auto it = kv.find("input"); it != kv.end()) artifact.input = it->second;
    artifact.feature_names = split_list(require("features"));
    artifact.posterior.mu = parse_vector(require("mu"), origin, "mu");
    artifact.posterior.log_sigma = parse_vector(require("log_sigma"), origin, "log_sigma");
    artifact.fit_config.prior_std = parse_double(require("prior_std"), origin, "prior_std");
    artifact.fit_config.learning_rate =
        parse_double(require("learning_rate"), origin, "learning_rate");
    artifact.fit_config.steps =
        static_cast<std::size_t>(parse_double(require("steps"), origin, "steps"));
    artifact.fit_config.mc_samples =
        static_cast<std::size_t>(parse_double(require("mc_samples"), origin, "mc_samples"));
    artifact.fit_config.seed = std::stoull(require("seed"));
    artifact.final_elbo = parse_double(require("final_elbo"), origin, "final_elbo");

    const auto p = static_cast<std::size_t>(parse_double(require("p"), origin, "p"));
    if (static_cast<std::size_t>(artifact.posterior.mu.size()) != p ||
        static_cast<std::size_t>(artifact.posterior.log_sigma.size()) != p ||
        artifact.feature_names.size() != p)
        throw ValidationError(origin + ": inconsistent artifact: p=" + std::to_string(p) +
                              " but mu has " + std::to_string(artifact.posterior.mu.size()) +
                              ", log_sigma " + std::to_string(artifact.posterior.log_sigma.size()) +
                              ", features " + std::to_string(artifact.feature_names.size()));
    if (!artifact.posterior.mu.allFinite() || !artifact.posterior.log_sigma.allFinite())
        throw ValidationError(origin + ": non-finite posterior parameters");
    return artifact;
}

void save_posterior(const std::string& path, const PosteriorArtifact& artifact) {
    write_text_file(path, posterior_to_text(artifact));
}

PosteriorArtifact load_posterior(const std::string& path) {
    return posterior_from_text(read_text_file(path), path);
}

} // namespace pfaudit
