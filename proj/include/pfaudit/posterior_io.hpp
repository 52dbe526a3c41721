#pragma once

#include <string>
#include <vector>

#include "pfaudit/vi.hpp"

namespace pfaudit {

// Plain-text posterior artifact: everything needed to reproduce an
// assessment without refitting.
struct PosteriorArtifact {
    std::string arm;   // "y0" or "y1" (informational)
    std::string input; // path of the data the fit ran on
    std::vector<std::string> feature_names;
    VariationalPosterior posterior;
    FitConfig fit_config;
    double final_elbo = 0.0;
    std::vector<std::string> warnings;
};

std::string posterior_to_text(const PosteriorArtifact& artifact);
PosteriorArtifact posterior_from_text(const std::string& text,
                                      const std::string& origin = "<memory>");

void save_posterior(const std::string& path, const PosteriorArtifact& artifact);
PosteriorArtifact load_posterior(const std::string& path);

} // namespace pfaudit
