#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mbump/model.hpp"

namespace mbump {

/// Flat run configuration.  Text form is one `key = value` per line, `#`
/// starts a comment, lists are comma separated.
struct RunConfig {
    ModelParams params;
    bool beta_auto = true;  ///< beta = f0/2, resolved per run once gamma0 is known

    double h = 0.0;  ///< grid spacing, 0 = 0.125 for N = 2 and 0.25 for N = 3
    double L = 0.0;  ///< grid half width, 0 = automatic
    double tol = 1e-8;
    int max_iter = 50;
    double safety = 0.9;

    int n_coarse = 11;
    double tol_R = 2e-3;

    double R = 0.0;  ///< corrector radius, 0 = middle of S_k
    bool check_beta0 = true;
    bool dump_fields = false;

    std::vector<int> k_list{12, 16, 24};
    std::vector<double> etas{0.5, 1.0, 2.0};
    int samples = 1000;
    std::vector<double> lemma_mu_radii{5.0, 10.0, 20.0, 40.0};
    std::vector<double> cross_radii{2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0};

    double dr = 0.01;
    bool sech_oracle = false;

    std::uint64_t seed = 20240601;

    double spacing() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Every key with its resolved value, for the run record.
void to_json(nlohmann::json& j, const RunConfig& c);

}  // namespace mbump
