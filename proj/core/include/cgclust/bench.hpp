#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cgclust/report.hpp"

namespace cgclust {

/// fig2, fig4, fig6, fig7, uci.
const std::vector<std::string>& benchmark_names();

/// Runs one experiment. `overrides` is a JSON object whose keys replace the
/// experiment's defaults; every parameter actually used is echoed in the
/// report's config. Repetitions use seeds derived from (seed, setting,
/// repetition), so reports are reproducible and independent of thread count.
///
/// Parameters (defaults):
///   fig2: n_values [30,60,125,250,500,1000,2000], repetitions 50, k 3,
///         width_a 1, gap 0.5, width_b 2
///   fig4: n_values [30,90], repetitions 50, k 1, width_a 1, gap 0.5, width_b 2
///   fig6: n_values [128,256,512,1024,2048], repetitions 20, radii 200,
///         r_a 1.1, r_b 1.4, r_c 3.5, k_cvr 1, k_mi 3
///   fig7: r_a_values [0.5,0.8,...,2.6], n 2048, repetitions 20, radii 200,
///         r_c 3.5, gap 0.3, k_cvr 1, k_mi 3
///   uci:  data_dir "data", datasets ["iris","wine","glass"],
///         clusters {"iris":3,"wine":3,"glass":6}, label_column "class",
///         scaling "unit-range", jitter 1e-10, repetitions 1, plus the
///         clustering parameters k_max, beta, candidates, rank, k
///
/// Throws std::invalid_argument for an unknown experiment or parameter and
/// IoError for a missing dataset file.
ExperimentReport run_benchmark(const std::string& name,
                               const nlohmann::json& overrides = nlohmann::json::object(),
                               std::uint64_t seed = 0);

}  // namespace cgclust
