#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace mfou::cli {

struct Check {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    std::string relation;  // how value is compared to threshold
    bool passed = false;
};

struct SuiteReport {
    std::string suite;
    std::vector<Check> checks;
    nlohmann::json extra = nlohmann::json::object();
    bool passed() const;
    nlohmann::json to_json() const;
};

struct SuiteOptions {
    double alpha = 2.0;
    double hurst = 0.8;
    std::size_t reps = 500;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string g_csv;  // optional export of the Nystrom grid (innovation suite)
};

SuiteReport run_lemmas_suite(const SuiteOptions& opt);
SuiteReport run_innovation_suite(const SuiteOptions& opt);
SuiteReport run_fisher_suite(const SuiteOptions& opt);

}  // namespace mfou::cli
