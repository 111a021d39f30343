#ifndef ELLSPIN_RESULT_IO_HPP
#define ELLSPIN_RESULT_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "ellspin/bethe.hpp"
#include "ellspin/chain.hpp"

namespace ellspin {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

struct RunConfig {
    std::string command;  // spectrum | bethe | verify | scan
    int N = 6;
    int M = 1;
    double alpha = 1.0;
    double J = 1.0;
    bool verify = false;
    std::string l_range = "default";  // "default" or "custom:a,b,c"
    double tol = 1e-10;
    double match_tol = 1e-6;
    int continuation_steps = 12;
    std::vector<double> alpha_grid;
    std::string out_path;
    bool timings = false;
    bool inject_perturbation = false;  // verify-only negative control

    // Throws ConfigError on anything outside the supported envelope.
    void validate() const;
    std::vector<int> parsed_l_range() const;
    ModelParams model() const { return ModelParams{N, alpha, J}; }
};

json to_json(const RunConfig& c);
json to_json(const SpectrumRecord& rec);
json to_json(const BetheRoots& roots);
json to_json(const MatchReport& rep);

// Single-document persistence: deterministic text, atomic replace.
void write_document_atomic(const json& doc, const std::string& path);
json read_document(const std::string& path);
std::string dump_document(const json& doc);

}  // namespace ellspin

#endif
