#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cluspath/core.hpp"

namespace cluspath::cli {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int { kSuccess = 0, kDataError = 1, kUsageError = 2 };

// Hyperparameters as given on the command line; unset fields fall back to the
// preset, then to the library defaults.
struct ParamFlags {
    std::optional<std::size_t> k;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<double> delta;
    std::optional<std::array<double, 3>> lambda;
    std::optional<std::string> preset;
};

struct DataFlags {
    std::filesystem::path input;
    bool normalize = true;
    bool remove_entity_mean = true;
};

struct FitOptions {
    DataFlags data;
    ParamFlags params;
    std::uint64_t seed = 0;
    std::filesystem::path out = "cluspath_out";
    std::size_t max_iterations = 200;
};

struct TuneOptions {
    DataFlags data;
    std::size_t k = 0;
    std::size_t population = 100;
    std::size_t generations = 100;
    std::uint64_t seed = 0;
    std::filesystem::path out = "cluspath_tune";
};

struct EvalOptions {
    DataFlags data;
    std::optional<std::filesystem::path> model;
    ParamFlags params;
    std::size_t seeds = 0;
    std::uint64_t seed = 0;
    std::optional<std::filesystem::path> out;
};

struct GraphOptions {
    DataFlags data;
    std::filesystem::path model;
    std::filesystem::path out = "cluspath_graph";
};

struct SynthOptions {
    std::size_t entities = 12;
    std::size_t phases = 5;
    std::size_t timestamps = 12;
    std::size_t dim = 2;
    double separation = 1.0;
    double noise = 0.1;
    std::size_t jitter = 1;
    std::uint64_t seed = 0;
    std::filesystem::path out = "cluspath_synth";
};

// Resolves presets (kmeans, tdkm, ckm, tdck) and explicit flags. Throws
// DomainError for an unknown preset, a missing k or out-of-range values.
HyperParams resolve_params(const ParamFlags& flags);

// Worker count from CLUSPATH_THREADS, capped by the hardware.
std::size_t thread_budget();

// Hex SHA-256 of the canonical JSON form of the dataset.
std::string dataset_fingerprint(const Dataset& ds);

Dataset load_dataset(const DataFlags& flags);

int cmd_fit(const FitOptions& opt, const std::vector<std::string>& argv, std::ostream& out);
int cmd_tune(const TuneOptions& opt, const std::vector<std::string>& argv, std::ostream& out);
int cmd_eval(const EvalOptions& opt, const std::vector<std::string>& argv, std::ostream& out);
int cmd_graph(const GraphOptions& opt, const std::vector<std::string>& argv, std::ostream& out);
int cmd_synth(const SynthOptions& opt, const std::vector<std::string>& argv, std::ostream& out);

// Parses argv (program name first) and dispatches. Returns an ExitCode.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace cluspath::cli
