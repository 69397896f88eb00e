#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cluspath/core.hpp"
#include "cluspath/graph.hpp"
#include "cluspath/measures.hpp"
#include "cluspath/tuner.hpp"

namespace cluspath::serialize {

using nlohmann::json;

// {"dim", "entities", "observations": [{"entity", "time", "descriptor"}]}
json dataset_to_json(const Dataset& ds);
// Throws DataError on a malformed document.
Dataset dataset_from_json(const json& doc);

json hyperparams_to_json(const HyperParams& hp);
HyperParams hyperparams_from_json(const json& doc);

// Prototypes, assignment (observation index -> cluster), dense adjacency,
// objective trace, hyperparameters and seed.
json model_to_json(const ClusPathModel& model);
ClusPathModel model_from_json(const json& doc);

json measures_to_json(const MeasureVector& m);
// Header plus one row: mdvar,tvar,shap,spass.
std::string measures_csv(const MeasureVector& m);

json transitions_to_json(const std::vector<TransitionRecord>& transitions);
// [{"entity", "path"}] with run-length-compressed cluster paths.
json paths_to_json(const Dataset& ds, const Assignment& asg);

// Columns: the six genes, the four measures, fitness.
std::string front_csv(const std::vector<tuner::Individual>& individuals);
json history_to_json(const std::vector<tuner::GenerationStats>& history);

}  // namespace cluspath::serialize
