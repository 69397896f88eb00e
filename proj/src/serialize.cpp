#include "cluspath/serialize.hpp"

#include <sstream>

#include "cluspath/error.hpp"
#include "cluspath/io.hpp"

namespace cluspath::serialize {
namespace {

template <typename T>
T require(const json& doc, const char* key) {
    if (!doc.is_object() || !doc.contains(key)) {
        throw DataError(std::string("JSON document lacks field '") + key + "'");
    }
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception& e) {
        throw DataError(std::string("JSON field '") + key + "': " + e.what());
    }
}

}  // namespace

json dataset_to_json(const Dataset& ds) {
    json observations = json::array();
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto d = ds.descriptor(i);
        observations.push_back({{"entity", ds.entity_id(ds.entity_of(i))},
                                {"time", ds.time(i)},
                                {"descriptor", std::vector<double>(d.begin(), d.end())}});
    }
    return {{"dim", ds.dim()}, {"entities", ds.entity_ids()}, {"observations", observations}};
}

Dataset dataset_from_json(const json& doc) {
    const auto dim = require<std::size_t>(doc, "dim");
    const auto raw = require<json>(doc, "observations");
    if (!raw.is_array()) {
        throw DataError("'observations' must be an array");
    }
    std::vector<Observation> observations;
    observations.reserve(raw.size());
    for (const auto& item : raw) {
        Observation obs;
        obs.entity = require<std::string>(item, "entity");
        obs.time = require<double>(item, "time");
        obs.descriptor = require<std::vector<double>>(item, "descriptor");
        if (obs.descriptor.size() != dim) {
            throw DataError("observation descriptor length differs from 'dim'");
        }
        observations.push_back(std::move(obs));
    }
    return Dataset::from_observations(observations);
}

json hyperparams_to_json(const HyperParams& hp) {
    return {{"alpha", hp.alpha},     {"beta", hp.beta},       {"delta", hp.delta},
            {"lambda1", hp.lambda1}, {"lambda2", hp.lambda2}, {"lambda3", hp.lambda3},
            {"k", hp.k}};
}

HyperParams hyperparams_from_json(const json& doc) {
    HyperParams hp;
    hp.alpha = require<double>(doc, "alpha");
    hp.beta = require<double>(doc, "beta");
    hp.delta = require<double>(doc, "delta");
    hp.lambda1 = require<double>(doc, "lambda1");
    hp.lambda2 = require<double>(doc, "lambda2");
    hp.lambda3 = require<double>(doc, "lambda3");
    hp.k = require<std::size_t>(doc, "k");
    return hp;
}

json model_to_json(const ClusPathModel& model) {
    json prototypes = json::array();
    for (const auto& p : model.prototypes) {
        prototypes.push_back({{"time", p.mu_t}, {"descriptor", p.mu_d}});
    }
    json adjacency = json::array();
    for (std::size_t p = 0; p < model.adjacency.k(); ++p) {
        std::vector<double> row;
        for (std::size_t q = 0; q < model.adjacency.k(); ++q) {
            row.push_back(model.adjacency(p, q));
        }
        adjacency.push_back(row);
    }
    return {{"hyperparameters", hyperparams_to_json(model.params)},
            {"seed", model.seed},
            {"prototypes", prototypes},
            {"assignment", model.assignment.cluster_of},
            {"adjacency", adjacency},
            {"objective_trace", model.objective_trace},
            {"iterations", model.iterations},
            {"converged", model.converged}};
}

ClusPathModel model_from_json(const json& doc) {
    ClusPathModel model;
    model.params = hyperparams_from_json(require<json>(doc, "hyperparameters"));
    model.seed = require<std::uint64_t>(doc, "seed");
    for (const auto& p : require<json>(doc, "prototypes")) {
        model.prototypes.push_back(
            Prototype{require<double>(p, "time"), require<std::vector<double>>(p, "descriptor")});
    }
    const std::size_t k = model.params.k;
    if (model.prototypes.size() != k) {
        throw DataError("model has " + std::to_string(model.prototypes.size()) +
                        " prototypes but k = " + std::to_string(k));
    }
    model.assignment.k = k;
    model.assignment.cluster_of = require<std::vector<std::size_t>>(doc, "assignment");
    const auto rows = require<std::vector<std::vector<double>>>(doc, "adjacency");
    if (rows.size() != k) {
        throw DataError("model adjacency is not k x k");
    }
    model.adjacency = AdjacencyMatrix(k);
    for (std::size_t p = 0; p < k; ++p) {
        if (rows[p].size() != k) {
            throw DataError("model adjacency is not k x k");
        }
        for (std::size_t q = 0; q < k; ++q) {
            model.adjacency(p, q) = rows[p][q];
        }
    }
    model.objective_trace = require<std::vector<double>>(doc, "objective_trace");
    model.iterations = require<std::size_t>(doc, "iterations");
    model.converged = require<bool>(doc, "converged");
    try {
        model.assignment.validate(model.assignment.cluster_of.size());
    } catch (const DomainError& e) {
        throw DataError(e.what());
    }
    return model;
}

json measures_to_json(const MeasureVector& m) {
    return {{"mdvar", m.mdvar}, {"tvar", m.tvar}, {"shap", m.shap}, {"spass", m.spass}};
}

std::string measures_csv(const MeasureVector& m) {
    std::ostringstream out;
    out << "mdvar,tvar,shap,spass\n"
        << io::format_double(m.mdvar) << ',' << io::format_double(m.tvar) << ','
        << io::format_double(m.shap) << ',' << io::format_double(m.spass) << '\n';
    return out.str();
}

json transitions_to_json(const std::vector<TransitionRecord>& transitions) {
    json out = json::array();
    for (const auto& t : transitions) {
        out.push_back({{"entity", t.entity_id},
                       {"from", t.from_cluster},
                       {"to", t.to_cluster},
                       {"time", t.time}});
    }
    return out;
}

json paths_to_json(const Dataset& ds, const Assignment& asg) {
    json out = json::array();
    for (std::size_t e = 0; e < ds.entity_count(); ++e) {
        std::vector<std::size_t> path;
        for (std::size_t i : ds.series(e)) {
            if (path.empty() || path.back() != asg[i]) {
                path.push_back(asg[i]);
            }
        }
        out.push_back({{"entity", ds.entity_id(e)}, {"path", path}});
    }
    return out;
}

std::string front_csv(const std::vector<tuner::Individual>& individuals) {
    std::ostringstream out;
    for (const char* name : tuner::kGeneNames) {
        out << name << ',';
    }
    out << "mdvar,tvar,shap,spass,fitness\n";
    for (const auto& ind : individuals) {
        for (double g : ind.genome) {
            out << io::format_double(g) << ',';
        }
        const MeasureVector m = ind.measures.value_or(MeasureVector{});
        out << io::format_double(m.mdvar) << ',' << io::format_double(m.tvar) << ','
            << io::format_double(m.shap) << ',' << io::format_double(m.spass) << ','
            << ind.fitness.value_or(0) << '\n';
    }
    return out.str();
}

json history_to_json(const std::vector<tuner::GenerationStats>& history) {
    json out = json::array();
    for (const auto& g : history) {
        out.push_back({{"generation", g.generation},
                       {"front_size", g.front_size},
                       {"best_distance_to_ideal", g.best_distance},
                       {"evaluations", g.evaluations}});
    }
    return out;
}

}  // namespace cluspath::serialize
