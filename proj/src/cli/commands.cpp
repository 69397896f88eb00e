#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "cluspath/cli.hpp"
#include "cluspath/error.hpp"
#include "cluspath/graph.hpp"
#include "cluspath/io.hpp"
#include "cluspath/log.hpp"
#include "cluspath/measures.hpp"
#include "cluspath/serialize.hpp"
#include "cluspath/solver.hpp"
#include "cluspath/synth.hpp"
#include "cluspath/tuner.hpp"
#include "manifest.hpp"

namespace cluspath::cli {
namespace {

using nlohmann::json;

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

json data_flags_json(const DataFlags& flags) {
    return {{"input", flags.input.string()},
            {"normalize", flags.normalize},
            {"remove_entity_mean", flags.remove_entity_mean}};
}

// Model, transitions, paths, graph, measures and per-timestamp populations.
std::vector<std::string> write_model_artifacts(const std::filesystem::path& dir, const Dataset& ds,
                                               const ClusPathModel& model,
                                               const std::string& fingerprint) {
    std::vector<std::string> files;
    json model_doc = serialize::model_to_json(model);
    model_doc["dataset_fingerprint"] = fingerprint;
    files.push_back(write_text(dir, "model.json", dump(model_doc)));

    const auto transitions = extract_transitions(ds, model.assignment);
    files.push_back(
        write_text(dir, "transitions.json", dump(serialize::transitions_to_json(transitions))));
    files.push_back(
        write_text(dir, "paths.json", dump(serialize::paths_to_json(ds, model.assignment))));

    const EvolutionGraph graph = binarize(model.adjacency, model.params.k);
    files.push_back(write_text(
        dir, "graph.dot",
        export_dot(graph, model.prototypes, arc_entity_counts(transitions, model.params.k))));

    const MeasureVector m = evaluate(model, ds);
    files.push_back(write_text(dir, "measures.json", dump(serialize::measures_to_json(m))));
    files.push_back(write_text(dir, "measures.csv", serialize::measures_csv(m)));
    files.push_back(
        write_text(dir, "population.csv", cluster_population_csv(ds, model.assignment)));
    return files;
}

struct MeanStd {
    MeasureVector mean;
    MeasureVector stdev;
};

MeanStd summarize(const std::vector<MeasureVector>& runs) {
    std::array<double, 4> mean{};
    std::array<double, 4> var{};
    for (const auto& r : runs) {
        const auto a = r.as_array();
        for (std::size_t d = 0; d < 4; ++d) {
            mean[d] += a[d];
        }
    }
    for (double& m : mean) {
        m /= static_cast<double>(runs.size());
    }
    for (const auto& r : runs) {
        const auto a = r.as_array();
        for (std::size_t d = 0; d < 4; ++d) {
            var[d] += (a[d] - mean[d]) * (a[d] - mean[d]);
        }
    }
    const double denom = runs.size() > 1 ? static_cast<double>(runs.size() - 1) : 1.0;
    MeanStd out;
    out.mean = {mean[0], mean[1], mean[2], mean[3]};
    out.stdev = {std::sqrt(var[0] / denom), std::sqrt(var[1] / denom), std::sqrt(var[2] / denom),
                 std::sqrt(var[3] / denom)};
    return out;
}

}  // namespace

HyperParams resolve_params(const ParamFlags& flags) {
    HyperParams hp;
    if (flags.preset.has_value()) {
        const std::string& name = *flags.preset;
        hp.lambda1 = 1.0;
        hp.lambda2 = 0.0;
        hp.lambda3 = 0.0;
        if (name == "kmeans") {
            hp.alpha = 1.0;
            hp.beta = 0.0;
        } else if (name == "tdkm") {
            hp.alpha = 0.0;
            hp.beta = 0.0;
        } else if (name == "ckm") {
            hp.alpha = 1.0;
            hp.beta = 0.0005;
            hp.delta = 3.0;
        } else if (name == "tdck") {
            hp.alpha = 0.95;
            hp.beta = 0.0002;
            hp.delta = 3.0;
        } else {
            throw DomainError("unknown preset '" + name + "' (kmeans, tdkm, ckm, tdck)");
        }
    }
    if (!flags.k.has_value()) {
        throw DomainError("--k is required");
    }
    hp.k = *flags.k;
    if (flags.alpha) hp.alpha = *flags.alpha;
    if (flags.beta) hp.beta = *flags.beta;
    if (flags.delta) hp.delta = *flags.delta;
    if (flags.lambda) {
        hp.lambda1 = (*flags.lambda)[0];
        hp.lambda2 = (*flags.lambda)[1];
        hp.lambda3 = (*flags.lambda)[2];
    }
    hp.validate();
    return hp;
}

std::size_t thread_budget() {
    std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("CLUSPATH_THREADS"); env != nullptr && *env) {
        char* end = nullptr;
        const unsigned long cap = std::strtoul(env, &end, 10);
        if (end != env && cap > 0) {
            hw = std::min<std::size_t>(hw, cap);
        }
    }
    return hw;
}

std::string dataset_fingerprint(const Dataset& ds) {
    return sha256_hex(serialize::dataset_to_json(ds).dump());
}

Dataset load_dataset(const DataFlags& flags) {
    const Dataset raw = io::load_long_csv(flags.input);
    if (!flags.normalize && !flags.remove_entity_mean) {
        return raw;
    }
    return preprocess(raw, PreprocessOptions{flags.remove_entity_mean, flags.normalize});
}

int cmd_fit(const FitOptions& opt, const std::vector<std::string>& argv, std::ostream& out) {
    const HyperParams hp = resolve_params(opt.params);
    const Dataset ds = load_dataset(opt.data);
    SolverConfig cfg;
    cfg.seed = opt.seed;
    cfg.max_iterations = opt.max_iterations;
    const ClusPathModel model = fit(ds, hp, cfg);
    const std::string fingerprint = dataset_fingerprint(ds);

    Manifest manifest{"fit", argv, opt.data.input.string(), {}, opt.seed, {}, fingerprint};
    manifest.parameters = {{"hyperparameters", serialize::hyperparams_to_json(hp)},
                           {"data", data_flags_json(opt.data)},
                           {"max_iterations", opt.max_iterations}};
    manifest.outputs = write_model_artifacts(opt.out, ds, model, fingerprint);
    write_manifest(opt.out, manifest);

    out << "fit: " << model.iterations << " iterations, "
        << (model.converged ? "converged" : "iteration cap reached") << ", J = "
        << io::format_double(model.objective_trace.back()) << "\n";
    out << "artifacts written to " << opt.out.string() << "\n";
    return kSuccess;
}

int cmd_tune(const TuneOptions& opt, const std::vector<std::string>& argv, std::ostream& out) {
    tuner::TunerConfig cfg;
    cfg.population_size = opt.population;
    cfg.max_generations = opt.generations;
    cfg.seed = opt.seed;
    cfg.k = opt.k;
    cfg.threads = thread_budget();
    cfg.validate();

    const Dataset ds = load_dataset(opt.data);
    SolverConfig solver_cfg;
    solver_cfg.seed = opt.seed;

    std::size_t suppressed = 0;
    tuner::TuneResult result;
    {
        log::ScopedSink quiet([&](std::string_view) { ++suppressed; });
        result = tuner::tune(ds, cfg, solver_cfg);
    }
    if (suppressed > 0) {
        log::warn(std::to_string(suppressed) + " solver warnings during tuning were suppressed");
    }

    const ClusPathModel best_model =
        fit(ds, result.best, solver_cfg, init_prototypes(ds, cfg.k, solver_cfg.seed));
    const std::string fingerprint = dataset_fingerprint(ds);

    std::vector<std::string> files;
    json best_doc = serialize::hyperparams_to_json(result.best);
    best_doc["measures"] = serialize::measures_to_json(*result.best_individual.measures);
    files.push_back(write_text(opt.out, "best_params.json", dump(best_doc)));
    files.push_back(write_text(opt.out, "front.csv", serialize::front_csv(result.front)));
    files.push_back(
        write_text(opt.out, "history.json", dump(serialize::history_to_json(result.history))));
    for (auto& f : write_model_artifacts(opt.out, ds, best_model, fingerprint)) {
        files.push_back(std::move(f));
    }

    Manifest manifest{"tune", argv, opt.data.input.string(), {}, opt.seed, files, fingerprint};
    manifest.parameters = {{"k", opt.k},
                           {"population", opt.population},
                           {"generations", opt.generations},
                           {"dominated_carryover", cfg.dominated_carryover},
                           {"mutation_fraction", cfg.mutation_fraction},
                           {"data", data_flags_json(opt.data)}};
    json box = json::object();
    for (std::size_t g = 0; g < tuner::kGenes; ++g) {
        box[tuner::kGeneNames[g]] = {cfg.search_box[g].lo, cfg.search_box[g].hi};
    }
    manifest.parameters["search_box"] = box;
    write_manifest(opt.out, manifest);

    out << "tune: " << result.history.size() << " generations, " << result.evaluations
        << " evaluations, front of " << result.front.size() << "\n";
    out << "best: " << serialize::hyperparams_to_json(result.best).dump() << "\n";
    return kSuccess;
}

int cmd_eval(const EvalOptions& opt, const std::vector<std::string>& argv, std::ostream& out) {
    const Dataset ds = load_dataset(opt.data);
    const std::string fingerprint = dataset_fingerprint(ds);
    json report;
    HyperParams hp;
    bool have_params = false;

    if (opt.model.has_value()) {
        std::ifstream in(*opt.model);
        if (!in) {
            throw DataError("cannot open model '" + opt.model->string() + "'");
        }
        json doc;
        try {
            doc = json::parse(in);
        } catch (const json::exception& e) {
            throw DataError(std::string("model is not valid JSON: ") + e.what());
        }
        const ClusPathModel model = serialize::model_from_json(doc);
        if (doc.contains("dataset_fingerprint") &&
            doc["dataset_fingerprint"].get<std::string>() != fingerprint) {
            throw DataError("model was fitted on a different dataset (fingerprint mismatch)");
        }
        if (model.assignment.size() != ds.size() ||
            (!model.prototypes.empty() && model.prototypes.front().mu_d.size() != ds.dim())) {
            throw DataError("model does not match the dataset shape");
        }
        report["measures"] = serialize::measures_to_json(evaluate(model, ds));
        hp = model.params;
        have_params = true;
    }

    if (opt.seeds > 0) {
        if (!have_params || opt.params.preset || opt.params.alpha || opt.params.beta ||
            opt.params.delta || opt.params.lambda) {
            ParamFlags flags = opt.params;
            if (!flags.k && have_params) {
                flags.k = hp.k;
            }
            hp = resolve_params(flags);
        }
        std::vector<MeasureVector> runs(opt.seeds);
        std::vector<std::string> errors(opt.seeds);
        auto work = [&](std::size_t r) {
            try {
                SolverConfig cfg;
                cfg.seed = opt.seed + r;
                runs[r] = evaluate(fit(ds, hp, cfg), ds);
            } catch (const std::exception& e) {
                errors[r] = e.what();
            }
        };
        const std::size_t workers = std::min(thread_budget(), opt.seeds);
        if (workers <= 1) {
            for (std::size_t r = 0; r < opt.seeds; ++r) {
                work(r);
            }
        } else {
            std::vector<std::thread> pool;
            std::atomic<std::size_t> next{0};
            for (std::size_t w = 0; w < workers; ++w) {
                pool.emplace_back([&] {
                    for (std::size_t r = next++; r < opt.seeds; r = next++) {
                        work(r);
                    }
                });
            }
            for (auto& t : pool) {
                t.join();
            }
        }
        for (const auto& e : errors) {
            if (!e.empty()) {
                throw Error("a seeded run failed: " + e);
            }
        }
        const MeanStd summary = summarize(runs);
        json per_run = json::array();
        for (const auto& r : runs) {
            per_run.push_back(serialize::measures_to_json(r));
        }
        report["protocol"] = {{"seeds", opt.seeds},
                              {"first_seed", opt.seed},
                              {"hyperparameters", serialize::hyperparams_to_json(hp)},
                              {"mean", serialize::measures_to_json(summary.mean)},
                              {"stdev", serialize::measures_to_json(summary.stdev)},
                              {"runs", per_run}};
    }

    if (report.is_null()) {
        throw DomainError("eval needs --model, --seeds or both");
    }
    const std::string text = dump(report);
    out << text;
    if (opt.out.has_value()) {
        std::vector<std::string> files{write_text(*opt.out, "eval.json", text)};
        Manifest manifest{"eval", argv, opt.data.input.string(), {}, opt.seed, files, fingerprint};
        manifest.parameters = {{"data", data_flags_json(opt.data)},
                               {"seeds", opt.seeds},
                               {"model", opt.model ? opt.model->string() : ""}};
        write_manifest(*opt.out, manifest);
    }
    return kSuccess;
}

int cmd_graph(const GraphOptions& opt, const std::vector<std::string>& argv, std::ostream& out) {
    const Dataset ds = load_dataset(opt.data);
    const std::string fingerprint = dataset_fingerprint(ds);
    std::ifstream in(opt.model);
    if (!in) {
        throw DataError("cannot open model '" + opt.model.string() + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw DataError(std::string("model is not valid JSON: ") + e.what());
    }
    const ClusPathModel model = serialize::model_from_json(doc);
    if (doc.contains("dataset_fingerprint") &&
        doc["dataset_fingerprint"].get<std::string>() != fingerprint) {
        throw DataError("model was fitted on a different dataset (fingerprint mismatch)");
    }
    if (model.assignment.size() != ds.size()) {
        throw DataError("model does not match the dataset shape");
    }
    const auto transitions = extract_transitions(ds, model.assignment);
    const EvolutionGraph graph = binarize(model.adjacency, model.params.k);
    std::vector<std::string> files;
    files.push_back(write_text(
        opt.out, "graph.dot",
        export_dot(graph, model.prototypes, arc_entity_counts(transitions, model.params.k))));
    files.push_back(write_text(opt.out, "transitions.json",
                               dump(serialize::transitions_to_json(transitions))));
    files.push_back(
        write_text(opt.out, "paths.json", dump(serialize::paths_to_json(ds, model.assignment))));
    files.push_back(
        write_text(opt.out, "population.csv", cluster_population_csv(ds, model.assignment)));
    Manifest manifest{"graph", argv, opt.data.input.string(), {}, model.seed, files, fingerprint};
    manifest.parameters = {{"data", data_flags_json(opt.data)}, {"model", opt.model.string()}};
    write_manifest(opt.out, manifest);
    out << "graph: " << graph.nodes.size() << " nodes, " << graph.arc_count() << " arcs, threshold "
        << io::format_double(graph.threshold) << (graph.degenerate ? " (degenerate)" : "") << "\n";
    return kSuccess;
}

int cmd_synth(const SynthOptions& opt, const std::vector<std::string>& argv, std::ostream& out) {
    synth::Config cfg;
    cfg.entities = opt.entities;
    cfg.phases = opt.phases;
    cfg.timestamps = opt.timestamps;
    cfg.dim = opt.dim;
    cfg.separation = opt.separation;
    cfg.noise = opt.noise;
    cfg.boundary_jitter = opt.jitter;
    cfg.seed = opt.seed;
    const synth::PlantedData planted = synth::generate(cfg);

    std::ostringstream csv;
    io::write_long_csv(csv, planted.dataset);
    std::vector<std::string> files;
    files.push_back(write_text(opt.out, "data.csv", csv.str()));

    json paths = json::array();
    for (std::size_t e = 0; e < planted.dataset.entity_count(); ++e) {
        paths.push_back({{"entity", planted.dataset.entity_id(e)}, {"path", planted.paths[e]}});
    }
    const json labels = {{"phases", cfg.phases},
                         {"assignment", planted.labels.cluster_of},
                         {"paths", paths},
                         {"phase_centers", planted.phase_centers}};
    files.push_back(write_text(opt.out, "labels.json", dump(labels)));

    Manifest manifest{"synth", argv, "", {}, opt.seed, files,
                      dataset_fingerprint(planted.dataset)};
    manifest.parameters = {{"entities", cfg.entities},     {"phases", cfg.phases},
                           {"timestamps", cfg.timestamps}, {"dim", cfg.dim},
                           {"separation", cfg.separation}, {"noise", cfg.noise},
                           {"jitter", cfg.boundary_jitter}};
    write_manifest(opt.out, manifest);
    out << "synth: " << planted.dataset.size() << " observations written to "
        << opt.out.string() << "\n";
    return kSuccess;
}

}  // namespace cluspath::cli
