#include <CLI11.hpp>

#include <algorithm>
#include <ostream>
#include <sstream>

#include "cluspath/cli.hpp"
#include "cluspath/error.hpp"

namespace cluspath::cli {
namespace {

void add_data_flags(CLI::App* cmd, DataFlags& data) {
    cmd->add_option("--input", data.input, "long-format CSV (entity,time,features...)")
        ->required();
    cmd->add_flag("--no-normalize{false}", data.normalize, "skip the per-feature z-score");
    cmd->add_flag("--keep-entity-mean{false}", data.remove_entity_mean,
                  "do not subtract each entity's mean");
}

void add_param_flags(CLI::App* cmd, ParamFlags& params, std::string& lambda_text) {
    cmd->add_option("--k", params.k, "number of clusters");
    cmd->add_option("--alpha", params.alpha, "descriptive/temporal balance in [-1, 1]");
    cmd->add_option("--beta", params.beta, "constraint strength");
    cmd->add_option("--delta", params.delta, "constraint time scale");
    cmd->add_option("--lambda", lambda_text, "term weights l1,l2,l3");
    cmd->add_option("--preset", params.preset, "kmeans, tdkm, ckm or tdck");
}

std::array<double, 3> parse_lambda(const std::string& text) {
    std::array<double, 3> out{};
    std::stringstream ss(text);
    std::string item;
    std::size_t n = 0;
    while (std::getline(ss, item, ',')) {
        if (n == 3) {
            throw DomainError("--lambda takes exactly three comma-separated values");
        }
        try {
            std::size_t used = 0;
            out[n] = std::stod(item, &used);
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw DomainError("--lambda: '" + item + "' is not a number");
        }
        ++n;
    }
    if (n != 3) {
        throw DomainError("--lambda takes exactly three comma-separated values");
    }
    return out;
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"ClusPath temporal clustering"};
    app.name(argv.empty() ? "cluspath" : argv.front());
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    FitOptions fit_opt;
    std::string fit_lambda;
    auto* fit = app.add_subcommand("fit", "fit one model");
    add_data_flags(fit, fit_opt.data);
    add_param_flags(fit, fit_opt.params, fit_lambda);
    fit->add_option("--seed", fit_opt.seed, "initialization seed");
    fit->add_option("--max-iter", fit_opt.max_iterations, "iteration cap");
    fit->add_option("--out", fit_opt.out, "output directory");

    TuneOptions tune_opt;
    auto* tune = app.add_subcommand("tune", "evolutionary hyperparameter search");
    add_data_flags(tune, tune_opt.data);
    tune->add_option("--k", tune_opt.k, "number of clusters")->required();
    tune->add_option("--pop", tune_opt.population, "population size");
    tune->add_option("--gens", tune_opt.generations, "generation cap");
    tune->add_option("--seed", tune_opt.seed, "seed for the search and the shared initialization");
    tune->add_option("--out", tune_opt.out, "output directory");

    EvalOptions eval_opt;
    std::string eval_lambda;
    std::string eval_model;
    std::string eval_out;
    auto* eval = app.add_subcommand("eval", "compute the four measures");
    add_data_flags(eval, eval_opt.data);
    add_param_flags(eval, eval_opt.params, eval_lambda);
    eval->add_option("--model", eval_model, "model.json written by fit");
    eval->add_option("--seeds", eval_opt.seeds, "refit with this many consecutive seeds");
    eval->add_option("--seed", eval_opt.seed, "first seed");
    eval->add_option("--out", eval_out, "also write eval.json here");

    GraphOptions graph_opt;
    auto* graph = app.add_subcommand("graph", "render the evolution graph of a model");
    add_data_flags(graph, graph_opt.data);
    graph->add_option("--model", graph_opt.model, "model.json written by fit")->required();
    graph->add_option("--out", graph_opt.out, "output directory");

    SynthOptions synth_opt;
    auto* synth = app.add_subcommand("synth", "generate a planted-phase dataset");
    synth->add_option("--entities", synth_opt.entities, "number of entities");
    synth->add_option("--phases", synth_opt.phases, "number of planted phases");
    synth->add_option("--timestamps", synth_opt.timestamps, "observations per entity");
    synth->add_option("--dim", synth_opt.dim, "descriptive dimensions");
    synth->add_option("--separation", synth_opt.separation, "minimum distance between phase centers");
    synth->add_option("--noise", synth_opt.noise, "noise as a fraction of the separation");
    synth->add_option("--jitter", synth_opt.jitter, "per-entity shift of phase boundaries, in timestamps");
    synth->add_option("--seed", synth_opt.seed, "generator seed");
    synth->add_option("--out", synth_opt.out, "output directory");

    std::vector<std::string> args(argv.size() > 1 ? argv.begin() + 1 : argv.end(), argv.end());
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << "\n";
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "cluspath: " << e.what() << "\n";
        if (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) {
            err << "run '" << app.get_name() << " " << sub->get_name() << " --help' for usage\n";
        } else {
            err << "run '" << app.get_name() << " --help' for usage\n";
        }
        return kUsageError;
    }

    try {
        if (fit->parsed()) {
            if (!fit_lambda.empty()) fit_opt.params.lambda = parse_lambda(fit_lambda);
            return cmd_fit(fit_opt, argv, out);
        }
        if (tune->parsed()) {
            return cmd_tune(tune_opt, argv, out);
        }
        if (eval->parsed()) {
            if (!eval_lambda.empty()) eval_opt.params.lambda = parse_lambda(eval_lambda);
            if (!eval_model.empty()) eval_opt.model = eval_model;
            if (!eval_out.empty()) eval_opt.out = eval_out;
            return cmd_eval(eval_opt, argv, out);
        }
        if (graph->parsed()) {
            return cmd_graph(graph_opt, argv, out);
        }
        return cmd_synth(synth_opt, argv, out);
    } catch (const DomainError& e) {
        err << "cluspath: " << e.what() << "\n";
        return kUsageError;
    } catch (const DataError& e) {
        err << "cluspath: " << e.what() << "\n";
        return kDataError;
    } catch (const SolverError& e) {
        err << "cluspath: " << e.what() << "\n" << e.state_dump() << "\n";
        return kDataError;
    } catch (const std::exception& e) {
        err << "cluspath: " << e.what() << "\n";
        return kDataError;
    }
}

}  // namespace cluspath::cli
