#include "cluspath/graph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "cluspath/error.hpp"
#include "cluspath/io.hpp"

namespace cluspath {

std::size_t EvolutionGraph::arc_count() const {
    return static_cast<std::size_t>(std::count(arcs.begin(), arcs.end(), true));
}

std::vector<TransitionRecord> extract_transitions(const Dataset& ds, const Assignment& asg) {
    std::vector<TransitionRecord> out;
    for (std::size_t e = 0; e < ds.entity_count(); ++e) {
        const auto series = ds.series(e);
        for (std::size_t r = 1; r < series.size(); ++r) {
            const std::size_t from = asg[series[r - 1]];
            const std::size_t to = asg[series[r]];
            if (from != to) {
                out.push_back({ds.entity_id(e), from, to, ds.time(series[r])});
            }
        }
    }
    return out;
}

EvolutionGraph binarize(const AdjacencyMatrix& adj, std::size_t k) {
    if (adj.k() != k || k < 2) {
        throw DomainError("binarize needs a k x k adjacency with k >= 2");
    }
    EvolutionGraph g;
    g.k = k;
    g.arcs.assign(k * k, false);

    std::vector<double> scores;
    for (std::size_t p = 0; p < k; ++p) {
        for (std::size_t q = 0; q < k; ++q) {
            if (p != q && adj(p, q) > 0.0) {
                scores.push_back(adj(p, q));
            }
        }
    }
    if (scores.empty()) {
        g.degenerate = true;
        return g;
    }
    std::sort(scores.begin(), scores.end(), std::greater<>());
    const std::size_t positive = scores.size();
    scores.erase(std::unique(scores.begin(), scores.end()), scores.end());
    g.degenerate = scores.size() == 1 && positive == k * (k - 1);
    g.threshold = scores[std::min(k - 1, scores.size()) - 1];

    std::vector<bool> connected(k, false);
    for (std::size_t p = 0; p < k; ++p) {
        for (std::size_t q = 0; q < k; ++q) {
            if (p != q && adj(p, q) > 0.0 && adj(p, q) >= g.threshold) {
                g.arcs[p * k + q] = true;
                connected[p] = connected[q] = true;
            }
        }
    }
    for (std::size_t p = 0; p < k; ++p) {
        if (connected[p]) {
            g.nodes.push_back(p);
        }
    }
    return g;
}

std::vector<std::size_t> entity_path(const Dataset& ds, const Assignment& asg,
                                     const std::string& entity_id) {
    const auto e = ds.find_entity(entity_id);
    if (!e.has_value()) {
        throw DomainError("unknown entity '" + entity_id + "'");
    }
    std::vector<std::size_t> path;
    for (std::size_t i : ds.series(*e)) {
        if (path.empty() || path.back() != asg[i]) {
            path.push_back(asg[i]);
        }
    }
    return path;
}

std::vector<std::size_t> arc_entity_counts(const std::vector<TransitionRecord>& transitions,
                                           std::size_t k) {
    std::vector<std::size_t> counts(k * k, 0);
    for (const auto& t : transitions) {
        ++counts[t.from_cluster * k + t.to_cluster];
    }
    return counts;
}

std::string export_dot(const EvolutionGraph& g, const std::vector<Prototype>& protos,
                       const std::vector<std::size_t>& per_arc_entity_counts) {
    std::ostringstream out;
    out << "digraph evolution {\n";
    out << "  rankdir=LR;\n";
    for (std::size_t p : g.nodes) {
        out << "  C" << p << " [label=\"C" << p;
        if (p < protos.size()) {
            out << "\\nt=" << io::format_double(protos[p].mu_t);
        }
        out << "\"];\n";
    }
    for (std::size_t p = 0; p < g.k; ++p) {
        for (std::size_t q = 0; q < g.k; ++q) {
            if (!g.arc(p, q)) {
                continue;
            }
            const std::size_t count =
                p * g.k + q < per_arc_entity_counts.size() ? per_arc_entity_counts[p * g.k + q] : 0;
            const bool backward =
                p < protos.size() && q < protos.size() && protos[q].mu_t < protos[p].mu_t;
            out << "  C" << p << " -> C" << q << " [label=\"" << count << "\"";
            if (backward) {
                out << ", style=dashed, backward=true";
            }
            out << "];\n";
        }
    }
    out << "}\n";
    return out.str();
}

std::string cluster_population_csv(const Dataset& ds, const Assignment& asg) {
    std::map<double, std::vector<std::size_t>> rows;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        auto& row = rows[ds.time(i)];
        row.resize(asg.k, 0);
        ++row[asg[i]];
    }
    std::ostringstream out;
    out << "time";
    for (std::size_t c = 0; c < asg.k; ++c) {
        out << ",C" << c;
    }
    out << '\n';
    for (const auto& [time, counts] : rows) {
        out << io::format_double(time);
        for (std::size_t c : counts) {
            out << ',' << c;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace cluspath
