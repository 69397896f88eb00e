#include "cluspath/measures.hpp"

#include <algorithm>
#include <cmath>

#include "cluspath/kernels.hpp"

namespace cluspath {

double mdvar(const Dataset& ds, const Assignment& asg, const std::vector<Prototype>& protos) {
    double total = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        total += kernels::squared_distance(ds.descriptor(i), protos[asg[i]].mu_d);
    }
    return total / static_cast<double>(ds.size());
}

double tvar(const Dataset& ds, const Assignment& asg, const std::vector<Prototype>& protos) {
    double total = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const double dt = ds.time(i) - protos[asg[i]].mu_t;
        total += dt * dt;
    }
    return total / static_cast<double>(ds.size());
}

double shap_series(const std::vector<std::size_t>& series) {
    const std::size_t n = series.size();
    if (n <= 1) {
        return 0.0;
    }
    std::vector<std::size_t> sorted = series;
    std::sort(sorted.begin(), sorted.end());
    double entropy = 0.0;
    std::size_t distinct = 0;
    for (std::size_t a = 0; a < n;) {
        std::size_t b = a;
        while (b < n && sorted[b] == sorted[a]) {
            ++b;
        }
        const double share = static_cast<double>(b - a) / static_cast<double>(n);
        entropy -= share * std::log2(share);
        ++distinct;
        a = b;
    }
    std::size_t changes = 0;
    for (std::size_t r = 1; r < n; ++r) {
        changes += series[r] != series[r - 1] ? 1 : 0;
    }
    const double excess = static_cast<double>(changes - (distinct - 1));
    return entropy * (1.0 + excess / static_cast<double>(n - 1));
}

double shap(const Dataset& ds, const Assignment& asg, std::size_t /*k*/) {
    double total = 0.0;
    std::vector<std::size_t> labels;
    for (std::size_t e = 0; e < ds.entity_count(); ++e) {
        labels.clear();
        for (std::size_t i : ds.series(e)) {
            labels.push_back(asg[i]);
        }
        total += shap_series(labels);
    }
    return total / static_cast<double>(ds.entity_count());
}

double spass(const Dataset& ds, const Assignment& asg, const std::vector<Prototype>& protos,
             const TAWeights& w, const Diameters& diam) {
    const Scale s = Scale::from(diam);
    double total = 0.0;
    for (std::size_t e = 0; e < ds.entity_count(); ++e) {
        const auto series = ds.series(e);
        double sum = 0.0;
        std::size_t changes = 0;
        for (std::size_t r = 1; r < series.size(); ++r) {
            const std::size_t from = asg[series[r - 1]];
            const std::size_t to = asg[series[r]];
            if (from != to) {
                sum += ta_dissim(protos[from], protos[to], w, s);
                ++changes;
            }
        }
        if (changes > 0) {
            total += sum / static_cast<double>(changes);
        }
    }
    return total;
}

MeasureVector evaluate(const ClusPathModel& model, const Dataset& ds) {
    MeasureVector m;
    m.mdvar = mdvar(ds, model.assignment, model.prototypes);
    m.tvar = tvar(ds, model.assignment, model.prototypes);
    m.shap = shap(ds, model.assignment, model.assignment.k);
    m.spass = spass(ds, model.assignment, model.prototypes, gamma(model.params.alpha),
                    ds.diameters());
    return m;
}

}  // namespace cluspath
