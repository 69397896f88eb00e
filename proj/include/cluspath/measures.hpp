#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "cluspath/core.hpp"
#include "cluspath/metric.hpp"

namespace cluspath {

// A point in the four-dimensional space of evaluation measures; all minimized.
struct MeasureVector {
    double mdvar = 0.0;
    double tvar = 0.0;
    double shap = 0.0;
    double spass = 0.0;

    std::array<double, 4> as_array() const { return {mdvar, tvar, shap, spass}; }
    bool operator==(const MeasureVector&) const = default;
};

// Mean squared Euclidean distance between each descriptor and its prototype.
double mdvar(const Dataset& ds, const Assignment& asg, const std::vector<Prototype>& protos);

// Mean squared time gap between each observation and its prototype.
double tvar(const Dataset& ds, const Assignment& asg, const std::vector<Prototype>& protos);

// Contribution of one chronological cluster series: entropy of the cluster
// shares times 1 + (changes - (distinct - 1)) / (N - 1). Zero when N = 1.
double shap_series(const std::vector<std::size_t>& series);

// Entity average of shap_series.
double shap(const Dataset& ds, const Assignment& asg, std::size_t k);

// Sum over entities of the mean prototype dissimilarity across that entity's
// transitions; entities without transitions contribute 0.
double spass(const Dataset& ds, const Assignment& asg, const std::vector<Prototype>& protos,
             const TAWeights& w, const Diameters& diam);

MeasureVector evaluate(const ClusPathModel& model, const Dataset& ds);

}  // namespace cluspath
