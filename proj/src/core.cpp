#include "cluspath/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cluspath/error.hpp"
#include "cluspath/kernels.hpp"
#include "cluspath/log.hpp"

namespace cluspath {
namespace {

Diameters scan_diameters(std::span<const double> features, std::span<const double> times,
                         std::size_t dim) {
    const std::size_t n = times.size();
    Diameters out;
    if (n < 2) {
        return out;
    }
    const auto [tmin, tmax] = std::minmax_element(times.begin(), times.end());
    out.t = *tmax - *tmin;

    const auto& kern = kernels::active();
    std::vector<double> row(n);
    double best = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const std::size_t rest = n - i - 1;
        kern.squared_distances(features.data() + i * dim, features.data() + (i + 1) * dim, rest,
                               dim, row.data());
        best = std::max(best, *std::max_element(row.begin(), row.begin() + rest));
    }
    out.d = std::sqrt(best);
    return out;
}

}  // namespace

Dataset Dataset::from_observations(std::span<const Observation> observations) {
    if (observations.empty()) {
        throw DataError("dataset has no observations");
    }
    Dataset ds;
    ds.dim_ = observations.front().descriptor.size();
    if (ds.dim_ == 0) {
        throw DataError("observations need at least one descriptive feature");
    }
    const std::size_t n = observations.size();
    ds.times_.reserve(n);
    ds.features_.reserve(n * ds.dim_);
    ds.entity_of_.reserve(n);

    std::unordered_map<std::string, std::size_t> entity_index;
    for (std::size_t i = 0; i < n; ++i) {
        const Observation& obs = observations[i];
        if (obs.descriptor.size() != ds.dim_) {
            std::ostringstream msg;
            msg << "observation " << i << " has " << obs.descriptor.size()
                << " features, expected " << ds.dim_;
            throw DataError(msg.str());
        }
        if (!std::isfinite(obs.time)) {
            throw DataError("observation " + std::to_string(i) + " has a non-finite timestamp");
        }
        for (double v : obs.descriptor) {
            if (!std::isfinite(v)) {
                throw DataError("observation " + std::to_string(i) +
                                " has a non-finite feature value");
            }
        }
        auto [it, inserted] = entity_index.try_emplace(obs.entity, ds.entity_ids_.size());
        if (inserted) {
            ds.entity_ids_.push_back(obs.entity);
            ds.series_.emplace_back();
        }
        ds.entity_of_.push_back(it->second);
        ds.series_[it->second].push_back(i);
        ds.times_.push_back(obs.time);
        ds.features_.insert(ds.features_.end(), obs.descriptor.begin(), obs.descriptor.end());
    }

    ds.rank_.assign(n, 0);
    for (std::size_t e = 0; e < ds.series_.size(); ++e) {
        auto& s = ds.series_[e];
        std::stable_sort(s.begin(), s.end(),
                         [&](std::size_t a, std::size_t b) { return ds.times_[a] < ds.times_[b]; });
        for (std::size_t r = 0; r < s.size(); ++r) {
            if (r > 0 && ds.times_[s[r]] == ds.times_[s[r - 1]]) {
                std::ostringstream msg;
                msg << "duplicate (entity, timestamp) = (" << ds.entity_ids_[e] << ", "
                    << ds.times_[s[r]] << ") at observations " << s[r - 1] << " and " << s[r];
                throw DataError(msg.str());
            }
            ds.rank_[s[r]] = r;
        }
    }

    ds.diameters_ = scan_diameters(ds.features_, ds.times_, ds.dim_);
    if (n >= 2 && (ds.diameters_.degenerate_d() || ds.diameters_.degenerate_t())) {
        log::warn("dataset has a degenerate (zero) diameter; dissimilarities use 1 instead");
    }
    return ds;
}

std::optional<std::size_t> Dataset::find_entity(std::string_view id) const {
    const auto it = std::find(entity_ids_.begin(), entity_ids_.end(), id);
    if (it == entity_ids_.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - entity_ids_.begin());
}

Observation Dataset::observation(std::size_t i) const {
    const auto d = descriptor(i);
    return Observation{entity_ids_[entity_of_[i]], times_[i], {d.begin(), d.end()}};
}

std::vector<Observation> Dataset::observations() const {
    std::vector<Observation> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) {
        out.push_back(observation(i));
    }
    return out;
}

bool Dataset::operator==(const Dataset& other) const {
    return dim_ == other.dim_ && times_ == other.times_ && features_ == other.features_ &&
           entity_of_ == other.entity_of_ && entity_ids_ == other.entity_ids_;
}

Diameters diameters(const Dataset& ds) {
    if (ds.size() < 2) {
        throw DataError("diameters need at least two observations");
    }
    return scan_diameters(ds.features(), ds.times(), ds.dim());
}

Dataset preprocess(const Dataset& ds, const PreprocessOptions& options) {
    if (ds.empty()) {
        throw DataError("cannot preprocess an empty dataset");
    }
    const std::size_t n = ds.size();
    const std::size_t d = ds.dim();
    std::vector<Observation> obs = ds.observations();

    if (options.remove_entity_mean) {
        for (std::size_t e = 0; e < ds.entity_count(); ++e) {
            const auto s = ds.series(e);
            std::vector<double> mean(d, 0.0);
            for (std::size_t i : s) {
                for (std::size_t f = 0; f < d; ++f) {
                    mean[f] += obs[i].descriptor[f];
                }
            }
            for (double& m : mean) {
                m /= static_cast<double>(s.size());
            }
            for (std::size_t i : s) {
                for (std::size_t f = 0; f < d; ++f) {
                    obs[i].descriptor[f] -= mean[f];
                }
            }
        }
    }

    if (options.normalize) {
        for (std::size_t f = 0; f < d; ++f) {
            double mean = 0.0;
            for (const auto& o : obs) {
                mean += o.descriptor[f];
            }
            mean /= static_cast<double>(n);
            double var = 0.0;
            for (const auto& o : obs) {
                const double c = o.descriptor[f] - mean;
                var += c * c;
            }
            const double sd = std::sqrt(var / static_cast<double>(n));
            if (sd < 1e-12) {
                log::warn("feature " + std::to_string(f) +
                          " has zero variance; it is set to 0 by normalization");
                for (auto& o : obs) {
                    o.descriptor[f] = 0.0;
                }
                continue;
            }
            for (auto& o : obs) {
                o.descriptor[f] = (o.descriptor[f] - mean) / sd;
            }
        }
    }
    return Dataset::from_observations(obs);
}

void HyperParams::validate() const {
    auto fail = [](const std::string& what) { throw DomainError("hyperparameter " + what); };
    if (!(alpha >= -1.0 && alpha <= 1.0)) {
        fail("alpha must lie in [-1, 1]");
    }
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        fail("beta must be finite and >= 0");
    }
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        fail("delta must be finite and > 0");
    }
    for (double l : {lambda1, lambda2, lambda3}) {
        if (!(l >= 0.0) || !std::isfinite(l)) {
            fail("lambda1..3 must be finite and >= 0");
        }
    }
    if (k < 2) {
        fail("k must be >= 2");
    }
}

void Assignment::validate(std::size_t n_observations) const {
    if (cluster_of.size() != n_observations) {
        throw DomainError("assignment covers " + std::to_string(cluster_of.size()) +
                          " observations, expected " + std::to_string(n_observations));
    }
    for (std::size_t c : cluster_of) {
        if (c >= k) {
            throw DomainError("assignment uses cluster " + std::to_string(c) + " with k = " +
                              std::to_string(k));
        }
    }
}

std::vector<std::size_t> Assignment::cluster_sizes() const {
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t c : cluster_of) {
        ++sizes[c];
    }
    return sizes;
}

double AdjacencyMatrix::sum() const noexcept {
    return std::accumulate(a_.begin(), a_.end(), 0.0);
}

}  // namespace cluspath
