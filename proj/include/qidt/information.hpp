// Copyright 2026 The qidt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

#include "qidt/config.hpp"
#include "qidt/errors.hpp"
#include "qidt/linalg.hpp"
#include "qidt/measurement.hpp"
#include "qidt/parallel.hpp"
#include "qidt/rng.hpp"

namespace qidt {

enum class LogBase { Nats, Bits };

constexpr std::string_view to_string(LogBase b) { return b == LogBase::Bits ? "bits" : "nats"; }

enum class InfoMethod { ExactFinegrained, MonteCarlo, FiniteEnsemble };

constexpr std::string_view to_string(InfoMethod m) {
    switch (m) {
        case InfoMethod::ExactFinegrained: return "exact-finegrained";
        case InfoMethod::MonteCarlo: return "monte-carlo";
        case InfoMethod::FiniteEnsemble: return "finite-ensemble";
    }
    return "unknown";
}

/// Mutual information between outcome B and the state ensemble.
/// Computed in nats; in_units() rescales every field.
struct InfoReport {
    double mutual_info = 0.0;
    double h_b = 0.0;
    double h_b_given_psi = 0.0;
    InfoMethod method = InfoMethod::FiniteEnsemble;
    std::optional<double> standard_error;
    std::optional<std::size_t> samples;
    LogBase log_base = LogBase::Nats;

    InfoReport in_units(LogBase base) const {
        if (base == log_base) return *this;
        const double scale = base == LogBase::Bits ? 1.0 / std::log(2.0) : std::log(2.0);
        InfoReport out = *this;
        out.mutual_info *= scale;
        out.h_b *= scale;
        out.h_b_given_psi *= scale;
        if (out.standard_error) *out.standard_error *= scale;
        out.log_base = base;
        return out;
    }
};

/// -x log x with 0 log 0 = 0; nonpositive x (rounding) contributes 0.
inline double entropy_term(double x) { return x > 0.0 ? -x * std::log(x) : 0.0; }

/// sum_{k=1}^{d-1} 1/(1+k)
inline double harmonic_tail(int d) {
    double s = 0.0;
    for (int k = 1; k < d; ++k) s += 1.0 / (1.0 + k);
    return s;
}

/// log d - sum_{k=1}^{d-1} 1/(1+k): information gained on the uniform
/// ensemble by any POVM whose effects are proportional to rank-1 projectors.
inline double info_finegrained_exact(int d, LogBase base = LogBase::Nats) {
    if (d < 1) fail(ErrorKind::RangeError, "dimension must be >= 1");
    const double nats = std::log(static_cast<double>(d)) - harmonic_tail(d);
    return base == LogBase::Bits ? nats / std::log(2.0) : nats;
}

/// Uniform integral of |<psi|a>|^2 |<psi|b>|^2.
inline double jones_overlap_integral(const PureState& a, const PureState& b) {
    if (a.dim() != b.dim()) fail(ErrorKind::DimMismatch, "states differ in dimension");
    const double d = a.dim();
    return (1.0 + std::norm(a.amplitudes().dot(b.amplitudes()))) / (d * (d + 1.0));
}

/// Uniform integral of |<b|psi>|^2 log |<b|psi>|^2 (natural log).
inline double xlogx_integral(int d) {
    if (d < 1) fail(ErrorKind::RangeError, "dimension must be >= 1");
    return -harmonic_tail(d) / static_cast<double>(d);
}

struct EntropyPair {
    double h_b;
    double h_b_given_x;
};

/// Entropies of a discrete channel x -> b: table[x][b] = p(b|x).
inline EntropyPair outcome_entropies(const std::vector<std::vector<double>>& table, const std::vector<double>& weights) {
    if (table.empty()) return {0.0, 0.0};
    const std::size_t nb = table.front().size();
    std::vector<double> marginal(nb, 0.0);
    double conditional = 0.0;
    for (std::size_t x = 0; x < table.size(); ++x) {
        for (std::size_t b = 0; b < nb; ++b) {
            marginal[b] += weights[x] * table[x][b];
            conditional += weights[x] * entropy_term(table[x][b]);
        }
    }
    double h = 0.0;
    for (const double p : marginal) h += entropy_term(p);
    return {h, conditional};
}

namespace detail {
inline InfoReport make_info(double h_b, double h_cond, InfoMethod method) {
    InfoReport r;
    r.h_b = h_b;
    r.h_b_given_psi = h_cond;
    r.mutual_info = h_b - h_cond;
    r.method = method;
    return r;
}
}  // namespace detail

/// Uniform ensemble: H(B) exactly from p(b) = tr F_b / d, H(B|Psi) by Haar
/// Monte Carlo, so only the conditional term carries sampling noise.
inline InfoReport info_uniform_mc(const Povm& povm, std::size_t samples, Rng& rng,
                                  const Tolerances& tol = kDefaultTolerances) {
    if (samples < 2) fail(ErrorKind::RangeError, "Monte Carlo needs at least 2 samples");
    require_valid(povm, tol);
    const int d = povm.dim();
    double h_b = 0.0;
    for (const auto& f : povm.effects()) h_b += entropy_term(f.trace().real() / d);
    const auto& effects = povm.effects();
    const RunningStats stats = monte_carlo(samples, rng, [&](Rng& r) {
        const Vector psi = haar_state(d, r).amplitudes();
        // Renormalizing by the outcome sum removes rounding in sum_b p(b|psi) = 1.
        std::vector<double> probs;
        probs.reserve(effects.size());
        double total = 0.0;
        for (const auto& f : effects) {
            probs.push_back(std::max(0.0, psi.dot(f * psi).real()));
            total += probs.back();
        }
        double h = 0.0;
        for (const double q : probs) h += entropy_term(q / total);
        return h;
    });
    auto report = detail::make_info(h_b, stats.mean, InfoMethod::MonteCarlo);
    report.standard_error = stats.stderr_of_mean();
    report.samples = samples;
    return report;
}

struct WeightedPure {
    PureState state;
    double weight;
};

/// Exact mutual information for a finite pure-state ensemble.
inline InfoReport info_finite_ensemble(const Povm& povm, const std::vector<WeightedPure>& ensemble,
                                       const Tolerances& tol = kDefaultTolerances) {
    require_valid(povm, tol);
    double total = 0.0;
    for (const auto& e : ensemble) {
        if (!(e.weight >= 0.0)) fail(ErrorKind::WeightError, "weights must be nonnegative");
        if (e.state.dim() != povm.dim()) fail(ErrorKind::DimMismatch, "state dimension differs from POVM");
        total += e.weight;
    }
    if (ensemble.empty() || std::abs(total - 1.0) > tol.weight_sum) {
        fail(ErrorKind::WeightError, "ensemble weights sum to " + std::to_string(total));
    }
    std::vector<std::vector<double>> table;
    std::vector<double> weights;
    for (const auto& e : ensemble) {
        std::vector<double> row;
        for (const auto& f : povm.effects()) row.push_back(std::max(0.0, e.state.expectation(f).real()));
        table.push_back(std::move(row));
        weights.push_back(e.weight);
    }
    const auto h = outcome_entropies(table, weights);
    return detail::make_info(h.h_b, h.h_b_given_x, InfoMethod::FiniteEnsemble);
}

}  // namespace qidt
