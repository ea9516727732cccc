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

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qidt/config.hpp"
#include "qidt/errors.hpp"
#include "qidt/linalg.hpp"
#include "qidt/measurement.hpp"
#include "qidt/parallel.hpp"
#include "qidt/rng.hpp"

namespace qidt {

/// Uniform average of |psi><psi| (x) |psi><psi| on C^d (x) C^d.
/// Basis index of |ij> is i*d + j.
struct PiOperator {
    int dim;
    Matrix matrix;
};

inline PiOperator pi_operator(int d) {
    if (d < 1) fail(ErrorKind::RangeError, "dimension must be >= 1");
    const double norm = 1.0 / (static_cast<double>(d) * (d + 1));
    const int n = d * d;
    Matrix m = Matrix::Zero(n, n);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            m(i * d + j, i * d + j) += norm;
            m(i * d + j, j * d + i) += norm;
        }
    return {d, m};
}

/// Uniform integral of <psi|A|psi><psi|B|psi>, contracted from Pi in closed
/// form: (tr A tr B + tr AB) / (d(d+1)).
inline cplx uniform_quadratic_integral(const Matrix& a, const Matrix& b) {
    const double d = static_cast<double>(a.rows());
    return (a.trace() * b.trace() + (a * b).trace()) / (d * (d + 1.0));
}

enum class AverageMethod { ExactPi, MonteCarlo, Design };

constexpr std::string_view to_string(AverageMethod m) {
    switch (m) {
        case AverageMethod::ExactPi: return "exact-pi";
        case AverageMethod::MonteCarlo: return "monte-carlo";
        case AverageMethod::Design: return "design";
    }
    return "unknown";
}

struct DisturbanceReport {
    double avg_fidelity = 1.0;
    double disturbance = 0.0;
    AverageMethod method = AverageMethod::ExactPi;
    std::optional<double> standard_error;
    std::optional<std::size_t> samples;
};

namespace detail {
inline DisturbanceReport make_report(double fid, AverageMethod method) {
    DisturbanceReport r;
    r.avg_fidelity = std::clamp(fid, 0.0, 1.0);
    r.disturbance = 1.0 - r.avg_fidelity;
    r.method = method;
    return r;
}

// sum_bi |<psi|A_bi|psi>|^2 / <psi|psi>^2
inline double pure_overlap(const std::vector<Matrix>& kraus, const Vector& psi) {
    double s = 0.0;
    for (const auto& a : kraus) s += std::norm(psi.dot(a * psi));
    const double n = psi.dot(psi).real();
    return s / (n * n);
}
}  // namespace detail

/// Exact uniform-ensemble average fidelity:
/// sum_bi (|tr A_bi|^2 + tr A_bi A_bi^dagger) / (d(d+1)).
inline DisturbanceReport avg_fidelity_uniform(const Instrument& inst) {
    const double d = inst.dim();
    double s = 0.0;
    for (const auto& br : inst.branches())
        for (const auto& a : br) s += std::norm(a.trace()) + a.squaredNorm();
    return detail::make_report(s / (d * (d + 1.0)), AverageMethod::ExactPi);
}

/// Least disturbance of any instrument measuring the POVM on the uniform
/// ensemble, attained by the square-root instrument:
/// F_max = (d + sum_b (tr sqrt F_b)^2) / (d(d+1)).
inline DisturbanceReport min_disturbance_uniform(const Povm& povm, const Tolerances& tol = kDefaultTolerances) {
    require_valid(povm, tol);
    const double d = povm.dim();
    double s = d;
    for (const auto& f : povm.effects()) {
        const auto e = herm_eig(f, tol);
        const double t = detail::floored_sqrt(e.values).sum();
        s += t * t;
    }
    return detail::make_report(s / (d * (d + 1.0)), AverageMethod::ExactPi);
}

inline DisturbanceReport avg_fidelity_mc(const Instrument& inst, std::size_t samples, Rng& rng) {
    if (samples < 2) fail(ErrorKind::RangeError, "Monte Carlo needs at least 2 samples");
    const auto kraus = inst.flat_kraus();
    const int d = inst.dim();
    const RunningStats stats =
        monte_carlo(samples, rng, [&](Rng& r) { return detail::pure_overlap(kraus, haar_state(d, r).amplitudes()); });
    auto report = detail::make_report(stats.mean, AverageMethod::MonteCarlo);
    report.standard_error = stats.stderr_of_mean();
    report.samples = samples;
    return report;
}

/// Unweighted average over the design points.
inline DisturbanceReport avg_fidelity_design(const Instrument& inst, const std::vector<PureState>& design) {
    if (design.empty()) fail(ErrorKind::Validation, "design must be nonempty");
    const auto kraus = inst.flat_kraus();
    double s = 0.0;
    for (const auto& psi : design) {
        if (psi.dim() != inst.dim()) fail(ErrorKind::DimMismatch, "design point dimension differs from instrument");
        s += detail::pure_overlap(kraus, psi.amplitudes());
    }
    auto report = detail::make_report(s / static_cast<double>(design.size()), AverageMethod::Design);
    report.samples = design.size();
    return report;
}

/// F_e(rho, A) = sum_bi |tr A_bi rho|^2
inline double entanglement_fidelity(const DensityOperator& rho, const Instrument& inst) {
    if (rho.dim() != inst.dim()) fail(ErrorKind::DimMismatch, "state and instrument dimensions differ");
    double s = 0.0;
    for (const auto& br : inst.branches())
        for (const auto& a : br) s += std::norm((a * rho.matrix()).trace());
    return std::clamp(s, 0.0, 1.0);
}

struct WeightedState {
    DensityOperator state;
    double weight;
};

struct ConditionalDisturbance {
    double outcome_averaged;     // 1 - sum_a w_a F(rho_a, A(rho_a))
    double outcome_conditional;  // 1 - sum_a w_a sum_b F(rho_a, A_b(rho_a))
};

/// The two ensemble disturbance measures. Branch outputs enter the fidelity
/// unnormalized, so each branch term is weighted by its own probability.
inline ConditionalDisturbance conditional_avg_disturbance(const std::vector<WeightedState>& ensemble,
                                                          const Instrument& inst,
                                                          const Tolerances& tol = kDefaultTolerances) {
    double total = 0.0;
    for (const auto& ws : ensemble) {
        if (!(ws.weight >= 0.0)) fail(ErrorKind::WeightError, "weights must be nonnegative");
        total += ws.weight;
    }
    if (ensemble.empty() || std::abs(total - 1.0) > tol.weight_sum) {
        fail(ErrorKind::WeightError, "ensemble weights sum to " + std::to_string(total));
    }
    double f1 = 0.0, f2 = 0.0;
    for (const auto& ws : ensemble) {
        const Matrix& rho = ws.state.matrix();
        f1 += ws.weight * fidelity_psd(rho, channel_action(inst, rho));
        for (std::size_t b = 0; b < inst.size(); ++b) {
            f2 += ws.weight * fidelity_psd(rho, apply_branch(inst, b, ws.state).state);
        }
    }
    return {1.0 - f1, 1.0 - f2};
}

/// <psi|sqrt(P1^2+P2^2)|psi>^2 - <psi|P1|psi>^2 - <psi|P2|psi>^2
inline double superadditivity_margin(const Matrix& p1, const Matrix& p2, const PureState& psi,
                                     const Tolerances& tol = kDefaultTolerances) {
    for (const Matrix* p : {&p1, &p2}) {
        require_square(*p, "superadditivity operand");
        if (p->rows() != psi.dim()) fail(ErrorKind::DimMismatch, "operand dimension differs from state");
        if (min_eigenvalue((*p + p->adjoint()) / 2.0) < -tol.psd_slack) {
            fail(ErrorKind::NotPositive, "superadditivity operand not positive");
        }
    }
    const Matrix combined = mat_sqrt(p1 * p1 + p2 * p2, tol);
    const double rhs = std::pow(psi.expectation(combined).real(), 2);
    const double lhs = std::pow(psi.expectation(p1).real(), 2) + std::pow(psi.expectation(p2).real(), 2);
    return rhs - lhs;
}

struct RestoreCounterexample {
    Matrix effect;       // G = |phi><phi| with <phi|psi> = 0
    Instrument channel;  // single unitary Kraus operator taking phi to psi
    double gain;         // <psi|E(G)|psi> - <psi|G|psi>
};

/// <psi|E(G)|psi> - <psi|G|psi>
inline double restore_gain(const Matrix& g, const Instrument& channel, const PureState& psi) {
    return psi.expectation(channel_action(channel, g)).real() - psi.expectation(g).real();
}

/// A trace-preserving channel that increases <psi|G|psi>, refuting the
/// hoped-for monotonicity |<psi|E(G)|psi>| <= |<psi|G|psi>|.
inline RestoreCounterexample restore_counterexample(int d, const PureState& psi) {
    if (d < 2) fail(ErrorKind::RangeError, "need d >= 2");
    if (psi.dim() != d) fail(ErrorKind::DimMismatch, "state dimension differs from d");
    Matrix seed(d, 1);
    seed.col(0) = psi.amplitudes();
    const Vector phi = detail::complete_basis(seed, d, 2).col(0);
    const Vector& v = psi.amplitudes();
    // Swaps phi and psi, identity on their orthocomplement.
    const Matrix u = identity(d) - v * v.adjoint() - phi * phi.adjoint() + v * phi.adjoint() + phi * v.adjoint();
    const Matrix g = phi * phi.adjoint();
    Instrument channel(d, {{u}});
    const double gain = restore_gain(g, channel, psi);
    return {g, std::move(channel), gain};
}

struct BoundCheck {
    double lhs;  // F_e(I/d, multi-term instrument)
    double rhs;  // F_e(I/d, square-root instrument)
};

/// Multi-term instrument compatible with the POVM: A_bi = V_bi sqrt(F_b),
/// where the blocks V_bi (d x d) of isometries[b] ((k d) x d) satisfy
/// sum_i V_bi^dagger V_bi = I.
inline Instrument compatible_instrument(const Povm& povm, const std::vector<Matrix>& isometries,
                                        const Tolerances& tol = kDefaultTolerances) {
    require_valid(povm, tol);
    if (isometries.size() != povm.size()) fail(ErrorKind::DimMismatch, "need one isometry per outcome");
    const int d = povm.dim();
    std::vector<Instrument::Branch> branches;
    for (std::size_t b = 0; b < povm.size(); ++b) {
        const Matrix& v = isometries[b];
        if (v.cols() != d || v.rows() % d != 0) fail(ErrorKind::DimMismatch, "isometry must be (k d) x d");
        const double r = max_abs(v.adjoint() * v - identity(d));
        if (r > tol.algebraic) fail(ErrorKind::NotIsometry, "V^dagger V differs from identity by " + std::to_string(r));
        const Matrix root = mat_sqrt(povm.effect(b), tol);
        Instrument::Branch br;
        for (Eigen::Index k = 0; k < v.rows() / d; ++k) br.push_back(v.middleRows(k * d, d) * root);
        branches.push_back(std::move(br));
    }
    return Instrument(d, std::move(branches), povm.labels());
}

/// Entanglement fidelity of the maximally mixed state under a multi-term
/// compatible instrument versus the square-root instrument.
inline BoundCheck entfid_bound_check(const Povm& povm, const std::vector<Matrix>& isometries,
                                     const Tolerances& tol = kDefaultTolerances) {
    const auto rho = DensityOperator::maximally_mixed(povm.dim());
    return {entanglement_fidelity(rho, compatible_instrument(povm, isometries, tol)),
            entanglement_fidelity(rho, sqrt_instrument(povm, tol))};
}

}  // namespace qidt
