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
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qidt/config.hpp"
#include "qidt/disturbance.hpp"
#include "qidt/errors.hpp"
#include "qidt/galois.hpp"
#include "qidt/information.hpp"
#include "qidt/linalg.hpp"
#include "qidt/measurement.hpp"
#include "qidt/parallel.hpp"
#include "qidt/rng.hpp"

namespace qidt {

using Channel = std::function<Matrix(const Matrix&)>;

namespace detail {
inline void require_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::RangeError, "p = " + std::to_string(p) + " outside [0, 1]");
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Isotropic channel
// ---------------------------------------------------------------------------

/// (1 - p) rho + p I/d
inline DensityOperator depolarize(const DensityOperator& rho, double p) {
    detail::require_probability(p);
    const int d = rho.dim();
    return DensityOperator::from_matrix((1.0 - p) * rho.matrix() + (p / d) * identity(d));
}

inline Matrix depolarize_matrix(const Matrix& rho, double p) {
    const auto d = rho.rows();
    return (1.0 - p) * rho + (p / static_cast<double>(d)) * rho.trace() * Matrix::Identity(d, d);
}

/// Kraus form of the isotropic channel from the Weyl operators X^a Z^b:
/// the (0,0) term carries sqrt(1 - p + p/d^2), the rest sqrt(p)/d.
inline Instrument depolarizing_instrument(int d, double p) {
    detail::require_probability(p);
    Matrix shift = Matrix::Zero(d, d), clock = Matrix::Zero(d, d);
    for (int j = 0; j < d; ++j) {
        shift((j + 1) % d, j) = 1.0;
        clock(j, j) = std::polar(1.0, 2.0 * M_PI * j / d);
    }
    Instrument::Branch kraus;
    Matrix xa = identity(d);
    for (int a = 0; a < d; ++a) {
        Matrix w = xa;
        for (int b = 0; b < d; ++b) {
            const double c = (a == 0 && b == 0) ? std::sqrt(1.0 - p + p / (d * d)) : std::sqrt(p) / d;
            kraus.push_back(c * w);
            w = w * clock;
        }
        xa = shift * xa;
    }
    return Instrument(d, {std::move(kraus)});
}

/// max |W^dagger C(W rho W^dagger) W - C(rho)|
inline double covariance_residual(const Channel& channel, const Matrix& w, const Matrix& rho) {
    return max_abs(w.adjoint() * channel(w * rho * w.adjoint()) * w - channel(rho));
}

inline double covariance_residual(const Instrument& inst, const Matrix& w, const DensityOperator& rho) {
    if (unitarity_residual(w) > kDefaultTolerances.algebraic) fail(ErrorKind::NotIsometry, "W is not unitary");
    return covariance_residual([&](const Matrix& m) { return channel_action(inst, m); }, w, rho.matrix());
}

/// Max covariance residual over Haar W and random rho.
inline double covariance_check(const Channel& channel, int d, int samples, Rng& rng) {
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const Matrix w = haar_unitary(d, rng);
        const DensityOperator rho = random_density(d, rng);
        worst = std::max(worst, covariance_residual(channel, w, rho.matrix()));
    }
    return worst;
}

inline double covariance_check(const Instrument& inst, int samples, Rng& rng) {
    return covariance_check([&](const Matrix& m) { return channel_action(inst, m); }, inst.dim(), samples, rng);
}

// ---------------------------------------------------------------------------
// Twirling
// ---------------------------------------------------------------------------

/// F_e(I/d, sqrt instrument) = (1/d^2) sum_b (tr sqrt F_b)^2
inline double uniform_entanglement_fidelity(const Povm& povm) {
    const double d = povm.dim();
    double s = 0.0;
    for (const auto& f : povm.effects()) {
        const double t = detail::floored_sqrt(herm_eig(f).values).sum();
        s += t * t;
    }
    return s / (d * d);
}

/// Depolarizing parameter of the twirled square-root instrument:
/// p* = (1 - F_e) d^2 / (d^2 - 1).
inline double twirl_parameter(const Povm& povm) {
    const double d = povm.dim();
    if (povm.dim() == 1) return 0.0;
    return (1.0 - uniform_entanglement_fidelity(povm)) * d * d / (d * d - 1.0);
}

struct TwirlEstimate {
    Matrix mean;
    Eigen::MatrixXd stderr_real;
    Eigen::MatrixXd stderr_imag;
    std::size_t samples = 0;
};

/// Monte Carlo estimate of sum_b E_U[U sqrt(F_b) U^dagger rho U sqrt(F_b) U^dagger].
inline TwirlEstimate twirl_channel(const Povm& povm, const DensityOperator& rho, std::size_t samples, Rng& rng,
                                   const Tolerances& tol = kDefaultTolerances) {
    if (samples < 1) fail(ErrorKind::RangeError, "need at least one sample");
    if (rho.dim() != povm.dim()) fail(ErrorKind::DimMismatch, "state and POVM dimensions differ");
    const Instrument inst = sqrt_instrument(povm, tol);
    const int d = povm.dim();
    const std::size_t n = static_cast<std::size_t>(d) * static_cast<std::size_t>(d);
    using Acc = std::vector<RunningStats>;  // re/im of each entry, row-major
    const Rng base(rng.next_u64());
    const Acc acc = chunked_reduce<Acc>(
        samples, base, [&] { return Acc(2 * n); },
        [&](Rng& stream, Acc& a) {
            const Matrix u = haar_unitary(d, stream);
            const Matrix out = u * channel_action(inst, u.adjoint() * rho.matrix() * u) * u.adjoint();
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    const std::size_t k = static_cast<std::size_t>(i * d + j);
                    a[2 * k].push(out(i, j).real());
                    a[2 * k + 1].push(out(i, j).imag());
                }
        },
        [](Acc& total, const Acc& part) {
            for (std::size_t k = 0; k < total.size(); ++k) total[k].merge(part[k]);
        });
    TwirlEstimate est{Matrix(d, d), Eigen::MatrixXd(d, d), Eigen::MatrixXd(d, d), samples};
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const std::size_t k = static_cast<std::size_t>(i * d + j);
            est.mean(i, j) = cplx(acc[2 * k].mean, acc[2 * k + 1].mean);
            est.stderr_real(i, j) = acc[2 * k].stderr_of_mean();
            est.stderr_imag(i, j) = acc[2 * k + 1].stderr_of_mean();
        }
    return est;
}

/// Largest entrywise |estimate - reference| in units of its standard error.
/// Entries whose error and standard error both vanish score 0.
inline double twirl_z_score(const TwirlEstimate& est, const Matrix& reference, double floor = 1e-12) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < reference.rows(); ++i)
        for (Eigen::Index j = 0; j < reference.cols(); ++j) {
            const double dr = std::abs(est.mean(i, j).real() - reference(i, j).real());
            const double di = std::abs(est.mean(i, j).imag() - reference(i, j).imag());
            const double zr = dr <= floor ? 0.0 : dr / est.stderr_real(i, j);
            const double zi = di <= floor ? 0.0 : di / est.stderr_imag(i, j);
            worst = std::max({worst, zr, zi});
        }
    return worst;
}

// ---------------------------------------------------------------------------
// Environment model of the isotropic channel
// ---------------------------------------------------------------------------

/// Environment E = F (+) E1 (x) E2 with dim d^2 + 1: index 0 is the flag,
/// index 1 + i*d + k is |i>_{E1}|k>_{E2}.
struct EnvironmentModel {
    int d;
    double p;
    Vector initial_env;

    int env_dim() const { return d * d + 1; }

    static EnvironmentModel make(int d, double p) {
        detail::require_probability(p);
        if (d < 1) fail(ErrorKind::RangeError, "dimension must be >= 1");
        Vector v = Vector::Zero(d * d + 1);
        v(0) = std::sqrt(1.0 - p);
        for (int i = 0; i < d; ++i) v(1 + i * d + i) = std::sqrt(p / d);
        return {d, p, v};
    }

    /// (SWAP(E1, Q) (x) I_{E2}) (+) (I_F (x) I_Q) on Q (x) E, index q*(d^2+1) + e.
    Matrix interaction() const {
        const int de = env_dim();
        const int n = d * de;
        Matrix u = Matrix::Zero(n, n);
        for (int j = 0; j < d; ++j) {
            u(j * de, j * de) = 1.0;
            for (int i = 0; i < d; ++i)
                for (int k = 0; k < d; ++k) u(i * de + 1 + j * d + k, j * de + 1 + i * d + k) = 1.0;
        }
        return u;
    }
};

/// Final environment state after the interaction, for input psi:
/// (1-p)|F><F| + p|psi><psi| (x) I/d + sqrt((1-p)p/d)(|F><psi, conj psi| + h.c.).
/// The E2 factor of the cross term is the complex conjugate of psi, which is
/// what tracing out Q from the SWAP circuit produces.
inline DensityOperator environment_state(const PureState& psi, double p) {
    detail::require_probability(p);
    const int d = psi.dim();
    const int de = d * d + 1;
    const Vector& v = psi.amplitudes();
    Matrix rho = Matrix::Zero(de, de);
    rho(0, 0) = 1.0 - p;
    rho.bottomRightCorner(d * d, d * d) = kron(Matrix(psi.projector()), Matrix(identity(d) * (p / d)));
    const Vector pair = kron(v, Vector(v.conjugate()));
    const double c = std::sqrt((1.0 - p) * p / d);
    for (int k = 0; k < d * d; ++k) {
        rho(0, 1 + k) = c * std::conj(pair(k));
        rho(1 + k, 0) = c * pair(k);
    }
    return DensityOperator::from_matrix(rho);
}

struct EnvUnitaryCheck {
    double env_residual;     // max |tr_Q(U (psi (x) 0_E)) - environment_state|
    double system_residual;  // max |tr_E(...) - depolarize(psi, p)|
    double unitarity_residual;
    Matrix system_state;
};

/// Runs the full (d^3 + d)-dimensional circuit and compares both marginals.
inline EnvUnitaryCheck env_unitary_check(const PureState& psi, double p) {
    const auto model = EnvironmentModel::make(psi.dim(), p);
    const int d = model.d, de = model.env_dim();
    const Matrix u = model.interaction();
    const Vector out = u * kron(psi.amplitudes(), model.initial_env);
    Matrix env = Matrix::Zero(de, de), sys = Matrix::Zero(d, d);
    for (int q = 0; q < d; ++q) {
        const Vector chi = out.segment(q * de, de);
        env += chi * chi.adjoint();
    }
    for (int q = 0; q < d; ++q)
        for (int r = 0; r < d; ++r) sys(q, r) = out.segment(r * de, de).dot(out.segment(q * de, de));
    const Matrix expected_sys = depolarize_matrix(psi.projector(), p);
    return {max_abs(env - environment_state(psi, p).matrix()), max_abs(sys - expected_sys),
            qidt::unitarity_residual(u), sys};
}

// ---------------------------------------------------------------------------
// Accessible information lower bound
// ---------------------------------------------------------------------------

struct SeesawOptions {
    int restarts = 16;
    int max_iter = 500;
    double tolerance = 1e-9;  // improvement below this counts as stalled
    int patience = 10;        // consecutive stalled accepted steps to stop
    int outcomes = 0;         // 0: D(D-1) for ensemble dimension D (at least D)
};

struct AccessibleInfo {
    double info = 0.0;  // nats
    Povm povm;
    int restarts = 0;
    int best_restart = 0;
    int best_iterations = 0;
    bool converged = false;
};

namespace detail {

struct SeesawProblem {
    std::vector<Matrix> states;
    std::vector<double> weights;
    int dim;

    // p(b|x) for rank-1 effects v_b v_b^dagger (columns of V).
    void probabilities(const Matrix& v, std::vector<Matrix>& rv, Eigen::MatrixXd& q) const {
        const auto k = v.cols();
        q.resize(static_cast<Eigen::Index>(states.size()), k);
        rv.resize(states.size());
        for (std::size_t x = 0; x < states.size(); ++x) {
            rv[x].noalias() = states[x] * v;
            q.row(static_cast<Eigen::Index>(x)) = v.conjugate().cwiseProduct(rv[x]).colwise().sum().real().cwiseMax(0.0);
        }
    }

    double objective(const Eigen::MatrixXd& q) const {
        const auto k = q.cols();
        double info = 0.0;
        Eigen::RowVectorXd marginal = Eigen::RowVectorXd::Zero(k);
        for (Eigen::Index x = 0; x < q.rows(); ++x) marginal += weights[static_cast<std::size_t>(x)] * q.row(x);
        for (Eigen::Index x = 0; x < q.rows(); ++x) {
            double s = 0.0;
            for (Eigen::Index b = 0; b < k; ++b) {
                const double qb = q(x, b);
                if (qb > 0.0 && marginal(b) > 0.0) s += qb * std::log(qb / marginal(b));
            }
            info += weights[static_cast<std::size_t>(x)] * s;
        }
        return info;
    }

    // Columns (G_b - Lambda) v_b, G_b = sum_x w_x rho_x log(p(b|x)/p(b)).
    Matrix ascent_direction(const Matrix& v, const std::vector<Matrix>& rv, const Eigen::MatrixXd& q) const {
        const auto k = v.cols();
        Eigen::RowVectorXd marginal = Eigen::RowVectorXd::Zero(k);
        for (Eigen::Index x = 0; x < q.rows(); ++x) marginal += weights[static_cast<std::size_t>(x)] * q.row(x);
        Matrix y = Matrix::Zero(v.rows(), k);
        constexpr double floor = 1e-300;
        for (std::size_t x = 0; x < states.size(); ++x) {
            Eigen::RowVectorXd l(k);
            for (Eigen::Index b = 0; b < k; ++b) {
                l(b) = weights[x] * std::log(std::max(q(static_cast<Eigen::Index>(x), b), floor) / std::max(marginal(b), floor));
            }
            y += rv[x] * l.cast<cplx>().asDiagonal();
        }
        const Matrix lambda = (y * v.adjoint() + v * y.adjoint()) / 2.0;
        return y - lambda * v;
    }
};

// Normalize columns so that sum_b v_b v_b^dagger = I.
inline Matrix project_povm(const Matrix& v) { return gen_inv_sqrt(v * v.adjoint()) * v; }

struct RestartResult {
    double info;
    Matrix vectors;
    int iterations;
    bool converged;
};

// Heavy-ball momentum, dropped whenever a step would lose objective value.
inline constexpr double kMomentum = 0.95;
inline constexpr double kStepGrowth = 1.1;

inline RestartResult run_seesaw(const SeesawProblem& prob, int outcomes, const SeesawOptions& opt, Rng& rng,
                                const Matrix* warm_start = nullptr) {
    const int dim = prob.dim;
    Matrix v;
    if (warm_start != nullptr) {
        v = *warm_start;
    } else {
        const int blocks = (outcomes + dim - 1) / dim;
        v.resize(dim, blocks * dim);
        for (int m = 0; m < blocks; ++m) v.middleCols(m * dim, dim) = haar_unitary(dim, rng) / std::sqrt(static_cast<double>(blocks));
        v = project_povm(v.leftCols(outcomes));
    }
    std::vector<Matrix> rv;
    Eigen::MatrixXd q;
    prob.probabilities(v, rv, q);
    double current = prob.objective(q);
    double step = 1.0;
    Matrix velocity = Matrix::Zero(v.rows(), v.cols());
    int stalled = 0, iter = 0, last_gain_iter = 0;
    bool converged = false;
    for (; iter < opt.max_iter; ++iter) {
        const Matrix grad = prob.ascent_direction(v, rv, q);
        const Matrix dir = grad + kMomentum * velocity;
        const Matrix trial = project_povm(v + step * dir);
        std::vector<Matrix> trial_rv;
        Eigen::MatrixXd trial_q;
        prob.probabilities(trial, trial_rv, trial_q);
        const double value = prob.objective(trial_q);
        if (value >= current) {
            const double gain = value - current;
            velocity = dir;
            v = trial;
            rv = std::move(trial_rv);
            q = std::move(trial_q);
            current = value;
            step = std::min(step * kStepGrowth, 1e3);
            if (gain > 0.0) last_gain_iter = iter + 1;
            stalled = gain < opt.tolerance ? stalled + 1 : 0;
            if (stalled >= opt.patience) {
                converged = true;
                ++iter;
                break;
            }
        } else {
            if (velocity.squaredNorm() > 0.0) {
                velocity.setZero();
            } else {
                step *= 0.5;
            }
            if (step < 1e-15) {
                converged = true;
                ++iter;
                break;
            }
        }
    }
    return {current, v, last_gain_iter, converged};
}

inline Povm povm_from_vectors(const Matrix& v) {
    std::vector<Matrix> effects;
    for (Eigen::Index b = 0; b < v.cols(); ++b) effects.push_back(v.col(b) * v.col(b).adjoint());
    return Povm(static_cast<int>(v.rows()), std::move(effects));
}

inline SeesawProblem make_problem(const std::vector<WeightedState>& ensemble, const Tolerances& tol) {
    if (ensemble.empty()) fail(ErrorKind::WeightError, "ensemble must be nonempty");
    SeesawProblem prob{{}, {}, ensemble.front().state.dim()};
    double total = 0.0;
    for (const auto& ws : ensemble) {
        if (ws.state.dim() != prob.dim) fail(ErrorKind::DimMismatch, "ensemble states differ in dimension");
        if (!(ws.weight >= 0.0)) fail(ErrorKind::WeightError, "weights must be nonnegative");
        prob.states.push_back(ws.state.matrix());
        prob.weights.push_back(ws.weight);
        total += ws.weight;
    }
    if (std::abs(total - 1.0) > tol.weight_sum) fail(ErrorKind::WeightError, "ensemble weights sum to " + std::to_string(total));
    return prob;
}

inline int default_outcomes(int dim, const SeesawOptions& opt) {
    return opt.outcomes > 0 ? opt.outcomes : std::max(dim, dim * (dim - 1));
}

}  // namespace detail

/// Best mutual information found by monotone ascent over rank-1 POVMs.
/// Restart r always draws from rng-derived stream r, so raising the restart
/// count can only raise the result. An optional warm start is tried as an
/// extra candidate that loses ties to the random restarts.
inline AccessibleInfo accessible_info_lb(const std::vector<WeightedState>& ensemble, const SeesawOptions& opt,
                                         Rng& rng, const Povm* warm_start = nullptr,
                                         const Tolerances& tol = kDefaultTolerances) {
    if (opt.restarts < 1) fail(ErrorKind::RangeError, "need at least one restart");
    const auto prob = detail::make_problem(ensemble, tol);
    const int outcomes = detail::default_outcomes(prob.dim, opt);
    const Rng base(rng.next_u64());
    std::vector<std::optional<detail::RestartResult>> results(static_cast<std::size_t>(opt.restarts));
    parallel_for(results.size(), [&](std::size_t r) {
        Rng stream = base.split(r);
        results[r] = detail::run_seesaw(prob, outcomes, opt, stream);
    });
    std::size_t best = 0;
    for (std::size_t r = 1; r < results.size(); ++r)
        if (results[r]->info > results[best]->info) best = r;
    detail::RestartResult chosen = *results[best];
    int best_restart = static_cast<int>(best);
    if (warm_start != nullptr && warm_start->dim() == prob.dim) {
        Matrix v(prob.dim, static_cast<Eigen::Index>(warm_start->size()));
        bool rank_one = true;
        for (std::size_t b = 0; b < warm_start->size(); ++b) {
            const auto e = herm_eig(warm_start->effect(b));
            const auto n = e.values.size();
            if (n > 1 && e.values(n - 2) > 1e-9) rank_one = false;
            v.col(static_cast<Eigen::Index>(b)) = std::sqrt(std::max(0.0, e.values(n - 1))) * e.vectors.col(n - 1);
        }
        if (rank_one) {
            Rng unused(0);
            const Matrix start = detail::project_povm(v);
            auto warm = detail::run_seesaw(prob, static_cast<int>(v.cols()), opt, unused, &start);
            if (warm.info > chosen.info) {
                chosen = std::move(warm);
                best_restart = -1;
            }
        }
    }
    bool any_converged = false;
    for (const auto& r : results) any_converged = any_converged || r->converged;
    return {std::max(0.0, chosen.info), detail::povm_from_vectors(chosen.vectors), opt.restarts, best_restart,
            chosen.iterations, any_converged};
}

// ---------------------------------------------------------------------------
// Frontier
// ---------------------------------------------------------------------------

struct FrontierPoint {
    double p = 0.0;
    double disturbance = 0.0;      // p (d-1)/d
    double info_lower_bound = 0.0;  // cumulative max of raw_info over the grid, nats
    double raw_info = 0.0;         // optimizer result at this p
    double line_info = 0.0;        // I_max p (d+1)/d
    int restarts = 0;
    int best_restart = 0;
    int best_iterations = 0;
    bool converged = true;
};

struct FrontierOptions {
    int ensemble_size = 200;
    bool use_design = false;  // MUB design instead of Haar samples (odd prime power d)
    bool warm_start = true;   // seed each grid point with the previous optimum
    SeesawOptions seesaw;
};

struct FrontierCurve {
    int d = 0;
    std::vector<FrontierPoint> points;
    std::vector<std::string> warnings;  // raw-optimizer dips beyond 1e-3
};

/// Evenly spaced p from 0 to d/(d+1).
inline std::vector<double> frontier_grid(int d, int count) {
    if (count < 1) fail(ErrorKind::RangeError, "grid needs at least one point");
    std::vector<double> grid;
    const double top = static_cast<double>(d) / (d + 1.0);
    for (int i = 0; i < count; ++i) grid.push_back(count == 1 ? top : top * i / (count - 1));
    return grid;
}

/// Environment-state ensemble at parameter p from the given input states.
inline std::vector<WeightedState> environment_ensemble(const std::vector<PureState>& inputs, double p) {
    std::vector<WeightedState> out;
    const double w = 1.0 / static_cast<double>(inputs.size());
    for (const auto& psi : inputs) out.push_back({environment_state(psi, p), w});
    return out;
}

/// Information-disturbance points of the isotropic family A_p: the
/// disturbance is exact, the information is an optimizer lower bound on the
/// accessible information of the final environment states.
inline FrontierCurve frontier_curve(int d, const std::vector<double>& p_grid, const FrontierOptions& opt, Rng& rng) {
    if (d < 2) fail(ErrorKind::RangeError, "frontier needs d >= 2");
    const double top = static_cast<double>(d) / (d + 1.0);
    for (const double p : p_grid) {
        if (!(p >= 0.0 && p <= top + 1e-15)) fail(ErrorKind::RangeError, "p outside [0, d/(d+1)]");
    }
    std::vector<PureState> inputs;
    if (opt.use_design) {
        int prime = 0, power = 0;
        for (int q = 3; q <= d && prime == 0; q += 2) {
            if (!is_prime(static_cast<std::uint64_t>(q))) continue;
            int m = d, n = 0;
            while (m % q == 0) {
                m /= q;
                ++n;
            }
            if (m == 1) {
                prime = q;
                power = n;
            }
        }
        if (prime == 0) fail(ErrorKind::Validation, "design ensemble needs d an odd prime power");
        inputs = wootters_fields_mub(prime, power).vectors();
    } else {
        if (opt.ensemble_size < 1) fail(ErrorKind::RangeError, "ensemble_size must be >= 1");
        Rng sampler = rng.split(0);
        for (int i = 0; i < opt.ensemble_size; ++i) inputs.push_back(haar_state(d, sampler));
    }
    const double i_max = info_finegrained_exact(d);
    FrontierCurve curve;
    curve.d = d;
    std::optional<Povm> previous;
    double running = 0.0;
    for (std::size_t g = 0; g < p_grid.size(); ++g) {
        const double p = p_grid[g];
        FrontierPoint pt;
        pt.p = p;
        pt.disturbance = p * (d - 1.0) / d;
        pt.line_info = i_max * p * (d + 1.0) / d;
        if (p > 0.0) {
            // p = 0 leaves every environment in |F>: nothing to learn.
            Rng stream = rng.split(g + 1);
            const auto res = accessible_info_lb(environment_ensemble(inputs, p), opt.seesaw, stream,
                                                opt.warm_start && previous ? &*previous : nullptr);
            pt.raw_info = res.info;
            pt.restarts = res.restarts;
            pt.best_restart = res.best_restart;
            pt.best_iterations = res.best_iterations;
            pt.converged = res.converged;
            previous = res.povm;
        }
        if (pt.raw_info < running - 1e-3) {
            curve.warnings.push_back("raw information dips at p = " + std::to_string(p));
        }
        running = std::max(running, pt.raw_info);
        pt.info_lower_bound = running;
        curve.points.push_back(pt);
    }
    return curve;
}

struct LinePoint {
    double alpha;
    double info;         // nats
    double disturbance;
};

/// Do nothing with probability alpha, otherwise measure the computational
/// basis: POVM {alpha I, (1 - alpha) |b><b|}.
inline std::vector<LinePoint> line_candidate(int d, const std::vector<double>& alpha_grid) {
    const double i_max = info_finegrained_exact(d);
    std::vector<LinePoint> out;
    for (const double alpha : alpha_grid) {
        detail::require_probability(alpha);
        const auto mixed = convex_mix({{identity_povm(d), Instrument::identity_instrument(d)},
                                       {basis_povm(d), sqrt_instrument(basis_povm(d))}},
                                      {alpha, 1.0 - alpha});
        out.push_back({alpha, (1.0 - alpha) * i_max, min_disturbance_uniform(mixed.povm).disturbance});
    }
    return out;
}

}  // namespace qidt
