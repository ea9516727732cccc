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
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "qidt/config.hpp"
#include "qidt/errors.hpp"
#include "qidt/linalg.hpp"
#include "qidt/rng.hpp"

namespace qidt {

namespace detail {
inline std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
    return out;
}

inline void check_operator_shape(const Matrix& m, int dim, const std::string& what) {
    require_square(m, what.c_str());
    if (m.rows() != dim) {
        fail(ErrorKind::DimMismatch, what + " has dimension " + std::to_string(m.rows()) +
                                         ", expected " + std::to_string(dim));
    }
    if (!all_finite(m)) fail(ErrorKind::Validation, what + " has non-finite entries");
}
}  // namespace detail

// ---------------------------------------------------------------------------
// POVM
// ---------------------------------------------------------------------------

/// Ordered list of effects on C^dim. Construction checks shapes only;
/// positivity and completeness are checked by povm_validate.
class Povm {
  public:
    Povm(int dim, std::vector<Matrix> effects, std::vector<std::string> labels = {})
        : dim_(dim), effects_(std::move(effects)), labels_(std::move(labels)) {
        if (dim_ < 1) fail(ErrorKind::Validation, "POVM dimension must be >= 1");
        if (effects_.empty()) fail(ErrorKind::Validation, "POVM needs at least one effect");
        for (std::size_t b = 0; b < effects_.size(); ++b)
            detail::check_operator_shape(effects_[b], dim_, "effect " + std::to_string(b));
        if (labels_.empty()) labels_ = detail::default_labels(effects_.size());
        if (labels_.size() != effects_.size()) fail(ErrorKind::Validation, "label count differs from effect count");
    }

    int dim() const { return dim_; }
    std::size_t size() const { return effects_.size(); }
    const std::vector<Matrix>& effects() const { return effects_; }
    const Matrix& effect(std::size_t b) const { return effects_.at(b); }
    const std::vector<std::string>& labels() const { return labels_; }

  private:
    int dim_;
    std::vector<Matrix> effects_;
    std::vector<std::string> labels_;
};

struct PovmDiagnostics {
    double max_hermiticity_residual = 0.0;
    double max_psd_violation = 0.0;  // max over effects of max(0, -min eigenvalue)
    double completeness_residual = 0.0;  // max |sum F_b - I| entrywise
    std::vector<std::size_t> zero_effects;
    bool pass = false;
    std::string violated;  // name of the first failing invariant, empty on pass
};

inline PovmDiagnostics povm_validate(const Povm& povm, const Tolerances& tol = kDefaultTolerances) {
    PovmDiagnostics out;
    Matrix total = Matrix::Zero(povm.dim(), povm.dim());
    for (std::size_t b = 0; b < povm.size(); ++b) {
        const Matrix& f = povm.effect(b);
        const double h = hermiticity_residual(f);
        out.max_hermiticity_residual = std::max(out.max_hermiticity_residual, h);
        const Matrix sym = (f + f.adjoint()) / 2.0;
        if (h <= tol.symmetrize_max) {
            out.max_psd_violation = std::max(out.max_psd_violation, std::max(0.0, -min_eigenvalue(sym)));
        }
        if (max_abs(f) == 0.0) out.zero_effects.push_back(b);
        total += f;
    }
    out.completeness_residual = max_abs(total - identity(povm.dim()));
    if (out.max_hermiticity_residual > tol.algebraic) {
        out.violated = "each effect Hermitian";
    } else if (out.max_psd_violation > tol.psd_slack) {
        out.violated = "each effect positive semidefinite";
    } else if (out.completeness_residual > tol.reconstruction) {
        out.violated = "effects sum to identity";
    }
    out.pass = out.violated.empty();
    return out;
}

inline void require_valid(const Povm& povm, const Tolerances& tol = kDefaultTolerances) {
    const auto diag = povm_validate(povm, tol);
    if (!diag.pass) fail(ErrorKind::Validation, "POVM invariant violated: " + diag.violated);
}

// ---------------------------------------------------------------------------
// Instrument
// ---------------------------------------------------------------------------

/// Per-outcome Kraus lists; branch b acts as rho -> sum_i A_bi rho A_bi^dagger.
class Instrument {
  public:
    using Branch = std::vector<Matrix>;

    Instrument(int dim, std::vector<Branch> branches, std::vector<std::string> labels = {})
        : dim_(dim), branches_(std::move(branches)), labels_(std::move(labels)) {
        if (dim_ < 1) fail(ErrorKind::Validation, "instrument dimension must be >= 1");
        if (branches_.empty()) fail(ErrorKind::Validation, "instrument needs at least one branch");
        for (std::size_t b = 0; b < branches_.size(); ++b)
            for (std::size_t i = 0; i < branches_[b].size(); ++i)
                detail::check_operator_shape(branches_[b][i], dim_,
                                             "Kraus operator " + std::to_string(b) + "." + std::to_string(i));
        if (labels_.empty()) labels_ = detail::default_labels(branches_.size());
        if (labels_.size() != branches_.size()) fail(ErrorKind::Validation, "label count differs from branch count");
    }

    static Instrument identity_instrument(int d) { return Instrument(d, {{identity(d)}}); }

    int dim() const { return dim_; }
    std::size_t size() const { return branches_.size(); }
    const std::vector<Branch>& branches() const { return branches_; }
    const Branch& branch(std::size_t b) const { return branches_.at(b); }
    const std::vector<std::string>& labels() const { return labels_; }

    std::vector<Matrix> flat_kraus() const {
        std::vector<Matrix> out;
        for (const auto& br : branches_) out.insert(out.end(), br.begin(), br.end());
        return out;
    }

  private:
    int dim_;
    std::vector<Branch> branches_;
    std::vector<std::string> labels_;
};

/// max |sum_bi A^dagger A - I|
inline double trace_preservation_residual(const Instrument& inst) {
    Matrix total = Matrix::Zero(inst.dim(), inst.dim());
    for (const auto& br : inst.branches())
        for (const auto& a : br) total += a.adjoint() * a;
    return max_abs(total - identity(inst.dim()));
}

inline void require_valid(const Instrument& inst, const Tolerances& tol = kDefaultTolerances) {
    const double r = trace_preservation_residual(inst);
    if (r > tol.reconstruction) {
        fail(ErrorKind::Validation, "instrument invariant violated: Kraus operators trace-preserving (residual " +
                                        std::to_string(r) + ")");
    }
}

// ---------------------------------------------------------------------------
// Standard POVMs
// ---------------------------------------------------------------------------

inline Povm identity_povm(int d) { return Povm(d, {identity(d)}); }

/// Projectors onto the computational basis.
inline Povm basis_povm(int d) {
    std::vector<Matrix> effects;
    for (int i = 0; i < d; ++i) effects.push_back(PureState::basis(d, i).projector());
    return Povm(d, std::move(effects));
}

/// Qubit trine: (2/3)|t_k><t_k| with |t_k> = cos(k pi/3)|0> + sin(k pi/3)|1>
/// (Bloch vectors 120 degrees apart on a great circle).
inline Povm trine_povm() {
    std::vector<Matrix> effects;
    for (int k = 0; k < 3; ++k) {
        Vector t(2);
        t << std::cos(k * M_PI / 3.0), std::sin(k * M_PI / 3.0);
        effects.push_back((2.0 / 3.0) * t * t.adjoint());
    }
    return Povm(2, std::move(effects));
}

/// Random full-rank POVM: F_i = S^{-1/2} G_i S^{-1/2}, G_i = X_i X_i^dagger, S = sum G_i.
inline Povm random_povm(int d, int outcomes, Rng& rng) {
    std::vector<Matrix> g;
    Matrix s = Matrix::Zero(d, d);
    for (int i = 0; i < outcomes; ++i) {
        g.push_back(random_psd(d, d, rng));
        s += g.back();
    }
    const Matrix w = gen_inv_sqrt(s);
    std::vector<Matrix> effects;
    for (const auto& gi : g) {
        const Matrix f = w * gi * w;
        effects.push_back((f + f.adjoint()) / 2.0);
    }
    return Povm(d, std::move(effects));
}

/// Random POVM whose effects are all proportional to rank-1 projectors
/// (outcomes >= d): v_i = S^{-1/2} g_i for Gaussian g_i, F_i = v_i v_i^dagger.
inline Povm random_rank_one_povm(int d, int outcomes, Rng& rng) {
    const Matrix g = gaussian_matrix(d, outcomes, rng);
    const Matrix w = gen_inv_sqrt(g * g.adjoint());
    const Matrix v = w * g;
    std::vector<Matrix> effects;
    for (int i = 0; i < outcomes; ++i) effects.push_back(v.col(i) * v.col(i).adjoint());
    return Povm(d, std::move(effects));
}

// ---------------------------------------------------------------------------
// Instrument constructions
// ---------------------------------------------------------------------------

/// One Kraus operator sqrt(F_b) per outcome.
inline Instrument sqrt_instrument(const Povm& povm, const Tolerances& tol = kDefaultTolerances) {
    require_valid(povm, tol);
    std::vector<Instrument::Branch> branches;
    for (const auto& f : povm.effects()) branches.push_back({mat_sqrt(f, tol)});
    return Instrument(povm.dim(), std::move(branches), povm.labels());
}

/// Projective measurement with the projection-postulate update.
inline Instrument luders_projective(const std::vector<Matrix>& projectors,
                                    const Tolerances& tol = kDefaultTolerances) {
    if (projectors.empty()) fail(ErrorKind::Validation, "need at least one projector");
    const int d = static_cast<int>(projectors.front().rows());
    for (std::size_t a = 0; a < projectors.size(); ++a) {
        detail::check_operator_shape(projectors[a], d, "projector " + std::to_string(a));
        for (std::size_t b = 0; b < projectors.size(); ++b) {
            const Matrix prod = projectors[a] * projectors[b];
            const double r = a == b ? max_abs(prod - projectors[a]) : max_abs(prod);
            if (r > tol.reconstruction) {
                fail(ErrorKind::NotOrthogonal, "projectors " + std::to_string(a) + "," + std::to_string(b) +
                                                   " violate P_a P_b = delta_ab P_a by " + std::to_string(r));
            }
        }
    }
    const Povm povm(d, projectors);
    require_valid(povm, tol);
    std::vector<Instrument::Branch> branches;
    for (const auto& p : projectors) branches.push_back({p});
    return Instrument(d, std::move(branches));
}

struct BranchOutput {
    Matrix state;        // unnormalized sum_i A rho A^dagger
    double probability;  // its trace
};

inline BranchOutput apply_branch(const Instrument& inst, std::size_t b, const DensityOperator& rho) {
    if (b >= inst.size()) {
        fail(ErrorKind::IndexOutOfRange, "branch " + std::to_string(b) + " of " + std::to_string(inst.size()));
    }
    if (rho.dim() != inst.dim()) fail(ErrorKind::DimMismatch, "state and instrument dimensions differ");
    Matrix out = Matrix::Zero(inst.dim(), inst.dim());
    for (const auto& a : inst.branch(b)) out += a * rho.matrix() * a.adjoint();
    out = (out + out.adjoint()) / 2.0;
    return {out, out.trace().real()};
}

/// Unnormalized channel action on an arbitrary operator.
inline Matrix channel_action(const Instrument& inst, const Matrix& rho) {
    Matrix out = Matrix::Zero(inst.dim(), inst.dim());
    for (const auto& br : inst.branches())
        for (const auto& a : br) out += a * rho * a.adjoint();
    return out;
}

/// Outcome-averaged operation sum_b A_b(rho).
inline DensityOperator apply_channel(const Instrument& inst, const DensityOperator& rho) {
    if (rho.dim() != inst.dim()) fail(ErrorKind::DimMismatch, "state and instrument dimensions differ");
    const Matrix out = channel_action(inst, rho.matrix());
    Tolerances tol;
    tol.algebraic = kDefaultTolerances.reconstruction;
    return DensityOperator::from_matrix((out + out.adjoint()) / 2.0, tol);
}

/// F_b = sum_i A_bi^dagger A_bi
inline Povm instrument_povm(const Instrument& inst) {
    std::vector<Matrix> effects;
    for (const auto& br : inst.branches()) {
        Matrix f = Matrix::Zero(inst.dim(), inst.dim());
        for (const auto& a : br) f += a.adjoint() * a;
        effects.push_back((f + f.adjoint()) / 2.0);
    }
    return Povm(inst.dim(), std::move(effects), inst.labels());
}

/// One effect per Kraus operator, labelled "<branch>.<i>".
inline Povm fine_grain(const Instrument& inst) {
    std::vector<Matrix> effects;
    std::vector<std::string> labels;
    for (std::size_t b = 0; b < inst.size(); ++b) {
        const auto& br = inst.branch(b);
        for (std::size_t i = 0; i < br.size(); ++i) {
            const Matrix f = br[i].adjoint() * br[i];
            effects.push_back((f + f.adjoint()) / 2.0);
            labels.push_back(br.size() == 1 ? inst.labels()[b] : inst.labels()[b] + "." + std::to_string(i));
        }
    }
    return Povm(inst.dim(), std::move(effects), std::move(labels));
}

/// Sums effects within each block; block labels join member labels with '+'.
inline Povm coarse_grain(const Povm& povm, const std::vector<std::vector<std::size_t>>& partition) {
    std::vector<bool> seen(povm.size(), false);
    std::vector<Matrix> effects;
    std::vector<std::string> labels;
    for (const auto& block : partition) {
        if (block.empty()) fail(ErrorKind::BadPartition, "empty block");
        Matrix f = Matrix::Zero(povm.dim(), povm.dim());
        std::string label;
        for (const auto idx : block) {
            if (idx >= povm.size()) fail(ErrorKind::BadPartition, "index " + std::to_string(idx) + " out of range");
            if (seen[idx]) fail(ErrorKind::BadPartition, "index " + std::to_string(idx) + " appears twice");
            seen[idx] = true;
            f += povm.effect(idx);
            label += (label.empty() ? "" : "+") + povm.labels()[idx];
        }
        effects.push_back(f);
        labels.push_back(label);
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
        fail(ErrorKind::BadPartition, "partition does not cover every outcome");
    }
    return Povm(povm.dim(), std::move(effects), std::move(labels));
}

/// Partition grouping fine_grain(inst) back into the branches of inst.
inline std::vector<std::vector<std::size_t>> branch_partition(const Instrument& inst) {
    std::vector<std::vector<std::size_t>> out;
    std::size_t k = 0;
    for (const auto& br : inst.branches()) {
        std::vector<std::size_t> block;
        for (std::size_t i = 0; i < br.size(); ++i) block.push_back(k++);
        out.push_back(std::move(block));
    }
    return out;
}

struct Procedure {
    Povm povm;
    Instrument instrument;
};

/// Runs procedure i with probability weights[i] and records i in the
/// outcome: effects lambda_i F^i_b, Kraus operators sqrt(lambda_i) A^i_b.
inline Procedure convex_mix(const std::vector<Procedure>& procedures, const std::vector<double>& weights,
                            const Tolerances& tol = kDefaultTolerances) {
    if (procedures.empty() || procedures.size() != weights.size()) {
        fail(ErrorKind::WeightError, "need one weight per procedure");
    }
    double total = 0.0;
    for (const double w : weights) {
        if (!(w >= 0.0)) fail(ErrorKind::WeightError, "weights must be nonnegative");
        total += w;
    }
    if (std::abs(total - 1.0) > tol.weight_sum) fail(ErrorKind::WeightError, "weights sum to " + std::to_string(total));
    const int d = procedures.front().povm.dim();
    std::vector<Matrix> effects;
    std::vector<std::string> labels;
    std::vector<Instrument::Branch> branches;
    for (std::size_t i = 0; i < procedures.size(); ++i) {
        const auto& proc = procedures[i];
        if (proc.povm.dim() != d || proc.instrument.dim() != d) fail(ErrorKind::DimMismatch, "procedures differ in dimension");
        const double lambda = weights[i];
        const double root = std::sqrt(lambda);
        for (std::size_t b = 0; b < proc.povm.size(); ++b) {
            effects.push_back(lambda * proc.povm.effect(b));
            labels.push_back(std::to_string(i) + ":" + proc.povm.labels()[b]);
        }
        for (const auto& br : proc.instrument.branches()) {
            Instrument::Branch scaled;
            for (const auto& a : br) scaled.push_back(root * a);
            branches.push_back(std::move(scaled));
        }
    }
    Povm povm(d, std::move(effects), labels);
    if (branches.size() == labels.size()) {
        return {std::move(povm), Instrument(d, std::move(branches), std::move(labels))};
    }
    return {std::move(povm), Instrument(d, std::move(branches))};
}

/// A_i = sum_j m_ij B_j. m is r x s (r >= s) with orthonormal columns,
/// which is what keeps both sum A^dagger A and the channel unchanged.
inline std::vector<Matrix> remix(const std::vector<Matrix>& kraus, const Matrix& m,
                                 const Tolerances& tol = kDefaultTolerances) {
    if (static_cast<Eigen::Index>(kraus.size()) != m.cols()) {
        fail(ErrorKind::DimMismatch, "mixing matrix has " + std::to_string(m.cols()) + " columns for " +
                                         std::to_string(kraus.size()) + " operators");
    }
    const double r = max_abs(m.adjoint() * m - Matrix::Identity(m.cols(), m.cols()));
    if (r > tol.algebraic) fail(ErrorKind::NotIsometry, "m^dagger m differs from identity by " + std::to_string(r));
    std::vector<Matrix> out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Matrix a = Matrix::Zero(kraus.front().rows(), kraus.front().cols());
        for (Eigen::Index j = 0; j < m.cols(); ++j) a += m(i, j) * kraus[static_cast<std::size_t>(j)];
        out.push_back(std::move(a));
    }
    return out;
}

/// A_bi = lambda_bi |psi0><bi| from the eigen-decomposition of sqrt(F_b):
/// compatible with the POVM and always resets the state to psi0.
inline Instrument reset_instrument(const Povm& povm, const PureState& psi0,
                                   const Tolerances& tol = kDefaultTolerances) {
    require_valid(povm, tol);
    if (psi0.dim() != povm.dim()) fail(ErrorKind::DimMismatch, "reset state dimension differs from POVM");
    std::vector<Instrument::Branch> branches;
    for (const auto& f : povm.effects()) {
        const auto e = herm_eig(mat_sqrt(f, tol), tol);
        Instrument::Branch br;
        for (Eigen::Index i = 0; i < e.values.size(); ++i) {
            if (e.values(i) <= 1e-15) continue;
            br.push_back(e.values(i) * psi0.amplitudes() * e.vectors.col(i).adjoint());
        }
        if (br.empty()) br.push_back(Matrix::Zero(povm.dim(), povm.dim()));
        branches.push_back(std::move(br));
    }
    return Instrument(povm.dim(), std::move(branches), povm.labels());
}

/// Random isometry C^s -> C^r (r >= s): first s columns of a Haar unitary.
inline Matrix random_isometry(int rows, int cols, Rng& rng) {
    return haar_unitary(rows, rng).leftCols(cols);
}

}  // namespace qidt
