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

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qidt/information.hpp"
#include "qidt/measurement.hpp"
#include "qidt/parallel.hpp"

namespace qidt {
namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

std::vector<WeightedPure> random_ensemble(int d, int n, Rng& rng) {
    std::vector<double> w(static_cast<std::size_t>(n));
    double total = 0.0;
    for (auto& x : w) total += (x = 0.1 + rng.uniform());
    std::vector<WeightedPure> out;
    for (int i = 0; i < n; ++i) out.push_back({haar_state(d, rng), w[static_cast<std::size_t>(i)] / total});
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < out.size(); ++i) s += out[i].weight;
    out.back().weight = 1.0 - s;
    return out;
}

TEST(FinegrainedExact, Examples) {
    EXPECT_EQ(info_finegrained_exact(1), 0.0);
    EXPECT_NEAR(info_finegrained_exact(2), std::log(2.0) - 0.5, 1e-15);
    EXPECT_NEAR(info_finegrained_exact(2), 0.193147, 1e-6);
    EXPECT_NEAR(info_finegrained_exact(3), std::log(3.0) - 5.0 / 6.0, 1e-15);
    EXPECT_NEAR(info_finegrained_exact(3), 0.265279, 1e-6);
    EXPECT_NEAR(info_finegrained_exact(2, LogBase::Bits), (std::log(2.0) - 0.5) / std::log(2.0), 1e-15);
}

TEST(FinegrainedExact, MatchesQuadratureOverOverlapDensity) {
    // For a basis measurement H(B) = log d and H(B|psi) = -d E[x log x].
    for (int d = 2; d <= 7; ++d) {
        const double quad = std::log(static_cast<double>(d)) + d * oracle::overlap_expectation(d, xlogx);
        EXPECT_NEAR(info_finegrained_exact(d), quad, 1e-7) << "d=" << d;
    }
}

TEST(XlogxIntegral, Examples) {
    EXPECT_EQ(xlogx_integral(1), 0.0);
    EXPECT_NEAR(xlogx_integral(2), -0.25, 1e-15);
    for (int d = 2; d <= 7; ++d) EXPECT_NEAR(xlogx_integral(d), oracle::overlap_expectation(d, xlogx), 1e-7);
}

TEST(XlogxIntegral, MonteCarloQutrit) {
    Rng rng(1);
    const RunningStats s = monte_carlo(100000, rng, [](Rng& r) { return xlogx(std::norm(haar_state(3, r).amplitudes()(0))); });
    EXPECT_NEAR(s.mean, -(0.5 + 1.0 / 3.0) / 3.0, 5.0 * s.stderr_of_mean());
    EXPECT_NEAR(xlogx_integral(3), -(0.5 + 1.0 / 3.0) / 3.0, 1e-15);
}

TEST(JonesIntegral, Examples) {
    const auto z = PureState::basis(2, 0), o = PureState::basis(2, 1);
    EXPECT_NEAR(jones_overlap_integral(z, z), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(jones_overlap_integral(z, o), 1.0 / 6.0, 1e-15);
    EXPECT_THROW(jones_overlap_integral(z, PureState::basis(3, 0)), Error);
    for (int d = 2; d <= 6; ++d) {
        const double quad = oracle::overlap_expectation(d, [](double x) { return x * x; });
        EXPECT_NEAR(jones_overlap_integral(PureState::basis(d, 0), PureState::basis(d, 0)), quad, 1e-9);
    }
}

TEST(JonesIntegral, MonteCarloRandomPair) {
    Rng rng(2);
    const auto a = haar_state(4, rng), b = haar_state(4, rng);
    const RunningStats s = monte_carlo(100000, rng, [&](Rng& r) {
        const Vector psi = haar_state(4, r).amplitudes();
        return std::norm(psi.dot(a.amplitudes())) * std::norm(psi.dot(b.amplitudes()));
    });
    EXPECT_NEAR(s.mean, jones_overlap_integral(a, b), 5.0 * s.stderr_of_mean());
}

TEST(InfoUniformMc, TrivialPovmIsExactlyZero) {
    Rng rng(3);
    const auto r = info_uniform_mc(identity_povm(3), 1000, rng);
    EXPECT_EQ(r.mutual_info, 0.0);
    EXPECT_EQ(r.standard_error.value(), 0.0);
}

TEST(InfoUniformMc, QubitBasisAndTrine) {
    for (const auto& p : {basis_povm(2), trine_povm()}) {
        Rng rng(4);
        const auto r = info_uniform_mc(p, 100000, rng);
        EXPECT_NEAR(r.mutual_info, std::log(2.0) - 0.5, 5.0 * r.standard_error.value());
        EXPECT_NEAR(r.mutual_info, r.h_b - r.h_b_given_psi, 1e-12);
        EXPECT_EQ(r.method, InfoMethod::MonteCarlo);
        EXPECT_EQ(r.samples.value(), 100000u);
    }
}

TEST(InfoUniformMc, RandomFinegrainedPovmsConverge) {
    Rng rng(5);
    for (int d = 2; d <= 5; ++d) {
        const Povm p = random_rank_one_povm(d, 2 * d, rng);
        const auto r = info_uniform_mc(p, 40000, rng);
        EXPECT_NEAR(r.mutual_info, info_finegrained_exact(d), 5.0 * r.standard_error.value()) << "d=" << d;
    }
}

TEST(InfoUniformMc, BitsConversion) {
    Rng rng(6);
    const auto nats = info_uniform_mc(basis_povm(2), 20000, rng);
    const auto bits = nats.in_units(LogBase::Bits);
    EXPECT_NEAR(bits.mutual_info, nats.mutual_info / std::log(2.0), 1e-15);
    EXPECT_NEAR(*bits.standard_error, *nats.standard_error / std::log(2.0), 1e-15);
    EXPECT_EQ(bits.log_base, LogBase::Bits);
    EXPECT_NEAR(bits.in_units(LogBase::Nats).mutual_info, nats.mutual_info, 1e-15);
}

TEST(InfoUniformMc, CoarseGrainingDoesNotIncreaseInformation) {
    Rng rng(7);
    const Povm fine = random_povm(3, 4, rng);
    const Povm coarse = coarse_grain(fine, {{0, 1}, {2, 3}});
    Rng a(8), b(8);
    const auto rf = info_uniform_mc(fine, 40000, a);
    const auto rc = info_uniform_mc(coarse, 40000, b);
    EXPECT_LE(rc.mutual_info, rf.mutual_info + 5.0 * std::hypot(*rf.standard_error, *rc.standard_error));
}

TEST(FiniteEnsemble, Examples) {
    EXPECT_NEAR(info_finite_ensemble(basis_povm(2), {{PureState::basis(2, 0), 1.0}}).mutual_info, 0.0, 1e-15);
    const auto r = info_finite_ensemble(basis_povm(2), {{PureState::basis(2, 0), 0.5}, {PureState::basis(2, 1), 0.5}});
    EXPECT_NEAR(r.mutual_info, std::log(2.0), 1e-15);
    EXPECT_EQ(r.method, InfoMethod::FiniteEnsemble);
}

TEST(FiniteEnsemble, MixingWithDoNothingScalesInformation) {
    Rng rng(9);
    const auto ens = random_ensemble(3, 6, rng);
    const Povm f = random_povm(3, 3, rng);
    const double base = info_finite_ensemble(f, ens).mutual_info;
    for (const double alpha : {0.0, 0.25, 0.5, 0.9}) {
        const auto mix = convex_mix({{identity_povm(3), Instrument::identity_instrument(3)}, {f, sqrt_instrument(f)}},
                                    {alpha, 1.0 - alpha});
        EXPECT_NEAR(info_finite_ensemble(mix.povm, ens).mutual_info, (1.0 - alpha) * base, 1e-10);
    }
}

TEST(FiniteEnsemble, FlaggedMixtureIsLinear) {
    Rng rng(10);
    const auto ens = random_ensemble(2, 5, rng);
    const Povm f1 = random_povm(2, 2, rng), f2 = random_povm(2, 3, rng), f3 = basis_povm(2);
    const std::vector<double> w{0.2, 0.5, 0.3};
    const auto mix = convex_mix({{f1, sqrt_instrument(f1)}, {f2, sqrt_instrument(f2)}, {f3, sqrt_instrument(f3)}}, w);
    const double expected = w[0] * info_finite_ensemble(f1, ens).mutual_info +
                            w[1] * info_finite_ensemble(f2, ens).mutual_info +
                            w[2] * info_finite_ensemble(f3, ens).mutual_info;
    EXPECT_NEAR(info_finite_ensemble(mix.povm, ens).mutual_info, expected, 1e-10);
}

TEST(FiniteEnsemble, CoarseGrainingMonotone) {
    Rng rng(11);
    for (int t = 0; t < 20; ++t) {
        const auto ens = random_ensemble(3, 4, rng);
        const Povm fine = random_povm(3, 4, rng);
        const Povm coarse = coarse_grain(fine, {{0, 2}, {1}, {3}});
        EXPECT_LE(info_finite_ensemble(coarse, ens).mutual_info, info_finite_ensemble(fine, ens).mutual_info + 1e-12);
    }
}

TEST(FiniteEnsemble, BruteForceEntropies) {
    Rng rng(12);
    const auto ens = random_ensemble(2, 3, rng);
    const Povm p = random_povm(2, 3, rng);
    double hb = 0.0, hcond = 0.0;
    for (std::size_t b = 0; b < p.size(); ++b) {
        double pb = 0.0;
        for (const auto& e : ens) {
            const double q = e.state.amplitudes().dot(p.effect(b) * e.state.amplitudes()).real();
            pb += e.weight * q;
            hcond -= e.weight * q * std::log(q);
        }
        hb -= pb * std::log(pb);
    }
    const auto r = info_finite_ensemble(p, ens);
    EXPECT_NEAR(r.h_b, hb, 1e-12);
    EXPECT_NEAR(r.h_b_given_psi, hcond, 1e-12);
}

TEST(FiniteEnsemble, RejectsBadWeights) {
    try {
        info_finite_ensemble(basis_povm(2), {{PureState::basis(2, 0), 0.5}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::WeightError);
    }
}

}  // namespace
}  // namespace qidt
