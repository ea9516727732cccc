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

namespace qidt {

/// Numerical slack used by validators and property checks. One record so
/// the CLI can override everything from a single place.
struct Tolerances {
    double algebraic = 1e-10;       // Hermiticity, isometry, orthogonality
    double reconstruction = 1e-9;   // completeness, factorization residuals
    double psd_slack = 1e-10;       // most negative eigenvalue tolerated
    double symmetrize_max = 1e-8;   // beyond this an input is not Hermitian at all
    double weight_sum = 1e-12;      // probability weights must sum to 1
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace qidt
