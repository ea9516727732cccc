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

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qidt/disturbance.hpp"
#include "qidt/frontier.hpp"
#include "qidt/galois.hpp"
#include "qidt/information.hpp"
#include "qidt/io.hpp"
#include "qidt/measurement.hpp"
#include "qidt/parallel.hpp"

namespace qidt::cli {

enum ExitCode : int {
    kOk = 0,
    kValidationFailure = 1,
    kUsage = 2,
    kNotConverged = 3,
};

/// Options shared by every subcommand.
struct RunConfig {
    std::optional<std::uint64_t> seed;
    std::size_t samples = 0;
    int restarts = 16;
    bool bits = false;
    unsigned threads = 0;
    std::string output;
    Tolerances tol;

    /// --seed, else QF_SEED, else 0. Never the clock.
    std::uint64_t resolved_seed() const {
        if (seed) return *seed;
        if (const char* env = std::getenv("QF_SEED"); env != nullptr && *env != '\0') {
            try {
                return std::stoull(env);
            } catch (const std::exception&) {
                fail(ErrorKind::Parse, "QF_SEED is not an unsigned integer");
            }
        }
        return 0;
    }
};

namespace detail {

inline void add_common(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--seed", cfg.seed, "64-bit RNG seed (default: $QF_SEED or 0)");
    cmd->add_option("--threads", cfg.threads, "worker cap (0 = hardware)");
    cmd->add_option("--tol-algebraic", cfg.tol.algebraic, "Hermiticity/isometry tolerance");
    cmd->add_option("--tol-reconstruction", cfg.tol.reconstruction, "completeness tolerance");
    cmd->add_option("--tol-psd", cfg.tol.psd_slack, "negative-eigenvalue slack");
}

inline void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
    } else {
        io::write_text_file(path, text);
    }
}

}  // namespace detail

/// Entry point shared by the qidt binary and the tests.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Information-disturbance tradeoff toolkit"};
    app.require_subcommand(1);
    RunConfig cfg;

    // mub
    int mub_p = 0, mub_n = 1, mub_cap = kDefaultMubCap;
    auto* mub = app.add_subcommand("mub", "write the Wootters-Fields mutually unbiased bases for d = p^n");
    mub->add_option("--p", mub_p, "odd prime")->required();
    mub->add_option("--n", mub_n, "extension degree");
    mub->add_option("--cap", mub_cap, "largest dimension allowed");
    mub->add_option("--out", cfg.output, "output JSON path (default stdout)");
    detail::add_common(mub, cfg);

    // design-check
    std::string design_in;
    int design_trials = 100;
    auto* design = app.add_subcommand("design-check", "test whether the vectors in a basis file form a 2-design");
    design->add_option("--in", design_in, "JSON array of basis matrices")->required();
    design->add_option("--trials", design_trials, "random quadratic functionals");
    detail::add_common(design, cfg);

    // disturbance
    std::string povm_path, method = "exact", design_path;
    auto* dist = app.add_subcommand("disturbance", "minimal uniform-ensemble disturbance of a POVM");
    dist->add_option("--povm", povm_path, "POVM JSON")->required();
    dist->add_option("--method", method, "exact | mc | design")->check(CLI::IsMember({"exact", "mc", "design"}));
    dist->add_option("--samples", cfg.samples, "Monte Carlo samples (default 100000)");
    dist->add_option("--design", design_path, "basis file used by --method design");
    detail::add_common(dist, cfg);

    // info
    auto* info = app.add_subcommand("info", "mutual information of a POVM on the uniform ensemble");
    info->add_option("--povm", povm_path, "POVM JSON")->required();
    info->add_option("--samples", cfg.samples, "Monte Carlo samples (default 100000)");
    info->add_flag("--bits", cfg.bits, "report in bits instead of nats");
    detail::add_common(info, cfg);

    // frontier
    int front_d = 2, front_grid = 11, max_iter = 500;
    bool json_out = false, allow_nonconverged = false, use_design = false;
    auto* front = app.add_subcommand("frontier", "information-disturbance points of the isotropic family");
    front->add_option("--d", front_d, "system dimension");
    front->add_option("--grid", front_grid, "grid points on [0, d/(d+1)]");
    front->add_option("--samples", cfg.samples, "Haar input states per ensemble (default 200)");
    front->add_option("--restarts", cfg.restarts, "optimizer restarts per point");
    front->add_option("--max-iter", max_iter, "optimizer iterations per restart");
    front->add_option("--out", cfg.output, "output path (default stdout)");
    front->add_flag("--json", json_out, "emit JSON with optimizer metadata instead of CSV");
    front->add_flag("--design", use_design, "use the MUB design as input ensemble (odd prime power d)");
    front->add_flag("--allow-nonconverged", allow_nonconverged, "exit 0 even if a point did not converge");
    detail::add_common(front, cfg);

    // twirl-check
    int twirl_states = 5;
    auto* twirl = app.add_subcommand("twirl-check", "compare the twirled square-root channel with its depolarizing form");
    twirl->add_option("--povm", povm_path, "POVM JSON")->required();
    twirl->add_option("--samples", cfg.samples, "Haar unitaries (default 10000)");
    twirl->add_option("--states", twirl_states, "random input states");
    detail::add_common(twirl, cfg);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return kUsage;
    }

    try {
        set_max_threads(cfg.threads);
        Rng rng(cfg.resolved_seed());

        if (*mub) {
            const auto set = wootters_fields_mub(mub_p, mub_n, mub_cap);
            detail::emit(io::bases_to_json(set.bases).dump() + "\n", cfg.output, out);
            if (!cfg.output.empty() && cfg.output != "-") {
                out << "wrote " << set.bases.size() << " bases of dimension " << set.d << " to " << cfg.output << "\n";
            }
            return kOk;
        }

        if (*design) {
            const std::string text = io::read_text_file(design_in);
            if (io::is_blank(text)) {
                err << "design-check: " << design_in << " is empty\n";
                return kUsage;
            }
            const auto bases = io::bases_from_json(io::parse_json(text, design_in));
            if (bases.empty()) {
                err << "design-check: input contains no bases\n";
                return kUsage;
            }
            const auto vectors = io::design_vectors(bases);
            const double dev = design_check(vectors, design_trials, rng);
            const bool pass = dev < 1e-10;
            out << io::json{{"vectors", vectors.size()}, {"trials", design_trials}, {"max_deviation", dev}, {"pass", pass}}.dump()
                << "\n";
            return pass ? kOk : kValidationFailure;
        }

        if (*dist) {
            const Povm povm = io::povm_from_json(io::read_json_file(povm_path), cfg.tol);
            DisturbanceReport rep;
            if (method == "exact") {
                rep = min_disturbance_uniform(povm, cfg.tol);
            } else if (method == "mc") {
                rep = avg_fidelity_mc(sqrt_instrument(povm, cfg.tol), cfg.samples ? cfg.samples : 100000, rng);
            } else {
                if (design_path.empty()) {
                    err << "disturbance --method design needs --design FILE\n";
                    return kUsage;
                }
                const auto vectors = io::design_vectors(io::bases_from_json(io::read_json_file(design_path)));
                if (vectors.empty()) {
                    err << "design file contains no vectors\n";
                    return kUsage;
                }
                rep = avg_fidelity_design(sqrt_instrument(povm, cfg.tol), vectors);
            }
            out << io::to_json(rep).dump() << "\n";
            return kOk;
        }

        if (*info) {
            const Povm povm = io::povm_from_json(io::read_json_file(povm_path), cfg.tol);
            const auto rep = info_uniform_mc(povm, cfg.samples ? cfg.samples : 100000, rng, cfg.tol);
            out << io::to_json(rep.in_units(cfg.bits ? LogBase::Bits : LogBase::Nats)).dump() << "\n";
            return kOk;
        }

        if (*front) {
            FrontierOptions opt;
            opt.ensemble_size = cfg.samples ? static_cast<int>(cfg.samples) : 200;
            opt.use_design = use_design;
            opt.seesaw.restarts = cfg.restarts;
            opt.seesaw.max_iter = max_iter;
            const auto curve = frontier_curve(front_d, frontier_grid(front_d, front_grid), opt, rng);
            detail::emit(json_out ? io::to_json(curve).dump(2) + "\n" : io::frontier_csv(curve), cfg.output, out);
            for (const auto& w : curve.warnings) err << "warning: " << w << "\n";
            bool all_converged = true;
            for (const auto& pt : curve.points) all_converged = all_converged && pt.converged;
            if (!all_converged && !allow_nonconverged) {
                err << "warning: optimizer did not converge at every grid point\n";
                return kNotConverged;
            }
            return kOk;
        }

        if (*twirl) {
            const Povm povm = io::povm_from_json(io::read_json_file(povm_path), cfg.tol);
            const double p_star = twirl_parameter(povm);
            const std::size_t n = cfg.samples ? cfg.samples : 10000;
            double worst = 0.0;
            for (int s = 0; s < twirl_states; ++s) {
                const auto rho = random_density(povm.dim(), rng);
                const auto est = twirl_channel(povm, rho, n, rng, cfg.tol);
                worst = std::max(worst, twirl_z_score(est, depolarize(rho, p_star).matrix()));
            }
            const bool pass = worst <= 5.0;
            out << io::json{{"p_star", p_star}, {"samples", n}, {"states", twirl_states}, {"max_z", worst}, {"pass", pass}}.dump()
                << "\n";
            return pass ? kOk : kValidationFailure;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kValidationFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kValidationFailure;
    }
    return kUsage;
}

inline int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, out, err);
}

}  // namespace qidt::cli
