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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qidt/cli.hpp"
#include "qidt/io.hpp"

namespace qidt {
namespace {

namespace fs = std::filesystem;
using io::json;

const std::string kSamples = QIDT_SAMPLES_DIR;

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
  public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() / ("qidt_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string file(const std::string& name) const { return (path_ / name).string(); }
    std::string write(const std::string& name, const std::string& text) const {
        io::write_text_file(file(name), text);
        return file(name);
    }

  private:
    fs::path path_;
};

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::InternalError;
}

std::string message_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

TEST(MatrixJson, RoundTripIsExact) {
    Rng rng(1);
    const Matrix m = gaussian_matrix(3, 2, rng);
    const json j = io::to_json(m);
    EXPECT_EQ(j["rows"], 3);
    EXPECT_EQ(j["cols"], 2);
    EXPECT_EQ(j["data"].size(), 6u);
    EXPECT_EQ(j["data"][1][0].get<double>(), m(0, 1).real());  // row-major
    EXPECT_EQ(io::matrix_from_json(json::parse(j.dump())), m);
}

TEST(MatrixJson, ErrorsNameTheInvariant) {
    json j = io::to_json(Matrix(identity(2)));
    j["data"].erase(0);
    EXPECT_NE(message_of([&] { io::matrix_from_json(j); }).find("entries length = rows x cols"), std::string::npos);
    json nan = io::to_json(Matrix(identity(2)));
    nan["data"][0][0] = std::nan("");
    EXPECT_NE(message_of([&] { io::matrix_from_json(nan); }).find("all entries finite"), std::string::npos);
    EXPECT_EQ(kind_of([] { io::matrix_from_json(json{{"rows", 1}}); }), ErrorKind::Parse);
    EXPECT_EQ(kind_of([] { io::matrix_from_json(json{{"rows", 1}, {"cols", 1}, {"data", {{1.0}}}}); }), ErrorKind::Parse);
}

TEST(PovmJson, RoundTripAndValidation) {
    const Povm t = trine_povm();
    const Povm back = io::povm_from_json(json::parse(io::to_json(t).dump()));
    ASSERT_EQ(back.size(), 3u);
    for (std::size_t b = 0; b < 3; ++b) EXPECT_EQ(back.effect(b), t.effect(b));
    EXPECT_EQ(back.labels(), t.labels());

    const Povm bad(2, {identity(2), identity(2)});
    const std::string msg = message_of([&] { io::povm_from_json(io::to_json(bad)); });
    EXPECT_NE(msg.find("POVM invariant violated"), std::string::npos) << msg;
    EXPECT_NE(msg.find("effects sum to identity"), std::string::npos) << msg;
}

TEST(PovmJson, SamplesAreValid) {
    for (const char* name : {"qubit_basis.json", "qubit_trine.json", "identity_qubit.json", "qutrit_basis.json"}) {
        EXPECT_NO_THROW(io::povm_from_json(io::read_json_file(kSamples + "/" + name))) << name;
    }
}

TEST(InstrumentJson, RoundTripAndValidation) {
    const Instrument inst = sqrt_instrument(trine_povm());
    const Instrument back = io::instrument_from_json(json::parse(io::to_json(inst).dump()));
    ASSERT_EQ(back.size(), 3u);
    EXPECT_EQ(back.branch(1)[0], inst.branch(1)[0]);
    const Instrument bad(2, {{identity(2)}, {identity(2)}});
    EXPECT_EQ(kind_of([&] { io::instrument_from_json(io::to_json(bad)); }), ErrorKind::Validation);
}

TEST(BasesJson, ArrayAndObjectForms) {
    const auto mub = wootters_fields_mub(3, 1);
    const json arr = io::bases_to_json(mub.bases);
    ASSERT_TRUE(arr.is_array());
    EXPECT_EQ(io::bases_from_json(arr).size(), 4u);
    EXPECT_EQ(io::bases_from_json(json{{"bases", arr}}).size(), 4u);
    EXPECT_EQ(io::design_vectors(mub.bases).size(), 12u);
}

TEST(ReportJson, Fields) {
    const json d = io::to_json(min_disturbance_uniform(basis_povm(2)));
    EXPECT_EQ(d["method"], "exact-pi");
    EXPECT_TRUE(d["stderr"].is_null());
    EXPECT_TRUE(d["samples"].is_null());
    Rng rng(2);
    const json i = io::to_json(info_uniform_mc(basis_povm(2), 100, rng).in_units(LogBase::Bits));
    EXPECT_EQ(i["method"], "monte-carlo");
    EXPECT_EQ(i["log_base"], "bits");
    EXPECT_EQ(i["samples"], 100);
    EXPECT_TRUE(i["stderr"].is_number());
}

TEST(Csv, SeventeenDigitsAndHeader) {
    EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(io::format_double(0.0), "0");
    EXPECT_EQ(std::stod(io::format_double(1.0 / 3.0)), 1.0 / 3.0);
    FrontierCurve c;
    c.d = 2;
    FrontierPoint pt;
    pt.p = 2.0 / 3.0;
    pt.disturbance = 1.0 / 3.0;
    c.points.push_back(pt);
    const std::string csv = io::frontier_csv(c);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "p,disturbance,info_lb_nats,line_info_nats,converged");
    EXPECT_EQ(csv.find('\r'), std::string::npos);
    EXPECT_NE(csv.find("0.66666666666666663,0.33333333333333331,0,0,true\n"), std::string::npos) << csv;
}

TEST(ReadJson, EmptyAndMissingFiles) {
    TempDir tmp;
    const auto empty = tmp.write("empty.json", "  \n");
    EXPECT_EQ(kind_of([&] { io::read_json_file(empty); }), ErrorKind::Parse);
    EXPECT_EQ(kind_of([&] { io::read_json_file(tmp.file("missing.json")); }), ErrorKind::Parse);
    const auto broken = tmp.write("broken.json", "{\"dim\": ");
    EXPECT_EQ(kind_of([&] { io::read_json_file(broken); }), ErrorKind::Parse);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run_cli({}).code, cli::kUsage);
    EXPECT_EQ(run_cli({"bogus"}).code, cli::kUsage);
    EXPECT_EQ(run_cli({"mub"}).code, cli::kUsage);
    EXPECT_EQ(run_cli({"disturbance", "--povm", kSamples + "/qubit_basis.json", "--method", "fancy"}).code, cli::kUsage);
    EXPECT_EQ(run_cli({"--help"}).code, cli::kOk);
}

TEST(Cli, MubSubcommand) {
    auto r = run_cli({"mub", "--p", "3", "--n", "1"});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    auto bases = io::bases_from_json(json::parse(r.out));
    ASSERT_EQ(bases.size(), 4u);
    EXPECT_EQ(bases[0].rows(), 3);

    TempDir tmp;
    r = run_cli({"mub", "--p", "3", "--n", "2", "--out", tmp.file("mub9.json")});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    bases = io::bases_from_json(io::read_json_file(tmp.file("mub9.json")));
    ASSERT_EQ(bases.size(), 10u);
    EXPECT_EQ(bases[0].rows(), 9);
    EXPECT_LT(check_mub(bases).max_overlap_deviation, 1e-12);

    r = run_cli({"mub", "--p", "2"});
    EXPECT_EQ(r.code, cli::kValidationFailure);
    EXPECT_NE(r.err.find("even prime unsupported"), std::string::npos) << r.err;
}

TEST(Cli, DesignCheckSubcommand) {
    TempDir tmp;
    ASSERT_EQ(run_cli({"mub", "--p", "5", "--out", tmp.file("mub5.json")}).code, cli::kOk);
    auto r = run_cli({"design-check", "--in", tmp.file("mub5.json")});
    EXPECT_EQ(r.code, cli::kOk) << r.out << r.err;
    EXPECT_TRUE(json::parse(r.out)["pass"].get<bool>());

    const auto std_basis = tmp.write("std.json", io::bases_to_json({identity(2)}).dump());
    r = run_cli({"design-check", "--in", std_basis});
    EXPECT_EQ(r.code, cli::kValidationFailure);
    EXPECT_FALSE(json::parse(r.out)["pass"].get<bool>());

    EXPECT_EQ(run_cli({"design-check", "--in", tmp.write("empty.json", "")}).code, cli::kUsage);
    EXPECT_EQ(run_cli({"design-check", "--in", tmp.write("none.json", "[]")}).code, cli::kUsage);
    EXPECT_EQ(run_cli({"design-check"}).code, cli::kUsage);
}

TEST(Cli, DisturbanceSubcommand) {
    auto r = run_cli({"disturbance", "--povm", kSamples + "/qubit_basis.json"});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    json j = json::parse(r.out);
    EXPECT_NEAR(j["disturbance"].get<double>(), 1.0 / 3.0, 1e-15);
    EXPECT_EQ(j["method"], "exact-pi");

    r = run_cli({"disturbance", "--povm", kSamples + "/qubit_basis.json", "--method", "mc", "--samples", "100000"});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    j = json::parse(r.out);
    EXPECT_NEAR(j["disturbance"].get<double>(), 1.0 / 3.0, 5.0 * j["stderr"].get<double>());
    EXPECT_EQ(j["samples"], 100000);

    r = run_cli({"disturbance", "--povm", kSamples + "/identity_qubit.json"});
    EXPECT_EQ(json::parse(r.out)["disturbance"].get<double>(), 0.0);

    TempDir tmp;
    ASSERT_EQ(run_cli({"mub", "--p", "3", "--out", tmp.file("mub3.json")}).code, cli::kOk);
    r = run_cli({"disturbance", "--povm", kSamples + "/qutrit_basis.json", "--method", "design", "--design",
                 tmp.file("mub3.json")});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    EXPECT_NEAR(json::parse(r.out)["avg_fidelity"].get<double>(), 0.5, 1e-12);
    EXPECT_EQ(run_cli({"disturbance", "--povm", kSamples + "/qutrit_basis.json", "--method", "design"}).code,
              cli::kUsage);
}

TEST(Cli, MalformedPovmNamesInvariant) {
    TempDir tmp;
    const auto bad = tmp.write("bad.json", io::to_json(Povm(2, {identity(2), identity(2)})).dump());
    auto r = run_cli({"disturbance", "--povm", bad});
    EXPECT_EQ(r.code, cli::kValidationFailure);
    EXPECT_NE(r.err.find("effects sum to identity"), std::string::npos) << r.err;

    json j = io::to_json(basis_povm(2));
    j["effects"][0]["data"].erase(0);
    r = run_cli({"info", "--povm", tmp.write("short.json", j.dump())});
    EXPECT_EQ(r.code, cli::kValidationFailure);
    EXPECT_NE(r.err.find("entries length = rows x cols"), std::string::npos) << r.err;

    r = run_cli({"info", "--povm", tmp.write("garbage.json", "not json")});
    EXPECT_EQ(r.code, cli::kValidationFailure);
}

TEST(Cli, InfoSubcommand) {
    auto r = run_cli({"info", "--povm", kSamples + "/qubit_basis.json"});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    json j = json::parse(r.out);
    EXPECT_NEAR(j["mutual_info"].get<double>(), std::log(2.0) - 0.5, 5.0 * j["stderr"].get<double>());
    EXPECT_EQ(j["log_base"], "nats");

    r = run_cli({"info", "--povm", kSamples + "/qubit_basis.json", "--bits"});
    j = json::parse(r.out);
    EXPECT_NEAR(j["mutual_info"].get<double>(), (std::log(2.0) - 0.5) / std::log(2.0), 5.0 * j["stderr"].get<double>());
    EXPECT_NEAR(j["mutual_info"].get<double>(), 0.2787, 0.003);

    r = run_cli({"info", "--povm", kSamples + "/identity_qubit.json"});
    EXPECT_EQ(json::parse(r.out)["mutual_info"].get<double>(), 0.0);
}

TEST(Cli, SeedsAndDeterminism) {
    const std::vector<std::string> base{"info", "--povm", kSamples + "/qubit_trine.json", "--samples", "5000"};
    auto with = [&](std::vector<std::string> extra) {
        auto args = base;
        args.insert(args.end(), extra.begin(), extra.end());
        return run_cli(args).out;
    };
    ::unsetenv("QF_SEED");
    const std::string def = with({});
    EXPECT_EQ(def, with({"--seed", "0"}));
    EXPECT_EQ(with({"--seed", "7"}), with({"--seed", "7"}));
    EXPECT_NE(with({"--seed", "7"}), with({"--seed", "8"}));
    EXPECT_EQ(with({"--threads", "1"}), with({"--threads", "3"}));
    ::setenv("QF_SEED", "7", 1);
    EXPECT_EQ(with({}), with({"--seed", "7"}));
    EXPECT_EQ(with({"--seed", "0"}), def);
    ::setenv("QF_SEED", "seven", 1);
    EXPECT_EQ(run_cli(base).code, cli::kValidationFailure);
    ::unsetenv("QF_SEED");
}

TEST(Cli, FrontierSubcommand) {
    const std::vector<std::string> args{"frontier", "--d",        "2",  "--grid", "3", "--samples", "20",
                                        "--restarts", "1",        "--max-iter", "40", "--seed",   "3",
                                        "--allow-nonconverged"};
    const auto a = run_cli(args), b = run_cli(args);
    ASSERT_EQ(a.code, cli::kOk) << a.err;
    EXPECT_EQ(a.out, b.out);
    std::istringstream lines(a.out);
    std::vector<std::string> rows;
    for (std::string line; std::getline(lines, line);) rows.push_back(line);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], "p,disturbance,info_lb_nats,line_info_nats,converged");
    EXPECT_EQ(rows[1].substr(0, rows[1].rfind(',')), "0,0,0,0");
    EXPECT_EQ(rows[3].substr(0, rows[3].find(',', rows[3].find(',') + 1)), "0.66666666666666663,0.33333333333333331");

    auto json_args = args;
    json_args.push_back("--json");
    const auto jr = run_cli(json_args);
    ASSERT_EQ(jr.code, cli::kOk) << jr.err;
    const json j = json::parse(jr.out);
    EXPECT_EQ(j["points"].size(), 3u);
    EXPECT_TRUE(j["points"][2]["optimizer_meta"].contains("best_iterations"));
}

TEST(Cli, FrontierNonConvergenceIsSoftFailure) {
    const std::vector<std::string> args{"frontier", "--d",        "2", "--grid",        "2",
                                        "--samples", "20",        "--restarts", "1", "--max-iter", "2"};
    const auto r = run_cli(args);
    EXPECT_EQ(r.code, cli::kNotConverged);
    EXPECT_NE(r.err.find("did not converge"), std::string::npos);
    EXPECT_FALSE(r.out.empty());
}

TEST(Cli, TwirlCheckSubcommand) {
    const auto r = run_cli({"twirl-check", "--povm", kSamples + "/qubit_basis.json", "--samples", "4000", "--states", "2"});
    ASSERT_EQ(r.code, cli::kOk) << r.err << r.out;
    const json j = json::parse(r.out);
    EXPECT_NEAR(j["p_star"].get<double>(), 2.0 / 3.0, 1e-15);
    EXPECT_TRUE(j["pass"].get<bool>());
}

}  // namespace
}  // namespace qidt
