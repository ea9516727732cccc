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

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qidt/disturbance.hpp"
#include "qidt/errors.hpp"
#include "qidt/frontier.hpp"
#include "qidt/galois.hpp"
#include "qidt/information.hpp"
#include "qidt/linalg.hpp"
#include "qidt/measurement.hpp"

namespace qidt::io {

using json = nlohmann::json;

namespace detail {
[[noreturn]] inline void bad(const std::string& what) { fail(ErrorKind::Parse, what); }

inline const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

inline int positive_int(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_number_integer() || v.get<long long>() < 1) bad(std::string("\"") + key + "\" must be a positive integer");
    return v.get<int>();
}
}  // namespace detail

// {"rows":r,"cols":c,"data":[[re,im],...]} row-major
inline json to_json(const Matrix& m) {
    json data = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back({m(i, j).real(), m(i, j).imag()});
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline Matrix matrix_from_json(const json& j) {
    const int rows = detail::positive_int(j, "rows");
    const int cols = detail::positive_int(j, "cols");
    const json& data = detail::field(j, "data");
    if (!data.is_array() || data.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
        detail::bad("matrix invariant violated: entries length = rows x cols");
    }
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int k = 0; k < cols; ++k) {
            const json& z = data[static_cast<std::size_t>(i * cols + k)];
            if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
                detail::bad("matrix entries must be [re, im] pairs");
            }
            const double re = z[0].get<double>(), im = z[1].get<double>();
            if (!std::isfinite(re) || !std::isfinite(im)) detail::bad("matrix invariant violated: all entries finite");
            m(i, k) = cplx(re, im);
        }
    return m;
}

inline json to_json(const Povm& povm) {
    json effects = json::array();
    for (const auto& f : povm.effects()) effects.push_back(to_json(f));
    return {{"dim", povm.dim()}, {"effects", std::move(effects)}, {"labels", povm.labels()}};
}

/// Parses and validates; the error names the violated invariant.
inline Povm povm_from_json(const json& j, const Tolerances& tol = kDefaultTolerances) {
    const int dim = detail::positive_int(j, "dim");
    const json& arr = detail::field(j, "effects");
    if (!arr.is_array() || arr.empty()) detail::bad("\"effects\" must be a nonempty array");
    std::vector<Matrix> effects;
    for (const auto& e : arr) effects.push_back(matrix_from_json(e));
    std::vector<std::string> labels;
    if (j.contains("labels")) {
        if (!j["labels"].is_array()) detail::bad("\"labels\" must be an array of strings");
        for (const auto& l : j["labels"]) {
            if (!l.is_string()) detail::bad("\"labels\" must be an array of strings");
            labels.push_back(l.get<std::string>());
        }
    }
    Povm povm(dim, std::move(effects), std::move(labels));
    require_valid(povm, tol);
    return povm;
}

inline json to_json(const Instrument& inst) {
    json branches = json::array();
    for (const auto& br : inst.branches()) {
        json ops = json::array();
        for (const auto& a : br) ops.push_back(to_json(a));
        branches.push_back(std::move(ops));
    }
    return {{"dim", inst.dim()}, {"branches", std::move(branches)}};
}

inline Instrument instrument_from_json(const json& j, const Tolerances& tol = kDefaultTolerances) {
    const int dim = detail::positive_int(j, "dim");
    const json& arr = detail::field(j, "branches");
    if (!arr.is_array() || arr.empty()) detail::bad("\"branches\" must be a nonempty array");
    std::vector<Instrument::Branch> branches;
    for (const auto& br : arr) {
        if (!br.is_array()) detail::bad("each branch must be an array of matrices");
        Instrument::Branch ops;
        for (const auto& a : br) ops.push_back(matrix_from_json(a));
        branches.push_back(std::move(ops));
    }
    Instrument inst(dim, std::move(branches));
    require_valid(inst, tol);
    return inst;
}

/// MUB files are a JSON array of basis matrices (columns are the vectors).
inline json bases_to_json(const std::vector<Matrix>& bases) {
    json out = json::array();
    for (const auto& b : bases) out.push_back(to_json(b));
    return out;
}

inline std::vector<Matrix> bases_from_json(const json& j) {
    const json& arr = j.is_object() ? detail::field(j, "bases") : j;
    if (!arr.is_array()) detail::bad("expected an array of basis matrices");
    std::vector<Matrix> bases;
    for (const auto& b : arr) {
        bases.push_back(matrix_from_json(b));
        if (bases.back().rows() != bases.front().rows()) fail(ErrorKind::DimMismatch, "bases differ in dimension");
    }
    return bases;
}

/// Every column of every basis, as design points.
inline std::vector<PureState> design_vectors(const std::vector<Matrix>& bases) {
    std::vector<PureState> out;
    for (const auto& b : bases)
        for (Eigen::Index c = 0; c < b.cols(); ++c) out.push_back(PureState::normalized(b.col(c)));
    return out;
}

inline json to_json(const DisturbanceReport& r) {
    json j = {{"avg_fidelity", r.avg_fidelity}, {"disturbance", r.disturbance}, {"method", std::string(to_string(r.method))}};
    j["stderr"] = r.standard_error ? json(*r.standard_error) : json(nullptr);
    j["samples"] = r.samples ? json(*r.samples) : json(nullptr);
    return j;
}

inline json to_json(const InfoReport& r) {
    json j = {{"mutual_info", r.mutual_info},
              {"h_b", r.h_b},
              {"h_b_given_psi", r.h_b_given_psi},
              {"method", std::string(to_string(r.method))},
              {"log_base", std::string(to_string(r.log_base))}};
    j["stderr"] = r.standard_error ? json(*r.standard_error) : json(nullptr);
    j["samples"] = r.samples ? json(*r.samples) : json(nullptr);
    return j;
}

/// 17 significant digits, '.' decimal point, independent of locale.
inline std::string format_double(double x) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

inline std::string frontier_csv(const FrontierCurve& curve) {
    std::string out = "p,disturbance,info_lb_nats,line_info_nats,converged\n";
    for (const auto& pt : curve.points) {
        out += format_double(pt.p) + "," + format_double(pt.disturbance) + "," + format_double(pt.info_lower_bound) +
               "," + format_double(pt.line_info) + "," + (pt.converged ? "true" : "false") + "\n";
    }
    return out;
}

inline json to_json(const FrontierCurve& curve) {
    json points = json::array();
    for (const auto& pt : curve.points) {
        points.push_back({{"p", pt.p},
                          {"disturbance", pt.disturbance},
                          {"info_lb_nats", pt.info_lower_bound},
                          {"line_info_nats", pt.line_info},
                          {"converged", pt.converged},
                          {"optimizer_meta",
                           {{"raw_info_nats", pt.raw_info},
                            {"restarts", pt.restarts},
                            {"best_restart", pt.best_restart},
                            {"best_iterations", pt.best_iterations},
                            {"converged", pt.converged}}}});
    }
    return {{"d", curve.d}, {"points", std::move(points)}, {"warnings", curve.warnings}};
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Parse, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline bool is_blank(const std::string& text) { return text.find_first_not_of(" \t\r\n") == std::string::npos; }

inline json parse_json(const std::string& text, const std::string& source) {
    if (is_blank(text)) fail(ErrorKind::Parse, source + " is empty");
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::Parse, source + ": " + e.what());
    }
}

inline json read_json_file(const std::string& path) { return parse_json(read_text_file(path), path); }

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Parse, "cannot write " + path);
    out << text;
}

}  // namespace qidt::io
