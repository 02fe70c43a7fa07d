// Copyright 2026 The qka authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

#include <json.hpp>

#include "qka/density.hpp"
#include "qka/discrimination.hpp"
#include "qka/matrix.hpp"
#include "qka/measurement.hpp"
#include "qka/nosignalling.hpp"
#include "qka/protocol.hpp"
#include "qka/states.hpp"

namespace qka {

/// Reports preserve field order, so byte-determinism follows from code order.
using Json = nlohmann::ordered_json;

/// Render with 12 significant digits (correctly rounded, ties to even).
inline std::string real12_string(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// Round to 12 significant decimal digits. Every floating-point value is
/// passed through this before serialization, so reports are byte-stable at
/// the library's tolerance scale.
inline double round_sig12(double v) {
    return std::strtod(real12_string(v).c_str(), nullptr);
}

inline Json json_real(double v) { return round_sig12(v); }

/// State as an array of [re, im] pairs.
inline Json state_json(const StateVector& s) {
    Json arr = Json::array();
    for (const auto& a : s.amplitudes())
        arr.push_back(Json::array({json_real(a.real()), json_real(a.imag())}));
    return arr;
}

/// Matrix as nested arrays of [re, im] pairs, row by row.
inline Json matrix_json(const Matrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back(Json::array({json_real(m(i, j).real()), json_real(m(i, j).imag())}));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json povm_json(const Povm& p) {
    Json arr = Json::array();
    for (const auto& e : p.elements()) arr.push_back(matrix_json(e));
    return arr;
}

inline Json params_json(const ProtocolParams& p) {
    return Json{{"alpha", json_real(p.alpha)}, {"beta", json_real(p.beta)}};
}

inline Json transcript_json(const Transcript& t) {
    Json j;
    j["params"] = params_json(t.params);
    j["bell_outcome"] = to_string(t.bell_outcome);
    j["outcome_probability"] = json_real(t.outcome_probability);
    j["alice_state"] = state_json(t.alice_state);
    j["oracle_value"] = json_real(t.oracle_value);
    j["oracle_unphysical"] = true;
    j["bob_key"] = to_string(t.bob_key);
    j["alice_key"] = to_string(t.alice_key);
    j["malicious"] = t.malicious;
    j["seed"] = t.seed;
    return j;
}

inline Json discrimination_report_json(const DiscriminationReport& r) {
    Json j;
    j["method"] = to_string(r.method);
    j["success_probability"] = json_real(r.success_probability);
    j["perfectly_distinguishable"] = r.perfectly_distinguishable;
    j["iterations"] = r.iterations;
    j["residual"] = json_real(r.residual);
    j["certified_optimal"] = r.certified_optimal;
    j["verdict"] = r.verdict;
    if (r.povm.has_value()) j["povm"] = povm_json(*r.povm);
    return j;
}

inline Json nosignal_report_json(const NoSignalReport& r) {
    Json j;
    j["theta"] = json_real(r.theta);
    j["trace_distance"] = json_real(r.trace_distance);
    j["helstrom_success"] = json_real(r.helstrom_success);
    j["device_implication"] = r.device_implication;
    j["verdict"] = r.verdict;
    return j;
}

}  // namespace qka
