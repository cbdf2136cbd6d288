// Copyright 2026 The nelsim Authors
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

#ifndef NELSIM_QCORE_JSON_IO_H
#define NELSIM_QCORE_JSON_IO_H

#include <nlohmann/json.hpp>
#include <string>

#include "nelsim/qcore/povm.h"
#include "nelsim/qcore/state.h"

namespace nelsim {

/// {"dim": n, "re": [[...]], "im": [[...]]}; rows are big-endian basis indices.
nlohmann::json matrix_to_json(const Matrix &m);
Matrix matrix_from_json(const nlohmann::json &j);

/// {"dim": n, "re": [...], "im": [...]}.
nlohmann::json vector_to_json(const Vector &v);
Vector vector_from_json(const nlohmann::json &j);

/// A POVM file is either a bare array of matrices or {"elements": [...]}.
nlohmann::json povm_to_json(const Povm &povm);
Povm povm_from_json(const nlohmann::json &j);

DensityMatrix density_from_json(const nlohmann::json &j);
PureState pure_from_json(const nlohmann::json &j);

nlohmann::json read_json_file(const std::string &path);
void write_text_file(const std::string &path, const std::string &text);

}  // namespace nelsim

#endif
