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

#include "nelsim/qcore/json_io.h"

#include <fstream>
#include <sstream>

#include "nelsim/qcore/errors.h"

using namespace nelsim;
using nlohmann::json;

json nelsim::matrix_to_json(const Matrix &m) {
    json re = json::array();
    json im = json::array();
    for (Eigen::Index i = 0; i < m.rows(); i++) {
        json rr = json::array();
        json ir = json::array();
        for (Eigen::Index j = 0; j < m.cols(); j++) {
            rr.push_back(m(i, j).real());
            ir.push_back(m(i, j).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ir));
    }
    return json{{"dim", (uint64_t)m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

static void require(bool cond, const std::string &what) {
    if (!cond) {
        throw ValidationError(what);
    }
}

Matrix nelsim::matrix_from_json(const json &j) {
    require(j.is_object() && j.contains("dim") && j.contains("re"), "matrix JSON needs \"dim\" and \"re\"");
    require(j["dim"].is_number_integer() && j["dim"].get<int64_t>() >= 0, "matrix JSON \"dim\" must be a non-negative integer");
    size_t d = j["dim"].get<size_t>();
    require(d > 0, "matrix JSON \"dim\" must be positive");
    const json &re = j["re"];
    const json *im = j.contains("im") ? &j["im"] : nullptr;
    require(re.is_array() && re.size() == d, "matrix JSON \"re\" must have dim rows");
    require(im == nullptr || (im->is_array() && im->size() == d), "matrix JSON \"im\" must have dim rows");
    Matrix m((Eigen::Index)d, (Eigen::Index)d);
    for (size_t r = 0; r < d; r++) {
        require(re[r].is_array() && re[r].size() == d, "matrix JSON rows must have dim entries");
        require(im == nullptr || ((*im)[r].is_array() && (*im)[r].size() == d), "matrix JSON rows must have dim entries");
        for (size_t c = 0; c < d; c++) {
            require(re[r][c].is_number(), "matrix JSON entries must be numbers");
            double x = re[r][c].get<double>();
            double y = 0;
            if (im != nullptr) {
                require((*im)[r][c].is_number(), "matrix JSON entries must be numbers");
                y = (*im)[r][c].get<double>();
            }
            m((Eigen::Index)r, (Eigen::Index)c) = Complex(x, y);
        }
    }
    return m;
}

json nelsim::vector_to_json(const Vector &v) {
    json re = json::array();
    json im = json::array();
    for (Eigen::Index k = 0; k < v.size(); k++) {
        re.push_back(v(k).real());
        im.push_back(v(k).imag());
    }
    return json{{"dim", (uint64_t)v.size()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

Vector nelsim::vector_from_json(const json &j) {
    require(j.is_object() && j.contains("dim") && j.contains("re"), "vector JSON needs \"dim\" and \"re\"");
    require(j["dim"].is_number_integer() && j["dim"].get<int64_t>() >= 0, "vector JSON \"dim\" must be a non-negative integer");
    size_t d = j["dim"].get<size_t>();
    const json &re = j["re"];
    const json *im = j.contains("im") ? &j["im"] : nullptr;
    require(re.is_array() && re.size() == d, "vector JSON \"re\" must have dim entries");
    require(im == nullptr || (im->is_array() && im->size() == d), "vector JSON \"im\" must have dim entries");
    Vector v((Eigen::Index)d);
    for (size_t k = 0; k < d; k++) {
        require(re[k].is_number(), "vector JSON entries must be numbers");
        double y = 0;
        if (im != nullptr) {
            require((*im)[k].is_number(), "vector JSON entries must be numbers");
            y = (*im)[k].get<double>();
        }
        v((Eigen::Index)k) = Complex(re[k].get<double>(), y);
    }
    return v;
}

json nelsim::povm_to_json(const Povm &povm) {
    json es = json::array();
    for (const auto &e : povm.elements()) {
        es.push_back(matrix_to_json(e));
    }
    return json{{"elements", std::move(es)}};
}

Povm nelsim::povm_from_json(const json &j) {
    const json *list = &j;
    if (j.is_object()) {
        require(j.contains("elements"), "POVM JSON object needs \"elements\"");
        list = &j["elements"];
    }
    require(list->is_array(), "POVM JSON must be an array of matrices");
    std::vector<Matrix> es;
    for (const auto &e : *list) {
        es.push_back(matrix_from_json(e));
    }
    return Povm::from_elements(std::move(es));
}

DensityMatrix nelsim::density_from_json(const json &j) {
    return DensityMatrix::from_matrix(matrix_from_json(j));
}

PureState nelsim::pure_from_json(const json &j) {
    return PureState::from_amplitudes(vector_from_json(j));
}

json nelsim::read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error &e) {
        throw ValidationError("cannot parse '" + path + "': " + e.what());
    }
}

void nelsim::write_text_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ValidationError("cannot write '" + path + "'");
    }
    out << text;
}
