// Copyright 2026 The biped-icpm Authors
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

#include "biped/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "biped/errors.hpp"

namespace biped {

void write_matrix(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out.imbue(std::locale::classic());
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << m(i, j);
    out << '\n';
  }
  if (!out) throw ValidationError("write failed for '" + path + "'");
}

Eigen::MatrixXd read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  for (std::string line; std::getline(in, line);) {
    std::istringstream ls(line);
    ls.imbue(std::locale::classic());
    std::vector<double> row;
    for (double v; ls >> v;) row.push_back(v);
    if (!ls.eof()) throw ValidationError(path + ": malformed number on line " +
                                         std::to_string(rows.size() + 1));
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError(path + ": empty matrix file");
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) throw ValidationError(path + ": ragged rows");
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

}  // namespace biped
