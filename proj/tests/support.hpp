// Copyright 2026 The zok Authors.
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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "zok/data.hpp"

namespace zok::testing {

/// Writes `contents` to a fresh file under the system temp directory.
inline std::string write_temp(const std::string& name,
                              const std::string& contents) {
  const auto dir = std::filesystem::temp_directory_path() / "zok_tests";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << contents;
  return path.string();
}

inline std::string temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "zok_tests" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

inline Matrix random_matrix(Index rows, Index cols, std::mt19937_64& rng,
                            double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

/// Random points with labels from a random hyperplane through the cloud;
/// both classes are guaranteed present.
inline Dataset random_dataset(Index m, Index n, std::mt19937_64& rng) {
  Dataset d;
  d.name = "random";
  d.features = random_matrix(m, n, rng);
  const Vector w = random_matrix(n, 1, rng);
  d.labels.resize(m);
  for (Index i = 0; i < m; ++i)
    d.labels[i] = d.features.row(i).dot(w) >= 0.0 ? 1.0 : -1.0;
  if (d.count(1.0) == 0) d.labels[0] = 1.0;
  if (d.count(-1.0) == 0) d.labels[0] = -1.0;
  return d;
}

inline Dataset xor_dataset() {
  Dataset d;
  d.name = "xor";
  d.features.resize(4, 2);
  d.features << -1, -1, 1, 1, -1, 1, 1, -1;
  d.labels.resize(4);
  d.labels << 1, 1, -1, -1;
  return d;
}

inline Dataset two_point_dataset() {
  Dataset d;
  d.name = "two";
  d.features.resize(2, 1);
  d.features << -1, 1;
  d.labels.resize(2);
  d.labels << -1, 1;
  return d;
}

/// Directory holding the benchmark CSVs (set by CMake).
inline std::string data_dir() {
#ifdef ZOK_DATA_DIR
  return ZOK_DATA_DIR;
#else
  return "data";
#endif
}

}  // namespace zok::testing
