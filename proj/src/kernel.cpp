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

#include "zok/kernel.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace zok {

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::gaussian: return "gaussian";
    case KernelFamily::polynomial: return "poly";
    case KernelFamily::sigmoid: return "sigmoid";
    case KernelFamily::linear: return "linear";
  }
  return "unknown";
}

KernelFamily parse_kernel_family(const std::string& name) {
  if (name == "gaussian" || name == "rbf") return KernelFamily::gaussian;
  if (name == "poly" || name == "polynomial") return KernelFamily::polynomial;
  if (name == "sigmoid") return KernelFamily::sigmoid;
  if (name == "linear") return KernelFamily::linear;
  throw ArgumentError("unknown kernel '" + name + "'");
}

KernelSpec KernelSpec::gaussian(double bandwidth) {
  KernelSpec s;
  s.family = KernelFamily::gaussian;
  s.bandwidth = bandwidth;
  s.validate();
  return s;
}

KernelSpec KernelSpec::polynomial(int degree) {
  KernelSpec s;
  s.family = KernelFamily::polynomial;
  s.degree = degree;
  s.validate();
  return s;
}

KernelSpec KernelSpec::sigmoid(double beta, double theta) {
  KernelSpec s;
  s.family = KernelFamily::sigmoid;
  s.beta = beta;
  s.theta = theta;
  s.validate();
  return s;
}

KernelSpec KernelSpec::linear() {
  KernelSpec s;
  s.family = KernelFamily::linear;
  return s;
}

void KernelSpec::validate() const {
  switch (family) {
    case KernelFamily::gaussian:
      if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
        throw ArgumentError("gaussian bandwidth must be > 0");
      break;
    case KernelFamily::polynomial:
      if (degree < 1) throw ArgumentError("polynomial degree must be >= 1");
      break;
    case KernelFamily::sigmoid:
      if (!(beta > 1.0)) throw ArgumentError("sigmoid beta must be > 1");
      if (!(theta < 0.0)) throw ArgumentError("sigmoid theta must be < 0");
      break;
    case KernelFamily::linear:
      break;
  }
}

double KernelSpec::parameter() const {
  switch (family) {
    case KernelFamily::gaussian: return bandwidth;
    case KernelFamily::polynomial: return degree;
    case KernelFamily::sigmoid: return beta;
    case KernelFamily::linear: return 0.0;
  }
  return 0.0;
}

KernelSpec KernelSpec::with_parameter(double value) const {
  KernelSpec s = *this;
  switch (family) {
    case KernelFamily::gaussian: s.bandwidth = value; break;
    case KernelFamily::polynomial: s.degree = static_cast<int>(value); break;
    case KernelFamily::sigmoid: s.beta = value; break;
    case KernelFamily::linear: break;
  }
  s.validate();
  return s;
}

std::string KernelSpec::serialize() const {
  std::ostringstream out;
  out.precision(17);
  out << to_string(family);
  switch (family) {
    case KernelFamily::gaussian: out << " bandwidth=" << bandwidth; break;
    case KernelFamily::polynomial: out << " degree=" << degree; break;
    case KernelFamily::sigmoid:
      out << " beta=" << beta << " theta=" << theta;
      break;
    case KernelFamily::linear: break;
  }
  out << " augment=" << (augment_bias ? 1 : 0);
  return out.str();
}

GramMatrix gram_matrix(const Matrix& x, const KernelSpec& spec) {
  spec.validate();
  const Index m = x.rows();
  GramMatrix g{Matrix(m, m), spec, false};
  for (Index i = 0; i < m; ++i) {
    for (Index j = i; j < m; ++j) {
      const double v = eval_kernel(x.row(i), x.row(j), spec);
      g.entries(i, j) = v;
      g.entries(j, i) = v;
    }
  }
  return g;
}

GramMatrix gram_matrix(const Dataset& d, const KernelSpec& spec) {
  return gram_matrix(d.features, spec);
}

Matrix cross_kernel(const Matrix& a, const Matrix& b, const KernelSpec& spec) {
  if (a.cols() != b.cols())
    throw ArgumentError("cross_kernel: dimension mismatch (" +
                        std::to_string(a.cols()) + " vs " +
                        std::to_string(b.cols()) + ")");
  Matrix out(a.rows(), b.rows());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < b.rows(); ++j)
      out(i, j) = eval_kernel(a.row(i), b.row(j), spec);
  return out;
}

GramMatrix sign_gram(const GramMatrix& g, const Vector& labels) {
  if (g.signed_form) throw ArgumentError("sign_gram: matrix already signed");
  if (labels.size() != g.size())
    throw ArgumentError("sign_gram: label count does not match Gram size");
  GramMatrix out{labels.asDiagonal() * g.entries * labels.asDiagonal(), g.spec,
                 true};
  return out;
}

Matrix rows_submatrix(const GramMatrix& g, const IndexSet& idx) {
  for (const Index i : idx)
    if (i < 0 || i >= g.size())
      throw ArgumentError("rows_submatrix: index " + std::to_string(i) +
                          " out of range");
  return g.entries(idx, Eigen::all);
}

std::uint64_t content_hash(const Matrix& x, const KernelSpec& spec) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  };
  const Index dims[2] = {x.rows(), x.cols()};
  mix(dims, sizeof(dims));
  mix(x.data(), sizeof(double) * static_cast<std::size_t>(x.size()));
  const auto text = spec.serialize();
  mix(text.data(), text.size());
  return h;
}

GramCache::GramCache(std::string directory) : directory_(std::move(directory)) {}

std::optional<GramCache> GramCache::from_environment() {
  const char* dir = std::getenv("ZOK_CACHE_DIR");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  return GramCache(dir);
}

std::string GramCache::path_for(const Matrix& x, const KernelSpec& spec) const {
  char name[32];
  std::snprintf(name, sizeof(name), "%016llx.gram",
                static_cast<unsigned long long>(content_hash(x, spec)));
  return (std::filesystem::path(directory_) / name).string();
}

namespace {

constexpr char kMagic[4] = {'Z', 'O', 'K', 'G'};
constexpr std::uint32_t kCacheVersion = 1;

std::optional<Matrix> read_cached(const std::string& path, Index m,
                                  const std::string& spec_text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[4];
  std::uint32_t version = 0, spec_len = 0;
  std::uint64_t rows = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  in.read(reinterpret_cast<char*>(&rows), sizeof(rows));
  in.read(reinterpret_cast<char*>(&spec_len), sizeof(spec_len));
  if (!in || std::memcmp(magic, kMagic, 4) != 0 || version != kCacheVersion ||
      rows != static_cast<std::uint64_t>(m) || spec_len != spec_text.size())
    return std::nullopt;
  std::string stored(spec_len, '\0');
  in.read(stored.data(), spec_len);
  if (stored != spec_text) return std::nullopt;
  Matrix k(m, m);
  // Row-major on disk; the matrix is symmetric, so a column-major read is
  // the same thing.
  in.read(reinterpret_cast<char*>(k.data()),
          static_cast<std::streamsize>(sizeof(double) * k.size()));
  if (!in) return std::nullopt;
  return k;
}

void write_cached(const std::string& path, const Matrix& k,
                  const std::string& spec_text) {
  const auto tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return;
    const std::uint64_t rows = static_cast<std::uint64_t>(k.rows());
    const auto spec_len = static_cast<std::uint32_t>(spec_text.size());
    out.write(kMagic, 4);
    out.write(reinterpret_cast<const char*>(&kCacheVersion),
              sizeof(kCacheVersion));
    out.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
    out.write(reinterpret_cast<const char*>(&spec_len), sizeof(spec_len));
    out.write(spec_text.data(), spec_len);
    out.write(reinterpret_cast<const char*>(k.data()),
              static_cast<std::streamsize>(sizeof(double) * k.size()));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
}

}  // namespace

GramMatrix GramCache::get_or_compute(const Matrix& x,
                                     const KernelSpec& spec) const {
  const auto path = path_for(x, spec);
  const auto spec_text = spec.serialize();
  if (auto k = read_cached(path, x.rows(), spec_text))
    return GramMatrix{std::move(*k), spec, false};
  auto g = gram_matrix(x, spec);
  std::error_code ec;
  std::filesystem::create_directories(directory_, ec);
  write_cached(path, g.entries, spec_text);
  return g;
}

}  // namespace zok
