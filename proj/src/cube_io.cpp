// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "mbf/cube_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>

#include "mbf/errors.hpp"

namespace mbf {

namespace {

constexpr std::array<char, 8> kMagic{'M', 'B', 'F', 'C', 'U', 'B', 'E', '\0'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put_le(unsigned char* dst, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  U bits;
  std::memcpy(&bits, &value, sizeof(T));
  for (std::size_t i = 0; i < sizeof(T); ++i) dst[i] = static_cast<unsigned char>(bits >> (8 * i));
}

template <typename T>
T get_le(const unsigned char* src) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) bits |= U(src[i]) << (8 * i);
  T value;
  std::memcpy(&value, &bits, sizeof(T));
  return value;
}

std::array<unsigned char, kCubeHeaderBytes> encode_header(const CubeHeader& h) {
  std::array<unsigned char, kCubeHeaderBytes> buf{};
  std::memcpy(buf.data(), kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(buf.data() + 8, kVersion);
  put_le<std::uint32_t>(buf.data() + 12, static_cast<std::uint32_t>(h.format));
  put_le<std::uint32_t>(buf.data() + 16, h.n_sensors);
  put_le<std::uint32_t>(buf.data() + 20, h.decimation);
  put_le<std::uint64_t>(buf.data() + 24, h.n_samples);
  put_le<double>(buf.data() + 32, h.sample_rate);
  put_le<double>(buf.data() + 40, h.carrier);
  put_le<double>(buf.data() + 48, h.time_origin);
  return buf;
}

CubeHeader decode_header(std::istream& in, const std::filesystem::path& path) {
  std::array<unsigned char, kCubeHeaderBytes> buf{};
  in.read(reinterpret_cast<char*>(buf.data()), buf.size());
  if (!in) throw FormatError(path.string() + ": truncated cube header");
  if (std::memcmp(buf.data(), kMagic.data(), kMagic.size()) != 0)
    throw FormatError(path.string() + ": not a cube file (bad magic)");
  if (get_le<std::uint32_t>(buf.data() + 8) != kVersion)
    throw FormatError(path.string() + ": unsupported cube version");
  CubeHeader h;
  const auto tag = get_le<std::uint32_t>(buf.data() + 12);
  if (tag != 1 && tag != 2) throw FormatError(path.string() + ": unknown cube format tag");
  h.format = static_cast<CubeFormat>(tag);
  h.n_sensors = get_le<std::uint32_t>(buf.data() + 16);
  h.decimation = get_le<std::uint32_t>(buf.data() + 20);
  h.n_samples = get_le<std::uint64_t>(buf.data() + 24);
  h.sample_rate = get_le<double>(buf.data() + 32);
  h.carrier = get_le<double>(buf.data() + 40);
  h.time_origin = get_le<double>(buf.data() + 48);
  return h;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return in;
}

void write_floats(std::ostream& out, const float* data, std::size_t count) {
  std::vector<unsigned char> buf(count * 4);
  for (std::size_t i = 0; i < count; ++i) put_le<float>(buf.data() + 4 * i, data[i]);
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

std::vector<float> read_floats(std::istream& in, std::size_t count,
                               const std::filesystem::path& path) {
  std::vector<unsigned char> buf(count * 4);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!in) throw FormatError(path.string() + ": truncated sample data");
  std::vector<float> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = get_le<float>(buf.data() + 4 * i);
  return v;
}

}  // namespace

CubeHeader read_cube_header(const std::filesystem::path& path) {
  auto in = open_in(path);
  return decode_header(in, path);
}

void write_raw_cube(const std::filesystem::path& path, const RawDataCube& cube) {
  CubeHeader h;
  h.format = CubeFormat::real_f32;
  h.n_sensors = static_cast<std::uint32_t>(cube.n_sensors);
  h.decimation = 1;
  h.n_samples = cube.n_samples;
  h.sample_rate = cube.sample_rate;
  h.time_origin = cube.time_origin;
  auto out = open_out(path);
  const auto head = encode_header(h);
  out.write(reinterpret_cast<const char*>(head.data()), head.size());
  std::vector<float> f(cube.samples.begin(), cube.samples.end());
  write_floats(out, f.data(), f.size());
  if (!out) throw FormatError("write failed: " + path.string());
}

RawDataCube read_raw_cube(const std::filesystem::path& path) {
  auto in = open_in(path);
  const CubeHeader h = decode_header(in, path);
  if (h.format != CubeFormat::real_f32) throw FormatError(path.string() + ": expected a real cube");
  RawDataCube cube(h.n_sensors, h.n_samples, h.sample_rate, h.time_origin);
  const auto f = read_floats(in, cube.samples.size(), path);
  std::copy(f.begin(), f.end(), cube.samples.begin());
  return cube;
}

void write_baseband_cube(const std::filesystem::path& path, const BasebandCube& cube) {
  CubeHeader h;
  h.format = CubeFormat::complex_f32;
  h.n_sensors = static_cast<std::uint32_t>(cube.n_sensors);
  h.decimation = static_cast<std::uint32_t>(cube.decimation);
  h.n_samples = cube.n_samples;
  h.sample_rate = cube.sample_rate;
  h.carrier = cube.carrier;
  h.time_origin = cube.time_origin;
  auto out = open_out(path);
  const auto head = encode_header(h);
  out.write(reinterpret_cast<const char*>(head.data()), head.size());
  std::vector<float> f;
  f.reserve(cube.samples.size() * 2);
  for (const auto& z : cube.samples) {
    f.push_back(static_cast<float>(z.real()));
    f.push_back(static_cast<float>(z.imag()));
  }
  write_floats(out, f.data(), f.size());
  if (!out) throw FormatError("write failed: " + path.string());
}

BasebandCube read_baseband_cube(const std::filesystem::path& path) {
  auto in = open_in(path);
  const CubeHeader h = decode_header(in, path);
  if (h.format != CubeFormat::complex_f32)
    throw FormatError(path.string() + ": expected a complex cube");
  BasebandCube cube(h.n_sensors, h.n_samples, h.sample_rate, h.carrier, h.time_origin,
                    h.decimation);
  const auto f = read_floats(in, cube.samples.size() * 2, path);
  for (std::size_t i = 0; i < cube.samples.size(); ++i) cube.samples[i] = {f[2 * i], f[2 * i + 1]};
  return cube;
}

void write_raw_cube_csv(const std::filesystem::path& path, const RawDataCube& cube) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out << "sample,time_s";
  for (std::size_t n = 0; n < cube.n_sensors; ++n) out << ",s" << n;
  out << '\n' << std::setprecision(std::numeric_limits<float>::max_digits10);
  for (std::size_t k = 0; k < cube.n_samples; ++k) {
    out << k << ',' << cube.time_at(k);
    for (std::size_t n = 0; n < cube.n_sensors; ++n) out << ',' << cube.samples[n * cube.n_samples + k];
    out << '\n';
  }
}

}  // namespace mbf
