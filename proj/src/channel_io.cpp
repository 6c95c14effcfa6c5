// Copyright 2026 The ProxySel Authors
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

// Channel file I/O.
//
// Binary layout (little-endian):
//   bytes 0..4   magic "AXCH1"
//   u32          n_antennas
//   u32          n_users
//   u32          n_subcarriers
//   f64          subcarrier spacing in Hz
//   then n_subcarriers blocks of n_users * n_antennas (re, im) f64 pairs,
//   user-major within a block (user varies slower than antenna).
//
// The ".json" variant mirrors the same logical layout:
//   {"format": "AXCH1", "n_antennas": ..., "n_users": ...,
//    "n_subcarriers": ..., "spacing_hz": ...,
//    "h": [subcarrier][user][antenna] -> [re, im]}

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "proxysel/channel.hpp"
#include "proxysel/errors.hpp"

namespace proxysel {

namespace {

constexpr char kMagic[5] = {'A', 'X', 'C', 'H', '1'};

bool has_json_extension(const std::string& path) {
  const auto dot = path.rfind('.');
  return dot != std::string::npos && path.substr(dot) == ".json";
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
}

class Reader {
 public:
  Reader(const std::string& buf, const std::string& path)
      : buf_(buf), path_(path) {}

  std::uint32_t read_u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf_[pos_ + i]))
           << (8 * i);
    }
    pos_ += 4;
    return v;
  }

  double read_f64(const char* what) {
    need(8, what);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf_[pos_ + i]))
              << (8 * i);
    }
    pos_ += 8;
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }

  void read_magic() {
    need(5, "magic");
    if (std::memcmp(buf_.data(), kMagic, 5) != 0) {
      throw ParseError(path_ + ": bad magic, expected \"AXCH1\"");
    }
    pos_ += 5;
  }

  std::size_t remaining() const { return buf_.size() - pos_; }

 private:
  void need(std::size_t n, const char* what) {
    if (buf_.size() - pos_ < n) {
      throw ParseError(path_ + ": truncated file while reading " +
                       std::string(what) + " at byte offset " +
                       std::to_string(pos_));
    }
  }

  const std::string& buf_;
  std::string path_;
  std::size_t pos_ = 0;
};

ChannelSet load_channels_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open for reading");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": invalid JSON: " + e.what());
  }
  if (!j.is_object() || j.value("format", "") != "AXCH1") {
    throw ParseError(path + ": missing AXCH1 format marker");
  }
  const int n_antennas = j.at("n_antennas").get<int>();
  const int n_users = j.at("n_users").get<int>();
  const int n_tones = j.at("n_subcarriers").get<int>();
  if (n_antennas < 1 || n_users < 1 || n_tones < 1) {
    throw ParseError(path + ": non-positive dimension in header");
  }
  const auto& h = j.at("h");
  if (static_cast<int>(h.size()) != n_tones) {
    throw ParseError(path + ": header says " + std::to_string(n_tones) +
                     " subcarriers but payload has " +
                     std::to_string(h.size()) + " blocks");
  }
  ChannelSet cs(n_antennas, n_users, n_tones);
  for (int n = 0; n < n_tones; ++n) {
    const auto& block = h[n];
    if (static_cast<int>(block.size()) != n_users) {
      throw ParseError(path + ": subcarrier " + std::to_string(n) + " has " +
                       std::to_string(block.size()) + " user rows, expected " +
                       std::to_string(n_users));
    }
    for (int k = 0; k < n_users; ++k) {
      const auto& row = block[k];
      if (static_cast<int>(row.size()) != n_antennas) {
        throw ParseError(path + ": subcarrier " + std::to_string(n) +
                         ", user " + std::to_string(k) + " has " +
                         std::to_string(row.size()) + " antenna entries");
      }
      for (int a = 0; a < n_antennas; ++a) {
        const auto& pair = row[a];
        if (!pair.is_array() || pair.size() != 2) {
          throw ParseError(path + ": entry at subcarrier " +
                           std::to_string(n) + ", user " + std::to_string(k) +
                           ", antenna " + std::to_string(a) +
                           " is not an [re, im] pair");
        }
        cs.h(n, k)[a] = cplx(pair[0].get<double>(), pair[1].get<double>());
      }
    }
  }
  try {
    cs.validate();
  } catch (const DomainError& e) {
    throw ParseError(path + ": " + e.what());
  }
  return cs;
}

void save_channels_json(const ChannelSet& cs, const std::string& path) {
  nlohmann::json j;
  j["format"] = "AXCH1";
  j["n_antennas"] = cs.n_antennas();
  j["n_users"] = cs.n_users();
  j["n_subcarriers"] = cs.n_subcarriers();
  j["spacing_hz"] = cs.subcarrier_spacing_hz();
  nlohmann::json h = nlohmann::json::array();
  for (int n = 0; n < cs.n_subcarriers(); ++n) {
    nlohmann::json block = nlohmann::json::array();
    for (int k = 0; k < cs.n_users(); ++k) {
      nlohmann::json row = nlohmann::json::array();
      const cplx* v = cs.h(n, k);
      for (int a = 0; a < cs.n_antennas(); ++a) {
        row.push_back({v[a].real(), v[a].imag()});
      }
      block.push_back(std::move(row));
    }
    h.push_back(std::move(block));
  }
  j["h"] = std::move(h);
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open for writing");
  out << j.dump();
  if (!out) throw ParseError(path + ": write failed");
}

}  // namespace

void save_channels(const ChannelSet& cs, const std::string& path) {
  if (has_json_extension(path)) {
    save_channels_json(cs, path);
    return;
  }
  std::string buf;
  buf.reserve(25 + static_cast<std::size_t>(cs.n_subcarriers()) *
                       cs.n_users() * cs.n_antennas() * 16);
  buf.append(kMagic, 5);
  put_u32(buf, static_cast<std::uint32_t>(cs.n_antennas()));
  put_u32(buf, static_cast<std::uint32_t>(cs.n_users()));
  put_u32(buf, static_cast<std::uint32_t>(cs.n_subcarriers()));
  put_f64(buf, cs.subcarrier_spacing_hz());
  for (int n = 0; n < cs.n_subcarriers(); ++n) {
    for (int k = 0; k < cs.n_users(); ++k) {
      const cplx* v = cs.h(n, k);
      for (int a = 0; a < cs.n_antennas(); ++a) {
        put_f64(buf, v[a].real());
        put_f64(buf, v[a].imag());
      }
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path + ": cannot open for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw ParseError(path + ": write failed");
}

ChannelSet load_channels(const std::string& path) {
  if (has_json_extension(path)) return load_channels_json(path);

  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open for reading");
  std::string buf((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  Reader reader(buf, path);
  reader.read_magic();
  const auto n_antennas = static_cast<int>(reader.read_u32("n_antennas"));
  const auto n_users = static_cast<int>(reader.read_u32("n_users"));
  const auto n_tones = static_cast<int>(reader.read_u32("n_subcarriers"));
  reader.read_f64("spacing_hz");
  if (n_antennas < 1 || n_users < 1 || n_tones < 1) {
    throw ParseError(path + ": non-positive dimension in header");
  }
  const std::size_t expected = static_cast<std::size_t>(n_tones) * n_users *
                               n_antennas * 16;
  if (reader.remaining() != expected) {
    throw ParseError(path + ": header implies " + std::to_string(expected) +
                     " payload bytes, file has " +
                     std::to_string(reader.remaining()));
  }
  ChannelSet cs(n_antennas, n_users, n_tones);
  for (int n = 0; n < n_tones; ++n) {
    for (int k = 0; k < n_users; ++k) {
      cplx* v = cs.h(n, k);
      for (int a = 0; a < n_antennas; ++a) {
        const double re = reader.read_f64("channel entry");
        const double im = reader.read_f64("channel entry");
        v[a] = cplx(re, im);
      }
    }
  }
  try {
    cs.validate();
  } catch (const DomainError& e) {
    throw ParseError(path + ": " + e.what());
  }
  return cs;
}

}  // namespace proxysel
