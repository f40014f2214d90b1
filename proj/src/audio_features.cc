// src/audio_features.cc

// Copyright 2026  ALTA Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "alta/audio_features.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "alta/errors.h"

namespace alta {
namespace audio {

namespace {

uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

uint16_t read_u16(std::istream& in) {
  unsigned char b[2];
  in.read(reinterpret_cast<char*>(b), 2);
  return static_cast<uint16_t>(b[0]) | (static_cast<uint16_t>(b[1]) << 8);
}

void write_u32(std::ostream& out, uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

void write_u16(std::ostream& out, uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  out.write(b, 2);
}

}  // namespace

SampleBuffer load_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedWav("cannot open WAV file: " + path);

  char riff[4], wave[4];
  in.read(riff, 4);
  read_u32(in);  // RIFF chunk size, unused
  in.read(wave, 4);
  if (!in || std::memcmp(riff, "RIFF", 4) != 0 || std::memcmp(wave, "WAVE", 4) != 0)
    throw MalformedWav("not a RIFF/WAVE file: " + path);

  bool have_fmt = false;
  uint16_t format_code = 0, channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  std::vector<char> data;

  // Walk chunks; unknown ones are skipped (word-aligned).
  while (in) {
    char id[4];
    in.read(id, 4);
    if (!in) break;
    uint32_t size = read_u32(in);
    if (!in) throw MalformedWav("truncated chunk header in " + path);

    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (size < 16) throw MalformedWav("fmt chunk too small in " + path);
      format_code = read_u16(in);
      channels = read_u16(in);
      sample_rate = read_u32(in);
      read_u32(in);  // byte rate
      read_u16(in);  // block align
      bits = read_u16(in);
      if (size > 16) in.seekg(size - 16, std::ios::cur);
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      if (!have_fmt) throw MalformedWav("data chunk before fmt chunk in " + path);
      data.resize(size);
      in.read(data.data(), size);
      if (static_cast<uint32_t>(in.gcount()) != size)
        throw MalformedWav("truncated data chunk in " + path);
      break;
    } else {
      in.seekg(size + (size & 1), std::ios::cur);
    }
  }

  if (!have_fmt) throw MalformedWav("missing fmt chunk in " + path);
  if (data.empty() && !in) throw MalformedWav("missing data chunk in " + path);
  if (format_code != 1) throw UnsupportedFormat("only PCM (format 1) supported, got code " + std::to_string(format_code));
  if (channels != 1) throw UnsupportedFormat("only mono supported, got " + std::to_string(channels) + " channels");
  if (bits != 16) throw UnsupportedFormat("only 16-bit samples supported, got " + std::to_string(bits));
  if (sample_rate == 0) throw MalformedWav("zero sample rate in " + path);

  SampleBuffer buf;
  buf.sample_rate_hz = static_cast<int>(sample_rate);
  size_t n = data.size() / 2;
  buf.samples.resize(n);
  for (size_t i = 0; i < n; ++i) {
    int16_t v = static_cast<int16_t>(static_cast<unsigned char>(data[2 * i]) |
                                     (static_cast<unsigned char>(data[2 * i + 1]) << 8));
    buf.samples[i] = static_cast<double>(v) / 32768.0;
  }
  return buf;
}

void write_wav(const std::string& path, const SampleBuffer& buf) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write WAV file: " + path);

  uint32_t data_bytes = static_cast<uint32_t>(buf.samples.size() * 2);
  out.write("RIFF", 4);
  write_u32(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_u32(out, 16);
  write_u16(out, 1);  // PCM
  write_u16(out, 1);  // mono
  write_u32(out, static_cast<uint32_t>(buf.sample_rate_hz));
  write_u32(out, static_cast<uint32_t>(buf.sample_rate_hz) * 2);
  write_u16(out, 2);
  write_u16(out, 16);
  out.write("data", 4);
  write_u32(out, data_bytes);
  for (double s : buf.samples) {
    double clipped = std::clamp(s, -1.0, 1.0);
    int16_t v = static_cast<int16_t>(std::lround(clipped * 32767.0));
    write_u16(out, static_cast<uint16_t>(v));
  }
}

EnergyTrack frame_log_energy(const SampleBuffer& buf, const FrameConfig& cfg) {
  size_t frame_len = static_cast<size_t>(std::llround(cfg.frame_len_s * buf.sample_rate_hz));
  size_t hop = static_cast<size_t>(std::llround(cfg.hop_s * buf.sample_rate_hz));
  if (frame_len == 0 || hop == 0 || hop > frame_len)
    throw InputError("invalid frame config: need 0 < hop_s <= frame_len_s");
  if (buf.samples.size() < frame_len)
    throw EmptyAudio("buffer shorter than one frame");

  if (cfg.energy_floor <= 0.0) throw InputError("energy floor must be positive");
  size_t n_frames = (buf.samples.size() - frame_len) / hop + 1;
  EnergyTrack track;
  track.hop_s = cfg.hop_s;
  track.frame_len_s = cfg.frame_len_s;
  track.values.reserve(n_frames);
  for (size_t i = 0; i < n_frames; ++i) {
    double sum_sq = 0.0;
    const double* p = buf.samples.data() + i * hop;
    for (size_t j = 0; j < frame_len; ++j) sum_sq += p[j] * p[j];
    track.values.push_back(std::log(cfg.energy_floor + sum_sq / static_cast<double>(frame_len)));
  }
  return track;
}

}  // namespace audio
}  // namespace alta
