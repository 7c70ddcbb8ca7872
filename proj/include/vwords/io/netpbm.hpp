#pragma once

#include <cctype>
#include <string>

#include "vwords/imaging/image.hpp"
#include "vwords/io/text.hpp"

namespace vwords {

namespace detail {

// Reads the next whitespace-separated header token, skipping `#` comments.
inline std::string pnm_token(const std::string& data, std::size_t& pos) {
  while (pos < data.size()) {
    if (data[pos] == '#') {
      while (pos < data.size() && data[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(data[pos]))) {
      ++pos;
    } else {
      break;
    }
  }
  const std::size_t start = pos;
  while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos])) && data[pos] != '#') ++pos;
  if (start == pos) throw Error("truncated netpbm header");
  return data.substr(start, pos - start);
}

}  // namespace detail

inline RgbImage decode_ppm(const std::string& data, const std::string& source = "ppm") {
  std::size_t pos = 0;
  if (detail::pnm_token(data, pos) != "P6") throw Error(source + ": not a binary PPM (P6)");
  const int w = text::parse_number<int>(detail::pnm_token(data, pos), source + ": ");
  const int h = text::parse_number<int>(detail::pnm_token(data, pos), source + ": ");
  const int maxval = text::parse_number<int>(detail::pnm_token(data, pos), source + ": ");
  if (w <= 0 || h <= 0) throw Error(source + ": bad dimensions");
  if (maxval != 255) throw Error(source + ": only 8-bit PPM is supported");
  ++pos;  // single whitespace before the raster
  const std::size_t need = static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3;
  if (data.size() < pos + need) throw Error(source + ": truncated raster");
  RgbImage img(w, h);
  auto px = img.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    px[i] = {static_cast<std::uint8_t>(data[pos + 3 * i]), static_cast<std::uint8_t>(data[pos + 3 * i + 1]),
             static_cast<std::uint8_t>(data[pos + 3 * i + 2])};
  }
  return img;
}

inline std::string encode_ppm(const RgbImage& img) {
  std::string out = "P6\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  out.reserve(out.size() + img.size() * 3);
  for (const Rgb& p : img.pixels()) {
    out.push_back(static_cast<char>(p.r));
    out.push_back(static_cast<char>(p.g));
    out.push_back(static_cast<char>(p.b));
  }
  return out;
}

inline RgbImage read_ppm(const std::string& path) { return decode_ppm(text::read_file(path), path); }
inline void write_ppm(const std::string& path, const RgbImage& img) { text::write_file(path, encode_ppm(img)); }

/// Plain-text bitmap (P1): 1 = set.
inline std::string encode_pbm(const BinaryImage& mask) {
  std::string out = "P1\n" + std::to_string(mask.width()) + " " + std::to_string(mask.height()) + "\n";
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (x) out.push_back(' ');
      out.push_back(mask.at(x, y) ? '1' : '0');
    }
    out.push_back('\n');
  }
  return out;
}

inline BinaryImage decode_pbm(const std::string& data, const std::string& source = "pbm") {
  std::size_t pos = 0;
  if (detail::pnm_token(data, pos) != "P1") throw Error(source + ": not a plain PBM (P1)");
  const int w = text::parse_number<int>(detail::pnm_token(data, pos), source + ": ");
  const int h = text::parse_number<int>(detail::pnm_token(data, pos), source + ": ");
  if (w <= 0 || h <= 0) throw Error(source + ": bad dimensions");
  BinaryImage mask(w, h);
  for (auto& v : mask.pixels()) {
    while (pos < data.size() && (std::isspace(static_cast<unsigned char>(data[pos])) || data[pos] == '#')) {
      if (data[pos] == '#')
        while (pos < data.size() && data[pos] != '\n') ++pos;
      else
        ++pos;
    }
    if (pos >= data.size()) throw Error(source + ": truncated raster");
    if (data[pos] != '0' && data[pos] != '1') throw Error(source + ": unexpected character in raster");
    v = data[pos++] == '1' ? 1 : 0;
  }
  return mask;
}

inline void write_pbm(const std::string& path, const BinaryImage& mask) { text::write_file(path, encode_pbm(mask)); }
inline BinaryImage read_pbm(const std::string& path) { return decode_pbm(text::read_file(path), path); }

/// Frame with mask pixels tinted red.
inline RgbImage overlay(const RgbImage& frame, const BinaryImage& mask, int ox, int oy) {
  RgbImage out = frame;
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y) || !out.contains(ox + x, oy + y)) continue;
      Rgb& p = out.at(ox + x, oy + y);
      p = {255, static_cast<std::uint8_t>(p.g / 2), static_cast<std::uint8_t>(p.b / 2)};
    }
  return out;
}

}  // namespace vwords
