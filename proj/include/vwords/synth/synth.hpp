#pragma once

// Deterministic synthetic fixtures: planted faces, lip scenes and scripted
// talking clips with known ground truth.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "vwords/face/face_loc.hpp"
#include "vwords/io/records.hpp"

namespace vwords::synth {

using Rng = std::mt19937_64;

inline std::uint8_t to_u8(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

inline Rgb jitter(const Rgb& c, double sigma, Rng& rng) {
  std::normal_distribution<double> n(0.0, sigma);
  return {to_u8(c.r + n(rng)), to_u8(c.g + n(rng)), to_u8(c.b + n(rng))};
}

inline void add_noise(RgbImage& img, double sigma, Rng& rng) {
  for (Rgb& p : img.pixels()) p = jitter(p, sigma, rng);
}

inline void fill_rect(RgbImage& img, const Rect& r, const Rgb& c) {
  const Rect clipped = intersect(r, {0, 0, img.width(), img.height()});
  for (int y = clipped.y; y < clipped.bottom(); ++y)
    for (int x = clipped.x; x < clipped.right(); ++x) img.at(x, y) = c;
}

/// Pixels whose centres fall inside the axis-aligned ellipse.
template <class F>
void for_ellipse(int w, int h, double cx, double cy, double a, double b, F&& f) {
  if (a <= 0.0 || b <= 0.0) return;
  const int x0 = std::max(0, static_cast<int>(std::floor(cx - a))), x1 = std::min(w - 1, static_cast<int>(std::ceil(cx + a)));
  const int y0 = std::max(0, static_cast<int>(std::floor(cy - b))), y1 = std::min(h - 1, static_cast<int>(std::ceil(cy + b)));
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) {
      const double dx = (x + 0.5 - cx) / a, dy = (y + 0.5 - cy) / b;
      if (dx * dx + dy * dy <= 1.0) f(x, y);
    }
}

inline const std::array<Rgb, 4>& skin_tones() {
  static const std::array<Rgb, 4> t{{{225, 185, 160}, {200, 150, 120}, {190, 145, 105}, {165, 115, 85}}};
  return t;
}

inline const std::array<Rgb, 4>& lip_tones() {
  static const std::array<Rgb, 4> t{{{190, 90, 100}, {170, 75, 85}, {160, 70, 80}, {135, 60, 70}}};
  return t;
}

/// Non-skin clutter: grey, blue and green blocks.
inline RgbImage cluttered_background(int w, int h, Rng& rng) {
  std::uniform_int_distribution<int> level(30, 200);
  std::uniform_int_distribution<int> kind(0, 2);
  RgbImage img(w, h, Rgb{90, 100, 120});
  std::uniform_int_distribution<int> px(0, w - 1), py(0, h - 1), side(10, 70);
  for (int i = 0; i < 40; ++i) {
    const int v = level(rng);
    Rgb c;
    switch (kind(rng)) {
      case 0: c = {to_u8(v), to_u8(v), to_u8(v)}; break;
      case 1: c = {to_u8(v * 0.5), to_u8(v * 0.7), to_u8(v)}; break;
      default: c = {to_u8(v * 0.6), to_u8(v), to_u8(v * 0.7)}; break;
    }
    fill_rect(img, {px(rng), py(rng), side(rng), side(rng)}, c);
  }
  return img;
}

/// Draws a face the size of the template box: skin everywhere, dark blobs on
/// the feature cells.
inline void paint_face(RgbImage& img, int fx, int fy, const Rgb& skin, Rng& rng, bool draw_mouth = true) {
  const FaceTemplate t = default_face_template();
  const int s = t.scale;
  fill_rect(img, {fx, fy, t.box_size(), t.box_size()}, skin);
  const Rgb dark{70, 45, 40};
  std::uniform_int_distribution<int> wobble(-1, 1);
  for (int row = 0; row < FaceTemplate::kSize; ++row)
    for (int col = 0; col < FaceTemplate::kSize; ++col) {
      if (t.at(col, row) != 0) continue;
      if (!draw_mouth && row >= 10) continue;
      fill_rect(img, {fx + col * s + wobble(rng), fy + row * s + wobble(rng), s, s}, dark);
    }
}

struct PlantedFace {
  RgbImage frame;
  FaceBox truth;
};

/// 320x240 frame with one face at an arbitrary (not grid aligned) offset.
inline PlantedFace planted_face(std::uint64_t seed) {
  Rng rng(seed);
  constexpr int kW = 320, kH = 240;
  RgbImage frame = cluttered_background(kW, kH, rng);
  const int side = default_face_template().box_size();
  std::uniform_int_distribution<int> ox(0, kW - side), oy(0, kH - side);
  std::uniform_int_distribution<std::size_t> tone(0, skin_tones().size() - 1);
  const FaceBox truth{ox(rng), oy(rng), side, side};
  paint_face(frame, truth.x, truth.y, skin_tones()[tone(rng)], rng);
  add_noise(frame, 4.0, rng);
  return {std::move(frame), truth};
}

struct LipScene {
  RgbImage roi;
  BinaryImage truth;
};

/// Lower-face region with an elliptical lip blob; tone picks the skin/lip pair.
/// The skin carries a vertical shading gradient, a shadow band under the lower
/// lip and, in some scenes, nostril shadows along the top edge; the upper lip
/// is darker than the lower one.
inline LipScene lip_scene(std::uint64_t seed, std::size_t tone) {
  Rng rng(seed);
  std::uniform_int_distribution<int> width(70, 100), height(30, 40);
  const int w = width(rng), h = height(rng);
  const Rgb skin = skin_tones()[tone % skin_tones().size()];
  std::uniform_int_distribution<int> dc(-10, 10);
  const Rgb base_lip = lip_tones()[tone % lip_tones().size()];
  const Rgb lip{to_u8(base_lip.r + dc(rng)), to_u8(base_lip.g + dc(rng)), to_u8(base_lip.b + dc(rng))};
  std::uniform_real_distribution<double> ax(0.22, 0.34), by(0.2, 0.3), shift(-3.0, 3.0), unit(0.0, 1.0);

  LipScene s{RgbImage(w, h, skin), BinaryImage(w, h, 0)};
  const double a = ax(rng) * w, b = by(rng) * h;
  const double cx = w / 2.0 + shift(rng), cy = h / 2.0 + shift(rng);
  auto scale = [](const Rgb& p, double g) { return Rgb{to_u8(p.r * g), to_u8(p.g * g), to_u8(p.b * g)}; };

  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double g = 1.0 - 0.08 * static_cast<double>(y) / h;
      const double below = (y + 0.5) - (cy + b);  // distance under the lower lip
      if (below > 0.0 && below < 5.0 && std::abs(x + 0.5 - cx) < a) g *= 0.88;
      s.roi.at(x, y) = scale(skin, g);
    }
  if (unit(rng) < 0.5) {
    const double nx = a * 0.45;
    for (const double sx : {cx - nx, cx + nx})
      for_ellipse(w, h, sx, 1.0, 4.0, 2.5, [&](int x, int y) { s.roi.at(x, y) = scale(skin, 0.55); });
  }
  for_ellipse(w, h, cx, cy, a, b, [&](int x, int y) {
    s.roi.at(x, y) = y + 0.5 < cy ? scale(lip, 0.9) : lip;
    s.truth.at(x, y) = 1;
  });
  add_noise(s.roi, 4.0, rng);
  return s;
}

/// Mouth shape of one frame: lip half-width, outer half-height, cavity half-height.
struct MouthShape {
  double half_width = 20.0;
  double aperture = 0.0;  // cavity half-height
};

inline constexpr double kLipThickness = 4.0;

/// Five scripted words, each a trajectory of mouth shapes.
inline std::vector<MouthShape> word_script(int word, int frames) {
  std::vector<MouthShape> out;
  for (int i = 0; i < frames; ++i) {
    const double t = frames > 1 ? static_cast<double>(i) / (frames - 1) : 0.0;
    const double bump = std::sin(M_PI * t);
    MouthShape m;
    switch (word) {
      case 0:  // one wide opening
        m = {20.0, 1.0 + 8.0 * bump};
        break;
      case 1:  // two openings
        m = {20.0, 1.0 + 6.0 * std::abs(std::sin(2.0 * M_PI * t))};
        break;
      case 2:  // spread lips, nearly closed
        m = {18.0 + 10.0 * bump, 1.0};
        break;
      case 3:  // rounding: narrow and half open
        m = {20.0 - 8.0 * bump, 1.0 + 4.0 * bump};
        break;
      default:  // late opening
        m = {22.0, 1.0 + 8.0 * t * t};
        break;
    }
    out.push_back(m);
  }
  return out;
}

inline constexpr int kVocabulary = 5;
inline const std::array<std::string, kVocabulary>& word_labels() {
  static const std::array<std::string, kVocabulary> w{"bomb", "two", "smile", "who", "fire"};
  return w;
}

struct TalkingClip {
  std::vector<RgbImage> frames;
  std::vector<Annotation> annotations;
  std::vector<MouthShape> shapes;  // one per frame
  FaceBox face;
};

/// Paints lips (outer ellipse, darker cavity) centred on face row 88.
inline void paint_mouth(RgbImage& img, const FaceBox& face, const MouthShape& m, const Rgb& lip) {
  const double cx = face.x + face.width / 2.0, cy = face.y + 88.0;
  const double outer_b = m.aperture + kLipThickness;
  for_ellipse(img.width(), img.height(), cx, cy, m.half_width, outer_b, [&](int x, int y) { img.at(x, y) = lip; });
  for_ellipse(img.width(), img.height(), cx, cy, m.half_width - kLipThickness, m.aperture,
              [&](int x, int y) { img.at(x, y) = Rgb{60, 25, 30}; });
}

/// One speaker saying every word `repetitions` times, with a rest pose
/// between words and +-1 frame jitter in word length.
inline TalkingClip talking_clip(std::uint64_t seed, int repetitions = 5, const std::string& speaker = "s1",
                                int session = 1) {
  Rng rng(seed);
  constexpr int kW = 320, kH = 240;
  const RgbImage background = cluttered_background(kW, kH, rng);
  TalkingClip clip;
  clip.face = {104, 64, 104, 104};
  const Rgb skin = skin_tones()[0];
  const Rgb lip = lip_tones()[1];
  std::uniform_int_distribution<int> jit(-1, 1);
  const MouthShape rest{20.0, 0.0};

  std::uint64_t frame_seed = seed * 7919u;
  auto emit = [&](const MouthShape& m) {
    Rng frng(++frame_seed);
    RgbImage f = background;
    paint_face(f, clip.face.x, clip.face.y, skin, frng, false);
    paint_mouth(f, clip.face, m, lip);
    add_noise(f, 2.0, frng);
    clip.frames.push_back(std::move(f));
    clip.shapes.push_back(m);
  };

  for (int r = 0; r < repetitions; ++r) {
    for (int w = 0; w < kVocabulary; ++w) {
      for (int i = 0; i < 3; ++i) emit(rest);
      const int n = 14 + jit(rng);
      Annotation a;
      a.label = word_labels()[static_cast<std::size_t>(w)];
      a.start = static_cast<int>(clip.frames.size());
      for (const MouthShape& m : word_script(w, n)) emit(m);
      a.end = static_cast<int>(clip.frames.size()) - 1;
      a.speaker = speaker;
      a.session = session;
      a.repetition = r + 1;
      a.group = "Nu";
      clip.annotations.push_back(a);
    }
  }
  for (int i = 0; i < 3; ++i) emit(rest);
  return clip;
}

}  // namespace vwords::synth
