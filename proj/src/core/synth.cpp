#include "core/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace tacf {
namespace {

using json = nlohmann::json;

// Uniform [0,1) and standard normal draws built directly on the mt19937_64
// stream, so identical seeds give identical frames on any stdlib.
double rand_u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double rand_normal(std::mt19937_64& rng) {
  double u1 = rand_u01(rng);
  while (u1 <= 0.0) u1 = rand_u01(rng);
  const double u2 = rand_u01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline uint8_t to_u8(double v) {
  return static_cast<uint8_t>(std::clamp(v, 0.0, 255.0));
}

// Low-resolution random grid upsampled bilinearly: smooth texture with
// gradients at a controllable scale.
struct Texture {
  int h = 0, w = 0, c = 1;
  std::vector<double> v;  // planar

  double at(int y, int x, int ch) const {
    return v[(static_cast<size_t>(ch) * h + y) * w + x];
  }
};

Texture make_texture(std::mt19937_64& rng, int h, int w, int c, int grain) {
  const int gh = h / grain + 2;
  const int gw = w / grain + 2;
  std::vector<double> grid(static_cast<size_t>(c) * gh * gw);
  for (double& x : grid) x = rand_u01(rng) * 255.0;
  Texture t;
  t.h = h;
  t.w = w;
  t.c = c;
  t.v.resize(static_cast<size_t>(c) * h * w);
  for (int ch = 0; ch < c; ++ch) {
    const double* g = grid.data() + static_cast<size_t>(ch) * gh * gw;
    for (int y = 0; y < h; ++y) {
      const double fy = static_cast<double>(y) / grain;
      const int y0 = static_cast<int>(fy);
      const double wy = fy - y0;
      for (int x = 0; x < w; ++x) {
        const double fx = static_cast<double>(x) / grain;
        const int x0 = static_cast<int>(fx);
        const double wx = fx - x0;
        const double top = g[y0 * gw + x0] * (1 - wx) + g[y0 * gw + x0 + 1] * wx;
        const double bot =
            g[(y0 + 1) * gw + x0] * (1 - wx) + g[(y0 + 1) * gw + x0 + 1] * wx;
        t.v[(static_cast<size_t>(ch) * h + y) * w + x] = top * (1 - wy) + bot * wy;
      }
    }
  }
  return t;
}

Texture blend_textures(const Texture& a, std::mt19937_64& rng, double similarity,
                       int grain) {
  Texture own = make_texture(rng, a.h, a.w, a.c, grain);
  Texture out = a;
  for (size_t i = 0; i < out.v.size(); ++i) {
    out.v[i] = similarity * a.v[i] + (1.0 - similarity) * own.v[i];
  }
  return out;
}

void draw_texture(Frame& f, const Texture& t, int cx, int cy) {
  const int x0 = cx - t.w / 2;
  const int y0 = cy - t.h / 2;
  for (int y = 0; y < t.h; ++y) {
    const int fy = y0 + y;
    if (fy < 0 || fy >= f.height) continue;
    for (int x = 0; x < t.w; ++x) {
      const int fx = x0 + x;
      if (fx < 0 || fx >= f.width) continue;
      for (int c = 0; c < f.channels; ++c) {
        f.px(fy, fx, c) = to_u8(t.at(y, x, c));
      }
    }
  }
}

struct Mover {
  double x, y, vx, vy, hw, hh;

  void advance(int width, int height) {
    x += vx;
    y += vy;
    const double margin = 2.0;
    if (x - hw < margin) {
      x = margin + hw;
      vx = -vx;
    } else if (x + hw > width - margin) {
      x = width - margin - hw;
      vx = -vx;
    }
    if (y - hh < margin) {
      y = margin + hh;
      vy = -vy;
    } else if (y + hh > height - margin) {
      y = height - margin - hh;
      vy = -vy;
    }
  }
};

}  // namespace

void Scenario::validate() const {
  if (width < 16 || height < 16) {
    throw Error(ErrorCode::InvalidConfig, "scenario: frame size too small");
  }
  if (frames < 1) {
    throw Error(ErrorCode::InvalidConfig, "scenario: frames must be >= 1");
  }
  if (target_w < 4 || target_h < 4 || target_w > width || target_h > height) {
    throw Error(ErrorCode::InvalidConfig, "scenario: target does not fit the frame");
  }
  if (clutter < 0 || clutter_similarity < 0.0 || clutter_similarity > 1.0) {
    throw Error(ErrorCode::InvalidConfig, "scenario: bad clutter settings");
  }
  if (noise < 0.0 || noise > 1.0) {
    throw Error(ErrorCode::InvalidConfig, "scenario: noise must be in [0,1]");
  }
  for (const Occlusion& o : occlusions) {
    if (o.start < 1 || o.end > frames || o.start > o.end) {
      throw Error(ErrorCode::InvalidConfig,
                  "scenario: occlusion range outside sequence");
    }
    if (o.from != "left" && o.from != "right" && o.from != "top" &&
        o.from != "bottom") {
      throw Error(ErrorCode::InvalidConfig, "scenario: bad occlusion direction");
    }
    if (o.size <= 0.0) {
      throw Error(ErrorCode::InvalidConfig, "scenario: occluder size must be > 0");
    }
  }
}

Scenario scenario_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::Format, std::string("scenario JSON: ") + e.what());
  }
  Scenario sc;
  try {
    sc.name = j.value("name", sc.name);
    sc.width = j.value("width", sc.width);
    sc.height = j.value("height", sc.height);
    sc.frames = j.value("frames", sc.frames);
    sc.seed = j.value("seed", sc.seed);
    sc.color = j.value("color", sc.color);
    if (j.contains("target")) {
      const json& t = j["target"];
      sc.target_w = t.value("w", sc.target_w);
      sc.target_h = t.value("h", sc.target_h);
      sc.x0 = t.value("x0", sc.x0);
      sc.y0 = t.value("y0", sc.y0);
    }
    if (j.contains("path")) {
      const json& p = j["path"];
      sc.vx = p.value("vx", sc.vx);
      sc.vy = p.value("vy", sc.vy);
    }
    if (j.contains("clutter")) {
      const json& c = j["clutter"];
      sc.clutter = c.value("count", sc.clutter);
      sc.clutter_distance = c.value("distance", sc.clutter_distance);
      sc.clutter_similarity = c.value("similarity", sc.clutter_similarity);
    }
    if (j.contains("occlusions")) {
      for (const json& o : j["occlusions"]) {
        Scenario::Occlusion occ;
        occ.start = o.value("start", occ.start);
        occ.end = o.value("end", occ.end);
        occ.from = o.value("from", occ.from);
        occ.size = o.value("size", occ.size);
        sc.occlusions.push_back(occ);
      }
    }
    sc.noise = j.value("noise", sc.noise);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::Format, std::string("scenario JSON: ") + e.what());
  }
  sc.validate();
  return sc;
}

Scenario scenario_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot read scenario file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return scenario_from_json(ss.str());
}

std::string scenario_to_json(const Scenario& sc) {
  nlohmann::ordered_json j;
  j["name"] = sc.name;
  j["width"] = sc.width;
  j["height"] = sc.height;
  j["frames"] = sc.frames;
  j["seed"] = sc.seed;
  j["color"] = sc.color;
  j["target"] = {{"w", sc.target_w}, {"h", sc.target_h}, {"x0", sc.x0}, {"y0", sc.y0}};
  j["path"] = {{"vx", sc.vx}, {"vy", sc.vy}};
  j["clutter"] = {{"count", sc.clutter},
                  {"distance", sc.clutter_distance},
                  {"similarity", sc.clutter_similarity}};
  nlohmann::ordered_json occs = nlohmann::ordered_json::array();
  for (const auto& o : sc.occlusions) {
    occs.push_back({{"start", o.start}, {"end", o.end}, {"from", o.from}, {"size", o.size}});
  }
  j["occlusions"] = occs;
  j["noise"] = sc.noise;
  return j.dump(2);
}

Sequence generate_sequence(const Scenario& sc) {
  sc.validate();
  std::mt19937_64 rng(sc.seed);
  const int c = sc.color ? 3 : 1;
  const int tw = std::max(4, static_cast<int>(std::lround(sc.target_w)));
  const int th = std::max(4, static_cast<int>(std::lround(sc.target_h)));

  const Texture background = make_texture(rng, sc.height, sc.width, c, 8);
  const Texture target_tex = make_texture(rng, th, tw, c, 4);
  std::vector<Texture> clutter_tex;
  for (int k = 0; k < sc.clutter; ++k) {
    clutter_tex.push_back(blend_textures(target_tex, rng, sc.clutter_similarity, 4));
  }
  std::vector<Texture> occ_tex;
  for (const auto& o : sc.occlusions) {
    occ_tex.push_back(make_texture(rng,
                                   std::max(4, static_cast<int>(std::lround(th * o.size))),
                                   std::max(4, static_cast<int>(std::lround(tw * o.size))),
                                   c, 6));
  }

  const double start_x = sc.x0 >= 0 ? sc.x0 : sc.width / 4.0;
  const double start_y = sc.y0 >= 0 ? sc.y0 : sc.height / 2.0;
  Mover target{start_x, start_y, sc.vx, sc.vy, tw / 2.0, th / 2.0};

  // Distractors ride parallel tracks around the target.
  std::vector<Mover> distractors;
  for (int k = 0; k < sc.clutter; ++k) {
    const double angle = 2.0 * M_PI * (k + 0.5) / std::max(1, sc.clutter) +
                         (sc.vx >= 0 ? M_PI / 2 : 0.0);
    const double dist = sc.clutter_distance * std::max(tw, th);
    Mover m{start_x + std::cos(angle) * dist, start_y + std::sin(angle) * dist,
            sc.vx, sc.vy, tw / 2.0, th / 2.0};
    distractors.push_back(m);
  }

  Sequence seq;
  seq.name = sc.name;
  seq.frames.reserve(sc.frames);
  seq.gt.reserve(sc.frames);
  if (!sc.occlusions.empty()) seq.attributes.push_back("occlusion");
  if (sc.clutter > 0) seq.attributes.push_back("clutter");

  Frame base;
  base.width = sc.width;
  base.height = sc.height;
  base.channels = c;
  base.data.resize(static_cast<size_t>(sc.width) * sc.height * c);
  for (int y = 0; y < sc.height; ++y) {
    for (int x = 0; x < sc.width; ++x) {
      for (int ch = 0; ch < c; ++ch) {
        base.px(y, x, ch) = to_u8(background.at(y, x, ch));
      }
    }
  }

  for (int i = 1; i <= sc.frames; ++i) {
    target.advance(sc.width, sc.height);
    for (Mover& m : distractors) m.advance(sc.width, sc.height);

    Frame f = base;
    f.index = i;
    for (size_t k = 0; k < distractors.size(); ++k) {
      draw_texture(f, clutter_tex[k], static_cast<int>(std::lround(distractors[k].x)),
                   static_cast<int>(std::lround(distractors[k].y)));
    }
    draw_texture(f, target_tex, static_cast<int>(std::lround(target.x)),
                 static_cast<int>(std::lround(target.y)));

    for (size_t oi = 0; oi < sc.occlusions.size(); ++oi) {
      const auto& o = sc.occlusions[oi];
      if (i < o.start || i > o.end) continue;
      const double phase =
          o.end > o.start ? static_cast<double>(i - o.start) / (o.end - o.start) : 0.5;
      const double sweep = (phase * 2.0 - 1.0) *
                           (0.75 * std::max(tw, th) + 0.5 * occ_tex[oi].w);
      double ox = target.x, oy = target.y;
      if (o.from == "left") ox += sweep;
      else if (o.from == "right") ox -= sweep;
      else if (o.from == "top") oy += sweep;
      else oy -= sweep;
      draw_texture(f, occ_tex[oi], static_cast<int>(std::lround(ox)),
                   static_cast<int>(std::lround(oy)));
    }

    if (sc.noise > 0.0) {
      const double sigma = sc.noise * 255.0;
      for (uint8_t& px : f.data) {
        px = to_u8(px + sigma * rand_normal(rng));
      }
    }

    seq.frames.push_back(std::move(f));
    seq.gt.push_back(GtEntry{BoundingBox{target.x, target.y, sc.target_w, sc.target_h}, true});
  }
  return seq;
}

}  // namespace tacf
