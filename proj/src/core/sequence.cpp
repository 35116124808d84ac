#include "core/sequence.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

namespace fs = std::filesystem;

namespace tacf {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool is_image_file(const fs::path& p) {
  static const char* exts[] = {".jpg", ".jpeg", ".png", ".bmp", ".ppm", ".pgm"};
  const std::string e = lower(p.extension().string());
  for (const char* x : exts) {
    if (e == x) return true;
  }
  return false;
}

std::vector<std::string> list_images(const fs::path& dir) {
  std::vector<std::string> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) {
      out.push_back(entry.path().string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string find_groundtruth(const fs::path& dir) {
  for (const char* name : {"groundtruth_rect.txt", "groundtruth.txt", "gt.txt"}) {
    if (fs::is_regular_file(dir / name)) return (dir / name).string();
  }
  std::vector<std::string> candidates;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string n = lower(entry.path().filename().string());
    if (n.find("gt") != std::string::npos && n.size() > 4 &&
        n.substr(n.size() - 4) == ".txt") {
      candidates.push_back(entry.path().string());
    }
  }
  std::sort(candidates.begin(), candidates.end());
  return candidates.empty() ? std::string() : candidates.front();
}

std::vector<GtEntry> parse_groundtruth(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot read ground truth: " + path);
  }
  std::vector<GtEntry> gt;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // tolerate a trailing blank line
    bool blank = true;
    for (char c : line) {
      if (!std::isspace(static_cast<unsigned char>(c))) {
        blank = false;
        break;
      }
    }
    if (blank) continue;
    for (char& c : line) {
      if (c == ',' || c == '\t' || c == '\r') c = ' ';
    }
    std::istringstream ss(line);
    std::string tok;
    double vals[4];
    int count = 0;
    bool nan_box = false;
    while (ss >> tok && count < 4) {
      if (lower(tok) == "nan") {
        nan_box = true;
        vals[count++] = 0.0;
        continue;
      }
      try {
        vals[count++] = std::stod(tok);
      } catch (...) {
        throw Error(ErrorCode::Format,
                    path + ": malformed ground-truth line " + std::to_string(lineno));
      }
    }
    if (count != 4) {
      throw Error(ErrorCode::Format,
                  path + ": expected 4 fields on line " + std::to_string(lineno));
    }
    GtEntry e;
    if (nan_box || !std::isfinite(vals[0]) || !std::isfinite(vals[1]) ||
        !std::isfinite(vals[2]) || !std::isfinite(vals[3])) {
      e.present = false;
    } else {
      e.box = BoundingBox::from_tl(vals[0], vals[1], vals[2], vals[3]);
    }
    gt.push_back(e);
  }
  return gt;
}

}  // namespace

Frame decode_image(const std::string& path) {
  cv::Mat img = cv::imread(path, cv::IMREAD_UNCHANGED);
  if (img.empty()) {
    throw Error(ErrorCode::Io, "cannot decode image: " + path);
  }
  if (img.depth() != CV_8U) {
    double scale = img.depth() == CV_16U ? 1.0 / 257.0 : 1.0;
    img.convertTo(img, CV_8U, scale);
  }
  Frame f;
  f.width = img.cols;
  f.height = img.rows;
  if (img.channels() == 1) {
    f.channels = 1;
    f.data.resize(static_cast<size_t>(f.width) * f.height);
    for (int y = 0; y < f.height; ++y) {
      const uint8_t* row = img.ptr<uint8_t>(y);
      std::copy(row, row + f.width, f.data.begin() + static_cast<size_t>(y) * f.width);
    }
  } else if (img.channels() == 3 || img.channels() == 4) {
    f.channels = 3;
    f.data.resize(static_cast<size_t>(f.width) * f.height * 3);
    const int ch = img.channels();
    for (int y = 0; y < f.height; ++y) {
      const uint8_t* row = img.ptr<uint8_t>(y);
      for (int x = 0; x < f.width; ++x) {
        // OpenCV decodes BGR(A); frames are RGB.
        f.px(y, x, 0) = row[x * ch + 2];
        f.px(y, x, 1) = row[x * ch + 1];
        f.px(y, x, 2) = row[x * ch + 0];
      }
    }
  } else {
    throw Error(ErrorCode::Format, "unsupported channel count in " + path);
  }
  return f;
}

void write_image_png(const Frame& frame, const std::string& path) {
  cv::Mat img;
  if (frame.channels == 1) {
    img.create(frame.height, frame.width, CV_8UC1);
    for (int y = 0; y < frame.height; ++y) {
      uint8_t* row = img.ptr<uint8_t>(y);
      for (int x = 0; x < frame.width; ++x) row[x] = frame.px(y, x, 0);
    }
  } else {
    img.create(frame.height, frame.width, CV_8UC3);
    for (int y = 0; y < frame.height; ++y) {
      uint8_t* row = img.ptr<uint8_t>(y);
      for (int x = 0; x < frame.width; ++x) {
        row[x * 3 + 0] = frame.px(y, x, 2);
        row[x * 3 + 1] = frame.px(y, x, 1);
        row[x * 3 + 2] = frame.px(y, x, 0);
      }
    }
  }
  if (!cv::imwrite(path, img)) {
    throw Error(ErrorCode::Io, "cannot write image: " + path);
  }
}

Frame Sequence::load_frame(int i) const {
  if (i < 0 || i >= length()) {
    throw Error(ErrorCode::InvalidInput, "frame index out of range");
  }
  Frame f = in_memory() ? frames[i] : decode_image(frame_paths[i]);
  f.index = i + 1;
  return f;
}

Sequence load_sequence(const std::string& dir) {
  const fs::path root(dir);
  if (!fs::is_directory(root)) {
    throw Error(ErrorCode::Io, "sequence directory not found: " + dir);
  }
  Sequence seq;
  seq.name = root.filename().string();
  if (seq.name.empty()) seq.name = root.parent_path().filename().string();

  seq.frame_paths = list_images(root);
  if (seq.frame_paths.empty()) {
    seq.frame_paths = list_images(root / "img");
  }
  if (seq.frame_paths.empty()) {
    throw Error(ErrorCode::Format, "no image files found in " + dir);
  }

  const std::string gt_path = find_groundtruth(root);
  if (gt_path.empty()) {
    throw Error(ErrorCode::Format, "no ground-truth file found in " + dir);
  }
  seq.gt = parse_groundtruth(gt_path);
  if (seq.gt.size() != seq.frame_paths.size()) {
    throw Error(ErrorCode::Format,
                dir + ": ground truth has " + std::to_string(seq.gt.size()) +
                    " entries but " + std::to_string(seq.frame_paths.size()) +
                    " frames");
  }
  if (!seq.gt.front().present) {
    throw Error(ErrorCode::Format, dir + ": first ground-truth box is absent");
  }

  const fs::path attr = root / "attributes.txt";
  if (fs::is_regular_file(attr)) {
    std::ifstream in(attr);
    std::string line;
    while (std::getline(in, line)) {
      for (char& c : line) {
        if (c == ',' || c == '\r') c = ' ';
      }
      std::istringstream ss(line);
      std::string tok;
      while (ss >> tok) seq.attributes.push_back(tok);
    }
  }
  return seq;
}

void save_sequence(const Sequence& seq, const std::string& dir) {
  const fs::path root(dir);
  fs::create_directories(root);
  char name[32];
  for (int i = 0; i < seq.length(); ++i) {
    std::snprintf(name, sizeof(name), "%05d.png", i + 1);
    const Frame f = seq.load_frame(i);
    write_image_png(f, (root / name).string());
  }
  std::ofstream gt(root / "groundtruth_rect.txt");
  if (!gt) {
    throw Error(ErrorCode::Io, "cannot write ground truth in " + dir);
  }
  gt.setf(std::ios::fixed);
  gt.precision(2);
  for (const GtEntry& e : seq.gt) {
    if (e.present) {
      gt << e.box.x() << "," << e.box.y() << "," << e.box.w << "," << e.box.h << "\n";
    } else {
      gt << "NaN,NaN,NaN,NaN\n";
    }
  }
  if (!seq.attributes.empty()) {
    std::ofstream attr(root / "attributes.txt");
    for (const std::string& a : seq.attributes) attr << a << "\n";
  }
}

}  // namespace tacf
