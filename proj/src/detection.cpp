#include "radsub/detection.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace radsub {
namespace {

double median_of(std::vector<float>& values) {
  const std::size_t n = values.size();
  const std::size_t mid = n / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  double med = values[mid];
  if (n % 2 == 0) {
    std::nth_element(values.begin(), values.begin() + mid - 1, values.begin() + mid);
    med = 0.5 * (med + values[mid - 1]);
  }
  return med;
}

}  // namespace

std::vector<Detection> synthetic_detect(const CartesianImage& image,
                                        const SyntheticDetectorParams& params) {
  const int side = image.side();
  if (side < 1 || image.pixels.cols() != side)
    throw std::invalid_argument("synthetic_detect: image must be square and nonempty");

  std::vector<float> values(image.pixels.data(), image.pixels.data() + image.pixels.size());
  const double med = median_of(values);
  for (float& v : values) v = std::abs(v - static_cast<float>(med));
  const double mad = median_of(values);
  const double threshold = med + params.mad_multiplier * mad;

  // 8-connected components over pixels strictly above the threshold,
  // discovered in row-major order.
  Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic> label(side, side);
  label.setConstant(-1);
  struct Component {
    int min_x, min_y, max_x, max_y;
    long area = 0;
    double energy = 0.0;
  };
  std::vector<Component> components;
  std::vector<std::pair<int, int>> stack;

  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      if (label(y, x) >= 0 || !(image.pixels(y, x) > threshold)) continue;
      const int id = static_cast<int>(components.size());
      components.push_back({x, y, x, y, 0, 0.0});
      stack.assign(1, {y, x});
      label(y, x) = id;
      while (!stack.empty()) {
        const auto [cy, cx] = stack.back();
        stack.pop_back();
        Component& comp = components[id];
        comp.min_x = std::min(comp.min_x, cx);
        comp.max_x = std::max(comp.max_x, cx);
        comp.min_y = std::min(comp.min_y, cy);
        comp.max_y = std::max(comp.max_y, cy);
        comp.area += 1;
        comp.energy += image.pixels(cy, cx);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int ny = cy + dy, nx = cx + dx;
            if (ny < 0 || ny >= side || nx < 0 || nx >= side) continue;
            if (label(ny, nx) >= 0 || !(image.pixels(ny, nx) > threshold)) continue;
            label(ny, nx) = id;
            stack.push_back({ny, nx});
          }
        }
      }
    }
  }

  double total_energy = 0.0;
  for (const Component& c : components)
    if (c.area >= params.min_area) total_energy += c.energy;

  std::vector<Detection> detections;
  for (const Component& c : components) {
    if (c.area < params.min_area) continue;
    Detection d;
    d.bbox = BBox{static_cast<double>(c.min_x), static_cast<double>(c.min_y),
                  static_cast<double>(c.max_x - c.min_x + 1),
                  static_cast<double>(c.max_y - c.min_y + 1)};
    d.score = total_energy > 0.0 ? c.energy / total_energy : 0.0;
    detections.push_back(std::move(d));
  }
  return detections;
}

DetectionProvider DetectionProvider::file_backed(const std::filesystem::path& jsonl_path) {
  std::ifstream in(jsonl_path);
  if (!in) throw std::runtime_error("detections: cannot open " + jsonl_path.string());
  DetectionProvider provider;
  provider.file_backed_ = true;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error("detections: " + jsonl_path.string() + ":" +
                               std::to_string(line_no) + ": " + e.what());
    }
    Detection d;
    const auto& bbox = record.at("bbox");
    d.bbox = BBox{bbox.at(0).get<double>(), bbox.at(1).get<double>(), bbox.at(2).get<double>(),
                  bbox.at(3).get<double>()};
    d.score = record.value("score", 1.0);
    d.cls = record.value("class", std::string("vehicle"));
    provider.by_frame_[record.at("frame").get<int>()].push_back(std::move(d));
  }
  return provider;
}

DetectionProvider DetectionProvider::synthetic(SyntheticDetectorParams params) {
  DetectionProvider provider;
  provider.params_ = params;
  return provider;
}

std::vector<Detection> DetectionProvider::detect(int frame_index,
                                                 const CartesianImage& image) const {
  if (file_backed_) {
    const auto it = by_frame_.find(frame_index);
    if (it == by_frame_.end()) {
      std::fprintf(stderr, "warning: no stored detections for frame %d\n", frame_index);
      return {};
    }
    return it->second;
  }
  return synthetic_detect(image, params_);
}

}  // namespace radsub
