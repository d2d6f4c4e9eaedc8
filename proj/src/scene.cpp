#include "radsub/scene.hpp"

#include <cmath>
#include <stdexcept>

#include "radsub/rng.hpp"

namespace radsub {
namespace {

struct Polar {
  double range_m;
  double bearing_deg;
};

Polar to_polar(double x_east, double y_north) {
  const double range = std::hypot(x_east, y_north);
  double bearing = 0.0;
  if (range > 0.0) bearing = wrap_azimuth_deg(std::atan2(x_east, y_north) * 180.0 / M_PI);
  return {range, bearing};
}

}  // namespace

void validate(const SceneConfig& cfg) {
  if (cfg.n_frames < 1) throw std::invalid_argument("scene: n_frames must be >= 1");
  if (cfg.rows < 1 || cfg.cols < 1) throw std::invalid_argument("scene: empty frame shape");
  if (cfg.range_res <= 0.0) throw std::invalid_argument("scene: range_res must be positive");
  if (!(cfg.peak_value > 0.0f)) throw std::invalid_argument("scene: peak_value must be positive");
  if (cfg.clutter_mean < 0.0) throw std::invalid_argument("scene: clutter_mean must be >= 0");
  const double max_range = cfg.cols * cfg.range_res;
  for (std::size_t i = 0; i < cfg.targets.size(); ++i) {
    const SceneTarget& t = cfg.targets[i];
    if (t.extent_m <= 0.0 || t.reflectivity < 0.0)
      throw std::invalid_argument("scene: target " + std::to_string(i) + " malformed");
    bool in_range = false;
    for (int f = 1; f <= cfg.n_frames && !in_range; ++f) {
      if (f < t.appear_frame || f > t.disappear_frame) continue;
      const double x = t.x0_m + t.vx_m * (f - 1);
      const double y = t.y0_m + t.vy_m * (f - 1);
      in_range = std::hypot(x, y) < max_range;
    }
    if (!in_range)
      throw std::invalid_argument("scene: target " + std::to_string(i) +
                                  " never enters the observable range");
  }
}

Scene gen_scene(const SceneConfig& cfg, const std::optional<CameraCalibration>& camera) {
  validate(cfg);
  if (camera) validate(*camera);

  Scene scene;
  const double az_res = cfg.azimuth_res();
  const double max_range = cfg.cols * cfg.range_res;
  const int side = cfg.effective_side();
  const double mpp = cfg.effective_mpp();
  const double center = (side - 1) / 2.0;

  for (int f = 1; f <= cfg.n_frames; ++f) {
    Eigen::MatrixXf data(cfg.rows, cfg.cols);
    Rng rng(mix_seed({cfg.seed, static_cast<std::uint64_t>(f)}));
    for (Eigen::Index j = 0; j < data.cols(); ++j)
      for (Eigen::Index i = 0; i < data.rows(); ++i)
        data(i, j) = cfg.clutter_mean > 0.0
                         ? static_cast<float>(rng.exponential(cfg.clutter_mean))
                         : 0.0f;

    for (const SceneTarget& t : cfg.targets) {
      if (f < t.appear_frame || f > t.disappear_frame) continue;
      const double tx = t.x0_m + t.vx_m * (f - 1);
      const double ty = t.y0_m + t.vy_m * (f - 1);
      const Polar p = to_polar(tx, ty);
      if (p.range_m >= max_range) continue;

      // Paint a Gaussian blob over the cells within 4 sigma of the target.
      const double reach = 4.0 * t.extent_m;
      const int r_lo = std::max(0, static_cast<int>((p.range_m - reach) / cfg.range_res));
      const int r_hi =
          std::min(cfg.cols - 1, static_cast<int>((p.range_m + reach) / cfg.range_res));
      const double two_sigma_sq = 2.0 * t.extent_m * t.extent_m;
      for (int a = 0; a < cfg.rows; ++a) {
        const double bearing = (a + 0.5) * az_res * M_PI / 180.0;
        const double dir_x = std::sin(bearing);
        const double dir_y = std::cos(bearing);
        for (int r = r_lo; r <= r_hi; ++r) {
          const double range = (r + 0.5) * cfg.range_res;
          const double cx = range * dir_x;
          const double cy = range * dir_y;
          const double d2 = (cx - tx) * (cx - tx) + (cy - ty) * (cy - ty);
          if (d2 > reach * reach) continue;
          data(a, r) += static_cast<float>(t.reflectivity * std::exp(-d2 / two_sigma_sq));
        }
      }

      // Ground truth in the Cartesian rendering frame.
      const double px = center + tx / mpp;
      const double py = center - ty / mpp;
      const double half = std::max(2.0 * t.extent_m / mpp, 2.0);
      if (px >= 0 && px < side && py >= 0 && py < side)
        scene.ground_truth[f].push_back(BBox{px - half, py - half, 2.0 * half, 2.0 * half});

      // Synthetic camera detection when the target sits inside the FoV.
      if (camera) {
        double signed_az = std::fmod(p.bearing_deg, 360.0);
        if (signed_az > 180.0) signed_az -= 360.0;
        if (signed_az >= camera->theta_min_deg && signed_az <= camera->theta_max_deg) {
          const double frac = (signed_az - camera->theta_min_deg) /
                              (camera->theta_max_deg - camera->theta_min_deg);
          const double cam_x = camera->x_min + frac * (camera->x_max - camera->x_min);
          Detection d;
          d.bbox = BBox{cam_x - 20.0, 100.0, 40.0, 80.0};
          d.score = 0.9;
          d.cls = t.cls;
          scene.image_detections[f].push_back(std::move(d));
        }
      }
    }

    data = data.cwiseMin(cfg.peak_value).cwiseMax(0.0f);
    scene.frames.push_back(make_frame(std::move(data), az_res, cfg.range_res, cfg.peak_value, f));
  }
  return scene;
}

}  // namespace radsub
