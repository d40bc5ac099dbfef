#include "panosplat/pipeline.h"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace panosplat {

Reconstruction reconstruct(const std::vector<ErpImage>& images, const std::vector<Pose>& poses,
                           const ReconstructConfig& config) {
  Reconstruction out;
  out.depths = estimate_depth(images, poses, config.depth);
  std::vector<SplatSet> sets;
  for (std::size_t i = 0; i < images.size(); ++i) {
    sets.push_back(decode_splats(images[i], out.depths[i], poses[i], config.decode, static_cast<int>(i)));
  }
  out.splats = merge(sets);
  return out;
}

Reconstruction reconstruct_frames(const Scene& scene, int first, int second, const ReconstructConfig& config) {
  for (int idx : {first, second}) {
    if (idx < 0 || idx >= scene.frame_count()) {
      throw std::out_of_range("frame index " + std::to_string(idx) + " out of range; scene has " +
                              std::to_string(scene.frame_count()) + " frames");
    }
  }
  std::vector<ErpImage> images{scene.load_image(first), scene.load_image(second)};
  std::vector<Pose> poses{scene.pose(first), scene.pose(second)};
  return reconstruct(images, poses, config);
}

double round6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return std::stod(buf);
}

namespace {

DepthMetrics mean_metrics(const std::vector<DepthMetrics>& ms) {
  DepthMetrics m;
  for (const DepthMetrics& x : ms) {
    m.abs_diff += x.abs_diff;
    m.abs_rel += x.abs_rel;
    m.rmse += x.rmse;
    m.delta_1_25 += x.delta_1_25;
    m.count += x.count;
  }
  const double n = static_cast<double>(ms.size());
  m.abs_diff /= n;
  m.abs_rel /= n;
  m.rmse /= n;
  m.delta_1_25 /= n;
  return m;
}

nlohmann::json depth_json(const std::optional<DepthMetrics>& m) {
  if (!m) return nullptr;
  return {{"abs_diff", round6(m->abs_diff)},
          {"abs_rel", round6(m->abs_rel)},
          {"rmse", round6(m->rmse)},
          {"delta_1_25", round6(m->delta_1_25)}};
}

std::string g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

EvalReport evaluate(const Scene& scene, const EvalConfig& config) {
  EvalReport report;
  const auto tuples = select_eval_tuples(scene.frame_count(), config.interval, config.n_targets, config.seed);
  std::vector<DepthMetrics> all_depth;
  double psnr_sum = 0.0, ssim_sum = 0.0;
  int target_count = 0;
  for (const EvalTuple& t : tuples) {
    TupleReport row;
    row.tuple = t;
    std::optional<Reconstruction> rec;
    if (!(config.oracle_color && config.oracle_depth)) {
      rec = reconstruct_frames(scene, t.context_first, t.context_second, config.reconstruct);
    }
    std::vector<DepthMetrics> row_depth;
    for (int target : t.targets) {
      const ErpImage gt = scene.load_image(target);
      const std::optional<DepthMap> gt_depth = scene.load_depth(target);
      std::optional<PanoramaRender> render;
      if (rec) render = render_panorama(rec->splats, scene.pose(target), gt.grid(), config.background);
      const ErpImage& pred = config.oracle_color ? gt : render->image;
      TargetReport tr;
      tr.frame = target;
      tr.psnr = psnr(pred, gt);
      tr.ssim = ssim(pred, gt);
      if (gt_depth) {
        const DepthMap& pred_depth = config.oracle_depth ? *gt_depth : render->depth;
        tr.depth = depth_metrics(pred_depth, *gt_depth);
        row_depth.push_back(*tr.depth);
        all_depth.push_back(*tr.depth);
      }
      row.psnr += tr.psnr;
      row.ssim += tr.ssim;
      psnr_sum += tr.psnr;
      ssim_sum += tr.ssim;
      ++target_count;
      row.targets.push_back(tr);
    }
    row.psnr /= static_cast<double>(row.targets.size());
    row.ssim /= static_cast<double>(row.targets.size());
    if (!row_depth.empty()) row.depth = mean_metrics(row_depth);
    report.rows.push_back(std::move(row));
  }
  if (target_count > 0) {
    report.psnr = psnr_sum / target_count;
    report.ssim = ssim_sum / target_count;
  }
  if (!all_depth.empty()) report.depth = mean_metrics(all_depth);
  return report;
}

std::string EvalReport::to_json() const {
  nlohmann::json j;
  j["tuples"] = tuples();
  j["psnr"] = round6(psnr);
  j["ssim"] = round6(ssim);
  j["depth"] = depth_json(depth);
  return j.dump(2) + "\n";
}

std::string EvalReport::to_csv() const {
  std::ostringstream out;
  out << "context_first,context_second,targets,psnr,ssim,abs_diff,abs_rel,rmse,delta_1_25\n";
  for (const TupleReport& r : rows) {
    std::string targets;
    for (std::size_t k = 0; k < r.tuple.targets.size(); ++k) {
      if (k) targets += ' ';
      targets += std::to_string(r.tuple.targets[k]);
    }
    out << r.tuple.context_first << ',' << r.tuple.context_second << ',' << targets << ','
        << g6(r.psnr) << ',' << g6(r.ssim);
    if (r.depth) {
      out << ',' << g6(r.depth->abs_diff) << ',' << g6(r.depth->abs_rel) << ',' << g6(r.depth->rmse)
          << ',' << g6(r.depth->delta_1_25);
    } else {
      out << ",,,,";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace panosplat
