#include "nightseg/superpixel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>
#include <utility>

#include "nightseg/errors.hpp"

namespace nightseg {

namespace {

struct Center {
  double value;
  double x;
  double y;
};

double gradient_sq(const ChannelMap& cmap, int x, int y) {
  const int w = cmap.width();
  const int h = cmap.height();
  const auto clampx = [&](int v) { return std::clamp(v, 0, w - 1); };
  const auto clampy = [&](int v) { return std::clamp(v, 0, h - 1); };
  const double gx = cmap.at(clampx(x + 1), y) - cmap.at(clampx(x - 1), y);
  const double gy = cmap.at(x, clampy(y + 1)) - cmap.at(x, clampy(y - 1));
  return gx * gx + gy * gy;
}

std::vector<Center> seed_centers(const ChannelMap& cmap, double spacing) {
  const int w = cmap.width();
  const int h = cmap.height();
  const int nx = std::max(1, static_cast<int>(std::lround(w / spacing)));
  const int ny = std::max(1, static_cast<int>(std::lround(h / spacing)));

  std::vector<Center> centers;
  centers.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      int sx = std::clamp(
          static_cast<int>((i + 0.5) * w / nx), 0, w - 1);
      int sy = std::clamp(
          static_cast<int>((j + 0.5) * h / ny), 0, h - 1);
      // Move the seed off edges in its 3x3 neighborhood.
      int bx = sx, by = sy;
      double best = gradient_sq(cmap, sx, sy);
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int px = sx + dx, py = sy + dy;
          if (px < 0 || px >= w || py < 0 || py >= h) continue;
          const double g = gradient_sq(cmap, px, py);
          if (g < best) {
            best = g;
            bx = px;
            by = py;
          }
        }
      }
      centers.push_back({cmap.at(bx, by), static_cast<double>(bx),
                         static_cast<double>(by)});
    }
  }
  return centers;
}

// Flood-fills 4-connected components of equal assignment, then repeatedly
// absorbs components smaller than min_size into the adjacent component they
// share the most boundary edges with. Returns the final label image and
// count; every final label is one connected region.
std::pair<std::vector<std::int32_t>, int> enforce_connectivity(
    std::span<const std::int32_t> assignment, int w, int h,
    std::int64_t min_size) {
  const std::int64_t n = static_cast<std::int64_t>(w) * h;
  std::vector<std::int32_t> comp(n, -1);
  std::vector<std::int64_t> comp_size;
  std::vector<std::int32_t> stack;

  for (std::int64_t start = 0; start < n; ++start) {
    if (comp[start] != -1) continue;
    const std::int32_t id = static_cast<std::int32_t>(comp_size.size());
    comp_size.push_back(0);
    comp[start] = id;
    stack.push_back(static_cast<std::int32_t>(start));
    while (!stack.empty()) {
      const std::int32_t p = stack.back();
      stack.pop_back();
      ++comp_size[id];
      const int x = p % w;
      const int y = p / w;
      const auto visit = [&](std::int64_t q) {
        if (comp[q] == -1 && assignment[q] == assignment[p]) {
          comp[q] = id;
          stack.push_back(static_cast<std::int32_t>(q));
        }
      };
      if (x > 0) visit(p - 1);
      if (x + 1 < w) visit(p + 1);
      if (y > 0) visit(p - w);
      if (y + 1 < h) visit(p + w);
    }
  }

  // Union-find over components; a merged fragment joins the absorber's root.
  std::vector<std::int32_t> parent(comp_size.size());
  for (std::size_t i = 0; i < parent.size(); ++i) {
    parent[i] = static_cast<std::int32_t>(i);
  }
  const auto find = [&](std::int32_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  std::vector<std::int64_t> root_size = comp_size;

  // Merge in passes; each pass recomputes root adjacency from the pixel grid.
  while (true) {
    std::unordered_map<std::int64_t, std::int64_t> edge_count;
    const auto key = [](std::int32_t a, std::int32_t b) {
      if (a > b) std::swap(a, b);
      return (static_cast<std::int64_t>(a) << 32) |
             static_cast<std::uint32_t>(b);
    };
    for (std::int64_t p = 0; p < n; ++p) {
      const int x = static_cast<int>(p % w);
      const std::int32_t a = find(comp[p]);
      if (x + 1 < w) {
        const std::int32_t b = find(comp[p + 1]);
        if (a != b) ++edge_count[key(a, b)];
      }
      if (p + w < n) {
        const std::int32_t b = find(comp[p + w]);
        if (a != b) ++edge_count[key(a, b)];
      }
    }
    std::unordered_map<std::int32_t,
                       std::vector<std::pair<std::int32_t, std::int64_t>>>
        neighbors;
    for (const auto& [k, cnt] : edge_count) {
      const auto a = static_cast<std::int32_t>(k >> 32);
      const auto b = static_cast<std::int32_t>(k & 0xffffffff);
      neighbors[a].push_back({b, cnt});
      neighbors[b].push_back({a, cnt});
    }

    bool merged = false;
    for (std::size_t i = 0; i < comp_size.size(); ++i) {
      const std::int32_t r = find(static_cast<std::int32_t>(i));
      if (static_cast<std::size_t>(r) != i) continue;  // not a root
      if (root_size[r] >= min_size) continue;
      auto it = neighbors.find(r);
      if (it == neighbors.end()) continue;  // isolated (whole image)
      // Boundary length per current neighbor root.
      std::unordered_map<std::int32_t, std::int64_t> border;
      for (const auto& [nbr, cnt] : it->second) {
        const std::int32_t nr = find(nbr);
        if (nr != r) border[nr] += cnt;
      }
      if (border.empty()) continue;
      // Dominant neighbor: most shared boundary, then larger, then lower id.
      std::int32_t best = -1;
      for (const auto& [nr, cnt] : border) {
        if (best == -1 || cnt > border[best] ||
            (cnt == border[best] &&
             (root_size[nr] > root_size[best] ||
              (root_size[nr] == root_size[best] && nr < best)))) {
          best = nr;
        }
      }
      parent[r] = best;
      root_size[best] += root_size[r];
      merged = true;
    }
    if (!merged) break;
  }

  // Relabel roots in raster order of first appearance.
  std::vector<std::int32_t> root_label(comp_size.size(), -1);
  std::vector<std::int32_t> labels(n);
  std::int32_t next = 0;
  for (std::int64_t p = 0; p < n; ++p) {
    const std::int32_t r = find(comp[p]);
    if (root_label[r] == -1) root_label[r] = next++;
    labels[p] = root_label[r];
  }
  return {std::move(labels), next};
}

}  // namespace

SuperpixelLabeling::SuperpixelLabeling(int width, int height,
                                       std::vector<std::int32_t> labels,
                                       int count)
    : width_(width), height_(height), count_(count),
      labels_(std::move(labels)) {
  if (width < 1 || height < 1 || count < 1) {
    throw InvalidParams("labeling dimensions and count must be positive");
  }
  const auto n = static_cast<std::size_t>(width) * height;
  if (labels_.size() != n) {
    throw InvalidParams("labeling has " + std::to_string(labels_.size()) +
                        " entries, expected " + std::to_string(n));
  }
  std::vector<std::int64_t> seen(count, 0);
  for (std::int32_t l : labels_) {
    if (l < 0 || l >= count_) {
      throw InvalidParams("label " + std::to_string(l) +
                          " outside [0, " + std::to_string(count_) + ")");
    }
    ++seen[l];
  }
  for (int l = 0; l < count_; ++l) {
    if (seen[l] == 0) {
      throw InvalidParams("label " + std::to_string(l) + " has no pixels");
    }
  }
  // Each label must be one 4-connected region: count components.
  std::vector<char> visited(n, 0);
  std::vector<std::int32_t> stack;
  int components = 0;
  for (std::size_t start = 0; start < n; ++start) {
    if (visited[start]) continue;
    ++components;
    visited[start] = 1;
    stack.push_back(static_cast<std::int32_t>(start));
    while (!stack.empty()) {
      const std::int32_t p = stack.back();
      stack.pop_back();
      const int x = p % width_;
      const int y = p / width_;
      const auto visit = [&](std::int32_t q) {
        if (!visited[q] && labels_[q] == labels_[p]) {
          visited[q] = 1;
          stack.push_back(q);
        }
      };
      if (x > 0) visit(p - 1);
      if (x + 1 < width_) visit(p + 1);
      if (y > 0) visit(p - width_);
      if (y + 1 < height_) visit(p + width_);
    }
  }
  if (components != count_) {
    throw InvalidParams("labels form " + std::to_string(components) +
                        " connected regions, expected " +
                        std::to_string(count_));
  }
}

std::vector<std::int64_t> SuperpixelLabeling::sizes() const {
  std::vector<std::int64_t> out(count_, 0);
  for (std::int32_t l : labels_) ++out[l];
  return out;
}

SuperpixelLabeling slic_oversegment(const ChannelMap& cmap,
                                    const SlicParams& params) {
  const int w = cmap.width();
  const int h = cmap.height();
  const std::int64_t n = static_cast<std::int64_t>(w) * h;

  if (params.target_count < 1 || params.target_count > n) {
    throw InvalidParams("target_count " + std::to_string(params.target_count) +
                        " outside [1, " + std::to_string(n) + "]");
  }
  if (params.compactness <= 0.0) {
    throw InvalidParams("compactness must be positive");
  }
  if (params.max_iterations < 1) {
    throw InvalidParams("max_iterations must be positive");
  }
  if (params.value_scale && *params.value_scale <= 0.0) {
    throw InvalidParams("value_scale must be positive");
  }

  const double spacing = std::sqrt(static_cast<double>(n) / params.target_count);
  double value_scale;
  if (params.value_scale) {
    value_scale = *params.value_scale;
  } else {
    const auto [lo, hi] = cmap.value_range();
    value_scale = hi - lo;
    if (value_scale <= 0.0) value_scale = 1.0;  // constant map
  }

  std::vector<Center> centers = seed_centers(cmap, spacing);
  const auto k = static_cast<std::int32_t>(centers.size());

  std::vector<std::int32_t> assignment(n, -1);
  std::vector<double> best_dist(n);
  const double inv_scale = 1.0 / value_scale;
  const double spatial = params.compactness / spacing;

  for (int iter = 0; iter < params.max_iterations; ++iter) {
    std::fill(best_dist.begin(), best_dist.end(),
              std::numeric_limits<double>::infinity());
    for (std::int32_t c = 0; c < k; ++c) {
      const Center& ct = centers[c];
      const int x0 = std::max(0, static_cast<int>(std::ceil(ct.x - spacing)));
      const int x1 = std::min(w - 1, static_cast<int>(std::floor(ct.x + spacing)));
      const int y0 = std::max(0, static_cast<int>(std::ceil(ct.y - spacing)));
      const int y1 = std::min(h - 1, static_cast<int>(std::floor(ct.y + spacing)));
      for (int y = y0; y <= y1; ++y) {
        const double dy = y - ct.y;
        std::int64_t row = static_cast<std::int64_t>(y) * w;
        for (int x = x0; x <= x1; ++x) {
          const double dv = (cmap.at(x, y) - ct.value) * inv_scale;
          const double dx = x - ct.x;
          const double ds = (dx * dx + dy * dy) * spatial * spatial;
          const double d2 = dv * dv + ds;
          if (d2 < best_dist[row + x]) {
            best_dist[row + x] = d2;
            assignment[row + x] = c;
          }
        }
      }
    }

    // Pixels outside every window (possible on extreme aspect ratios in the
    // first iterations): nearest center by full search.
    for (std::int64_t p = 0; p < n; ++p) {
      if (assignment[p] != -1) continue;
      const int x = static_cast<int>(p % w);
      const int y = static_cast<int>(p / w);
      double best = std::numeric_limits<double>::infinity();
      for (std::int32_t c = 0; c < k; ++c) {
        const double dv = (cmap.at(x, y) - centers[c].value) * inv_scale;
        const double dx = x - centers[c].x;
        const double dy = y - centers[c].y;
        const double d2 = dv * dv + (dx * dx + dy * dy) * spatial * spatial;
        if (d2 < best) {
          best = d2;
          assignment[p] = c;
        }
      }
    }

    // Update step: mean feature of the members; empty centers stay put.
    std::vector<double> sum_v(k, 0.0), sum_x(k, 0.0), sum_y(k, 0.0);
    std::vector<std::int64_t> cnt(k, 0);
    for (std::int64_t p = 0; p < n; ++p) {
      const std::int32_t c = assignment[p];
      sum_v[c] += cmap.values()[p];
      sum_x[c] += static_cast<double>(p % w);
      sum_y[c] += static_cast<double>(p / w);
      ++cnt[c];
    }
    double movement = 0.0;
    for (std::int32_t c = 0; c < k; ++c) {
      if (cnt[c] == 0) continue;
      const Center updated{sum_v[c] / cnt[c], sum_x[c] / cnt[c],
                           sum_y[c] / cnt[c]};
      movement = std::max(movement, std::hypot(updated.x - centers[c].x,
                                               updated.y - centers[c].y));
      centers[c] = updated;
    }
    if (movement < 0.5) break;
  }

  const auto min_size =
      std::max<std::int64_t>(1, static_cast<std::int64_t>(
                                    spacing * spacing / 4.0));
  auto [labels, count] = enforce_connectivity(assignment, w, h, min_size);
  return SuperpixelLabeling(w, h, std::move(labels), count);
}

}  // namespace nightseg
