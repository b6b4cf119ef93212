#include "lvthick/thickness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

namespace lvthick {

namespace {

constexpr std::array<std::array<int, 3>, 6> kFaces = {
    {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};

}  // namespace

SurfaceClassification classify_surfaces(const LabelVolume& labels) {
  validate_labels(labels);
  const Index3 dims = labels.dims();
  const std::int64_t n = labels.voxel_count();

  bool has_bp = false, has_lvm = false;
  for (std::uint8_t v : labels.data()) {
    has_bp |= (v == kBloodPool);
    has_lvm |= (v == kLvm);
  }
  if (!has_lvm) fail(Errc::NoEpicardialSurface, "no LVM voxels in the label volume");
  if (!has_bp) fail(Errc::NoEndocardialSurface, "no blood-pool voxels in the label volume");

  VolumeU8 lvm(dims, labels.spacing_mm());
  for (std::int64_t i = 0; i < n; ++i) lvm[i] = (labels[i] == kLvm) ? 1 : 0;
  const VolumeU8 wall = largest_component(lvm, 26);

  SurfaceClassification out;
  out.labels = labels;
  out.domain = VolumeU8(dims, labels.spacing_mm());

  bool any_bg_adjacent = false, any_bp_adjacent = false;
  for (std::int64_t z = 0; z < dims[2]; ++z)
    for (std::int64_t y = 0; y < dims[1]; ++y)
      for (std::int64_t x = 0; x < dims[0]; ++x) {
        const std::int64_t i = labels.linear(x, y, z);
        if (!wall[i]) continue;
        bool bg_adj = false, bp_adj = false;
        for (const auto& d : kFaces) {
          const std::int64_t a = x + d[0], b = y + d[1], c = z + d[2];
          if (!labels.in_bounds(a, b, c)) continue;  // outside the grid is not label 0
          const std::uint8_t v = labels.at(a, b, c);
          bg_adj |= (v == kBackground);
          bp_adj |= (v == kBloodPool);
        }
        any_bg_adjacent |= bg_adj;
        any_bp_adjacent |= bp_adj;
        if (bp_adj) {
          out.endo.push_back(i);
          if (bg_adj) ++out.overlapping_boundary_count;  // reported, assigned to endo
        } else if (bg_adj) {
          out.epi.push_back(i);
        } else {
          out.domain[i] = 1;
          ++out.interior_count;
        }
      }
  if (!any_bg_adjacent)
    fail(Errc::NoEpicardialSurface, "LVM component never touches background");
  if (!any_bp_adjacent)
    fail(Errc::NoEndocardialSurface, "LVM component never touches the blood-pool");
  return out;
}

PotentialField solve_laplace(SurfaceClassification surfaces, double tol, std::int64_t max_iter) {
  if (!(tol > 0.0)) fail(Errc::InvalidArgument, "tol must be positive");
  if (max_iter < 1) fail(Errc::InvalidArgument, "max_iter must be positive");
  if (surfaces.epi.empty()) fail(Errc::NoEpicardialSurface, "empty epicardial boundary set");
  if (surfaces.endo.empty()) fail(Errc::NoEndocardialSurface, "empty endocardial boundary set");

  const Index3 dims = surfaces.labels.dims();
  const std::int64_t n = surfaces.labels.voxel_count();

  PotentialField field;
  field.psi = VolumeF32(dims, surfaces.labels.spacing_mm(), 0.0f);
  field.tol = tol;
  for (std::int64_t i : surfaces.epi) field.psi[i] = 1.0f;

  // interior ordinals
  std::vector<std::int64_t> interior;
  interior.reserve(static_cast<std::size_t>(surfaces.interior_count));
  std::vector<std::int64_t> ordinal(static_cast<std::size_t>(n), -1);
  for (std::int64_t i = 0; i < n; ++i)
    if (surfaces.domain[i]) {
      ordinal[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(interior.size());
      interior.push_back(i);
    }
  const std::size_t m = interior.size();

  if (m == 0) {
    field.surfaces = std::move(surfaces);
    field.converged = true;
    return field;
  }

  // Per interior voxel: indices of interior neighbors, count of epi neighbors
  // (each contributing a fixed 1.0), and the total included-neighbor count.
  std::vector<std::int32_t> nbr(m * 6, -1);
  std::vector<float> fixed_sum(m, 0.0f);
  std::vector<std::uint8_t> nbr_count(m, 0);

  std::vector<std::uint8_t> is_epi(static_cast<std::size_t>(n), 0), is_endo(static_cast<std::size_t>(n), 0);
  for (std::int64_t i : surfaces.epi) is_epi[static_cast<std::size_t>(i)] = 1;
  for (std::int64_t i : surfaces.endo) is_endo[static_cast<std::size_t>(i)] = 1;

  for (std::size_t k = 0; k < m; ++k) {
    const Index3 c = surfaces.labels.unravel(interior[k]);
    int slot = 0;
    for (const auto& d : kFaces) {
      const std::int64_t a = c[0] + d[0], b = c[1] + d[1], cc = c[2] + d[2];
      if (!surfaces.labels.in_bounds(a, b, cc)) continue;
      const std::int64_t ni = surfaces.labels.linear(a, b, cc);
      if (surfaces.domain[ni]) {
        nbr[k * 6 + slot++] = static_cast<std::int32_t>(ordinal[static_cast<std::size_t>(ni)]);
        ++nbr_count[k];
      } else if (is_epi[static_cast<std::size_t>(ni)]) {
        fixed_sum[k] += 1.0f;
        ++nbr_count[k];
      } else if (is_endo[static_cast<std::size_t>(ni)]) {
        ++nbr_count[k];  // contributes 0 to the sum
      }
    }
    for (; slot < 6; ++slot) nbr[k * 6 + slot] = -1;
  }

  std::vector<double> cur(m, 0.0), next(m, 0.0);
  field.residual_history.reserve(256);
  bool converged = false;
  std::int64_t iter = 0;
  while (iter < max_iter) {
    double res = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      if (nbr_count[k] == 0) {
        next[k] = cur[k];
        continue;
      }
      double s = fixed_sum[k];
      for (int j = 0; j < 6; ++j) {
        const std::int32_t o = nbr[k * 6 + j];
        if (o < 0) break;
        s += cur[static_cast<std::size_t>(o)];
      }
      const double v = s / nbr_count[k];
      res = std::max(res, std::abs(v - cur[k]));
      next[k] = v;
    }
    cur.swap(next);
    ++iter;
    field.residual_history.push_back(res);
    if (res < tol) {
      converged = true;
      break;
    }
  }

  for (std::size_t k = 0; k < m; ++k) field.psi[interior[k]] = static_cast<float>(cur[k]);
  field.iterations_used = iter;
  field.converged = converged;
  field.surfaces = std::move(surfaces);
  return field;
}

// --- Gradient + tracing --------------------------------------------------------

GradientField make_gradient(const PotentialField& field) {
  const LabelVolume& labels = field.surfaces.labels;
  const Index3 dims = labels.dims();
  const Spacing3 sp = labels.spacing_mm();
  const std::int64_t n = labels.voxel_count();

  // Extend the potential past the wall so boundary-adjacent gradients point
  // through the surfaces: blood-pool joins the endocardial 0-level,
  // background the epicardial 1-level.
  std::vector<float> ext(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    if (labels[i] == kBackground)
      ext[static_cast<std::size_t>(i)] = 1.0f;
    else if (labels[i] == kBloodPool)
      ext[static_cast<std::size_t>(i)] = 0.0f;
    else
      ext[static_cast<std::size_t>(i)] = field.psi[i];
  }

  GradientField g{VolumeF32(dims, sp), VolumeF32(dims, sp), VolumeF32(dims, sp)};
  VolumeF32* comps[3] = {&g.gx, &g.gy, &g.gz};
  for (std::int64_t z = 0; z < dims[2]; ++z)
    for (std::int64_t y = 0; y < dims[1]; ++y)
      for (std::int64_t x = 0; x < dims[0]; ++x) {
        const std::int64_t i = labels.linear(x, y, z);
        const std::int64_t pos[3] = {x, y, z};
        for (int a = 0; a < 3; ++a) {
          const std::int64_t lo = std::max<std::int64_t>(pos[a] - 1, 0);
          const std::int64_t hi = std::min<std::int64_t>(pos[a] + 1, dims[a] - 1);
          if (hi == lo) {
            (*comps[a])[i] = 0.0f;
            continue;
          }
          std::int64_t ilo = i, ihi = i;
          const std::int64_t stride = (a == 0) ? 1 : (a == 1) ? dims[0] : dims[0] * dims[1];
          ilo += (lo - pos[a]) * stride;
          ihi += (hi - pos[a]) * stride;
          (*comps[a])[i] = static_cast<float>(
              (ext[static_cast<std::size_t>(ihi)] - ext[static_cast<std::size_t>(ilo)]) /
              (static_cast<double>(hi - lo) * sp[a]));
        }
      }
  return g;
}

namespace {

std::array<double, 3> sample_gradient(const GradientField& g, const std::array<double, 3>& p) {
  const Index3 dims = g.gx.dims();
  const Spacing3 sp = g.gx.spacing_mm();
  std::int64_t i0[3];
  double fr[3];
  for (int a = 0; a < 3; ++a) {
    const double u = std::clamp(p[a] / sp[a] - 0.5, 0.0, static_cast<double>(dims[a] - 1));
    if (dims[a] == 1) {
      i0[a] = 0;
      fr[a] = 0.0;
    } else {
      i0[a] = std::min<std::int64_t>(static_cast<std::int64_t>(std::floor(u)), dims[a] - 2);
      fr[a] = u - static_cast<double>(i0[a]);
    }
  }
  std::array<double, 3> out{0.0, 0.0, 0.0};
  for (int cz = 0; cz < 2; ++cz)
    for (int cy = 0; cy < 2; ++cy)
      for (int cx = 0; cx < 2; ++cx) {
        const double w = (cx ? fr[0] : 1.0 - fr[0]) * (cy ? fr[1] : 1.0 - fr[1]) *
                         (cz ? fr[2] : 1.0 - fr[2]);
        if (w == 0.0) continue;
        const std::int64_t i =
            g.gx.linear(std::min(i0[0] + cx, dims[0] - 1), std::min(i0[1] + cy, dims[1] - 1),
                        std::min(i0[2] + cz, dims[2] - 1));
        out[0] += w * g.gx[i];
        out[1] += w * g.gy[i];
        out[2] += w * g.gz[i];
      }
  return out;
}

}  // namespace

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::ReachedEndo: return "ReachedEndo";
    case Termination::LeftDomain: return "LeftDomain";
    case Termination::MaxSteps: return "MaxSteps";
  }
  return "?";
}

Streamline trace_streamline(const PotentialField& field, const GradientField& gradient,
                            std::int64_t seed, double step_mm) {
  if (!(step_mm > 0.0)) fail(Errc::InvalidArgument, "step_mm must be positive");
  const auto& epi = field.surfaces.epi;
  if (!std::binary_search(epi.begin(), epi.end(), seed))
    fail(Errc::InvalidArgument, "seed is not an epicardial voxel");

  const LabelVolume& labels = field.surfaces.labels;
  const Index3 dims = labels.dims();
  const Spacing3 sp = labels.spacing_mm();
  const auto& endo = field.surfaces.endo;

  const auto ext = labels.extent_mm();
  const double max_extent = std::max({ext[0], ext[1], ext[2]});
  const std::int64_t max_steps =
      static_cast<std::int64_t>(std::ceil(50.0 * max_extent / step_mm));

  Streamline line;
  line.seed = seed;
  line.step_mm = step_mm;
  const Index3 sc = labels.unravel(seed);
  std::array<double, 3> p = {(sc[0] + 0.5) * sp[0], (sc[1] + 0.5) * sp[1], (sc[2] + 0.5) * sp[2]};
  line.points.push_back(p);

  std::int64_t steps = 0;
  for (;;) {
    std::int64_t v[3];
    bool inside = true;
    for (int a = 0; a < 3; ++a) {
      v[a] = static_cast<std::int64_t>(std::floor(p[a] / sp[a]));
      inside &= (v[a] >= 0 && v[a] < dims[a]);
    }
    if (!inside) {
      line.termination = Termination::LeftDomain;
      break;
    }
    const std::int64_t vi = labels.linear(v[0], v[1], v[2]);
    const std::uint8_t lab = labels[vi];
    if (lab == kBloodPool) {
      line.termination = Termination::ReachedEndo;
      break;
    }
    if (lab == kBackground) {
      line.termination = Termination::LeftDomain;
      break;
    }
    if (steps >= max_steps) {
      line.termination = Termination::MaxSteps;
      break;
    }
    const auto g = sample_gradient(gradient, p);
    const double norm = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
    if (norm < 1e-12) {
      line.zero_gradient = true;
      line.termination = std::binary_search(endo.begin(), endo.end(), vi)
                             ? Termination::ReachedEndo
                             : Termination::LeftDomain;
      break;
    }
    for (int a = 0; a < 3; ++a) p[a] -= step_mm * g[a] / norm;
    line.points.push_back(p);
    ++steps;
  }

  double length = 0.0;
  for (std::size_t i = 1; i < line.points.size(); ++i) {
    const auto& a = line.points[i - 1];
    const auto& b = line.points[i];
    length += std::sqrt((b[0] - a[0]) * (b[0] - a[0]) + (b[1] - a[1]) * (b[1] - a[1]) +
                        (b[2] - a[2]) * (b[2] - a[2]));
  }
  line.length_mm = length;
  return line;
}

Streamline trace_streamline(const PotentialField& field, std::int64_t seed, double step_mm) {
  return trace_streamline(field, make_gradient(field), seed, step_mm);
}

double linear_percentile(std::span<const double> sorted_values, double q) {
  if (sorted_values.empty()) fail(Errc::InvalidArgument, "percentile of empty range");
  if (sorted_values.size() == 1) return sorted_values[0];
  const double rank = std::clamp(q, 0.0, 1.0) * static_cast<double>(sorted_values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = std::min(lo + 1, sorted_values.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return sorted_values[lo] + frac * (sorted_values[hi] - sorted_values[lo]);
}

double default_step_mm(const Spacing3& spacing) {
  return 0.25 * std::min({spacing[0], spacing[1], spacing[2]});
}

ThicknessMap thickness_map(const PotentialField& field, double step_mm) {
  if (field.surfaces.epi.empty()) fail(Errc::NoSeeds, "no epicardial seed voxels");
  const GradientField gradient = make_gradient(field);

  ThicknessMap map;
  map.entries.reserve(field.surfaces.epi.size());
  std::vector<double> reached;
  for (std::int64_t seed : field.surfaces.epi) {
    Streamline line = trace_streamline(field, gradient, seed, step_mm);
    if (line.termination == Termination::ReachedEndo) reached.push_back(line.length_mm);
    map.entries.push_back(std::move(line));
  }
  map.reached_fraction =
      static_cast<double>(reached.size()) / static_cast<double>(map.entries.size());
  if (!reached.empty()) {
    std::sort(reached.begin(), reached.end());
    map.stats = ThicknessStats{linear_percentile(reached, 0.5), linear_percentile(reached, 0.95),
                               reached.back()};
  }
  return map;
}

PhaseStatsPair thickness_stats_pair(const ThicknessMap& ed_map, const ThicknessMap& es_map) {
  if (!ed_map.stats) fail(Errc::EmptyMap, "ED map has no ReachedEndo streamlines");
  if (!es_map.stats) fail(Errc::EmptyMap, "ES map has no ReachedEndo streamlines");
  return {*ed_map.stats, *es_map.stats};
}

// --- Serialization ---------------------------------------------------------------

namespace {

nlohmann::json stats_json(const ThicknessStats& s) {
  return {{"median", s.median_mm}, {"p95", s.p95_mm}, {"max", s.max_mm}};
}

ThicknessStats stats_from(const nlohmann::json& j) {
  return {j.at("median").get<double>(), j.at("p95").get<double>(), j.at("max").get<double>()};
}

}  // namespace

std::string thickness_stats_json(const std::optional<ThicknessStats>& ed,
                                 const std::optional<ThicknessStats>& es,
                                 double reached_fraction) {
  nlohmann::json j;
  j["ed"] = ed ? stats_json(*ed) : nlohmann::json(nullptr);
  j["es"] = es ? stats_json(*es) : nlohmann::json(nullptr);
  j["reached_fraction"] = reached_fraction;
  j["units"] = "mm";
  return j.dump(2) + "\n";
}

PhaseStatsRecord phase_stats_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::HeaderParse, std::string("bad stats JSON: ") + e.what());
  }
  PhaseStatsRecord rec;
  try {
    if (j.contains("ed") && !j["ed"].is_null()) rec.ed = stats_from(j["ed"]);
    if (j.contains("es") && !j["es"].is_null()) rec.es = stats_from(j["es"]);
    rec.reached_fraction = j.value("reached_fraction", 0.0);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::HeaderParse, std::string("bad stats JSON field: ") + e.what());
  }
  return rec;
}

std::string streamlines_csv(const ThicknessMap& map, const Index3& dims) {
  std::string out = "seed_x,seed_y,seed_z,point_index,px_mm,py_mm,pz_mm,termination\n";
  char buf[160];
  for (const auto& line : map.entries) {
    const std::int64_t x = line.seed % dims[0];
    const std::int64_t y = (line.seed / dims[0]) % dims[1];
    const std::int64_t z = line.seed / (dims[0] * dims[1]);
    const char* term = termination_name(line.termination);
    for (std::size_t i = 0; i < line.points.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%lld,%lld,%lld,%zu,%.6f,%.6f,%.6f,%s\n",
                    static_cast<long long>(x), static_cast<long long>(y),
                    static_cast<long long>(z), i, line.points[i][0], line.points[i][1],
                    line.points[i][2], term);
      out += buf;
    }
  }
  return out;
}

}  // namespace lvthick
