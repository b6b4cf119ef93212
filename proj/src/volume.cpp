#include "lvthick/volume.hpp"

#include <algorithm>
#include <cstring>
#include <deque>
#include <fstream>

#include <json.hpp>

namespace lvthick {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::BadMagic: return "BadMagic";
    case Errc::HeaderParse: return "HeaderParseError";
    case Errc::PayloadSizeMismatch: return "PayloadSizeMismatch";
    case Errc::UnknownDtype: return "UnknownDtype";
    case Errc::NonPositiveTarget: return "NonPositiveTarget";
    case Errc::EmptyMask: return "EmptyMask";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::PhaseIndexOutOfRange: return "PhaseIndexOutOfRange";
    case Errc::DuplicatePhaseIndex: return "DuplicatePhaseIndex";
    case Errc::NoEpicardialSurface: return "NoEpicardialSurface";
    case Errc::NoEndocardialSurface: return "NoEndocardialSurface";
    case Errc::NoSeeds: return "NoSeeds";
    case Errc::EmptyMap: return "EmptyMap";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::TooFewSamples: return "TooFewSamples";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::CaseIdMismatch: return "CaseIdMismatch";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::DefectOutsideVolume: return "DefectOutsideVolume";
    case Errc::NotDivisible: return "NotDivisible";
    case Errc::NothingToEmit: return "NothingToEmit";
    case Errc::IoFailure: return "IoFailure";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

const char* dtype_name(Dtype d) {
  switch (d) {
    case Dtype::U8: return "u8";
    case Dtype::I16: return "i16";
    case Dtype::F32: return "f32";
  }
  return "?";
}

std::size_t dtype_width(Dtype d) {
  switch (d) {
    case Dtype::U8: return 1;
    case Dtype::I16: return 2;
    case Dtype::F32: return 4;
  }
  return 0;
}

Dtype dtype_from_name(const std::string& name) {
  if (name == "u8") return Dtype::U8;
  if (name == "i16") return Dtype::I16;
  if (name == "f32") return Dtype::F32;
  fail(Errc::UnknownDtype, "unknown dtype \"" + name + "\"");
}

void validate_labels(const LabelVolume& labels) {
  for (std::uint8_t v : labels.data())
    if (v > 2) fail(Errc::InvalidArgument, "label volume contains value outside {0,1,2}");
}

Dtype dtype_of(const AnyVolume& vol) {
  return std::visit(
      [](const auto& v) {
        using T = typename std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, VolumeU8>) return Dtype::U8;
        if constexpr (std::is_same_v<T, VolumeI16>) return Dtype::I16;
        if constexpr (std::is_same_v<T, VolumeF32>) return Dtype::F32;
      },
      vol);
}

Index3 dims_of(const AnyVolume& vol) {
  return std::visit([](const auto& v) { return v.dims(); }, vol);
}

Spacing3 spacing_of(const AnyVolume& vol) {
  return std::visit([](const auto& v) { return v.spacing_mm(); }, vol);
}

// --- VVOL1 -------------------------------------------------------------------

namespace {

constexpr char kMagic[6] = {'V', 'V', 'O', 'L', '1', '\n'};

void append_u64_le(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

std::uint64_t read_u64_le(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

template <typename T>
void append_scalar_le(std::vector<std::uint8_t>& out, T value) {
  if constexpr (std::is_same_v<T, std::uint8_t>) {
    out.push_back(value);
  } else if constexpr (std::is_same_v<T, std::int16_t>) {
    const auto u = static_cast<std::uint16_t>(value);
    out.push_back(static_cast<std::uint8_t>(u & 0xff));
    out.push_back(static_cast<std::uint8_t>(u >> 8));
  } else {
    static_assert(std::is_same_v<T, float>);
    std::uint32_t u;
    std::memcpy(&u, &value, 4);
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((u >> (8 * i)) & 0xff));
  }
}

template <typename T>
T read_scalar_le(const std::uint8_t* p) {
  if constexpr (std::is_same_v<T, std::uint8_t>) {
    return *p;
  } else if constexpr (std::is_same_v<T, std::int16_t>) {
    return static_cast<std::int16_t>(static_cast<std::uint16_t>(p[0]) |
                                     (static_cast<std::uint16_t>(p[1]) << 8));
  } else {
    static_assert(std::is_same_v<T, float>);
    std::uint32_t u = 0;
    for (int i = 0; i < 4; ++i) u |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    float f;
    std::memcpy(&f, &u, 4);
    return f;
  }
}

}  // namespace

std::vector<std::uint8_t> write_volume(const AnyVolume& vol) {
  const Index3 dims = dims_of(vol);
  const Spacing3 spacing = spacing_of(vol);
  nlohmann::json header;
  header["dims"] = {dims[0], dims[1], dims[2]};
  header["spacing_mm"] = {spacing[0], spacing[1], spacing[2]};
  header["dtype"] = dtype_name(dtype_of(vol));
  header["order"] = "x-fastest";
  const std::string htext = header.dump();

  std::vector<std::uint8_t> out;
  out.reserve(14 + htext.size() + dims[0] * dims[1] * dims[2] * dtype_width(dtype_of(vol)));
  out.insert(out.end(), kMagic, kMagic + 6);
  append_u64_le(out, htext.size());
  out.insert(out.end(), htext.begin(), htext.end());
  std::visit(
      [&out](const auto& v) {
        for (auto value : v.data()) append_scalar_le(out, value);
      },
      vol);
  return out;
}

AnyVolume read_volume(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 6 || std::memcmp(bytes.data(), kMagic, 6) != 0)
    fail(Errc::BadMagic, "not a VVOL1 file");
  if (bytes.size() < 14) fail(Errc::HeaderParse, "truncated header length field");
  const std::uint64_t hlen = read_u64_le(bytes.data() + 6);
  if (bytes.size() < 14 + hlen) fail(Errc::HeaderParse, "truncated header");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.begin() + 14, bytes.begin() + 14 + hlen);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::HeaderParse, std::string("header is not valid JSON: ") + e.what());
  }

  Index3 dims;
  Spacing3 spacing;
  std::string dtype_str, order;
  try {
    const auto& jd = header.at("dims");
    const auto& js = header.at("spacing_mm");
    if (jd.size() != 3 || js.size() != 3) fail(Errc::HeaderParse, "dims/spacing_mm must have 3 entries");
    for (int a = 0; a < 3; ++a) {
      dims[a] = jd[a].get<std::int64_t>();
      spacing[a] = js[a].get<double>();
    }
    dtype_str = header.at("dtype").get<std::string>();
    order = header.at("order").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::HeaderParse, std::string("bad header field: ") + e.what());
  }
  if (order != "x-fastest") fail(Errc::HeaderParse, "unsupported order \"" + order + "\"");
  for (int a = 0; a < 3; ++a) {
    if (dims[a] <= 0) fail(Errc::HeaderParse, "dims must be positive");
    if (!(spacing[a] > 0.0) || !std::isfinite(spacing[a]))
      fail(Errc::HeaderParse, "spacing must be finite and positive");
  }
  const Dtype dtype = dtype_from_name(dtype_str);

  const std::uint64_t count = static_cast<std::uint64_t>(dims[0]) * dims[1] * dims[2];
  const std::uint64_t expect = count * dtype_width(dtype);
  const std::uint64_t have = bytes.size() - 14 - hlen;
  if (have != expect)
    fail(Errc::PayloadSizeMismatch, "payload is " + std::to_string(have) + " bytes, expected " +
                                        std::to_string(expect));

  const std::uint8_t* p = bytes.data() + 14 + hlen;
  auto load = [&]<typename T>() {
    std::vector<T> data(count);
    for (std::uint64_t i = 0; i < count; ++i) data[i] = read_scalar_le<T>(p + i * sizeof(T));
    return Volume<T>(dims, spacing, std::move(data));
  };
  switch (dtype) {
    case Dtype::U8: return load.operator()<std::uint8_t>();
    case Dtype::I16: return load.operator()<std::int16_t>();
    case Dtype::F32: return load.operator()<float>();
  }
  fail(Errc::UnknownDtype, "unreachable");
}

AnyVolume read_volume_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoFailure, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) fail(Errc::IoFailure, "read failed for " + path);
  return read_volume(bytes);
}

void write_volume_file(const std::string& path, const AnyVolume& vol) {
  const auto bytes = write_volume(vol);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::IoFailure, "cannot create " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(Errc::IoFailure, "write failed for " + path);
}

LabelVolume require_labels(const AnyVolume& vol) {
  const auto* labels = std::get_if<VolumeU8>(&vol);
  if (!labels) fail(Errc::UnknownDtype, "expected a u8 label volume");
  validate_labels(*labels);
  return *labels;
}

// --- Resampling ----------------------------------------------------------------

namespace {

std::int64_t round_half_away(double v) { return static_cast<std::int64_t>(std::llround(v)); }

}  // namespace

template <typename T>
Volume<T> resample_isotropic(const Volume<T>& vol, double target_mm, ResampleMode mode) {
  if (!(target_mm > 0.0) || !std::isfinite(target_mm))
    fail(Errc::NonPositiveTarget, "target spacing must be positive");

  const Index3 in_dims = vol.dims();
  const Spacing3 in_sp = vol.spacing_mm();
  Index3 out_dims;
  std::array<double, 3> ratio;  // target/source spacing; exactly 1.0 for identity axes
  for (int a = 0; a < 3; ++a) {
    out_dims[a] = std::max<std::int64_t>(1, round_half_away(in_dims[a] * in_sp[a] / target_mm));
    ratio[a] = target_mm / in_sp[a];
  }
  Volume<T> out(out_dims, {target_mm, target_mm, target_mm});

  auto sample_nearest = [&](double u, std::int64_t n) {
    return std::clamp<std::int64_t>(round_half_away(u), 0, n - 1);
  };

  std::int64_t o = 0;
  for (std::int64_t z = 0; z < out_dims[2]; ++z) {
    const double uz = (z + 0.5) * ratio[2] - 0.5;
    for (std::int64_t y = 0; y < out_dims[1]; ++y) {
      const double uy = (y + 0.5) * ratio[1] - 0.5;
      for (std::int64_t x = 0; x < out_dims[0]; ++x, ++o) {
        const double ux = (x + 0.5) * ratio[0] - 0.5;
        if (mode == ResampleMode::Nearest) {
          out[o] = vol.at(sample_nearest(ux, in_dims[0]), sample_nearest(uy, in_dims[1]),
                          sample_nearest(uz, in_dims[2]));
          continue;
        }
        double fr[3];
        std::int64_t i0[3];
        const double u[3] = {ux, uy, uz};
        for (int a = 0; a < 3; ++a) {
          const double uc = std::clamp(u[a], 0.0, static_cast<double>(in_dims[a] - 1));
          if (in_dims[a] == 1) {
            i0[a] = 0;
            fr[a] = 0.0;
          } else {
            i0[a] = std::min<std::int64_t>(static_cast<std::int64_t>(std::floor(uc)), in_dims[a] - 2);
            fr[a] = uc - static_cast<double>(i0[a]);
          }
        }
        double acc = 0.0;
        for (int cz = 0; cz < 2; ++cz)
          for (int cy = 0; cy < 2; ++cy)
            for (int cx = 0; cx < 2; ++cx) {
              const double w = (cx ? fr[0] : 1.0 - fr[0]) * (cy ? fr[1] : 1.0 - fr[1]) *
                               (cz ? fr[2] : 1.0 - fr[2]);
              if (w == 0.0) continue;
              acc += w * static_cast<double>(
                             vol.at(std::min(i0[0] + cx, in_dims[0] - 1),
                                    std::min(i0[1] + cy, in_dims[1] - 1),
                                    std::min(i0[2] + cz, in_dims[2] - 1)));
            }
        if constexpr (std::is_same_v<T, float>)
          out[o] = static_cast<float>(acc);
        else
          out[o] = static_cast<T>(std::llround(acc));
      }
    }
  }
  return out;
}

template Volume<std::uint8_t> resample_isotropic(const Volume<std::uint8_t>&, double, ResampleMode);
template Volume<std::int16_t> resample_isotropic(const Volume<std::int16_t>&, double, ResampleMode);
template Volume<float> resample_isotropic(const Volume<float>&, double, ResampleMode);

AnyVolume resample_isotropic(const AnyVolume& vol, double target_mm, ResampleMode mode) {
  return std::visit(
      [&](const auto& v) -> AnyVolume { return resample_isotropic(v, target_mm, mode); }, vol);
}

// --- Connected components --------------------------------------------------------

namespace {

// 6- or 26-neighborhood offsets in (dx,dy,dz).
std::vector<std::array<int, 3>> neighborhood(int connectivity) {
  if (connectivity != 6 && connectivity != 26)
    fail(Errc::InvalidArgument, "connectivity must be 6 or 26");
  std::vector<std::array<int, 3>> offs;
  for (int dz = -1; dz <= 1; ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const int manhattan = std::abs(dx) + std::abs(dy) + std::abs(dz);
        if (manhattan == 0) continue;
        if (connectivity == 6 && manhattan != 1) continue;
        offs.push_back({dx, dy, dz});
      }
  return offs;
}

}  // namespace

VolumeU8 largest_component(const VolumeU8& mask, int connectivity) {
  for (std::uint8_t v : mask.data())
    if (v > 1) fail(Errc::InvalidArgument, "mask values must be in {0,1}");
  const auto offs = neighborhood(connectivity);
  const Index3 dims = mask.dims();
  const std::int64_t n = mask.voxel_count();

  std::vector<std::int32_t> comp(static_cast<std::size_t>(n), -1);
  std::int64_t best_size = 0;
  std::int32_t best_id = -1, next_id = 0;
  std::deque<std::int64_t> queue;

  for (std::int64_t start = 0; start < n; ++start) {
    if (mask[start] == 0 || comp[start] >= 0) continue;
    const std::int32_t id = next_id++;
    std::int64_t size = 0;
    comp[start] = id;
    queue.push_back(start);
    while (!queue.empty()) {
      const std::int64_t cur = queue.front();
      queue.pop_front();
      ++size;
      const Index3 c = mask.unravel(cur);
      for (const auto& d : offs) {
        const std::int64_t x = c[0] + d[0], y = c[1] + d[1], z = c[2] + d[2];
        if (!mask.in_bounds(x, y, z)) continue;
        const std::int64_t ni = mask.linear(x, y, z);
        if (mask[ni] == 0 || comp[ni] >= 0) continue;
        comp[ni] = id;
        queue.push_back(ni);
      }
    }
    // Scan order visits components by their smallest linear index, so the
    // strict > keeps the earliest component on ties.
    if (size > best_size) {
      best_size = size;
      best_id = id;
    }
  }
  if (best_id < 0) fail(Errc::EmptyMask, "mask has no foreground voxel");

  VolumeU8 out(dims, mask.spacing_mm());
  for (std::int64_t i = 0; i < n; ++i) out[i] = (comp[i] == best_id) ? 1 : 0;
  return out;
}

}  // namespace lvthick
