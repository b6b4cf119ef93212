#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lvthick/errors.hpp"

namespace lvthick {

/// Scalar element types supported by the VVOL1 container.
enum class Dtype : std::uint8_t { U8, I16, F32 };

const char* dtype_name(Dtype d);
std::size_t dtype_width(Dtype d);
Dtype dtype_from_name(const std::string& name);  // throws UnknownDtype

using Index3 = std::array<std::int64_t, 3>;
using Spacing3 = std::array<double, 3>;

/// A 3D scalar grid with physical voxel spacing. Data is linearized
/// x-fastest: linear index = x + nx*(y + ny*z). The voxel with index i
/// along an axis of spacing s is centered at (i + 0.5) * s.
template <typename T>
class Volume {
 public:
  Volume() = default;

  Volume(Index3 dims, Spacing3 spacing_mm, T fill = T{})
      : dims_(dims), spacing_(spacing_mm) {
    for (int a = 0; a < 3; ++a) {
      if (dims_[a] <= 0) fail(Errc::InvalidArgument, "volume dims must be positive");
      if (!(spacing_[a] > 0.0) || !std::isfinite(spacing_[a]))
        fail(Errc::InvalidArgument, "voxel spacing must be finite and positive");
    }
    data_.assign(static_cast<std::size_t>(voxel_count()), fill);
  }

  Volume(Index3 dims, Spacing3 spacing_mm, std::vector<T> data)
      : Volume(dims, spacing_mm) {
    if (data.size() != data_.size())
      fail(Errc::PayloadSizeMismatch, "data length does not match dims product");
    data_ = std::move(data);
  }

  const Index3& dims() const noexcept { return dims_; }
  const Spacing3& spacing_mm() const noexcept { return spacing_; }
  std::int64_t nx() const noexcept { return dims_[0]; }
  std::int64_t ny() const noexcept { return dims_[1]; }
  std::int64_t nz() const noexcept { return dims_[2]; }
  std::int64_t voxel_count() const noexcept { return dims_[0] * dims_[1] * dims_[2]; }

  std::int64_t linear(std::int64_t x, std::int64_t y, std::int64_t z) const noexcept {
    return x + dims_[0] * (y + dims_[1] * z);
  }
  Index3 unravel(std::int64_t i) const noexcept {
    const std::int64_t x = i % dims_[0];
    const std::int64_t y = (i / dims_[0]) % dims_[1];
    const std::int64_t z = i / (dims_[0] * dims_[1]);
    return {x, y, z};
  }
  bool in_bounds(std::int64_t x, std::int64_t y, std::int64_t z) const noexcept {
    return x >= 0 && x < dims_[0] && y >= 0 && y < dims_[1] && z >= 0 && z < dims_[2];
  }

  T at(std::int64_t x, std::int64_t y, std::int64_t z) const {
    return data_[static_cast<std::size_t>(linear(x, y, z))];
  }
  T& at(std::int64_t x, std::int64_t y, std::int64_t z) {
    return data_[static_cast<std::size_t>(linear(x, y, z))];
  }
  T operator[](std::int64_t i) const { return data_[static_cast<std::size_t>(i)]; }
  T& operator[](std::int64_t i) { return data_[static_cast<std::size_t>(i)]; }

  std::span<const T> data() const noexcept { return data_; }
  std::span<T> data() noexcept { return data_; }

  bool same_grid(const Volume& other) const noexcept {
    return dims_ == other.dims_ && spacing_ == other.spacing_;
  }

  /// Physical extent along each axis (dims * spacing), in mm.
  std::array<double, 3> extent_mm() const noexcept {
    return {dims_[0] * spacing_[0], dims_[1] * spacing_[1], dims_[2] * spacing_[2]};
  }

  friend bool operator==(const Volume& a, const Volume& b) {
    return a.dims_ == b.dims_ && a.spacing_ == b.spacing_ && a.data_ == b.data_;
  }

 private:
  Index3 dims_{0, 0, 0};
  Spacing3 spacing_{1.0, 1.0, 1.0};
  std::vector<T> data_;
};

using VolumeU8 = Volume<std::uint8_t>;
using VolumeI16 = Volume<std::int16_t>;
using VolumeF32 = Volume<float>;

/// A VolumeU8 restricted to values {0 background, 1 blood-pool, 2 LVM}.
using LabelVolume = VolumeU8;

inline constexpr std::uint8_t kBackground = 0;
inline constexpr std::uint8_t kBloodPool = 1;
inline constexpr std::uint8_t kLvm = 2;

/// Throws InvalidArgument when any voxel is outside {0,1,2}.
void validate_labels(const LabelVolume& labels);

/// Type-erased volume as stored in a VVOL1 file.
using AnyVolume = std::variant<VolumeU8, VolumeI16, VolumeF32>;

Dtype dtype_of(const AnyVolume& vol);
Index3 dims_of(const AnyVolume& vol);
Spacing3 spacing_of(const AnyVolume& vol);

// --- VVOL1 container -------------------------------------------------------
//
// bytes 0-5   ASCII "VVOL1\n"
// bytes 6-13  little-endian u64 header length H
// H bytes     UTF-8 JSON {"dims":[nx,ny,nz],"spacing_mm":[sx,sy,sz],
//                         "dtype":"u8"|"i16"|"f32","order":"x-fastest"}
// rest        raw little-endian voxel payload, exactly nx*ny*nz*width bytes

std::vector<std::uint8_t> write_volume(const AnyVolume& vol);
AnyVolume read_volume(std::span<const std::uint8_t> bytes);

AnyVolume read_volume_file(const std::string& path);
void write_volume_file(const std::string& path, const AnyVolume& vol);

LabelVolume require_labels(const AnyVolume& vol);  // u8 + value check

// --- Resampling -------------------------------------------------------------

enum class ResampleMode { Trilinear, Nearest };

/// Resamples to isotropic spacing target_mm. Output dims per axis are
/// max(1, round(n*s/target)) with round-half-away-from-zero; each output
/// sample interpolates the input at the output voxel's physical center,
/// clamping out-of-domain reads to the nearest edge voxel. Nearest mode
/// never introduces values absent from the input.
template <typename T>
Volume<T> resample_isotropic(const Volume<T>& vol, double target_mm, ResampleMode mode);

AnyVolume resample_isotropic(const AnyVolume& vol, double target_mm, ResampleMode mode);

// --- Connected components ---------------------------------------------------

/// Keeps only the connected component with the most voxels (mask values
/// {0,1}; connectivity 6 or 26). Ties break toward the component whose
/// first voxel has the smallest linear index.
VolumeU8 largest_component(const VolumeU8& mask, int connectivity);

}  // namespace lvthick
