#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lvthick/volume.hpp"
#include "support/oracles.hpp"

using namespace lvthick;

namespace {

VolumeU8 cube(std::int64_t n, std::uint8_t fill = 0, Spacing3 sp = {1.0, 1.0, 1.0}) {
  return VolumeU8({n, n, n}, sp, fill);
}

AnyVolume random_volume(std::mt19937& rng) {
  std::uniform_int_distribution<std::int64_t> dim(1, 6);
  std::uniform_real_distribution<double> sp(0.1, 3.0);
  const Index3 dims = {dim(rng), dim(rng), dim(rng)};
  const Spacing3 spacing = {sp(rng), sp(rng), sp(rng)};
  switch (rng() % 3) {
    case 0: {
      VolumeU8 v(dims, spacing);
      for (auto& x : v.data()) x = static_cast<std::uint8_t>(rng());
      return v;
    }
    case 1: {
      VolumeI16 v(dims, spacing);
      for (auto& x : v.data()) x = static_cast<std::int16_t>(rng());
      return v;
    }
    default: {
      VolumeF32 v(dims, spacing);
      std::normal_distribution<float> n(0.0f, 100.0f);
      for (auto& x : v.data()) x = n(rng);
      return v;
    }
  }
}

}  // namespace

TEST_CASE("vvol1 round-trip on a 2x2x2 u8 zero volume") {
  const VolumeU8 v = cube(2);
  const auto bytes = write_volume(v);
  const auto back = read_volume(bytes);
  REQUIRE(std::holds_alternative<VolumeU8>(back));
  CHECK(std::get<VolumeU8>(back) == v);
}

TEST_CASE("vvol1 writes are deterministic") {
  VolumeI16 v({3, 2, 4}, {0.5, 0.7, 1.25});
  std::mt19937 rng(11);
  for (auto& x : v.data()) x = static_cast<std::int16_t>(rng());
  CHECK(write_volume(v) == write_volume(v));
}

TEST_CASE("vvol1 f32 payload is little-endian zero bytes") {
  const VolumeF32 v({1, 1, 1}, {1.0, 1.0, 1.0}, 0.0f);
  const auto bytes = write_volume(v);
  REQUIRE(bytes.size() >= 4);
  for (std::size_t i = bytes.size() - 4; i < bytes.size(); ++i) CHECK(bytes[i] == 0);
}

TEST_CASE("vvol1 round-trip on a random 4x3x2 i16 volume") {
  VolumeI16 v({4, 3, 2}, {0.5, 0.5, 0.7});
  std::mt19937 rng(7);
  for (auto& x : v.data()) x = static_cast<std::int16_t>(rng());
  const auto back = read_volume(write_volume(v));
  CHECK(std::get<VolumeI16>(back) == v);
}

TEST_CASE("vvol1 rejects a wrong magic") {
  auto bytes = write_volume(cube(2));
  bytes[4] = '2';  // VVOL2
  try {
    read_volume(bytes);
    FAIL("expected BadMagic");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::BadMagic);
  }
}

TEST_CASE("vvol1 rejects a payload size mismatch") {
  auto bytes = write_volume(cube(2));  // 8 payload bytes
  bytes.pop_back();                    // 7 payload bytes
  try {
    read_volume(bytes);
    FAIL("expected PayloadSizeMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::PayloadSizeMismatch);
  }
}

TEST_CASE("vvol1 rejects unknown dtypes and malformed headers") {
  // container with an arbitrary header and an 8-byte payload
  auto container = [](const std::string& header) {
    std::vector<std::uint8_t> bytes = {'V', 'V', 'O', 'L', '1', '\n'};
    const std::uint64_t h = header.size();
    for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<std::uint8_t>((h >> (8 * i)) & 0xff));
    bytes.insert(bytes.end(), header.begin(), header.end());
    bytes.insert(bytes.end(), 8, 0);
    return bytes;
  };
  auto expect = [&](const std::string& header, Errc code) {
    try {
      read_volume(container(header));
      FAIL("expected failure for header ", header);
    } catch (const Error& e) {
      CHECK(e.code() == code);
    }
  };

  expect(R"({"dims":[2,2,2],"dtype":"f64","order":"x-fastest","spacing_mm":[1.0,1.0,1.0]})",
         Errc::UnknownDtype);
  expect(R"({"dims":[2,2,2],"dtype":"u8","order":"z-fastest","spacing_mm":[1.0,1.0,1.0]})",
         Errc::HeaderParse);
  expect(R"({"dimz":[2,2,2],"dtype":"u8","order":"x-fastest","spacing_mm":[1.0,1.0,1.0]})",
         Errc::HeaderParse);
  expect("not json at all", Errc::HeaderParse);
  expect(R"({"dims":[2,2,2],"dtype":"u8","order":"x-fastest","spacing_mm":[1.0,-1.0,1.0]})",
         Errc::HeaderParse);
}

TEST_CASE("vvol1 round-trips randomized volumes across dtypes") {
  std::mt19937 rng(2025);
  for (int i = 0; i < 100; ++i) {
    const AnyVolume v = random_volume(rng);
    const auto bytes = write_volume(v);
    const AnyVolume back = read_volume(bytes);
    CHECK(write_volume(back) == bytes);  // byte-exact both ways
    CHECK(dims_of(back) == dims_of(v));
    CHECK(spacing_of(back) == spacing_of(v));
  }
}

TEST_CASE("resample at the input spacing is the identity for both modes") {
  std::mt19937 rng(3);
  VolumeF32 v({5, 4, 3}, {0.73, 0.73, 0.73});
  std::normal_distribution<float> n(0.0f, 10.0f);
  for (auto& x : v.data()) x = n(rng);

  for (auto mode : {ResampleMode::Trilinear, ResampleMode::Nearest}) {
    const auto r = resample_isotropic(v, 0.73, mode);
    CHECK(r.dims() == v.dims());
    CHECK(r.data().size() == v.data().size());
    CHECK(std::equal(r.data().begin(), r.data().end(), v.data().begin()));
  }
}

TEST_CASE("resample halving: 10^3 at 0.5mm to 1mm gives 5^3") {
  const VolumeU8 v({10, 10, 10}, {0.5, 0.5, 0.5}, 1);
  const auto r = resample_isotropic(v, 1.0, ResampleMode::Nearest);
  CHECK(r.dims() == Index3{5, 5, 5});
  CHECK(r.spacing_mm() == Spacing3{1.0, 1.0, 1.0});
}

TEST_CASE("nearest resampling never invents label values") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    VolumeU8 v({7, 6, 5}, {0.8, 0.8, 0.8});
    for (auto& x : v.data()) x = (rng() % 2) ? 2 : 0;  // values {0,2} only
    const auto r = resample_isotropic(v, 0.5 + 0.1 * (trial % 7), ResampleMode::Nearest);
    for (auto x : r.data()) CHECK((x == 0 || x == 2));
  }
}

TEST_CASE("trilinear values follow the voxel-center convention") {
  // 2 voxels at 1mm {0,100} -> 0.5mm; x samples fall at input coordinates
  // -0.25, 0.25, 0.75, 1.25 (clamped at the edges), y/z replicate.
  const VolumeU8 v({2, 1, 1}, {1.0, 1.0, 1.0}, std::vector<std::uint8_t>{0, 100});
  const auto r = resample_isotropic(v, 0.5, ResampleMode::Trilinear);
  REQUIRE(r.dims() == Index3{4, 2, 2});
  const std::uint8_t expected[4] = {0, 25, 75, 100};
  for (std::int64_t z = 0; z < 2; ++z)
    for (std::int64_t y = 0; y < 2; ++y)
      for (std::int64_t x = 0; x < 4; ++x) CHECK(r.at(x, y, z) == expected[x]);
}

TEST_CASE("resample rejects non-positive targets") {
  try {
    resample_isotropic(cube(2), 0.0, ResampleMode::Nearest);
    FAIL("expected NonPositiveTarget");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonPositiveTarget);
  }
}

TEST_CASE("largest_component keeps a solid block unchanged") {
  VolumeU8 v = cube(5);
  for (std::int64_t z = 1; z < 4; ++z)
    for (std::int64_t y = 1; y < 4; ++y)
      for (std::int64_t x = 1; x < 4; ++x) v.at(x, y, z) = 1;
  CHECK(largest_component(v, 6) == v);
}

TEST_CASE("largest_component drops an isolated voxel") {
  VolumeU8 v = cube(8);
  for (std::int64_t z = 0; z < 3; ++z)
    for (std::int64_t y = 0; y < 3; ++y)
      for (std::int64_t x = 0; x < 3; ++x) v.at(x, y, z) = 1;
  v.at(7, 7, 7) = 1;
  const auto r = largest_component(v, 6);
  CHECK(r.at(7, 7, 7) == 0);
  CHECK(r.at(1, 1, 1) == 1);
  std::int64_t count = 0;
  for (auto x : r.data()) count += x;
  CHECK(count == 27);
}

TEST_CASE("largest_component ties break toward the smaller linear index") {
  VolumeU8 v({12, 1, 1}, {1.0, 1.0, 1.0});
  v[5] = 1;
  v[9] = 1;
  const auto r = largest_component(v, 6);
  CHECK(r[5] == 1);
  CHECK(r[9] == 0);
}

TEST_CASE("largest_component respects the connectivity choice") {
  // two voxels touching only diagonally: one component under 26, two under 6
  VolumeU8 v = cube(4);
  v.at(1, 1, 1) = 1;
  v.at(2, 2, 2) = 1;
  const auto r26 = largest_component(v, 26);
  CHECK(r26.at(1, 1, 1) == 1);
  CHECK(r26.at(2, 2, 2) == 1);
  const auto r6 = largest_component(v, 6);
  CHECK(r6.at(1, 1, 1) == 1);
  CHECK(r6.at(2, 2, 2) == 0);
}

TEST_CASE("largest_component errors on an empty mask") {
  try {
    largest_component(cube(3), 6);
    FAIL("expected EmptyMask");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EmptyMask);
  }
}

TEST_CASE("largest_component output is connected and a subset of the input") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const auto mask = oracle::random_mask(rng, {9, 8, 7}, 0.35);
    bool any = false;
    for (auto x : mask.data()) any |= (x != 0);
    if (!any) continue;
    for (int conn : {6, 26}) {
      const auto r = largest_component(mask, conn);
      for (std::int64_t i = 0; i < r.voxel_count(); ++i)
        if (r[i]) CHECK(mask[i] == 1);
      CHECK(oracle::is_connected(r, conn));
    }
  }
}
