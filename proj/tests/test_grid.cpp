#include "doctest.h"
#include "glyphguide/grid.hpp"
#include "support.hpp"

#include <numbers>

using namespace glyphguide;

TEST_SUITE("grid") {

TEST_CASE("construction validates shape") {
  CHECK_THROWS_AS(LatentGrid(0, 4, 4), ShapeError);
  CHECK_THROWS_AS(LatentGrid(1, 2, 2, std::vector<double>{1, 2, 3}), ShapeError);
  LatentGrid g(2, 3, 4, 1.5);
  CHECK(g.size() == 24);
  CHECK(g.plane_size() == 12);
  g.at(1, 2, 3) = 7.0;
  CHECK(g.plane(1)[11] == 7.0);
  CHECK_THROWS_AS(make_mask(2, 2, {0.0, 0.5, 1.0, 1.5}), ShapeError);
}

TEST_CASE("channel stats use the population deviation") {
  const LatentGrid g(2, 1, 4, std::vector<double>{1, 2, 3, 4, 5, 5, 5, 5});
  const ChannelStats s = channel_stats(g);
  CHECK(s.mean[0] == doctest::Approx(2.5));
  CHECK(s.std[0] == doctest::Approx(std::sqrt(1.25)));
  CHECK(s.mean[1] == 5.0);
  CHECK(s.std[1] == 0.0);
}

TEST_CASE("adain matches hand-computed values") {
  // content [1,2,3,4], style [10,10,12,12]: (x - 2.5) / sqrt(1.25) + 11
  const LatentGrid content(1, 2, 2, std::vector<double>{1, 2, 3, 4});
  const LatentGrid style(1, 2, 2, std::vector<double>{10, 10, 12, 12});
  const LatentGrid out = adain(content, style);
  const double expect[] = {9.6583592135001268, 10.552786404500042, 11.447213595499958, 12.341640786499873};
  for (int i = 0; i < 4; ++i) CHECK(out.values()[i] == doctest::Approx(expect[i]).epsilon(1e-14));
}

TEST_CASE("adain transfers statistics and fixes its own input") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const LatentGrid x = testing::random_grid(rng, 3, 8, 8);
    const LatentGrid y = testing::random_grid(rng, 3, 8, 8, 1.0, 5.0);
    const ChannelStats want = channel_stats(y);
    const ChannelStats got = channel_stats(adain(x, y));
    for (int c = 0; c < 3; ++c) {
      CHECK(std::abs(got.mean[c] - want.mean[c]) < 1e-9);
      CHECK(std::abs(got.std[c] - want.std[c]) < 1e-9);
    }
    CHECK(testing::max_abs_diff(adain(x, x).values(), x.values()) < 1e-12);
  }
}

TEST_CASE("adain on a constant content grid stays finite") {
  const LatentGrid flat(1, 3, 3, 2.0);
  const LatentGrid style(1, 3, 3, std::vector<double>{0, 1, 2, 3, 4, 5, 6, 7, 8});
  const LatentGrid out = adain(flat, style);
  CHECK(all_finite(out.values()));
  for (double v : out.values()) CHECK(v == doctest::Approx(4.0));
  CHECK_THROWS_AS(adain(flat, LatentGrid(2, 3, 3)), ShapeError);
}

TEST_CASE("masked_blend broadcasts the mask over channels") {
  const LatentGrid a(2, 1, 3, 1.0);
  const LatentGrid b(2, 1, 3, 3.0);
  const RegionMask m = make_mask(1, 3, {1.0, 0.0, 0.25});
  const LatentGrid out = masked_blend(a, b, m);
  for (int c = 0; c < 2; ++c) {
    CHECK(out.at(c, 0, 0) == 1.0);
    CHECK(out.at(c, 0, 1) == 3.0);
    CHECK(out.at(c, 0, 2) == doctest::Approx(2.5));
  }
}

TEST_CASE("sample_at reads cell centers exactly and zero outside") {
  const LatentGrid g(1, 2, 2, std::vector<double>{1, 2, 3, 4});
  CHECK(sample_at(g, 0, {0.5, 0.5}, Interp::bilinear) == 1.0);
  CHECK(sample_at(g, 0, {1.5, 1.5}, Interp::bilinear) == 4.0);
  CHECK(sample_at(g, 0, {1.0, 1.0}, Interp::bilinear) == doctest::Approx(2.5));
  CHECK(sample_at(g, 0, {1.2, 0.1}, Interp::nearest) == 2.0);
  CHECK(sample_at(g, 0, {-0.1, 0.5}, Interp::nearest) == 0.0);
  CHECK(sample_at(g, 0, {5.0, 5.0}, Interp::bilinear) == 0.0);
  // half a cell outside: blend with the implicit zero border
  CHECK(sample_at(g, 0, {0.0, 0.5}, Interp::bilinear) == doctest::Approx(0.5));
}

TEST_CASE("four quarter turns about the grid center return the input") {
  std::mt19937_64 rng(5);
  const LatentGrid g = testing::random_grid(rng, 2, 6, 6);
  LatentGrid r = g;
  for (int k = 0; k < 4; ++k) r = rotate_resample(r, std::numbers::pi / 2, {3.0, 3.0});
  CHECK(testing::max_abs_diff(r.values(), g.values()) < 1e-9);
  CHECK(rotate_resample(g, 0.0, {1.0, 2.0}) == g);
}

TEST_CASE("extract and paste of an axis-aligned quad round-trip") {
  std::mt19937_64 rng(6);
  const LatentGrid g = testing::random_grid(rng, 3, 8, 10);
  const Quad q{{Vec2{2, 1}, Vec2{7, 1}, Vec2{7, 5}, Vec2{2, 5}}};
  const LatentGrid sub = extract_region(g, q, 4, 5);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < 4; ++y)
      for (int x = 0; x < 5; ++x) CHECK(sub.at(c, y, x) == doctest::Approx(g.at(c, y + 1, x + 2)));

  const LatentGrid blank(3, 8, 10, 0.0);
  const LatentGrid pasted = paste_region(blank, sub, q);
  const RegionMask fp = quad_footprint(q, 8, 10);
  double inside = 0.0;
  for (double v : fp.values()) inside += v;
  CHECK(inside == 20.0);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < 8; ++y)
      for (int x = 0; x < 10; ++x) {
        const double want = fp.at(0, y, x) > 0.5 ? g.at(c, y, x) : 0.0;
        CHECK(pasted.at(c, y, x) == doctest::Approx(want));
      }
}

TEST_CASE("adain examples") {
  const LatentGrid content(1, 2, 2, std::vector<double>{0, 2, 0, 2});
  const LatentGrid style(1, 2, 2, std::vector<double>{3, 5, 3, 5});
  const LatentGrid out = adain(content, style);
  CHECK(out.values()[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(out.values()[1] == doctest::Approx(5.0).epsilon(1e-12));

  std::mt19937_64 rng(11);
  const LatentGrid flat(2, 4, 4, 0.7);
  const LatentGrid s2 = testing::random_grid(rng, 2, 4, 4);
  const LatentGrid o2 = adain(flat, s2);
  const ChannelStats st = channel_stats(s2);
  for (int c = 0; c < 2; ++c)
    for (double v : o2.plane(c)) CHECK(std::abs(v - st.mean[c]) < 1e-9);
}

TEST_CASE("masked_blend counts ones") {
  std::mt19937_64 rng(12);
  const LatentGrid ones(3, 6, 6, 1.0);
  const LatentGrid zeros(3, 6, 6, 0.0);
  std::vector<double> mv(36, 0.0);
  int k = 0;
  for (double& v : mv) {
    if (rng() % 3 == 0) {
      v = 1.0;
      ++k;
    }
  }
  const LatentGrid out = masked_blend(ones, zeros, make_mask(6, 6, mv));
  double sum = 0.0;
  for (double v : out.plane(0)) sum += v;
  CHECK(sum == k);
  CHECK(masked_blend(ones, zeros, make_mask(6, 6, std::vector<double>(36, 0.0))) == zeros);
  CHECK(masked_blend(ones, zeros, make_mask(6, 6, std::vector<double>(36, 1.0))) == ones);
}

TEST_CASE("nearest quarter turn is an index permutation") {
  std::mt19937_64 rng(13);
  for (int n : {4, 7, 16}) {
    const LatentGrid g = testing::random_grid(rng, 2, n, n);
    const LatentGrid r = rotate_resample(g, std::numbers::pi / 2, {n / 2.0, n / 2.0}, Interp::nearest);
    for (int c = 0; c < 2; ++c)
      for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) CHECK(r.at(c, y, x) == g.at(c, n - 1 - x, y));
  }
}

TEST_CASE("rotating forth and back keeps smooth interiors") {
  const int n = 24;
  LatentGrid g(1, n, n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) g.at(0, y, x) = 0.05 * x - 0.03 * y + 0.4;
  for (double theta : {0.2, 0.7, 1.3}) {
    const Vec2 ctr{n / 2.0, n / 2.0};
    const LatentGrid back = rotate_resample(rotate_resample(g, theta, ctr), -theta, ctr);
    double worst = 0.0;
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        // Cells that stay at least 2 px from the border under any rotation.
        if (norm(Vec2{x + 0.5, y + 0.5} - ctr) > n / 2.0 - 2.0) continue;
        worst = std::max(worst, std::abs(back.at(0, y, x) - g.at(0, y, x)));
      }
    CHECK(worst < 0.15);
  }
}

TEST_CASE("extract covers the whole grid and a tilted constant quad") {
  std::mt19937_64 rng(14);
  const LatentGrid g = testing::random_grid(rng, 2, 6, 8);
  const Quad full{{Vec2{0, 0}, Vec2{8, 0}, Vec2{8, 6}, Vec2{0, 6}}};
  CHECK(testing::max_abs_diff(extract_region(g, full, 6, 8).values(), g.values()) < 1e-12);
  CHECK(extract_region(g, full, 6, 8, Interp::nearest) == g);

  const LatentGrid k(1, 32, 32, 2.5);
  const Vec2 c{16, 16};
  const Vec2 a = rotated(Vec2{1, 0}, std::numbers::pi / 4);
  const Vec2 b = rotated(Vec2{0, 1}, std::numbers::pi / 4);
  const Quad tilted{{c - a * 6 - b * 3, c + a * 6 - b * 3, c + a * 6 + b * 3, c - a * 6 + b * 3}};
  const LatentGrid sub = extract_region(k, tilted, 6, 12);
  for (double v : sub.values()) CHECK(v == doctest::Approx(2.5));
}

TEST_CASE("paste then extract with nearest sampling round-trips") {
  std::mt19937_64 rng(15);
  const LatentGrid src = testing::random_grid(rng, 3, 4, 6);
  const Quad q{{Vec2{3, 2}, Vec2{9, 2}, Vec2{9, 6}, Vec2{3, 6}}};
  const LatentGrid dst(3, 10, 12, -1.0);
  const LatentGrid pasted = paste_region(dst, src, q, Interp::nearest);
  CHECK(extract_region(pasted, q, 4, 6, Interp::nearest) == src);
  CHECK(pasted.at(0, 0, 0) == -1.0);
  CHECK(pasted.at(2, 9, 11) == -1.0);
}

TEST_CASE("all_finite spots NaN and infinity") {
  std::vector<double> v{0.0, 1.0};
  CHECK(all_finite(v));
  v.push_back(std::nan(""));
  CHECK_FALSE(all_finite(v));
}

}
