#include <random>
#include <vector>

#include "doctest.h"
#include "physmocap/simd/kernels.hpp"

using namespace physmocap;

namespace {

struct RandomSkin {
  std::vector<std::uint32_t> offsets, bones;
  std::vector<double> weights, mats, tpl;
  std::size_t n_vertices, n_bones;

  explicit RandomSkin(std::size_t n, std::size_t nb, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    std::uniform_int_distribution<std::uint32_t> bone(0, nb - 1);
    std::uniform_int_distribution<int> deg(1, 4);
    n_vertices = n;
    n_bones = nb;
    offsets.push_back(0);
    for (std::size_t v = 0; v < n; ++v) {
      const int k = deg(rng);
      for (int i = 0; i < k; ++i) {
        bones.push_back(bone(rng));
        weights.push_back(u(rng) * 0.5 + 0.6);
      }
      offsets.push_back(static_cast<std::uint32_t>(bones.size()));
      for (int i = 0; i < 3; ++i) tpl.push_back(u(rng));
    }
    for (std::size_t i = 0; i < 12 * nb; ++i) mats.push_back(u(rng));
  }

  simd::SkinCsr csr() const {
    return {offsets.data(), bones.data(), weights.data(), n_vertices};
  }
};

}  // namespace

TEST_CASE("scalar and avx2 kernels agree") {
  if (!simd::avx2_supported() || simd::avx2_kernels() == nullptr) {
    MESSAGE("avx2 unavailable on this host; equivalence check skipped");
    return;
  }
  const auto& s = simd::scalar_kernels();
  const auto& a = *simd::avx2_kernels();
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-2, 2);

  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng() % 257);

    RandomSkin skin(n, 9, 100 + trial);
    std::vector<double> out_s(3 * n), out_a(3 * n);
    s.skin_vertices(skin.csr(), skin.mats.data(), skin.tpl.data(), out_s.data());
    a.skin_vertices(skin.csr(), skin.mats.data(), skin.tpl.data(), out_a.data());
    for (std::size_t i = 0; i < 3 * n; ++i)
      CHECK(out_s[i] == doctest::Approx(out_a[i]).epsilon(1e-13));

    std::vector<double> xs(n), ys(n), zs(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = u(rng);
      ys[i] = u(rng);
      zs[i] = u(rng);
    }
    double rot[9], t[3] = {u(rng), u(rng), u(rng)};
    for (double& r : rot) r = u(rng);
    std::vector<double> oxs(n), oys(n), ozs(n), axs(n), ays(n), azs(n);
    s.transform_points(rot, t, xs.data(), ys.data(), zs.data(), n, oxs.data(),
                       oys.data(), ozs.data());
    a.transform_points(rot, t, xs.data(), ys.data(), zs.data(), n, axs.data(),
                       ays.data(), azs.data());
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(oxs[i] == doctest::Approx(axs[i]).epsilon(1e-13));
      CHECK(oys[i] == doctest::Approx(ays[i]).epsilon(1e-13));
      CHECK(ozs[i] == doctest::Approx(azs[i]).epsilon(1e-13));
    }

    std::vector<std::uint32_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (rng() % 3) idx.push_back(static_cast<std::uint32_t>(i));
    double bs = 0, ba = 0;
    const auto ks =
        s.min_dist_sq(0.1, -0.2, 0.3, xs.data(), ys.data(), zs.data(),
                      idx.data(), idx.size(), &bs);
    const auto ka =
        a.min_dist_sq(0.1, -0.2, 0.3, xs.data(), ys.data(), zs.data(),
                      idx.data(), idx.size(), &ba);
    CHECK(ks == ka);
    if (ks >= 0) CHECK(bs == doctest::Approx(ba).epsilon(1e-13));

    std::vector<std::uint32_t> ai, bi;
    const std::size_t pairs = rng() % (n + 1);
    for (std::size_t k = 0; k < pairs; ++k) {
      ai.push_back(static_cast<std::uint32_t>(rng() % n));
      bi.push_back(static_cast<std::uint32_t>(rng() % n));
    }
    const double es = s.sum_sq_pair_dist(skin.tpl.data(), ai.data(), xs.data(),
                                         ys.data(), zs.data(), bi.data(),
                                         pairs);
    const double ea = a.sum_sq_pair_dist(skin.tpl.data(), ai.data(), xs.data(),
                                         ys.data(), zs.data(), bi.data(),
                                         pairs);
    CHECK(es == doctest::Approx(ea).epsilon(1e-12));
  }
}

TEST_CASE("min_dist_sq picks the earliest tie and handles empty input") {
  const auto& k = simd::kernels();
  // Two identical points; earliest list position must win.
  std::vector<double> xs = {1, 1, 5}, ys = {0, 0, 0}, zs = {0, 0, 0};
  std::vector<std::uint32_t> idx = {2, 1, 0};
  double best = -1;
  const auto pos = k.min_dist_sq(0, 0, 0, xs.data(), ys.data(), zs.data(),
                                 idx.data(), idx.size(), &best);
  CHECK(pos == 1);  // idx[1] == point 1, first of the tied pair in list order
  CHECK(best == doctest::Approx(1.0));
  CHECK(k.min_dist_sq(0, 0, 0, xs.data(), ys.data(), zs.data(), idx.data(), 0,
                      &best) == -1);
}

TEST_CASE("active isa reports a valid name") {
  const auto isa = simd::active_isa();
  CHECK((simd::isa_name(isa) == "scalar" || simd::isa_name(isa) == "avx2"));
}
