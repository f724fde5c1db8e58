#include <doctest.h>

#include <cmath>

#include "psurf/complex.hpp"
#include "psurf/netgen.hpp"

using namespace psurf;

namespace {
constexpr double kPi = 3.14159265358979323846;

GreedyParams quad_params(double R = 3.0, double delta = 0.05) {
  GreedyParams p;
  p.R = R;
  p.m = 2;
  p.phi0 = kPi / 2;
  p.phi_star = 3 * kPi / 4;
  p.delta = delta;
  return p;
}
}  // namespace

TEST_CASE("greedy params validation") {
  GreedyParams p = quad_params();
  CHECK_NOTHROW(p.validate());
  p.phi_star = kPi;  // not below pi
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = quad_params();
  p.m = 1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = quad_params();
  p.phi0 = 2.5;  // above phi_star: no valid cut could ever exist
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("initial fan layout") {
  GreedyParams p = quad_params(1.0, 0.1);
  const auto cx = netgen::init_sectors(p);
  REQUIRE(cx.sectors.size() == 4);
  // first ray along the positive real axis; zeta_{1,0} = tanh(delta/2)
  CHECK(cx.sectors[0].pos(1, 0).real() == doctest::Approx(std::tanh(0.05)).epsilon(1e-14));
  CHECK(cx.sectors[0].pos(1, 0).imag() == doctest::Approx(0.0));
  // boundary rays at 0, pi/2, pi, 3pi/2
  for (int i = 0; i < 4; ++i) {
    const auto z = cx.sectors[static_cast<size_t>(i)].pos(1, 0);
    double want = i * kPi / 2;
    if (want > kPi) want -= 2 * kPi;
    CHECK(std::arg(z) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("opening angles sum to 2 pi") {
  GreedyParams p;
  p.R = 1.0;
  p.m = 3;
  p.phi0 = kPi / 3;
  p.phi_star = 3 * kPi / 4;
  p.delta = 0.05;
  const auto cx = netgen::init_sectors(p);
  REQUIRE(cx.sectors.size() == 6);
  double sum = 0;
  for (const auto& s : cx.sectors) sum += s.opening_angle;
  CHECK(sum == doctest::Approx(2 * kPi).epsilon(1e-10));
}

TEST_CASE("validation: plain saddle and monkey saddle") {
  const auto saddle = netgen::build_periodic_amsler(1.0, 2, 0.05);
  CHECK(validate_complex(saddle).ok());
  CanonicalIndex idx(saddle);
  CHECK(idx.degree(idx.canonical(0, 0, 0)) == 4);
  CHECK(branch_index(saddle, idx, {0, 0, 0}) == -1);

  const auto monkey = netgen::build_periodic_amsler(1.0, 3, 0.05);
  CHECK(validate_complex(monkey).ok());
  CanonicalIndex midx(monkey);
  CHECK(midx.degree(midx.canonical(0, 0, 0)) == 6);
  CHECK(branch_index(monkey, midx, {0, 0, 0}) == -2);
}

TEST_CASE("branch index of a periodic Amsler origin is 1 - m") {
  for (int m0 : {2, 3, 5}) {
    const auto cx = netgen::build_periodic_amsler(1.0, m0, 0.05);
    CanonicalIndex idx(cx);
    CHECK(branch_index(cx, idx, {0, 0, 0}) == 1 - m0);
  }
}

TEST_CASE("branch index rejects boundary vertices") {
  const auto cx = netgen::build_periodic_amsler(1.0, 2, 0.1);
  CanonicalIndex idx(cx);
  const auto& row0 = cx.sectors[0].rows[0];
  const int edge_j = static_cast<int>(row0.size()) - 1;
  CHECK_THROWS_AS(branch_index(cx, idx, {0, edge_j, 0}), boundary_vertex_error);
}

TEST_CASE("corrupting an attached row is reported") {
  auto cx = netgen::init_sectors(quad_params(1.0, 0.1));
  REQUIRE(validate_complex(cx).ok());
  cx.sectors[1].rows[0][2].pos += std::complex<double>(1e-7, 0.0);
  const auto rep = validate_complex(cx);
  CHECK(!rep.ok());
  bool seam = false;
  for (const auto& is : rep.issues) seam |= is.code == "SEAM_COPY_MISMATCH";
  CHECK(seam);
}

TEST_CASE("reflected attachings are rejected as unsupported") {
  auto cx = netgen::init_sectors(quad_params(1.0, 0.1));
  Attaching bad = cx.attachings[0];
  bad.dj = 0;
  bad.dk = -1;  // coordinate-reflected identification
  cx.attachings.push_back(bad);
  const auto rep = validate_complex(cx);
  bool flagged = false;
  for (const auto& is : rep.issues) flagged |= is.code == "UNSUPPORTED_REFLECTED_ATTACHING";
  CHECK(flagged);
}

TEST_CASE("cut depth and the branch tree") {
  const auto smooth = netgen::run_greedy(quad_params(1.0));
  CHECK(cut_depth(smooth) == 0);
  CHECK(smooth.branches.empty());

  const auto cx = netgen::run_greedy(quad_params(3.0));
  CHECK(cut_depth(cx) >= 2);
  // oracle: longest root-to-leaf path through parent sectors
  int longest = 0;
  for (const auto& b : cx.branches) {
    int len = 1;
    int sector = b.parent_sector;
    while (cx.sectors[static_cast<size_t>(sector)].parent_branch) {
      const auto& up = cx.branches[static_cast<size_t>(
          *cx.sectors[static_cast<size_t>(sector)].parent_branch)];
      sector = up.parent_sector;
      ++len;
    }
    longest = std::max(longest, len);
  }
  CHECK(longest == cut_depth(cx));
}

TEST_CASE("branch records are bidirectionally consistent") {
  const auto cx = netgen::run_greedy(quad_params(3.0));
  REQUIRE(!cx.branches.empty());
  CHECK(cx.sectors.size() == 4 + 3 * cx.branches.size());
  for (const auto& b : cx.branches) {
    CHECK(b.phi_daughter == doctest::Approx(b.phi_parent / 3.0).epsilon(1e-15));
    CHECK(b.phi_daughter > 0);
    CHECK(b.phi_parent < kPi);
    CHECK(b.s_n > 0);
    CHECK(hyp_distance(DiskPoint(), b.location) < cx.disk_radius);
    for (int d : b.daughter_sectors) {
      REQUIRE(cx.sectors[static_cast<size_t>(d)].parent_branch.has_value());
      CHECK(*cx.sectors[static_cast<size_t>(d)].parent_branch == b.id);
    }
  }
}

TEST_CASE("attached boundary copies are bit-identical") {
  const auto cx = netgen::run_greedy(quad_params(3.0));
  for (const auto& at : cx.attachings) {
    const auto& from = cx.sectors[static_cast<size_t>(at.from_sector)];
    const auto& to = cx.sectors[static_cast<size_t>(at.to_sector)];
    for (int t = 0; t < at.count; ++t) {
      const int jf = at.from_is_row ? t : 0, kf = at.from_is_row ? 0 : t;
      if (!from.active(jf, kf)) break;
      const int jt = at.j0 + t * at.dj, kt = at.k0 + t * at.dk;
      if (!to.active(jt, kt)) break;
      CHECK(from.pos(jf, kf) == to.pos(jt, kt));
    }
  }
}

TEST_CASE("greedy complex passes full validation") {
  const auto cx = netgen::run_greedy(quad_params(3.0));
  const auto rep = validate_complex(cx);
  for (const auto& is : rep.issues) {
    CAPTURE(is.code);
    CAPTURE(is.where);
    CHECK(false);
  }
  CHECK(rep.ok());
}
