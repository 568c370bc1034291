#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <algorithm>
#include <map>
#include <thread>

#include "udw/qfield/coherence.hpp"
#include "udw/sweep/sweep.hpp"

using namespace udw;
using namespace udw::sweep;
using qfield::ConstantVelocity;
using qfield::Rest;
using qfield::UniformAcceleration;

namespace {

GridSpec small_spec(std::size_t n) {
  GridSpec s;
  s.n_e = n;
  s.n_t = n;
  return s;
}

double rest_cf(double e, double t) {
  return qfield::coherence_rest_closed_form(qfield::FieldProfile(e), qfield::SwitchingProfile(t))
      .c_over_g;
}

DiffGrid random_diff(std::mt19937_64& rng, std::size_t n) {
  DiffGrid d;
  d.spec = small_spec(n);
  d.values = Array2D(n, n);
  d.errors = Array2D(n, n);
  std::uniform_real_distribution<double> v(-1.0, 1.0), e(0.0, 0.3);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      d.values(i, j) = v(rng);
      d.errors(i, j) = e(rng);
    }
  }
  return d;
}

}  // namespace

TEST(Axis, EndpointsAndSpacing) {
  const auto lin = make_axis(0.1, 5.0, 50, Spacing::Linear);
  ASSERT_EQ(lin.size(), 50u);
  EXPECT_EQ(lin.front(), 0.1);
  EXPECT_EQ(lin.back(), 5.0);
  const auto lg = make_axis(0.1, 10.0, 3, Spacing::Log);
  EXPECT_EQ(lg.front(), 0.1);
  EXPECT_NEAR(lg[1], 1.0, 1e-15);
  EXPECT_EQ(lg.back(), 10.0);
}

TEST(GridSpecValidation, RejectsBadRanges) {
  GridSpec s;
  s.e_bar_min = 0.0;
  EXPECT_THROW(s.validate(), std::domain_error);
  s = GridSpec{};
  s.t_bar_max = s.t_bar_min;
  EXPECT_THROW(s.validate(), std::domain_error);
  s = GridSpec{};
  s.n_e = 1;
  EXPECT_THROW(s.validate(), std::domain_error);
  EXPECT_NO_THROW(GridSpec{}.validate());
}

TEST(SweepGrid, TwoByTwoRestIsCornerClosedForms) {
  const auto g = sweep_grid(Rest{}, small_spec(2), 1e-6);
  EXPECT_EQ(g.values(0, 0), rest_cf(0.1, 0.1));
  EXPECT_EQ(g.values(0, 1), rest_cf(0.1, 5.0));
  EXPECT_EQ(g.values(1, 0), rest_cf(5.0, 0.1));
  EXPECT_EQ(g.values(1, 1), rest_cf(5.0, 5.0));
  EXPECT_TRUE(g.meta.flagged.empty());
  ASSERT_TRUE(g.trajectory.has_value());
  EXPECT_EQ(*g.trajectory, qfield::Trajectory(Rest{}));
}

TEST(SweepGrid, SmallEnergyRowFollowsWeakFieldLimit) {
  const auto g = sweep_grid(Rest{}, small_spec(50), 1e-5);
  const double t = g.spec.t_axis()[0];
  EXPECT_NEAR(g.values(0, 0), 4.8651 * std::exp(-t * t / 2), 0.05 * 4.8651 * std::exp(-t * t / 2));
}

TEST(SweepGrid, SlowestDecayAtComparableEnergy) {
  // At long duration the surviving coherence peaks at E of order Omega.
  const auto g = sweep_grid(Rest{}, small_spec(50), 1e-5);
  const auto e = g.spec.e_axis();
  for (std::size_t j : {20u, 30u, 49u}) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < e.size(); ++i) {
      if (g.values(i, j) > g.values(best, j)) best = i;
    }
    EXPECT_GT(e[best], 0.3) << "column " << j;
    EXPECT_LT(e[best], 3.0) << "column " << j;
    EXPECT_GT(g.values(best, j), 1.2 * g.values(0, j));
    EXPECT_GT(g.values(best, j), 1.2 * g.values(e.size() - 1, j));
  }
}

TEST(SweepGrid, DeterministicAcrossWorkerCounts) {
  for (qfield::Trajectory tr : {qfield::Trajectory(Rest{}), qfield::Trajectory(ConstantVelocity(0.8)),
                                qfield::Trajectory(UniformAcceleration(2))}) {
    const auto one = sweep_grid(tr, small_spec(12), 1e-5, 1);
    const auto many = sweep_grid(tr, small_spec(12), 1e-5, 5);
    EXPECT_EQ(one.values, many.values);
    EXPECT_EQ(one.errors, many.errors);
    EXPECT_EQ(one.meta.flagged, many.meta.flagged);
  }
}

CellEvaluator failing_first_cells(const GridSpec& spec, std::size_t count) {
  const auto t_axis = spec.t_axis();
  const double e0 = spec.e_bar_min;
  return [=](double e, double t) {
    const auto j = static_cast<std::size_t>(
        std::find(t_axis.begin(), t_axis.end(), t) - t_axis.begin());
    if (e == e0 && j < count) {
      throw qfield::CoherenceError("no convergence",
                                   qfield::make_result({0.0, -1.0}, 0.5, qfield::Method::Quadrature));
    }
    return qfield::make_result({0.0, -0.25}, 1e-9, qfield::Method::Quadrature);
  };
}

TEST(SweepGrid, FewFailuresAreFlaggedInPlace) {
  const auto spec = small_spec(20);  // 400 cells, 1% = 4
  const auto g = sweep_grid_with(failing_first_cells(spec, 4), Rest{}, spec, 1e-5, 3);
  ASSERT_EQ(g.meta.flagged.size(), 4u);
  EXPECT_EQ(g.meta.flagged[0], CellIndex(0, 0));
  EXPECT_EQ(g.meta.flagged[3], CellIndex(0, 3));
  EXPECT_EQ(g.values(0, 0), 2.0);
  EXPECT_EQ(g.errors(0, 0), 0.5);
  EXPECT_EQ(g.values(5, 5), 0.5);
}

TEST(SweepGrid, TooManyFailuresAbortWithPartialGrid) {
  const auto spec = small_spec(20);
  try {
    sweep_grid_with(failing_first_cells(spec, 5), Rest{}, spec, 1e-5, 2);
    FAIL() << "expected SweepError";
  } catch (const SweepError& e) {
    EXPECT_EQ(e.grid().meta.flagged.size(), 5u);
    EXPECT_EQ(e.grid().values(0, 4), 2.0);
  }
}

TEST(ForEachRow, PropagatesExceptions) {
  EXPECT_THROW(for_each_row(10, 4,
                            [](std::size_t r) {
                              if (r == 7) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
  std::vector<int> hits(37, 0);
  for_each_row(37, 8, [&](std::size_t r) { hits[r] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
}

// ---- diffs -----------------------------------------------------------------------

TEST(DiffGrid, SelfDiffIsZero) {
  const auto g = sweep_grid(UniformAcceleration(1.0), small_spec(6), 1e-5);
  const auto d = diff_grid(g, g);
  for (double v : d.values.data()) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(d.minuend_tag, "acceleration:1");
  EXPECT_TRUE(swelling_regions(d, 0.0).cells.empty());
}

TEST(DiffGrid, ZeroVelocityMatchesRest) {
  const auto a = sweep_grid(ConstantVelocity(0.0), small_spec(10), 1e-5);
  const auto b = sweep_grid(Rest{}, small_spec(10), 1e-5);
  const auto d = diff_grid(a, b);
  for (std::size_t k = 0; k < d.values.data().size(); ++k) {
    EXPECT_LE(std::abs(d.values.data()[k]), d.errors.data()[k]);
  }
}

TEST(DiffGrid, AntisymmetricWithSummedErrors) {
  const auto a = sweep_grid(ConstantVelocity(0.5), small_spec(8), 1e-5);
  const auto b = sweep_grid(Rest{}, small_spec(8), 1e-5);
  const auto ab = diff_grid(a, b), ba = diff_grid(b, a);
  for (std::size_t k = 0; k < ab.values.data().size(); ++k) {
    EXPECT_EQ(ab.values.data()[k], -ba.values.data()[k]);
    EXPECT_EQ(ab.errors.data()[k], a.errors.data()[k] + b.errors.data()[k]);
  }
}

TEST(DiffGrid, SpecMismatchRejected) {
  const auto a = sweep_grid(Rest{}, small_spec(3), 1e-5);
  const auto b = sweep_grid(Rest{}, small_spec(4), 1e-5);
  EXPECT_THROW(diff_grid(a, b), std::invalid_argument);
}

TEST(DiffGrid, MovingDetectorHasPositiveCells) {
  const auto d = diff_grid(sweep_grid(ConstantVelocity(0.8), small_spec(30), 1e-5),
                           sweep_grid(Rest{}, small_spec(30), 1e-5));
  EXPECT_GT(*std::max_element(d.values.data().begin(), d.values.data().end()), 0.0);
}

// ---- swelling regions -------------------------------------------------------------

TEST(Swelling, MembershipMatchesReferenceScanProperty) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const auto d = random_diff(rng, 15);
    const double thr = 0.2 * (trial % 3);
    const auto rep = swelling_regions(d, thr);
    std::vector<CellIndex> want;
    for (std::size_t i = 0; i < 15; ++i)
      for (std::size_t j = 0; j < 15; ++j)
        if (d.values(i, j) > thr + d.errors(i, j)) want.emplace_back(i, j);
    ASSERT_EQ(rep.cells.size(), want.size());
    for (std::size_t k = 0; k < want.size(); ++k) {
      EXPECT_EQ(CellIndex(rep.cells[k].i, rep.cells[k].j), want[k]);
    }
    std::size_t total = 0;
    for (const auto& c : rep.components) total += c.size;
    EXPECT_EQ(total, want.size());
  }
}

TEST(Swelling, ComponentsAreFourConnectedProperty) {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 30; ++trial) {
    const auto d = random_diff(rng, 12);
    const auto rep = swelling_regions(d, 0.0);
    std::map<CellIndex, std::size_t> label;
    for (const auto& c : rep.cells) label[{c.i, c.j}] = c.component;
    for (const auto& [cell, comp] : label) {
      for (auto [di, dj] : {std::pair{1, 0}, std::pair{0, 1}}) {
        const CellIndex nb(cell.first + di, cell.second + dj);
        auto it = label.find(nb);
        if (it != label.end()) EXPECT_EQ(it->second, comp);
      }
    }
    for (std::size_t k = 0; k < rep.components.size(); ++k) {
      EXPECT_EQ(rep.components[k].id, k);
      if (k > 0) {
        const auto& prev = rep.components[k - 1];
        const auto& cur = rep.components[k];
        // Discovery order: first cell of each component in row-major order.
        std::pair<std::size_t, std::size_t> first_prev{SIZE_MAX, SIZE_MAX}, first_cur = first_prev;
        for (const auto& c : rep.cells) {
          if (c.component == prev.id) first_prev = std::min(first_prev, CellIndex(c.i, c.j));
          if (c.component == cur.id) first_cur = std::min(first_cur, CellIndex(c.i, c.j));
        }
        EXPECT_LT(first_prev, first_cur);
      }
    }
  }
}

TEST(Swelling, ComponentSummary) {
  DiffGrid d;
  d.spec = small_spec(4);
  d.values = Array2D(4, 4);
  d.errors = Array2D(4, 4, 0.01);
  d.values(0, 0) = 0.5;
  d.values(0, 1) = 0.7;
  d.values(1, 1) = 0.2;
  d.values(3, 3) = 0.1;
  d.values(2, 0) = 0.005;  // within its error bound
  const auto rep = swelling_regions(d, 0.0);
  ASSERT_EQ(rep.components.size(), 2u);
  const auto& c0 = rep.components[0];
  EXPECT_EQ(c0.size, 3u);
  EXPECT_EQ(c0.peak_i, 0u);
  EXPECT_EQ(c0.peak_j, 1u);
  EXPECT_EQ(c0.peak_diff, 0.7);
  EXPECT_EQ(c0.i_max, 1u);
  EXPECT_EQ(c0.j_max, 1u);
  EXPECT_EQ(rep.components[1].size, 1u);
  EXPECT_EQ(rep.components[1].e_bar_min, 5.0);
  EXPECT_EQ(swelling_regions(d, 0.15).components.size(), 1u);
  EXPECT_TRUE(has_component_where(rep, [](double e, double) { return e > 4.0; }));
  EXPECT_FALSE(has_component_where(rep, [](double e, double t) { return e > 4.0 && t < 1.0; }));
}

// ---- curves ------------------------------------------------------------------------

TEST(Curve, RestDecreasesAtUnitEnergy) {
  const auto c = decoherence_curve({Rest{}}, 1.0, 0.05, 5.0, 100, 1e-6);
  ASSERT_EQ(c.values.rows(), 100u);
  ASSERT_EQ(c.values.cols(), 1u);
  for (std::size_t k = 1; k < 100; ++k) EXPECT_LT(c.values(k, 0), c.values(k - 1, 0));
  EXPECT_EQ(c.t_bar.front(), 0.05);
  EXPECT_EQ(c.t_bar.back(), 5.0);
}

TEST(Curve, MovingDetectorsOvertakeRestAtLowEnergy) {
  const auto c = decoherence_curve({Rest{}, ConstantVelocity(0.8), UniformAcceleration(2)}, 0.25,
                                   0.05, 5.0, 60, 1e-6, 2);
  EXPECT_EQ(c.tags, (std::vector<std::string>{"rest", "velocity:0.8", "acceleration:2"}));
  const double lo = std::min({c.values(0, 0), c.values(0, 1), c.values(0, 2)});
  const double hi = std::max({c.values(0, 0), c.values(0, 1), c.values(0, 2)});
  EXPECT_LT(hi / lo - 1, 0.02);
  bool overtakes = false;
  for (std::size_t k = 0; k < c.t_bar.size(); ++k) {
    if (c.values(k, 1) > c.values(k, 0) || c.values(k, 2) > c.values(k, 0)) overtakes = true;
  }
  EXPECT_TRUE(overtakes);
  EXPECT_TRUE(c.flagged.empty());
}

TEST(Curve, RejectsSingleSample) {
  EXPECT_THROW(decoherence_curve({Rest{}}, 1.0, 0.1, 1.0, 1, 1e-6), std::domain_error);
}
