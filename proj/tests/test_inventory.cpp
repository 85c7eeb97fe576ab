#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "ofd/core/stats.hpp"
#include "ofd/inventory/newsvendor.hpp"
#include "support.hpp"

namespace ofd {
namespace {

TEST(CombinedSd, Values) {
  EXPECT_EQ(combined_sd(3, 4, 0), 5.0);
  EXPECT_EQ(combined_sd(10, 10, 1), 20.0);
  EXPECT_NEAR(combined_sd(10, 10, 0.93), std::sqrt(386.0), 1e-12);
  EXPECT_NEAR(combined_sd(10, 10, 0.93), 19.647, 1e-3);
}

TEST(CombinedSd, TriangleBounds) {
  std::mt19937_64 g(1);
  std::uniform_real_distribution<double> s(0, 100), r(-1, 1);
  for (int i = 0; i < 1000; ++i) {
    const double a = s(g), b = s(g), rho = r(g);
    const double c = combined_sd(a, b, rho);
    EXPECT_GE(c, std::abs(a - b) - 1e-9);
    EXPECT_LE(c, a + b + 1e-9);
  }
}

TEST(QStar, Values) {
  EXPECT_NEAR(q_star(100, 10, 1.96), 119.6, 1e-12);
  EXPECT_EQ(q_star(42, 0, 1.96), 42.0);
  EXPECT_EQ(q_star(0, 0, 1.96), 0.0);
  EXPECT_EQ(q_star(-50, 1, 1.0), 0.0);
}

TEST(QStar, MonotoneInZAndSigma) {
  std::mt19937_64 g(2);
  std::uniform_real_distribution<double> mu(0, 1000), sd(0, 200), z(0.01, 4);
  for (int i = 0; i < 1000; ++i) {
    const double m = mu(g), s = sd(g), a = z(g), b = z(g);
    EXPECT_LE(q_star(m, s, std::min(a, b)), q_star(m, s, std::max(a, b)));
    const double s2 = sd(g);
    EXPECT_LE(q_star(m, std::min(s, s2), a), q_star(m, std::max(s, s2), a));
  }
}

TEST(Correlation, Extremes) {
  const std::vector<double> a{1, 2, 4, 8}, neg{-1, -2, -4, -8}, flat{3, 3, 3, 3};
  EXPECT_NEAR(estimate_correlation(a, a), 1.0, 1e-12);
  EXPECT_NEAR(estimate_correlation(a, neg), -1.0, 1e-12);
  EXPECT_THROW(estimate_correlation(a, flat), DataError);
}

TEST(SlotStats, ConstantHistory) {
  const auto ds = testing::synthetic_dataset(10, [](auto, int, int p) { return p == 0 ? 30.0 : 50.0; });
  const auto st = slot_stats(ds, 8, 2, 7);
  EXPECT_EQ(st.mean, 80.0);
  EXPECT_EQ(st.sd, 0.0);
  EXPECT_THROW(slot_stats(ds, 5, 2, 7), DataError);
  EXPECT_THROW(slot_stats(ds, 8, 2, 1), DataError);
}

TEST(SlotStats, MatchesBruteForce) {
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> u(100, 500);
  std::vector<double> vals(30 * 5 * 2);
  for (auto& v : vals) v = u(g);
  const auto ds = testing::synthetic_dataset(30, [&](auto d, int k, int p) { return vals[(d * 5 + k) * 2 + p]; });
  const std::size_t day = 20;
  const int slot = 3;
  std::vector<double> z, s, t;
  for (std::size_t d = day - 7; d < day; ++d) {
    z.push_back(ds.at(d, slot).demand[0]);
    s.push_back(ds.at(d, slot).demand[1]);
    t.push_back(z.back() + s.back());
  }
  const auto st = slot_stats(ds, day, slot, 7);
  EXPECT_NEAR(st.mean, stats::mean(t), 1e-9);
  // With the window's own correlation, the combined sd equals the sd of the total.
  EXPECT_NEAR(st.sd, stats::sd(t), 1e-9);
  const auto fixed = slot_stats(ds, day, slot, 7, 0.0);
  EXPECT_NEAR(fixed.sd, std::hypot(stats::sd(z), stats::sd(s)), 1e-9);
}

TEST(DailyStats, AveragesMeansAndSds) {
  std::vector<DemandStats> st(5);
  for (int k = 0; k < 5; ++k) {
    st[k].mean = 10.0 * (k + 1);
    st[k].sd = k + 1.0;
  }
  const auto d = daily_stats(st);
  EXPECT_EQ(d.mean, 30.0);
  EXPECT_EQ(d.sd, 3.0);
  std::vector<DemandStats> same(5, DemandStats{7.0, 2.0});
  EXPECT_EQ(daily_stats(same).mean, 7.0);
  EXPECT_EQ(daily_stats(same).sd, 2.0);
  EXPECT_THROW(daily_stats(std::span<const DemandStats>(st.data(), 4)), DataError);
}

TEST(HistoryPlan, ConstantDemandGivesConstantPlan) {
  const auto ds = testing::synthetic_dataset(20, [](auto, int k, int) { return 10.0 + k; });
  const auto plan = plan_from_history(ds, PlanVariant::FiveTime, {});
  EXPECT_EQ(plan.points.size(), 13u * 5u);
  for (const auto& p : plan.points) {
    EXPECT_EQ(p.q_star, 2 * (10.0 + p.slot));
    EXPECT_EQ(p.sigma, 0.0);
  }
  EXPECT_EQ(plan.points.front().date, ds.date(7));
  const auto daily = plan_from_history(ds, PlanVariant::Daily, {});
  EXPECT_EQ(daily.points.size(), 13u);
  EXPECT_EQ(daily.points[0].q_star, 2 * 12.0);
  EXPECT_THROW(plan_from_history(ds, PlanVariant::FiveTimeLstm, {}), DataError);
  EXPECT_THROW(plan_from_history(ds.slice_days(0, 7), PlanVariant::Daily, {}), DataError);
}

TEST(HistoryPlan, FollowsStepWithinWindow) {
  const auto ds = testing::synthetic_dataset(40, [](auto d, int, int) { return d < 20 ? 100.0 : 200.0; });
  NewsvendorParams p;
  const auto plan = plan_from_history(ds, PlanVariant::Daily, p);
  for (const auto& pt : plan.points) {
    const long d = pt.date.days_since(ds.date(0));
    if (d >= 20 + p.window_days) EXPECT_EQ(pt.q_star, 400.0);
    if (d <= 20) EXPECT_EQ(pt.q_star, 200.0);
    EXPECT_GE(pt.q_star, pt.mu);
  }
}

TEST(HistoryPlan, MonotoneInZ) {
  std::mt19937_64 g(4);
  std::uniform_real_distribution<double> u(50, 150);
  std::vector<double> v(25 * 10);
  for (auto& x : v) x = u(g);
  const auto ds = testing::synthetic_dataset(25, [&](auto d, int k, int p) { return v[d * 10 + k * 2 + p]; });
  NewsvendorParams lo, hi;
  lo.z_score = 1.0;
  hi.z_score = 2.0;
  for (auto variant : {PlanVariant::FiveTime, PlanVariant::Daily}) {
    const auto a = plan_from_history(ds, variant, lo).q_series();
    const auto b = plan_from_history(ds, variant, hi).q_series();
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_LE(a[i], b[i]);
  }
}

std::vector<ForecastPoint> slot_forecasts(std::size_t days, const std::function<double(std::size_t, int)>& err) {
  std::vector<ForecastPoint> f;
  for (std::size_t d = 0; d < days; ++d)
    for (int k = 0; k < 5; ++k) {
      const double actual = 100.0 + 10.0 * k;
      f.push_back({Date(2024, 1, 1).plus_days(static_cast<long>(d)), k, actual - err(d, k), actual});
    }
  return f;
}

TEST(ForecastPlan, PerfectForecastsGiveQEqualForecast) {
  const auto f = slot_forecasts(10, [](auto, int) { return 0.0; });
  const auto plan = plan_from_forecast(f, 7, PlanVariant::FiveTimeLstm, {});
  ASSERT_FALSE(plan.points.empty());
  for (const auto& p : plan.points) EXPECT_EQ(p.q_star, p.mu);
}

TEST(ForecastPlan, KnownErrorSdGivesSafetyStock) {
  // Errors alternate +5 / -5 so their population sd is exactly 5.
  const auto f = slot_forecasts(30, [](auto d, int k) { return (d * 5 + k) % 2 == 0 ? 5.0 : -5.0; });
  const auto plan = plan_from_forecast(f, 2, PlanVariant::FiveTimeLstm, {});
  for (const auto& p : plan.points)
    if (p.date.days_since(Date(2024, 1, 1)) >= 2) EXPECT_NEAR(p.q_star - p.mu, 1.96 * 5.0, 1e-9);
}

TEST(ForecastPlan, DailyAveragesSlotForecasts) {
  std::vector<ForecastPoint> f;
  for (std::size_t d = 0; d < 6; ++d)
    for (int k = 0; k < 5; ++k) f.push_back({Date(2024, 1, 1).plus_days(long(d)), k, 10.0, 10.0 + k - 2});
  const auto plan = plan_from_forecast(f, 7, PlanVariant::DailyLstm, {});
  ASSERT_EQ(plan.points.size(), 4u);
  for (const auto& p : plan.points) {
    EXPECT_EQ(p.mu, 10.0);
    EXPECT_EQ(p.slot, -1);
  }
}

TEST(ForecastPlan, UsesOnlyPriorErrorsInsideWindow) {
  auto f = slot_forecasts(20, [](auto d, int) { return d < 10 ? 50.0 : 0.0; });
  const auto plan = plan_from_forecast(f, 3, PlanVariant::FiveTimeLstm, {});
  for (const auto& p : plan.points) {
    const long d = p.date.days_since(Date(2024, 1, 1));
    if (d >= 13) EXPECT_EQ(p.sigma, 0.0);
    if (d < 10) EXPECT_EQ(p.sigma, 0.0);  // constant error of 50
  }
  // The first day has no prior errors and is skipped.
  EXPECT_EQ(plan.points.front().date, Date(2024, 1, 2));
}

TEST(ForecastPlan, RejectsMisalignedSeries) {
  auto f = slot_forecasts(3, [](auto, int) { return 0.0; });
  std::swap(f[2], f[3]);
  EXPECT_THROW(plan_from_forecast(f, 7, PlanVariant::FiveTimeLstm, {}), DataError);
  auto g = slot_forecasts(3, [](auto, int) { return 0.0; });
  g.pop_back();
  EXPECT_THROW(plan_from_forecast(g, 7, PlanVariant::FiveTimeLstm, {}), DataError);
  EXPECT_THROW(plan_from_forecast(slot_forecasts(3, [](auto, int) { return 0.0; }), 7,
                                  PlanVariant::Daily, {}),
               DataError);
}

TEST(PlanCsv, Header) {
  const auto ds = testing::synthetic_dataset(9, [](auto, int, int) { return 5.0; });
  const auto csv = plan_to_csv(plan_from_history(ds, PlanVariant::Daily, {}));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "date,time_slot,variant,mu,sigma,q_star");
  EXPECT_NE(csv.find(",Daily,daily,10,0,10"), std::string::npos);
}

}  // namespace
}  // namespace ofd
