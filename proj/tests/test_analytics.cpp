#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "ofd/analytics/bullwhip.hpp"
#include "ofd/analytics/eda.hpp"
#include "ofd/analytics/metrics.hpp"
#include "support.hpp"

namespace ofd {
namespace {

TEST(Metrics, HandComputedValues) {
  const std::vector<double> a{0, 0}, p{3, 4};
  EXPECT_NEAR(rmse(a, p), std::sqrt(12.5), 1e-12);
  EXPECT_EQ(mae(a, p), 3.5);
  EXPECT_EQ(rmse(p, p), 0.0);
  EXPECT_EQ(mae(p, p), 0.0);
  EXPECT_NEAR(r2(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 4}), 0.5, 1e-12);
}

TEST(Metrics, Guards) {
  EXPECT_THROW(rmse(std::vector<double>{1}, std::vector<double>{1, 2}), DataError);
  EXPECT_THROW(mae(std::vector<double>{}, std::vector<double>{}), DataError);
  EXPECT_THROW(r2(std::vector<double>{2, 2}, std::vector<double>{1, 3}), DataError);
}

TEST(Metrics, PropertyIdentities) {
  std::mt19937_64 g(5);
  std::normal_distribution<double> n(0, 10);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t len = 2 + g() % 30;
    std::vector<double> a(len), p(len);
    for (std::size_t k = 0; k < len; ++k) {
      a[k] = n(g);
      p[k] = n(g);
    }
    const double e = rmse(a, p), m = mae(a, p);
    EXPECT_GE(e, m - 1e-12);
    EXPECT_GE(m, 0.0);
    const double mean = std::accumulate(a.begin(), a.end(), 0.0) / double(len);
    double ss = 0.0;
    for (double v : a) ss += (v - mean) * (v - mean);
    EXPECT_NEAR(r2(a, p), 1.0 - e * e * double(len) / ss, 1e-9);
    EXPECT_LE(r2(a, p), 1.0);
    EXPECT_NEAR(mae(std::vector<double>{a[0] * -3}, std::vector<double>{p[0] * -3}),
                3 * std::abs(a[0] - p[0]), 1e-9);
  }
}

TEST(Metrics, PerfectAndMeanPredictions) {
  const std::vector<double> a{3, 1, 4, 1, 5, 9, 2, 6};
  EXPECT_EQ(r2(a, a), 1.0);
  const double m = std::accumulate(a.begin(), a.end(), 0.0) / double(a.size());
  EXPECT_NEAR(r2(a, std::vector<double>(a.size(), m)), 0.0, 1e-12);
}

TEST(Eda, CumulativeMeanAndRollingVariance) {
  EXPECT_EQ(cumulative_mean(std::vector<double>{1, 2, 3}), (std::vector<double>{1, 1.5, 2}));
  const auto rv = rolling_variance(std::vector<double>{0, 0, 0, 0, 0, 0, 7});
  ASSERT_EQ(rv.size(), 1u);
  EXPECT_NEAR(rv[0], 6.0, 1e-12);
}

TEST(Eda, ConstantDemand) {
  const auto ds = testing::synthetic_dataset(10, [](auto, int, int) { return 4.0; });
  const auto r = eda(ds, Platform::Zomato);
  for (double v : r.cumulative_mean) EXPECT_EQ(v, 4.0);
  for (double v : r.rolling_variance) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(r.rolling_variance.size(), 4u);
}

TEST(Eda, SevenDaysGiveOneRollingValueAndFewerFail) {
  const auto ds = testing::synthetic_dataset(7, [](auto d, int, int) { return double(d); });
  EXPECT_EQ(eda(ds, Platform::Swiggy).rolling_variance.size(), 1u);
  EXPECT_THROW(eda(ds.slice_days(0, 6), Platform::Swiggy), DataError);
}

TEST(Eda, RollingWindowIgnoresOlderDays) {
  std::vector<double> x{5, 1, 2, 3, 4, 5, 6, 7, 8};
  const auto a = rolling_variance(x);
  x[1] = 1000;  // day t-7 for the last entry
  const auto b = rolling_variance(x);
  EXPECT_EQ(a.back(), b.back());
}

TEST(Eda, HistogramCountsAndQq) {
  std::mt19937_64 g(1);
  std::normal_distribution<double> n(100, 15);
  std::vector<double> x(500);
  for (auto& v : x) v = n(g);
  const auto h = sturges_histogram(x);
  EXPECT_EQ(h.counts.size(), 10u);  // ceil(log2 500) + 1
  EXPECT_EQ(std::accumulate(h.counts.begin(), h.counts.end(), std::size_t{0}), x.size());
  EXPECT_EQ(h.edges.size(), h.counts.size() + 1);
  const auto q = qq_points(x);
  ASSERT_EQ(q.size(), x.size());
  for (std::size_t i = 1; i < q.size(); ++i) {
    EXPECT_GT(q[i].theoretical, q[i - 1].theoretical);
    EXPECT_GE(q[i].sample, q[i - 1].sample);
  }
  // Median plotting position maps to the fitted mean.
  const auto q3 = qq_points(std::vector<double>{1, 2, 3});
  EXPECT_NEAR(q3[1].theoretical, 2.0, 1e-12);
}

TEST(Eda, SeriesCsvLayout) {
  const auto ds = testing::synthetic_dataset(8, [](auto d, int, int) { return double(d); });
  const auto csv = eda_series_csv(eda(ds, Platform::Zomato));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "day,date,daily_average,cumulative_mean,rolling_variance_7d");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
}

TEST(Bullwhip, Values) {
  const std::vector<double> d{1, 2, 5, 3};
  EXPECT_NEAR(bullwhip(d, d), 1.0, 1e-12);
  EXPECT_EQ(bullwhip(std::vector<double>{4, 4, 4, 4}, d), 0.0);
  EXPECT_NEAR(bullwhip(std::vector<double>{1, 3}, std::vector<double>{1, 2}), 4.0, 1e-12);
  EXPECT_THROW(bullwhip(d, std::vector<double>{2, 2, 2, 2}), DataError);
  EXPECT_THROW(bullwhip(std::vector<double>{1}, std::vector<double>{1}), DataError);
}

TEST(Bullwhip, ScaleInvariant) {
  std::mt19937_64 g(2);
  std::uniform_real_distribution<double> u(0, 10);
  std::vector<double> a(20), b(20);
  for (int i = 0; i < 20; ++i) {
    a[i] = u(g);
    b[i] = u(g);
  }
  const double base = bullwhip(a, b);
  for (double k : {-2.0, 0.5, 1e3}) {
    std::vector<double> ka(a), kb(b);
    for (auto& v : ka) v *= k;
    for (auto& v : kb) v *= k;
    EXPECT_NEAR(bullwhip(ka, kb), base, 1e-9 * base);
  }
}

class BullwhipReportTest : public ::testing::Test {
 protected:
  Dataset ds = testing::synthetic_dataset(100, [](auto d, int k, int p) {
    return 100.0 + 20.0 * std::sin(0.7 * double(d) + k) + 5.0 * p + 3.0 * double(d % 4);
  });
  SplitBounds bounds = chronological_split(ds, {}, 8);

  std::vector<ForecastPoint> perfect(bool slotted) const {
    std::vector<ForecastPoint> f;
    for (std::size_t d = 1; d < ds.num_days(); ++d) {
      if (slotted) {
        for (int k = 0; k < 5; ++k) {
          const double a = ds.at(d, k).demand[0] + ds.at(d, k).demand[1];
          f.push_back({ds.date(d), k, a, a});
        }
      } else {
        double a = 0.0;
        for (int k = 0; k < 5; ++k) a += (ds.at(d, k).demand[0] + ds.at(d, k).demand[1]) / 5.0;
        f.push_back({ds.date(d), -1, a, a});
      }
    }
    return f;
  }
};

TEST_F(BullwhipReportTest, EighteenValuesAcrossPhases) {
  std::size_t total = 0;
  for (int phase : {1, 2}) {
    const bool daily = phase == 2;
    const auto hist = plan_from_history(ds, daily ? PlanVariant::Daily : PlanVariant::FiveTime, {});
    const auto pred = plan_from_forecast(perfect(!daily), 7,
                                         daily ? PlanVariant::DailyLstm : PlanVariant::FiveTimeLstm, {});
    const auto rep = bullwhip_report(ds, bounds, phase, hist, pred);
    EXPECT_EQ(rep.entries.size(), 9u);
    total += rep.entries.size();
    for (const auto& e : rep.entries) {
      EXPECT_GE(e.b, 0.0);
      EXPECT_EQ(e.b, e.inventory_variance / e.demand_variance);
    }
    const auto j = to_json(rep);
    for (const char* s : kSegments)
      for (const char* c : kScopes) EXPECT_TRUE(j["segments"][s][c]["B"].is_number());
  }
  EXPECT_EQ(total, 18u);
}

TEST_F(BullwhipReportTest, PerfectForecastHasUnitOverallB) {
  const auto hist = plan_from_history(ds, PlanVariant::FiveTime, {});
  const auto pred = plan_from_forecast(perfect(true), 7, PlanVariant::FiveTimeLstm, {});
  const auto rep = bullwhip_report(ds, bounds, 1, hist, pred);
  EXPECT_NEAR(rep.get("predicted", "overall").b, 1.0, 1e-9);
}

TEST_F(BullwhipReportTest, RejectsMismatchedVariants) {
  const auto hist = plan_from_history(ds, PlanVariant::Daily, {});
  const auto pred = plan_from_forecast(perfect(true), 7, PlanVariant::FiveTimeLstm, {});
  EXPECT_THROW(bullwhip_report(ds, bounds, 1, hist, pred), DataError);
}

TEST(BullwhipReport, ConstantWorldIsDegenerate) {
  const auto ds = testing::synthetic_dataset(60, [](auto, int, int) { return 50.0; });
  const auto bounds = chronological_split(ds, {}, 8);
  const auto hist = plan_from_history(ds, PlanVariant::FiveTime, {});
  std::vector<ForecastPoint> f;
  for (std::size_t d = 0; d < ds.num_days(); ++d)
    for (int k = 0; k < 5; ++k) f.push_back({ds.date(d), k, 100.0, 100.0});
  const auto pred = plan_from_forecast(f, 7, PlanVariant::FiveTimeLstm, {});
  const auto rep = bullwhip_report(ds, bounds, 1, hist, pred);
  EXPECT_TRUE(rep.degenerate());
  EXPECT_TRUE(to_json(rep)["segments"]["training"]["overall"]["B"].is_null());
}

TEST(TrailingShare, UsesPriorDaysOnly) {
  const auto ds = testing::synthetic_dataset(10, [](auto d, int, int p) { return d < 5 ? (p == 0 ? 1.0 : 3.0) : 100.0; });
  EXPECT_EQ(trailing_share(ds, 0, 2, 7), 0.5);
  EXPECT_NEAR(trailing_share(ds, 5, 2, 7), 0.25, 1e-12);
  EXPECT_NEAR(trailing_share(ds, 5, -1, 3), 0.25, 1e-12);
}

}  // namespace
}  // namespace ofd
