#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "nlkpp/diagnostics.hpp"
#include "nlkpp/errors.hpp"
#include "nlkpp/grid.hpp"

using namespace nlkpp;

namespace {

Field make_field(double x0, double dx, std::vector<double> values,
                 double t = 0.0) {
  Field u;
  u.grid.x0 = x0;
  u.grid.dx = dx;
  u.grid.n = static_cast<int>(values.size());
  u.values = std::move(values);
  u.time = t;
  return u;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("mass and bulk burning are plain trapezoids") {
  const Field u = make_field(0.0, 0.5, {0.0, 0.5, 1.0, 0.5, 0.0});
  // trapezoid: dx (u0/2 + u1 + u2 + u3 + u4/2) = 0.5 * 2 = 1
  CHECK(mass(u) == doctest::Approx(1.0).epsilon(1e-15));
  // u(1-u) = {0, 0.25, 0, 0.25, 0} -> 0.5 * 0.5 = 0.25
  CHECK(bulk_burning(u) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("front crossings interpolate linearly") {
  const Field u = make_field(0.0, 1.0, {0.0, 0.2, 0.8, 1.0, 0.7, 0.1});
  const auto fp = front(u, 0.5);
  REQUIRE(fp.has_value());
  // Between nodes 1 (0.2) and 2 (0.8): fraction (0.5-0.2)/0.6 = 0.5.
  CHECK(fp->left == doctest::Approx(1.5).epsilon(1e-14));
  // Between nodes 4 (0.7) and 5 (0.1): fraction (0.7-0.5)/0.6 = 1/3.
  CHECK(fp->right == doctest::Approx(4.0 + 1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("front falls back to the boundary node when the level is cut off") {
  const Field u = make_field(-2.0, 1.0, {0.9, 0.8, 0.2});
  const auto fp = front(u, 0.5);
  REQUIRE(fp.has_value());
  CHECK(fp->left == -2.0);  // level already exceeded at the first node
  CHECK(fp->right == doctest::Approx(-0.5).epsilon(1e-14));

  CHECK_FALSE(front(make_field(0.0, 1.0, {0.1, 0.3, 0.2}), 0.5).has_value());
  CHECK_THROWS_AS(front(u, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(front(u, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(front(u, -0.2), std::invalid_argument);
}

TEST_CASE("superlevel measure counts interpolated cell fractions") {
  const Field u = make_field(0.0, 1.0, {0.0, 1.0, 1.0, 0.0});
  CHECK(superlevel_measure(u, 0.5) == doctest::Approx(2.0).epsilon(1e-14));
  // Strict inequality: a flat field exactly at the level has measure zero.
  CHECK(superlevel_measure(make_field(0.0, 1.0, {0.5, 0.5}), 0.5) == 0.0);
}

TEST_CASE("level measures partition the domain width") {
  const Field u = make_field(0.0, 1.0, {0.0, 0.5, 1.0, 1.0, 0.5, 0.0});
  const LevelMeasures lm = level_measures(u, 0.25);
  // Hand values: |{u > 0.25}| = 4, |{u > 0.75}| = 2.
  CHECK(lm.good == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(lm.bad == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(lm.tail == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lm.good + lm.bad + lm.tail ==
        doctest::Approx(u.grid.width()).epsilon(1e-14));

  CHECK_THROWS_AS(level_measures(u, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(level_measures(u, 0.5), std::invalid_argument);
}

TEST_CASE("observe bundles the individual diagnostics") {
  DiagnosticsConfig diag;
  diag.levels = {0.1, 0.5};
  diag.eps = 0.2;
  const Field u = make_field(-2.0, 0.5, {0.0, 0.3, 0.9, 1.0, 0.8, 0.2, 0.0}, 3.5);
  const Record r = observe(u, diag);
  CHECK(r.t == 3.5);
  CHECK(r.mass == doctest::Approx(mass(u)).epsilon(1e-15));
  CHECK(r.bulk == doctest::Approx(bulk_burning(u)).epsilon(1e-15));
  CHECK(r.u_max == 1.0);
  REQUIRE(r.fronts.size() == 2);
  CHECK(r.fronts[0]->left == doctest::Approx(front(u, 0.1)->left).epsilon(1e-15));
  CHECK(r.fronts[1]->right ==
        doctest::Approx(front(u, 0.5)->right).epsilon(1e-15));
  CHECK(r.levels.good + r.levels.bad + r.levels.tail ==
        doctest::Approx(u.grid.width()).epsilon(1e-13));
  CHECK(r.domain_width == u.grid.width());
}

TEST_CASE("csv header layout and 17-digit round-trip") {
  TimeSeries ts;
  ts.levels = {0.1, 0.5};
  ts.eps = 0.2;
  DiagnosticsConfig diag;
  diag.levels = ts.levels;
  diag.eps = ts.eps;
  const Field u1 =
      make_field(-2.0, 0.5, {0.0, 0.3, 0.9, 1.0, 0.8, 0.2, 0.0}, 1.0 / 3.0);
  const Field u2 = make_field(-2.0, 0.5, {0.0, 0.01, 0.02, 0.03, 0.02, 0.01, 0.0},
                              2.0 / 3.0);  // no front at either level
  ts.records.push_back(observe(u1, diag));
  ts.records.push_back(observe(u2, diag));

  std::ostringstream os;
  write_csv(ts, os);
  std::istringstream is(os.str());
  std::string header, line1, line2;
  REQUIRE(std::getline(is, header));
  REQUIRE(std::getline(is, line1));
  REQUIRE(std::getline(is, line2));
  CHECK(header ==
        "t,P,V,u_max,front_left_0.1,front_right_0.1,front_left_0.5,"
        "front_right_0.5,G_eps,B_eps,T_eps,domain_width");

  const auto cells = split_csv_line(line1);
  REQUIRE(cells.size() == 12);
  // %.17g must reproduce the stored doubles exactly.
  CHECK(std::strtod(cells[0].c_str(), nullptr) == ts.records[0].t);
  CHECK(std::strtod(cells[1].c_str(), nullptr) == ts.records[0].mass);
  CHECK(std::strtod(cells[2].c_str(), nullptr) == ts.records[0].bulk);
  CHECK(std::strtod(cells[4].c_str(), nullptr) == ts.records[0].fronts[0]->left);

  const auto cells2 = split_csv_line(line2);
  CHECK(cells2[4] == "nan");
  CHECK(cells2[7] == "nan");
}

TEST_CASE("rate fits recover exact synthetic laws") {
  std::vector<std::pair<double, double>> pts;

  pts.clear();
  for (int i = 1; i <= 20; ++i) pts.emplace_back(i, 2.0 * i + 3.0);
  RateFit f = fit_points(pts, RateModel::Linear);
  CHECK(f.coefficient == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(f.intercept == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(f.t_lo == 1.0);
  CHECK(f.t_hi == 20.0);

  pts.clear();
  for (int i = 1; i <= 20; ++i) {
    const double t = i;
    pts.emplace_back(t, 2.5 * t - 1.5 * std::log(t) + 0.7);
  }
  f = fit_points(pts, RateModel::LogCorrected);
  CHECK(f.coefficient == doctest::Approx(2.5).epsilon(1e-13));
  CHECK(f.intercept == doctest::Approx(0.7).epsilon(1e-11));
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-13));

  pts.clear();
  for (int i = 1; i <= 20; ++i) {
    const double t = 0.5 * i;
    pts.emplace_back(t, 3.0 * std::pow(t, 1.7));
  }
  f = fit_points(pts, RateModel::Power);
  CHECK(f.coefficient == doctest::Approx(1.7).epsilon(1e-13));
  CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-13));

  pts.clear();
  for (int i = 0; i < 15; ++i) {
    const double t = 2.0 + 0.5 * i;
    pts.emplace_back(t, 0.8 * std::exp(0.3 * t));
  }
  f = fit_points(pts, RateModel::Exponential);
  CHECK(f.coefficient == doctest::Approx(0.3).epsilon(1e-13));
  CHECK(f.intercept == doctest::Approx(std::log(0.8)).epsilon(1e-11));
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("fit guards: point count, log domains, degenerate abscissae") {
  std::vector<std::pair<double, double>> few;
  for (int i = 0; i < 9; ++i) few.emplace_back(i, i);
  CHECK_THROWS_AS(fit_points(few, RateModel::Linear), DataError);

  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < 12; ++i) pts.emplace_back(i, 1.0 + i);  // t = 0 included
  CHECK_THROWS_AS(fit_points(pts, RateModel::Power), DataError);
  CHECK_THROWS_AS(fit_points(pts, RateModel::LogCorrected), DataError);

  pts.clear();
  for (int i = 1; i <= 12; ++i) pts.emplace_back(i, 5.0 - i);  // negatives
  CHECK_THROWS_AS(fit_points(pts, RateModel::Exponential), DataError);
  CHECK_THROWS_AS(fit_points(pts, RateModel::Power), DataError);

  pts.clear();
  for (int i = 0; i < 12; ++i) pts.emplace_back(4.0, i);  // same t everywhere
  CHECK_THROWS_AS(fit_points(pts, RateModel::Linear), DataError);
}

TEST_CASE("fit window: explicit wins, else trailing fraction") {
  TimeSeries ts;
  for (int i = 0; i <= 10; ++i) {
    Record r;
    r.t = i;
    ts.records.push_back(r);
  }
  DiagnosticsConfig diag;
  diag.window_fraction = 0.5;
  auto w = fit_window(ts, diag);
  CHECK(w.first == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(w.second == 10.0);

  diag.window_fraction = 0.25;
  w = fit_window(ts, diag);
  CHECK(w.first == doctest::Approx(7.5).epsilon(1e-15));

  diag.fit_window = std::make_pair(3.0, 7.0);
  w = fit_window(ts, diag);
  CHECK(w.first == 3.0);
  CHECK(w.second == 7.0);

  TimeSeries empty;
  CHECK_THROWS_AS(fit_window(empty, DiagnosticsConfig{}), DataError);
}

TEST_CASE("fit_rate windows records and skips absent fronts") {
  TimeSeries ts;
  ts.levels = {0.5};
  for (int i = 0; i <= 20; ++i) {
    Record r;
    r.t = i;
    r.mass = std::exp(0.2 * i);
    r.fronts.resize(1);
    if (i >= 10) r.fronts[0] = FrontPair{-1.0 * i, 1.5 * i};
    ts.records.push_back(r);
  }
  DiagnosticsConfig diag;
  diag.levels = {0.5};
  diag.fit_window = std::make_pair(5.0, 20.0);

  const RateFit mf = fit_rate(ts, Observable::MassP, 0, RateModel::Exponential, diag);
  CHECK(mf.coefficient == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(mf.t_lo == 5.0);
  CHECK(mf.t_hi == 20.0);

  // Window covers t in [0,20] but fronts exist only from t = 10: the absent
  // ones are skipped and the 11 survivors still fit exactly.
  diag.fit_window = std::make_pair(0.0, 20.0);
  const RateFit ff = fit_rate(ts, Observable::FrontRight, 0, RateModel::Linear, diag);
  CHECK(ff.coefficient == doctest::Approx(1.5).epsilon(1e-12));

  // Too few survivors inside the window.
  diag.fit_window = std::make_pair(0.0, 9.0);
  CHECK_THROWS_AS(fit_rate(ts, Observable::FrontRight, 0, RateModel::Linear, diag),
                  DataError);
  // Bad level index.
  diag.fit_window = std::make_pair(0.0, 20.0);
  CHECK_THROWS_AS(fit_rate(ts, Observable::FrontRight, 3, RateModel::Linear, diag),
                  DataError);
}

}  // TEST_SUITE
