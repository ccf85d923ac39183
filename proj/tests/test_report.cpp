#include <gtest/gtest.h>

#include <locale>
#include <sstream>

#include "tpp/engine.hpp"
#include "tpp/epidemic.hpp"
#include "tpp/report.hpp"

using namespace tpp;

namespace {

struct CommaDecimal : std::numpunct<char> {
  char do_decimal_point() const override { return ','; }
  char do_thousands_sep() const override { return '.'; }
  std::string do_grouping() const override { return "\3"; }
};

class GlobalLocale : public ::testing::Test {
 protected:
  void SetUp() override {
    saved_ = std::locale::global(std::locale(std::locale::classic(), new CommaDecimal));
  }
  void TearDown() override { std::locale::global(saved_); }

 private:
  std::locale saved_;
};

}  // namespace

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(35.51163), "35.51163");
  EXPECT_EQ(format_number(1e-300), "1e-300");
  EXPECT_EQ(format_number(std::int64_t{-42}), "-42");
  EXPECT_EQ(format_number(1.0 / 0.0), "inf");
}

TEST_F(GlobalLocale, NumbersIgnoreLocale) {
  EXPECT_EQ(format_number(1234.5), "1234.5");
  Summary s;
  s.add("x", 2.5);
  s.add("n", std::int64_t{123456});
  s.add("ok", true);
  std::ostringstream out;
  s.write(out);
  EXPECT_EQ(out.str(), "x = 2.5\nn = 123456\nok = true\n");
}

TEST_F(GlobalLocale, MetricsCsvIgnoresLocale) {
  SimMetrics m;
  m.malicious_apps = {3};
  m.penetration_by_step = {{1.0, 0.25}};
  m.messages_by_step = {0, 123456};
  m.monitorings_by_step = {0, 1000};
  std::ostringstream out;
  write_metrics_csv(out, m);
  EXPECT_EQ(out.str(),
            "# tpp-sim csv v1\n"
            "step,app_id,p_a,cumulative_messages,cumulative_monitorings\n"
            "0,3,1,0,0\n"
            "1,3,0.25,123456,1000\n");
  // the caller's locale is restored
  EXPECT_NE(std::use_facet<std::numpunct<char>>(out.getloc()).decimal_point(), '.');
}

TEST(EpidemicCsv, HeaderAndArms) {
  EpidemicSeries a;
  a.susceptible = {10};
  a.infected = {0};
  a.recovered = {0};
  a.cumulative_incidents = {0};
  std::ostringstream out;
  write_epidemic_csv(out, a, a);
  EXPECT_EQ(out.str(),
            "# tpp-sim csv v1\nstep,arm,S,I,R,cumulative_incidents\n"
            "0,control,10,0,0,0\n0,tpp,10,0,0,0\n");
}

TEST(Summarize, StalledRun) {
  SimMetrics m;
  m.malicious_apps = {0};
  m.final_penetration = {0.012};
  m.steps_run = 48;
  const auto s = summarize(m, 24);
  EXPECT_EQ(s.entries()[0], (std::pair<std::string, std::string>{"completed", "false"}));
  EXPECT_EQ(s.entries()[1].second, "none");
}

TEST(Summarize, CompletedRun) {
  SimMetrics m;
  m.completion_step = 48;
  m.steps_run = 48;
  const auto s = summarize(m, 24);
  EXPECT_EQ(s.entries()[2], (std::pair<std::string, std::string>{"completion_days", "2"}));
}
