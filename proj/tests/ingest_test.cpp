#include "roughvol/csv.hpp"
#include "roughvol/error.hpp"
#include "roughvol/ingest.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

namespace roughvol {
namespace {

using roughvol::testing::TempDir;

TEST(ComputeM, MarketSessions) {
    EXPECT_EQ(compute_m(MarketCalendar::parse("09:30-16:00")), 78);
    EXPECT_EQ(compute_m(MarketCalendar::parse("09:00-11:30,12:30-15:00")), 60);
    EXPECT_EQ(compute_m(MarketCalendar::parse("08:00-16:30")), 102);
    EXPECT_EQ(compute_m(MarketCalendar::parse("09:00-15:00")), 72);
    EXPECT_EQ(compute_m(MarketCalendar::preset("spx")), 78);
    EXPECT_EQ(compute_m(MarketCalendar::preset("nikkei")), 60);
    EXPECT_EQ(compute_m(MarketCalendar::preset("ftse")), 102);
    EXPECT_EQ(compute_m(MarketCalendar::preset("russell")), 78);
    EXPECT_EQ(compute_m(MarketCalendar::preset("dax")), 104);
    EXPECT_EQ(compute_m(MarketCalendar::parse("09:30-16:00", 1)), 390);
}

TEST(ComputeM, FloorsPartialIntervals) { EXPECT_EQ(compute_m(MarketCalendar::parse("09:00-09:14")), 2); }

TEST(ComputeM, InvariantUnderSplittingSessions) {
    EXPECT_EQ(compute_m(MarketCalendar::parse("09:30-12:00,12:00-16:00")), compute_m(MarketCalendar::parse("09:30-16:00")));
}

TEST(ComputeM, Errors) {
    EXPECT_THROW(compute_m(MarketCalendar{}), ValidationError);
    EXPECT_THROW(MarketCalendar::parse("16:00-09:30"), ValidationError);
    EXPECT_THROW(MarketCalendar::parse("09:00-12:00,11:00-13:00"), ValidationError);
    EXPECT_THROW(MarketCalendar::parse("9h-10h"), ValidationError);
    EXPECT_THROW(MarketCalendar::preset("lse"), ValidationError);
}

TEST(ReadRvCsv, CleanFile) {
    TempDir dir;
    const auto path = dir.write("rv.csv", "date,rv\n2020-01-02,1e-4\n2020-01-03,2e-4\n2020-01-06,1.5e-4\n");
    const auto r = read_rv_csv(path);
    ASSERT_EQ(r.rv.size(), 3u);
    EXPECT_DOUBLE_EQ(r.rv.values[1], 2e-4);
    EXPECT_EQ(r.report.rows_read, 3u);
    EXPECT_EQ(r.report.rows_dropped, 0u);
    EXPECT_EQ(r.report.first_date, "2020-01-02");
    EXPECT_EQ(r.report.last_date, "2020-01-06");
    EXPECT_DOUBLE_EQ(r.rv.delta, 1.0 / 250.0);
}

TEST(ReadRvCsv, DropsNonpositiveAndMissing) {
    TempDir dir;
    const auto path = dir.write("rv.csv", "date,rv\nd1,1e-4\nd2,0\nd3,\nd4,NA\nd5,-2e-4\nd6,3e-4\n");
    const auto r = read_rv_csv(path);
    EXPECT_EQ(r.rv.values, (std::vector<double>{1e-4, 3e-4}));
    EXPECT_EQ(r.rv.dates, (std::vector<std::string>{"d1", "d6"}));
    EXPECT_EQ(r.report.rows_read, 6u);
    EXPECT_EQ(r.report.rows_dropped, 4u);
    EXPECT_EQ(r.report.rows_read, r.report.rows_kept + r.report.rows_dropped);
    EXPECT_EQ(r.report.reasons.at("nonpositive"), 2u);
    EXPECT_EQ(r.report.reasons.at("missing"), 2u);
}

TEST(ReadRvCsv, StrictModeRejectsGaps) {
    TempDir dir;
    const auto path = dir.write("rv.csv", "date,rv\nd1,1e-4\nd2,0\nd3,2e-4\n");
    IngestOptions opt;
    opt.strict = true;
    try {
        read_rv_csv(path, opt);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(ReadRvCsv, NonNumericCellNamesLine) {
    TempDir dir;
    const auto path = dir.write("rv.csv", "date,rv\nd1,1e-4\nd2,abc\n");
    try {
        read_rv_csv(path);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos);
    }
}

TEST(ReadRvCsv, ConfigurableColumnsAndQuotes) {
    TempDir dir;
    const auto path = dir.write("oxford.csv", "Symbol,day,rv5,open\r\n\"SPX\",\"2001-01-02\",1.1e-4,1\r\n\"SPX\",\"2001-01-03\",2.2e-4,1\r\n");
    IngestOptions opt;
    opt.date_column = "day";
    opt.rv_column = "rv5";
    opt.m = 78;
    opt.delta = 1.0 / 252.0;
    const auto r = read_rv_csv(path, opt);
    EXPECT_EQ(r.rv.dates, (std::vector<std::string>{"2001-01-02", "2001-01-03"}));
    EXPECT_EQ(r.rv.m, 78);
    EXPECT_DOUBLE_EQ(r.rv.delta, 1.0 / 252.0);
}

TEST(ReadRvCsv, Errors) {
    TempDir dir;
    EXPECT_THROW(read_rv_csv(dir.file("missing.csv")), ValidationError);
    EXPECT_THROW(read_rv_csv(dir.write("a.csv", "date,value\nd1,1\n")), ParseError);
    EXPECT_THROW(read_rv_csv(dir.write("b.csv", "date,rv\nd1,0\nd2,-1\n")), ValidationError);
    EXPECT_THROW(read_rv_csv(dir.write("c.csv", "date,rv\nd1,1,2\n")), ParseError);
    EXPECT_THROW(read_rv_csv(dir.write("d.csv", "")), ParseError);
}

TEST(ReadRvCsv, CanonicalRoundTripIsBitExact) {
    TempDir dir;
    const auto path = dir.write("rv.csv", "date,rv\n1,0.00012785130527589433\n2,1.0000000000000002e-4\n3,3.3333333333333335e-5\n");
    const auto first = read_rv_csv(path);
    write_file_atomic(dir.file("canon.csv"), rv_csv(first.rv));
    const auto second = read_rv_csv(dir.file("canon.csv"));
    EXPECT_EQ(first.rv.values, second.rv.values);
    EXPECT_EQ(first.rv.dates, second.rv.dates);
}

TEST(Csv, FormatNumberRoundTrips) {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.123456789, -2.5e-7}) {
        EXPECT_EQ(std::stod(format_number(v)), v);
    }
    EXPECT_EQ(format_number(0.1234567891, 6), "0.123457");
}

TEST(Csv, GridPathRoundTrip) {
    TempDir dir;
    GridPath p;
    p.dt = 0.004 / 80;
    p.values = {4.605170185988092, 4.6061, 4.60401, 4.6082};
    write_file_atomic(dir.file("p.csv"), grid_path_csv(p));
    const auto q = read_grid_path_csv(dir.file("p.csv"), PathKind::log_price);
    EXPECT_EQ(q.values, p.values);
    EXPECT_NEAR(q.dt, p.dt, 1e-18);
    EXPECT_FALSE(std::filesystem::exists(dir.file("p.csv.tmp")));
}

}  // namespace
}  // namespace roughvol
