#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pgt/report.hpp"

using namespace pgt;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path d = fs::temp_directory_path() / ("pgt_report_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(d);
    return d;
}

ThetaQuery query(double t) {
    ThetaQuery q;
    q.t1 = q.t2 = t;
    return q;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Report, DecimalRendering) {
    EXPECT_EQ(decimal(mpq_class(0)), "0");
    EXPECT_EQ(decimal(rational(1, 4)), "0.25e0");
    EXPECT_EQ(decimal(mpq_class(12345)), "12345");
    EXPECT_EQ(decimal(rational(-7, 2)), "-3.5");
    EXPECT_EQ(decimal(rational(1, 3), 5), "0.33333e0");
    // parses back to the same rational when exact
    EXPECT_EQ(HiReal::parse(decimal(rational(-7, 2))).exact(), rational(-7, 2));
    EXPECT_EQ(HiReal::parse(decimal(rational(1, 4))).exact(), rational(1, 4));
}

TEST(Report, RecordRoundTrip) {
    const ThetaResult r = theta(query(12));
    ASSERT_FALSE(r.records.empty());
    for (const auto& rec : r.records) {
        const json j = record_to_json(rec);
        EXPECT_TRUE(j.at("disc_field").is_string());
        EXPECT_TRUE(j.at("eta").is_string());
        EXPECT_EQ(j.at("real_digits"), 30);
        const PolyClassRecord back = record_from_json(j);
        EXPECT_EQ(record_to_json(back).dump(), j.dump());
        EXPECT_EQ(back.contribution.value, rec.contribution.value);
        ASSERT_EQ(back.orders.size(), rec.orders.size());
        for (size_t i = 0; i < back.orders.size(); ++i) EXPECT_EQ(back.orders[i].order.lattice, rec.orders[i].order.lattice);
    }
}

TEST(Report, LargeIntegersSurvive) {
    PolyClassRecord r;
    r.poly = {1, 2, 1};
    r.disc_poly = mpz_class("123456789012345678901234567890");
    const PolyClassRecord back = record_from_json(record_to_json(r));
    EXPECT_EQ(back.disc_poly, r.disc_poly);
}

TEST(Report, CsvColumns) {
    const ThetaResult r = theta(query(10));
    const std::string csv = render_theta(r, ReportFormat::csv, true);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "a,b,c,disc_poly,disc_field,index,alpha1,alpha2,m,eta,n_orders,contribution");
    long rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 11);
    }
    EXPECT_EQ(rows, r.term_count);
}

TEST(Report, JsonContract) {
    const json j = json::parse(render_theta(theta(query(10)), ReportFormat::json, true));
    for (const char* k : {"theta", "ratio", "terms", "records"}) EXPECT_TRUE(j.contains(k)) << k;
    EXPECT_EQ(j.at("records").size(), j.at("terms").get<size_t>());
    const json e = json::parse(render_theta(theta(query(1.01)), ReportFormat::json, true));
    EXPECT_EQ(e.at("theta"), 0.0);
    EXPECT_EQ(e.at("terms"), 0);
}

TEST(Report, WarmCacheIsTransparent) {
    const fs::path dir = fresh_dir("warm");
    std::string cold, warm;
    {
        RecordCache cache(dir);
        const RecordStore s = cache.store();
        cold = render_theta(theta(query(12), &s), ReportFormat::json, true);
        EXPECT_GT(cache.written(), 0);
        EXPECT_EQ(cache.hits(), 0);
    }
    {
        RecordCache cache(dir);
        const RecordStore s = cache.store();
        warm = render_theta(theta(query(12), &s), ReportFormat::json, true);
        EXPECT_EQ(cache.written(), 0);
        EXPECT_GT(cache.hits(), 0);
    }
    EXPECT_EQ(cold, warm);
    EXPECT_EQ(cold, render_theta(theta(query(12)), ReportFormat::json, true));
    fs::remove_all(dir);
}

TEST(Report, SchemaBumpInvalidates) {
    const fs::path dir = fresh_dir("schema");
    RecordCache v1(dir);
    const RecordStore s1 = v1.store();
    const ThetaResult a = theta(query(8), &s1);
    RecordCache v2(dir, kDefaultPrecision, "", kSchemaVersion + 1);
    const RecordStore s2 = v2.store();
    const ThetaResult b = theta(query(8), &s2);
    EXPECT_EQ(v2.hits(), 0);
    EXPECT_EQ(v2.rejected(), a.term_count);
    EXPECT_EQ(v2.written(), a.term_count);
    EXPECT_EQ(render_theta(a, ReportFormat::json, true), render_theta(b, ReportFormat::json, true));
    // the old reader now rejects the rewritten entries
    for (const auto& r : a.records) EXPECT_FALSE(v1.load(r.poly));
    fs::remove_all(dir);
}

TEST(Report, ChecksumAndKeyGuard) {
    const fs::path dir = fresh_dir("tamper");
    RecordCache cache(dir);
    const ThetaResult r = theta(query(8));
    ASSERT_GE(r.records.size(), 2u);
    for (const auto& rec : r.records) cache.save(rec);
    const CubicPoly p = r.records[0].poly, q = r.records[1].poly;
    ASSERT_TRUE(cache.load(p));
    // change a digit of the contribution
    std::string text = slurp(cache.path_for(p));
    const auto pos = text.find("\"contribution\": \"") + 17;
    text[pos] = text[pos] == '1' ? '2' : '1';
    std::ofstream(cache.path_for(p), std::ios::trunc) << text;
    EXPECT_FALSE(cache.load(p));
    // an entry copied under another key
    fs::copy_file(cache.path_for(q), cache.path_for(p), fs::copy_options::overwrite_existing);
    EXPECT_FALSE(cache.load(p));
    std::ofstream(cache.path_for(q), std::ios::trunc) << "{not json";
    EXPECT_FALSE(cache.load(q));
    EXPECT_EQ(cache.rejected(), 3);
    // variant and precision are part of the key
    cache.save(r.records[0]);
    EXPECT_TRUE(cache.load(p));
    EXPECT_FALSE(RecordCache(dir, kDefaultPrecision, "dual").load(p));
    EXPECT_FALSE(RecordCache(dir, 2 * kDefaultPrecision).load(p));
    fs::remove_all(dir);
}

TEST(Report, HumanOutput) {
    const ThetaResult r = theta(query(10));
    const std::string plain = render_theta(r, ReportFormat::human, false);
    EXPECT_EQ(plain.find('\033'), std::string::npos);
    EXPECT_NE(plain.find("terms  = " + std::to_string(r.term_count)), std::string::npos);
    EXPECT_NE(render_theta(r, ReportFormat::human, false, true).find('\033'), std::string::npos);
    const std::string one = render_record(r.records.front(), ReportFormat::human);
    EXPECT_NE(one.find("contribution = "), std::string::npos);
    EXPECT_THROW(parse_format("xml"), DomainError);
}
