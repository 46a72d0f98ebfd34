#pragma once

// Serialization of records and theta results (JSON, CSV, plain text) and the
// on-disk per-polynomial record cache.

#include <gmpxx.h>

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"
#include "pgt/theta.hpp"

namespace pgt {

using json = nlohmann::ordered_json;

/// Bumped whenever a numeric convention or the record layout changes.
inline constexpr int kSchemaVersion = 1;
inline constexpr int kRealDigits = 30;

namespace detail {

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline std::string str(const mpz_class& z) { return z.get_str(); }
inline mpz_class to_mpz(const json& j) { return mpz_class(j.get<std::string>(), 10); }
inline long to_long(const json& j) { return std::stol(j.get<std::string>()); }

}  // namespace detail

/// Decimal rendering of an exact rational with `digits` significant digits.
inline std::string decimal(const mpq_class& q, int digits = kRealDigits) {
    if (q == 0) return "0";
    mpf_class f(q, 512);
    mp_exp_t e;
    std::string m = f.get_str(e, 10, static_cast<size_t>(digits));
    std::string sign;
    if (!m.empty() && m[0] == '-') {
        sign = "-";
        m.erase(0, 1);
    }
    std::ostringstream os;
    if (e > 0 && e <= static_cast<mp_exp_t>(digits)) {
        m.resize(std::max<size_t>(m.size(), static_cast<size_t>(e)), '0');
        os << sign << m.substr(0, static_cast<size_t>(e));
        if (m.size() > static_cast<size_t>(e)) os << "." << m.substr(static_cast<size_t>(e));
    } else {
        os << sign << "0." << m << "e" << e;
    }
    return os.str();
}

inline std::string canonical_key(const CubicPoly& p) {
    return std::to_string(p.a) + "_" + std::to_string(p.b) + "_" + std::to_string(p.c);
}

inline json lattice_to_json(const Lattice& l) {
    json h = json::array();
    for (const auto& row : l.hnf_matrix())
        for (const auto& x : row) h.push_back(detail::str(x));
    return {{"den", detail::str(l.den())}, {"hnf", h}};
}

inline Lattice lattice_from_json(const json& j) {
    ZMat3 h;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) h[i][k] = detail::to_mpz(j.at("hnf").at(static_cast<size_t>(3 * i + k)));
    return Lattice::from_integer_hnf(detail::to_mpz(j.at("den")), h);
}

inline json record_to_json(const PolyClassRecord& r) {
    json roots = json::array(), signs = json::array(), orders = json::array();
    for (int i = 0; i < 3; ++i) {
        roots.push_back(r.roots[i].text);
        signs.push_back(r.signs[i]);
    }
    for (const auto& o : r.orders) {
        orders.push_back({{"disc", detail::str(o.order.disc)},
                          {"index", detail::str(o.index_in_maximal)},
                          {"h", std::to_string(o.h)},
                          {"R", o.R.text},
                          {"unit_index", std::to_string(o.unit_index)},
                          {"roots_in_order", o.roots_in_order},
                          {"method", to_string(o.method)},
                          {"lattice", lattice_to_json(o.order.lattice)}});
    }
    return {{"a", std::to_string(r.poly.a)},
            {"b", std::to_string(r.poly.b)},
            {"c", std::to_string(r.poly.c)},
            {"disc_poly", detail::str(r.disc_poly)},
            {"disc_field", detail::str(r.disc_field)},
            {"index", detail::str(r.index)},
            {"real_digits", kRealDigits},
            {"roots", roots},
            {"signs", signs},
            {"alpha1", r.alpha1.text},
            {"alpha2", r.alpha2.text},
            {"l_value", r.l_value.text},
            {"m", r.m},
            {"eta", detail::str(r.eta)},
            {"regulator_field", r.regulator_field.text},
            {"h_field", std::to_string(r.h_field)},
            {"straddled", r.straddled},
            {"orders", orders},
            {"contribution", r.contribution.text}};
}

inline ClassMethod class_method_from_string(const std::string& s) {
    if (s == "conductor-formula") return ClassMethod::conductor_formula;
    if (s == "direct-enumeration") return ClassMethod::direct_enumeration;
    if (s == "both") return ClassMethod::both;
    throw DomainError("unknown class-number method '" + s + "'");
}

/// Inverse of record_to_json; throws json or DomainError exceptions on
/// malformed input.
inline PolyClassRecord record_from_json(const json& j) {
    PolyClassRecord r;
    r.poly = {detail::to_long(j.at("a")), detail::to_long(j.at("b")), detail::to_long(j.at("c"))};
    r.disc_poly = detail::to_mpz(j.at("disc_poly"));
    r.disc_field = detail::to_mpz(j.at("disc_field"));
    r.index = detail::to_mpz(j.at("index"));
    if (j.at("real_digits").get<int>() != kRealDigits) throw DomainError("record: unexpected real precision");
    for (size_t i = 0; i < 3; ++i) {
        r.roots[i] = HiReal::parse(j.at("roots").at(i).get<std::string>());
        r.signs[i] = j.at("signs").at(i).get<int>();
    }
    r.alpha1 = HiReal::parse(j.at("alpha1").get<std::string>());
    r.alpha2 = HiReal::parse(j.at("alpha2").get<std::string>());
    r.l_value = HiReal::parse(j.at("l_value").get<std::string>());
    r.m = j.at("m").get<int>();
    r.eta = detail::to_mpz(j.at("eta"));
    r.regulator_field = HiReal::parse(j.at("regulator_field").get<std::string>());
    r.h_field = detail::to_long(j.at("h_field"));
    r.straddled = j.at("straddled").get<bool>();
    for (const auto& o : j.at("orders")) {
        OrderClassData d;
        d.order.lattice = lattice_from_json(o.at("lattice"));
        d.order.disc = detail::to_mpz(o.at("disc"));
        d.index_in_maximal = detail::to_mpz(o.at("index"));
        d.order.index_in_maximal = d.index_in_maximal;
        d.h = detail::to_long(o.at("h"));
        d.R = HiReal::parse(o.at("R").get<std::string>());
        d.unit_index = detail::to_long(o.at("unit_index"));
        d.roots_in_order = o.at("roots_in_order").get<int>();
        d.method = class_method_from_string(o.at("method").get<std::string>());
        r.orders.push_back(std::move(d));
    }
    r.contribution = HiReal::parse(j.at("contribution").get<std::string>());
    return r;
}

// ---------------------------------------------------------------------------
// Cache

/// One JSON file per canonical polynomial. Entries are immutable once
/// written; a schema, precision, key or checksum mismatch counts as a miss.
class RecordCache {
public:
    /// `variant` separates records built with different dossier options
    /// (for example with the dual class-number check).
    explicit RecordCache(std::filesystem::path dir, Precision precision = kDefaultPrecision, std::string variant = "",
                         int schema = kSchemaVersion)
        : dir_(std::move(dir)), precision_(precision), variant_(std::move(variant)), schema_(schema) {
        std::filesystem::create_directories(dir_);
    }

    std::filesystem::path path_for(const CubicPoly& p) const { return dir_ / (canonical_key(p) + ".json"); }

    std::optional<PolyClassRecord> load(const CubicPoly& p) const {
        std::ifstream in(path_for(p));
        if (!in) {
            ++misses_;
            return std::nullopt;
        }
        try {
            const json doc = json::parse(in);
            const json& rec = doc.at("record");
            if (doc.at("schema_version").get<int>() != schema_ || doc.at("key").get<std::string>() != canonical_key(p) ||
                doc.at("precision_bits").get<long>() != static_cast<long>(precision_) ||
                doc.at("variant").get<std::string>() != variant_ ||
                doc.at("checksum").get<std::string>() != detail::hex64(detail::fnv1a64(rec.dump()))) {
                ++rejected_;
                return std::nullopt;
            }
            PolyClassRecord r = record_from_json(rec);
            if (!(r.poly == p)) {
                ++rejected_;
                return std::nullopt;
            }
            ++hits_;
            return r;
        } catch (const std::exception&) {
            ++rejected_;
            return std::nullopt;
        }
    }

    /// Writes through a temporary file and a rename, so readers never see a
    /// partial entry.
    void save(const PolyClassRecord& r) const {
        const json rec = record_to_json(r);
        const json doc = {{"schema_version", schema_},
                          {"key", canonical_key(r.poly)},
                          {"precision_bits", static_cast<long>(precision_)},
                          {"variant", variant_},
                          {"checksum", detail::hex64(detail::fnv1a64(rec.dump()))},
                          {"record", rec}};
        const auto target = path_for(r.poly);
        auto tmp = target;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::trunc);
            out << doc.dump(1) << '\n';
            if (!out) throw DomainError("cache: cannot write " + tmp.string());
        }
        std::filesystem::rename(tmp, target);
        ++written_;
    }

    RecordStore store() const {
        RecordStore s;
        s.lookup = [this](const CubicPoly& p) { return load(p); };
        s.store = [this](const PolyClassRecord& r) { save(r); };
        return s;
    }

    long hits() const { return hits_; }
    long misses() const { return misses_; }
    long rejected() const { return rejected_; }
    long written() const { return written_; }
    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    Precision precision_;
    std::string variant_;
    int schema_;
    mutable std::atomic<long> hits_{0}, misses_{0}, rejected_{0}, written_{0};
};

// ---------------------------------------------------------------------------
// Reports

enum class ReportFormat { json, csv, human };

inline ReportFormat parse_format(const std::string& s) {
    if (s == "json") return ReportFormat::json;
    if (s == "csv") return ReportFormat::csv;
    if (s == "human") return ReportFormat::human;
    throw DomainError("unknown format '" + s + "' (json, csv or human)");
}

inline const char* kCsvHeader = "a,b,c,disc_poly,disc_field,index,alpha1,alpha2,m,eta,n_orders,contribution";

inline std::string csv_row(const PolyClassRecord& r) {
    std::ostringstream os;
    os << r.poly.a << ',' << r.poly.b << ',' << r.poly.c << ',' << r.disc_poly << ',' << r.disc_field << ',' << r.index
       << ',' << r.alpha1.text << ',' << r.alpha2.text << ',' << r.m << ',' << r.eta << ',' << r.orders.size() << ','
       << r.contribution.text;
    return os.str();
}

inline json theta_to_json(const ThetaResult& res, bool with_records) {
    json j = {{"t1", res.t1},
              {"t2", res.t2},
              {"theta", res.theta},
              {"theta_decimal", decimal(res.theta_exact)},
              {"ratio", res.ratio},
              {"terms", res.term_count},
              {"flagged", json::array()},
              {"warnings", res.warnings},
              {"stats",
               {{"box_size", res.stats.box_size},
                {"admissible", res.stats.admissible},
                {"not_split_regular", res.stats.not_split_regular},
                {"certified_checks", res.stats.certified_checks},
                {"in_chamber", res.stats.in_chamber}}}};
    for (const auto& f : res.flagged)
        j["flagged"].push_back({{"poly", canonical_key(f.poly)}, {"kind", to_string(f.kind)}, {"reason", f.reason}});
    if (with_records) {
        j["records"] = json::array();
        for (const auto& r : res.records) j["records"].push_back(record_to_json(r));
    }
    return j;
}

namespace detail {

struct Style {
    bool color = false;
    std::string bold(const std::string& s) const { return color ? "\033[1m" + s + "\033[0m" : s; }
    std::string warn(const std::string& s) const { return color ? "\033[33m" + s + "\033[0m" : s; }
};

}  // namespace detail

inline std::string render_theta(const ThetaResult& res, ReportFormat fmt, bool with_records, bool color = false) {
    std::ostringstream os;
    switch (fmt) {
        case ReportFormat::json: os << theta_to_json(res, with_records).dump(2) << '\n'; break;
        case ReportFormat::csv:
            os << kCsvHeader << '\n';
            for (const auto& r : res.records) os << csv_row(r) << '\n';
            break;
        case ReportFormat::human: {
            const detail::Style st{color};
            std::ostringstream title;
            title << "theta(" << res.t1 << ", " << res.t2 << ")";
            os << st.bold(title.str()) << '\n';
            os << "  theta  = " << decimal(res.theta_exact, 17) << '\n';
            os << "  terms  = " << res.term_count << '\n';
            os << "  ratio  = " << std::setprecision(10) << res.ratio << "  (theta / (16/sqrt 3) T1 T2)\n";
            os << "  box    = " << res.stats.box_size << " candidates, " << res.stats.admissible << " admissible, "
               << res.stats.in_chamber << " in chamber\n";
            for (const auto& w : res.warnings) os << st.warn("  warning: " + w) << '\n';
            if (with_records) {
                os << '\n' << kCsvHeader << '\n';
                for (const auto& r : res.records) os << csv_row(r) << '\n';
            }
            break;
        }
    }
    return os.str();
}

inline std::string render_record(const PolyClassRecord& r, ReportFormat fmt, bool color = false) {
    std::ostringstream os;
    switch (fmt) {
        case ReportFormat::json: os << record_to_json(r).dump(2) << '\n'; break;
        case ReportFormat::csv: os << kCsvHeader << '\n' << csv_row(r) << '\n'; break;
        case ReportFormat::human: {
            const detail::Style st{color};
            os << st.bold(r.poly.to_string()) << '\n';
            os << "  disc(p) = " << r.disc_poly << ", disc(F) = " << r.disc_field << ", index = " << r.index << '\n';
            os << "  roots   = " << r.roots[0].text << ", " << r.roots[1].text << ", " << r.roots[2].text << '\n';
            os << "  alpha1  = " << r.alpha1.text << "\n  alpha2  = " << r.alpha2.text << "\n  l       = " << r.l_value.text
               << '\n';
            os << "  m = " << r.m << ", eta = " << r.eta << ", h(O_F) = " << r.h_field << ", R(O_F) = " << r.regulator_field.text
               << '\n';
            os << "  orders containing Z[lambda]: " << r.orders.size() << '\n';
            for (const auto& o : r.orders)
                os << "    disc " << o.order.disc << "  index " << o.index_in_maximal << "  h " << o.h << "  R " << o.R.text
                   << "  unit index " << o.unit_index << "  roots " << o.roots_in_order << "  (" << to_string(o.method) << ")\n";
            os << "  contribution = " << r.contribution.text << '\n';
            if (r.straddled) os << st.warn("  warning: chamber boundary undecided at the precision cap") << '\n';
            break;
        }
    }
    return os.str();
}

}  // namespace pgt
