// pgt: summatory class-number function of totally real cubic orders.

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pgt/pgt.hpp"

using namespace pgt;

namespace {

enum Exit { kOk = 0, kFailed = 1, kBadInput = 2, kFlagged = 3 };

struct Common {
    int precision = static_cast<int>(kDefaultPrecision);
    unsigned threads = 1;
    std::string cache_dir;
    std::string format = "human";
    std::string caps;
    std::uint64_t seed = 1;
    bool allow_flagged = false;
};

bool use_color() { return std::getenv("NO_COLOR") == nullptr && ::isatty(STDOUT_FILENO); }

ThetaCaps parse_caps(const std::string& text) {
    ThetaCaps c;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw DomainError("caps: expected key=value, got '" + item + "'");
        const std::string k = item.substr(0, eq);
        double v = 0;
        try {
            v = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw DomainError("caps: bad number in '" + item + "'");
        }
        if (!(v > 0)) throw DomainError("caps: " + k + " must be positive");
        if (k == "box")
            c.box_points = v;
        else if (k == "direct")
            c.direct_disc = static_cast<long>(v);
        else if (k == "quotient")
            c.quotient_literal = v;
        else
            throw DomainError("caps: unknown key '" + k + "' (box, direct, quotient)");
    }
    return c;
}

std::unique_ptr<RecordCache> open_cache(const Common& c, const std::string& variant = "") {
    std::string dir = c.cache_dir;
    if (dir.empty())
        if (const char* env = std::getenv("CACHE_DIR")) dir = env;
    if (dir.empty()) return nullptr;
    return std::make_unique<RecordCache>(dir, static_cast<Precision>(c.precision), variant);
}

void check_precision(const Common& c) {
    if (c.precision < 64 || c.precision > static_cast<int>(kMaxPrecision))
        throw DomainError("precision must lie in [64, " + std::to_string(kMaxPrecision) + "] bits");
    if (c.threads == 0) throw DomainError("threads must be positive");
}

ThetaQuery make_query(const Common& c, double t1, double t2) {
    check_precision(c);
    if (!(t1 > 1 && t2 > 1)) throw DomainError("--t1 and --t2 must exceed 1");
    ThetaQuery q;
    q.t1 = t1;
    q.t2 = t2;
    q.precision = static_cast<Precision>(c.precision);
    q.caps = parse_caps(c.caps);
    q.threads = c.threads;
    return q;
}

int cmd_theta(const Common& c, double t1, double t2, bool summary, bool dual) {
    ThetaQuery q = make_query(c, t1, t2);
    q.dual_check = dual;
    const auto cache = open_cache(c, dual ? "dual" : "");
    const RecordStore store = cache ? cache->store() : RecordStore{};
    const ThetaResult res = theta(q, cache ? &store : nullptr);
    std::cout << render_theta(res, parse_format(c.format), !summary, use_color());
    if (!res.flagged.empty() && !c.allow_flagged) {
        std::cerr << "pgt: " << res.flagged.size() << " polynomial(s) flagged; rerun with larger --caps or --allow-flagged\n";
        return kFlagged;
    }
    return kOk;
}

int cmd_inspect(const Common& c, const std::vector<long>& coeffs) {
    check_precision(c);
    if (coeffs.size() != 3) throw DomainError("inspect expects three integers a b c");
    const CubicPoly p{coeffs[0], coeffs[1], coeffs[2]};
    const ReportFormat fmt = parse_format(c.format);
    auto reject = [&](const std::string& why) {
        if (fmt == ReportFormat::json)
            std::cout << json{{"poly", canonical_key(p)}, {"admissible", false}, {"reason", why}}.dump(2) << '\n';
        else
            std::cout << p.to_string() << ": " << why << '\n';
        return kBadInput;
    };
    if (p.c != 1 && p.c != -1) return reject("not a unit polynomial (constant term " + std::to_string(p.c) + ")");
    if (!is_irreducible(p)) return reject("reducible over Q");
    const mpz_class d = discriminant(p);
    if (d <= 0) return reject("not totally real (disc = " + d.get_str() + ")");
    if (has_opposite_roots(p)) return reject("not split regular (two roots of equal absolute value)");

    const ChamberDecision cd = decide_chamber(p, 1e300, 1e300, static_cast<Precision>(c.precision));
    DossierOptions opt;
    opt.precision = static_cast<Precision>(c.precision);
    opt.caps = parse_caps(c.caps);
    const PolyClassRecord r = build_record(p, cd, opt);
    const bool outside = !cd.inside;
    std::string note;
    if (outside) {
        std::ostringstream os;
        os << "admissible but outside the chamber for any T (alpha1 = " << std::setprecision(6) << r.alpha1.value
           << ", alpha2 = " << r.alpha2.value << "; both must exceed 1)";
        note = os.str();
    }
    if (fmt == ReportFormat::json) {
        json j = {{"poly", canonical_key(p)}, {"admissible", true}, {"in_chamber", !outside}, {"record", record_to_json(r)}};
        if (outside) j["reason"] = note;
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << render_record(r, fmt, use_color());
        if (outside) std::cout << (fmt == ReportFormat::csv ? "# " : "  ") << note << '\n';
    }
    return kOk;
}

int cmd_dirichlet(const Common& c, int j, double s1, double s2, const std::vector<double>& boxes, const std::string& weight,
                  double flat) {
    if (boxes.empty()) throw DomainError("dirichlet: --boxes must list at least one T");
    for (size_t i = 1; i < boxes.size(); ++i)
        if (!(boxes[i] > boxes[i - 1])) throw DomainError("dirichlet: --boxes must increase");
    if (j < 0) throw DomainError("dirichlet: --j must be non-negative");
    WeightMode mode;
    FlatVolume lam;
    if (weight == "theta") {
        mode = WeightMode::theta_weight;
    } else if (weight == "index") {
        if (!(flat > 0)) throw DomainError("dirichlet: index weight needs --flat-volume > 0");
        mode = WeightMode::index_weight;
        lam = [flat](const PolyClassRecord&) { return flat; };
    } else {
        throw DomainError("dirichlet: --weight is theta or index");
    }
    const ThetaQuery q = make_query(c, boxes.back(), boxes.back());
    const auto cache = open_cache(c);
    const RecordStore store = cache ? cache->store() : RecordStore{};
    const ThetaResult res = enumerate_admissible(q, cache ? &store : nullptr);

    json rows = json::array();
    double prev = 0;
    for (size_t i = 0; i < boxes.size(); ++i) {
        std::vector<PolyClassRecord> sub;
        for (const auto& r : res.records)
            if (decide_chamber(r.poly, boxes[i], boxes[i], q.precision).inside) sub.push_back(r);
        const double s = dirichlet_partial(sub, j, s1, s2, mode, lam);
        json row = {{"T", boxes[i]}, {"terms", sub.size()}, {"partial_sum", s}};
        if (i > 0) row["difference"] = s - prev;
        rows.push_back(row);
        prev = s;
    }
    const ReportFormat fmt = parse_format(c.format);
    if (fmt == ReportFormat::json) {
        std::cout << json{{"j", j}, {"s1", s1}, {"s2", s2}, {"weight", weight}, {"boxes", rows}}.dump(2) << '\n';
    } else {
        char line[160];
        if (fmt == ReportFormat::csv)
            std::cout << "T,terms,partial_sum,difference\n";
        else
            std::cout << "Dirichlet partial sums, j = " << j << ", s = (" << s1 << ", " << s2 << "), " << weight << " weight\n";
        for (const auto& row : rows) {
            const double diff = row.contains("difference") ? row["difference"].get<double>() : NAN;
            if (fmt == ReportFormat::csv)
                std::snprintf(line, sizeof line, "%g,%zu,%.17g,%.17g", row["T"].get<double>(), row["terms"].get<size_t>(),
                              row["partial_sum"].get<double>(), diff);
            else
                std::snprintf(line, sizeof line, "  T = %-8g terms %-6zu S = %-24.17g diff = %.3e", row["T"].get<double>(),
                              row["terms"].get<size_t>(), row["partial_sum"].get<double>(), diff);
            std::cout << line << '\n';
        }
    }
    if (!res.flagged.empty() && !c.allow_flagged) {
        std::cerr << "pgt: " << res.flagged.size() << " polynomial(s) flagged\n";
        return kFlagged;
    }
    return kOk;
}

void print_suite(const SuiteResult& r, bool color) {
    const std::string tag = r.pass ? "PASS" : "FAIL";
    const std::string shown = color ? (r.pass ? "\033[32m" : "\033[31m") + tag + "\033[0m" : tag;
    char t[32];
    std::snprintf(t, sizeof t, "%.2f s", r.seconds);
    std::cout << shown << "  " << r.name << " (" << t << "): " << r.detail << std::endl;
}

int cmd_abel_selftest() {
    const SuiteResult r = suite_abel();
    print_suite(r, use_color());
    return r.pass ? kOk : kFailed;
}

int cmd_validate(const Common& c, bool full, bool mutate) {
    ValidateOptions opt;
    opt.full = full;
    opt.seed = c.seed;
    opt.threads = c.threads;
    opt.caps = parse_caps(c.caps);
    opt.mutate_conductor = mutate;
    const bool color = use_color();
    const auto results = run_validation(opt, [color](const SuiteResult& r) { print_suite(r, color); });
    for (const auto& r : results)
        if (!r.pass) {
            std::cout << "first failure: " << r.name << ": " << r.detail << '\n';
            return kFailed;
        }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Class numbers of totally real cubic orders and the summatory function theta(T1, T2)."};
    app.require_subcommand(1);
    app.fallthrough();
    Common c;
    app.add_option("--precision", c.precision, "working precision in bits")->capture_default_str();
    app.add_option("--threads", c.threads, "worker threads")->capture_default_str();
    app.add_option("--cache-dir", c.cache_dir, "record cache directory (default: $CACHE_DIR, none if unset)");
    app.add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "csv", "human"}))->capture_default_str();
    app.add_option("--caps", c.caps, "caps as box=N,direct=N,quotient=N");
    app.add_option("--seed", c.seed, "seed for sampled checks")->capture_default_str();
    app.add_flag("--allow-flagged", c.allow_flagged, "exit 0 even when records are flagged");

    double t1 = 10, t2 = 10;
    bool summary = false, dual = false;
    auto* th = app.add_subcommand("theta", "enumerate the chamber box and sum h(O) R(O)");
    th->add_option("--t1", t1, "threshold for alpha1")->capture_default_str();
    th->add_option("--t2", t2, "threshold for alpha2")->capture_default_str();
    th->add_flag("--summary", summary, "omit the record table");
    th->add_flag("--dual-check", dual, "cross-check class numbers by direct enumeration");

    std::vector<long> coeffs;
    auto* in = app.add_subcommand("inspect", "full dossier for x^3 + a x^2 + b x + c");
    in->add_option("coeffs", coeffs, "a b c")->expected(3)->required()->allow_extra_args(false);

    int j = 0;
    double s1 = 3, s2 = 3, flat = 0;
    std::vector<double> boxes = {5, 10, 20, 40};
    std::string weight = "theta";
    auto* di = app.add_subcommand("dirichlet", "partial sums of the Dirichlet series over nested boxes");
    di->add_option("--j", j, "power of l(a)")->capture_default_str();
    di->add_option("--s1", s1)->capture_default_str();
    di->add_option("--s2", s2)->capture_default_str();
    di->add_option("--boxes", boxes, "increasing T values (T1 = T2 = T)")->delimiter(',');
    di->add_option("--weight", weight, "theta or index")->capture_default_str();
    di->add_option("--flat-volume", flat, "flat volume for the index weight");

    app.add_subcommand("abel-selftest", "Abel transform closed forms and round trips");

    bool quick = false, full = false, mutate = false;
    auto* va = app.add_subcommand("validate", "run the self-validation suites");
    auto* q_opt = va->add_flag("--quick", quick, "reduced sizes (default)");
    va->add_flag("--full", full, "full sizes, including the T = (15, 15) dual class-number sweep")->excludes(q_opt);
    va->add_flag("--mutate-conductor", mutate)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kBadInput;
    }

    try {
        if (*th) return cmd_theta(c, t1, t2, summary, dual);
        if (*in) return cmd_inspect(c, coeffs);
        if (*di) return cmd_dirichlet(c, j, s1, s2, boxes, weight, flat);
        if (app.got_subcommand("abel-selftest")) return cmd_abel_selftest();
        if (*va) return cmd_validate(c, full, mutate);
    } catch (const DomainError& e) {
        std::cerr << "pgt: " << e.what() << '\n';
        return kBadInput;
    } catch (const NonIntegralResult& e) {
        std::cerr << "pgt: " << e.what() << '\n';
        return kFailed;
    } catch (const std::exception& e) {
        std::cerr << "pgt: " << e.what() << '\n';
        return kFailed;
    }
    return kOk;
}
