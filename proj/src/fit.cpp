#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "oscint/error.hpp"
#include "oscint/harness.hpp"

namespace oscint {

namespace {

FitResult least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw InvalidArgument("fit: abscissae are all equal");
    FitResult f;
    f.n = x.size();
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    // A flat series is fitted perfectly by slope 0.
    f.r2 = syy <= 1e-300 * std::max(1.0, my * my) ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
    return f;
}

void check_samples(const Samples& s, bool positive_values) {
    if (s.size() < 4) throw InvalidArgument("fit: need at least 4 samples");
    for (const auto& [N, v] : s) {
        if (!(N > 0.0)) throw InvalidArgument("fit: N must be positive");
        if (positive_values && !(v > 0.0)) throw InvalidArgument("fit: values must be positive");
        if (!std::isfinite(v)) throw InvalidArgument("fit: values must be finite");
    }
}

Samples ratio_samples(const ExperimentReport& r) {
    Samples s;
    for (const auto& row : r.rows) s.emplace_back(row.N, row.ratio);
    return s;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

}  // namespace

FitResult fit_power_law(const Samples& s) {
    check_samples(s, true);
    std::vector<double> x, y;
    for (const auto& [N, v] : s) {
        x.push_back(std::log(N));
        y.push_back(std::log(v));
    }
    return least_squares(x, y);
}

FitResult fit_log_growth(const Samples& s) {
    check_samples(s, false);
    std::vector<double> x, y;
    for (const auto& [N, v] : s) {
        x.push_back(std::log(N));
        y.push_back(v);
    }
    return least_squares(x, y);
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Bounded: return "BOUNDED";
        case Verdict::Growing: return "GROWING";
        default: return "INCONCLUSIVE";
    }
}

double band_ratio(const Samples& s) {
    if (s.empty()) return 0.0;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& [N, v] : s) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

Verdict classify(const Samples& s, const Thresholds& t) {
    FitResult ll = fit_power_law(s);
    if (ll.slope <= t.bounded_slope && band_ratio(s) <= t.band) return Verdict::Bounded;
    FitResult sl = fit_log_growth(s);
    if (sl.slope >= t.growth_slope && sl.r2 >= t.min_r2) return Verdict::Growing;
    return Verdict::Inconclusive;
}

const char* protocol_name(Protocol p) {
    switch (p) {
        case Protocol::Rate: return "rate";
        case Protocol::Growth: return "growth";
        case Protocol::Bounded: return "bounded";
        case Protocol::Convergence: return "convergence";
        case Protocol::Ceiling: return "ceiling";
        default: return "stability";
    }
}

Protocol parse_protocol(const std::string& s) {
    for (Protocol p : {Protocol::Rate, Protocol::Growth, Protocol::Bounded, Protocol::Convergence, Protocol::Ceiling,
                       Protocol::Stability})
        if (s == protocol_name(p)) return p;
    throw InvalidArgument("unknown protocol '" + s + "'");
}

void validate(const ExperimentConfig& c) {
    if (c.kind.empty()) throw InvalidArgument("config: kind is required");
    for (std::size_t i = 1; i < c.N_schedule.size(); ++i)
        if (!(c.N_schedule[i] > c.N_schedule[i - 1])) throw InvalidArgument("config: N schedule must be strictly increasing");
    const bool fits = c.protocol == Protocol::Rate || c.protocol == Protocol::Growth || c.protocol == Protocol::Bounded;
    if (fits && c.N_schedule.size() < 4) throw InvalidArgument("config: slope fits need at least 4 schedule points");
    for (double N : c.N_schedule)
        if (!(N > 0.0)) throw InvalidArgument("config: schedule entries must be positive");
    if (c.seeds == 0) throw InvalidArgument("config: seeds must be >= 1");
}

void finalize(ExperimentReport& r) {
    const ExperimentConfig& c = r.config;
    const Thresholds& t = c.thresholds;
    Samples s = ratio_samples(r);
    r.band = band_ratio(s);
    r.fit = {};
    r.axes = "none";
    r.classification = Verdict::Inconclusive;
    bool positive = !s.empty();
    for (const auto& [N, v] : s) positive = positive && v > 0.0;
    if (s.size() >= 4 && positive) r.classification = classify(s, t);

    std::ostringstream d;
    switch (c.protocol) {
        case Protocol::Rate:
            r.fit = fit_power_law(s);
            r.axes = "loglog";
            r.pass = std::abs(r.fit.slope - c.expected) <= c.tol && r.fit.r2 >= t.min_r2;
            d << "slope " << r.fit.slope << " expected " << c.expected << " +- " << c.tol << ", R^2 " << r.fit.r2;
            break;
        case Protocol::Growth:
            r.fit = fit_log_growth(s);
            r.axes = "semilog";
            r.pass = r.fit.slope >= c.expected && r.fit.r2 >= t.min_r2;
            d << "semilog slope " << r.fit.slope << " (need >= " << c.expected << "), R^2 " << r.fit.r2;
            break;
        case Protocol::Bounded:
            r.fit = fit_power_law(s);
            r.axes = "loglog";
            r.pass = r.fit.slope <= t.bounded_slope && r.band <= t.band;
            d << "log-log slope " << r.fit.slope << " (need <= " << t.bounded_slope << "), max/min " << r.band
              << " (need <= " << t.band << ")";
            break;
        case Protocol::Convergence: {
            bool mono = true;
            for (std::size_t i = 1; i < s.size(); ++i) mono = mono && s[i].second <= s[i - 1].second;
            r.pass = !s.empty() && mono && s.back().second <= c.tol;
            d << "final " << (s.empty() ? 0.0 : s.back().second) << " (need <= " << c.tol << "), nonincreasing "
              << (mono ? "yes" : "no");
            break;
        }
        case Protocol::Ceiling: {
            double m = 0.0;
            for (const auto& [N, v] : s) m = std::max(m, v);
            r.pass = !s.empty() && m <= c.tol;
            d << "max " << m << " (need <= " << c.tol << ")";
            break;
        }
        case Protocol::Stability: {
            double worst = 0.0;
            for (const auto& [N, v] : s) worst = std::max(worst, std::abs(v / s.front().second - 1.0));
            r.pass = !s.empty() && worst <= c.tol;
            d << "max relative drift " << worst << " (need <= " << c.tol << ")";
            break;
        }
    }
    r.detail = d.str();
}

void write_csv(const ExperimentReport& r, std::ostream& os) {
    os << "kind,N,seed,value,normalizer,ratio\n";
    for (const auto& row : r.rows)
        os << row.kind << ',' << fmt(row.N) << ',' << row.seed << ',' << fmt(row.value) << ',' << fmt(row.normalizer)
           << ',' << fmt(row.ratio) << '\n';
    const ExperimentConfig& c = r.config;
    os << "# variant=" << c.variant << '\n';
    os << "# protocol=" << protocol_name(c.protocol) << '\n';
    os << "# expected=" << fmt(c.expected) << '\n';
    os << "# tol=" << fmt(c.tol) << '\n';
    os << "# bounded_slope=" << fmt(c.thresholds.bounded_slope) << '\n';
    os << "# growth_slope=" << fmt(c.thresholds.growth_slope) << '\n';
    os << "# band_limit=" << fmt(c.thresholds.band) << '\n';
    os << "# min_r2=" << fmt(c.thresholds.min_r2) << '\n';
    os << "# axes=" << r.axes << '\n';
    os << "# slope=" << fmt(r.fit.slope) << '\n';
    os << "# intercept=" << fmt(r.fit.intercept) << '\n';
    os << "# r2=" << fmt(r.fit.r2) << '\n';
    os << "# band=" << fmt(r.band) << '\n';
    os << "# classification=" << verdict_name(r.classification) << '\n';
    os << "# verdict=" << (r.pass ? "PASS" : "FAIL") << '\n';
}

ExperimentReport read_csv(std::istream& is) {
    ExperimentReport r;
    std::string line;
    if (!std::getline(is, line) || line != "kind,N,seed,value,normalizer,ratio")
        throw InvalidArgument("read_csv: unexpected header '" + line + "'");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(2, eq - 2), val = line.substr(eq + 1);
            ExperimentConfig& c = r.config;
            if (key == "variant") c.variant = val;
            else if (key == "protocol") c.protocol = parse_protocol(val);
            else if (key == "expected") c.expected = std::stod(val);
            else if (key == "tol") c.tol = std::stod(val);
            else if (key == "bounded_slope") c.thresholds.bounded_slope = std::stod(val);
            else if (key == "growth_slope") c.thresholds.growth_slope = std::stod(val);
            else if (key == "band_limit") c.thresholds.band = std::stod(val);
            else if (key == "min_r2") c.thresholds.min_r2 = std::stod(val);
            continue;
        }
        std::stringstream ss(line);
        std::string f[6];
        for (int i = 0; i < 6; ++i)
            if (!std::getline(ss, f[i], ',')) throw InvalidArgument("read_csv: short row '" + line + "'");
        ReportRow row{f[0], std::stod(f[1]), std::stoull(f[2]), std::stod(f[3]), std::stod(f[4]), std::stod(f[5])};
        r.rows.push_back(row);
        r.config.kind = row.kind;
    }
    return r;
}

}  // namespace oscint
