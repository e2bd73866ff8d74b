#include "hexspine/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "hexspine/duality.hpp"
#include "hexspine/error.hpp"
#include "hexspine/pants.hpp"

namespace hexspine {
namespace {

// insertion order keeps reports readable and byte-stable
using json = nlohmann::ordered_json;

// Failures that are not library errors: bad flags, unreadable files.
struct CliFailure {
    std::string kind;
    std::string message;
    int code;
};

enum class Tol { exact, abs, rel };

const char* to_string(Tol t) {
    switch (t) {
    case Tol::exact: return "exact";
    case Tol::abs: return "abs";
    case Tol::rel: return "rel";
    }
    return "exact";
}

// Accuracy claims attached to reported numbers.
constexpr double kClosedForm = 1e-12;  // direct evaluation of a closed form
constexpr double kMeasured = 1e-9;     // read back from vertex coordinates
constexpr double kLoopLength = 1e-8;   // holonomy translation lengths
constexpr double kDeterminant = 1e-10; // LU against an independent oracle
constexpr double kSigmaBound = 1e-8;

bool has_number(const json& v, bool floats_only) {
    if (v.is_number_float()) return true;
    if (v.is_number()) return !floats_only;
    if (v.is_structured())
        for (const auto& x : v)
            if (has_number(x, floats_only)) return true;
    return false;
}

class Report {
public:
    explicit Report(std::string command) : command_(std::move(command)) {}

    json& config() { return config_; }
    /// Integers, strings and flags.
    void put(const std::string& key, json value) { result_[key] = std::move(value); }
    void put(const std::string& key, json value, Tol kind, double tol) {
        result_[key] = std::move(value);
        tolerances_[key] = {{"kind", to_string(kind)}, {"value", kind == Tol::exact ? 0.0 : tol}};
    }
    void note(std::string n) { notes_.push_back(std::move(n)); }

    json finish() const {
        json tol = tolerances_;
        for (const auto& [key, value] : result_.items()) {
            if (tol.contains(key)) continue;
            // a float without a stated tolerance is a bug in this file
            if (has_number(value, true)) throw std::logic_error("no tolerance for field " + key);
            if (has_number(value, false)) tol[key] = {{"kind", "exact"}, {"value", 0.0}};
        }
        json j;
        j["command"] = command_;
        j["config"] = config_;
        j["result"] = result_;
        j["tolerances"] = tol;
        j["notes"] = notes_;
        return j;
    }

private:
    std::string command_;
    json config_ = json::object();
    json result_ = json::object();
    json tolerances_ = json::object();
    std::vector<std::string> notes_;
};

struct Options {
    std::string preset, map_path, format = "json", svg;
    double tolerance = 0.0;
    int threads = 0;

    double eps = kPi / 2;
    int k = 4;
    std::string grid, indices, curve_ids, ks = "3,4";
    double hi = 1e-3, lo = 1e-5;
    int n = 9;
    std::string name = "gen17", out_path;
    bool strict = false, elide = false;
    int budget = 0;
    unsigned seed = 20240601u;
    int radius = 8, depth = 2;
    double window = 0.0;
    double tol = 1e-10, eps_low = 0.6, eps_high = 1.2;
    long long g = 0;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void check_tolerance(double t, const char* flag) {
    if (!(t >= 1e-14 && t <= 1e-3))
        throw CliFailure{"OutOfRange", std::string(flag) + " must lie in [1e-14, 1e-3]", 2};
}

void check_eps(double eps) {
    if (!(eps > 0.0 && eps < kPi)) throw CliFailure{"OutOfRange", "--eps must lie strictly inside (0, pi)", 2};
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

double parse_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw Error(ErrorKind::BadGrid, "not a number: '" + s + "'");
    }
    if (used != s.size()) throw Error(ErrorKind::BadGrid, "not a number: '" + s + "'");
    return v;
}

std::vector<int> parse_ints(const std::string& s, const char* flag) {
    std::vector<int> v;
    for (const std::string& p : split(s, ',')) {
        std::size_t used = 0;
        try {
            v.push_back(std::stoi(p, &used));
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != p.size()) throw CliFailure{"Usage", std::string(flag) + ": bad integer '" + p + "'", 2};
    }
    if (v.empty()) throw CliFailure{"Usage", std::string(flag) + " is empty", 2};
    return v;
}

// Grid specs: "lin:a:b:n", "geom:hi:lo:n", "pi2:o1,o2,.." for pi/2 -+ each
// offset, or a plain comma list.
std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> g;
    const std::vector<std::string> f = split(spec, ':');
    if (f.size() == 4 && (f[0] == "lin" || f[0] == "geom")) {
        const double a = parse_double(f[1]), b = parse_double(f[2]);
        const double n = parse_double(f[3]);
        if (n < 2 || n > 100000 || n != std::floor(n)) throw Error(ErrorKind::BadGrid, "point count must be an integer >= 2");
        if (f[0] == "geom") {
            if (!(a > b && b > 0)) throw Error(ErrorKind::BadGrid, "geom grid needs hi > lo > 0");
            g = geometric_grid(a, b, static_cast<int>(n));
        } else {
            for (int i = 0; i < n; ++i) g.push_back(a + (b - a) * i / (n - 1));
        }
    } else if (f.size() == 2 && f[0] == "pi2") {
        std::vector<double> off;
        for (const std::string& p : split(f[1], ',')) off.push_back(parse_double(p));
        std::sort(off.begin(), off.end(), std::greater<>());
        for (double o : off) g.push_back(kPi / 2 - o);
        for (auto it = off.rbegin(); it != off.rend(); ++it) g.push_back(kPi / 2 + *it);
    } else if (f.size() == 1) {
        for (const std::string& p : split(spec, ',')) g.push_back(parse_double(p));
    } else {
        throw Error(ErrorKind::BadGrid, "unrecognised grid spec '" + spec + "'");
    }
    if (g.empty()) throw Error(ErrorKind::BadGrid, "empty grid");
    for (double e : g)
        if (!(e > 0.0 && e < kPi)) throw Error(ErrorKind::BadGrid, "grid point " + fmt(e) + " is outside (0, pi)");
    return g;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw CliFailure{"Io", "cannot read '" + path + "'", 2};
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f || !(f << text)) throw CliFailure{"Io", "cannot write '" + path + "'", 2};
}

CombMap load_map(const Options& o, const char* fallback, json& config) {
    if (!o.map_path.empty()) {
        config["map"] = o.map_path;
        return map_from_json(read_file(o.map_path));
    }
    const std::string name = o.preset.empty() ? fallback : o.preset;
    config["preset"] = name;
    return preset(name);
}

// Line plot of several series against eps, values already transformed.
std::string line_plot(const std::string& title, const std::string& ylabel, const std::vector<double>& x,
                      const std::vector<std::vector<double>>& ys) {
    const double W = 640, H = 400, pad = 50;
    double x0 = *std::min_element(x.begin(), x.end()), x1 = *std::max_element(x.begin(), x.end());
    double y0 = INFINITY, y1 = -INFINITY;
    for (const auto& y : ys)
        for (double v : y)
            if (std::isfinite(v)) y0 = std::min(y0, v), y1 = std::max(y1, v);
    if (!(y1 > y0)) y0 -= 1, y1 += 1;
    if (!(x1 > x0)) x0 -= 1, x1 += 1;
    const auto px = [&](double v) { return pad + (v - x0) / (x1 - x0) * (W - 2 * pad); };
    const auto py = [&](double v) { return H - pad - (v - y0) / (y1 - y0) * (H - 2 * pad); };
    const char* palette[] = {"#c0392b", "#2471a3", "#229954", "#7d3c98", "#b9770e", "#555555"};

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    s << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << W - 2 * pad << "\" height=\"" << H - 2 * pad
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    s << "<text x=\"" << pad << "\" y=\"30\" font-size=\"14\">" << title << "</text>\n";
    s << "<text x=\"" << pad << "\" y=\"" << H - 15 << "\" font-size=\"11\">eps " << fmt(x0) << " .. " << fmt(x1)
      << "; " << ylabel << " " << fmt(y0) << " .. " << fmt(y1) << "</text>\n";
    for (std::size_t c = 0; c < ys.size(); ++c) {
        s << "<polyline fill=\"none\" stroke=\"" << palette[c % 6] << "\" points=\"";
        for (std::size_t i = 0; i < x.size(); ++i)
            if (std::isfinite(ys[c][i])) s << fmt(px(x[i])) << ',' << fmt(py(ys[c][i])) << ' ';
        s << "\"/>\n";
    }
    s << "</svg>\n";
    return s.str();
}

void emit_csv(std::ostream& out, const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << fmt(r[i]);
        out << '\n';
    }
}

json pants_json(const PantsMetrics& m) {
    return {{"eps", m.eps}, {"L", m.L},         {"H", m.H},         {"d", m.d},
            {"h", m.h},     {"p0", m.p0},       {"cosh_d", m.cosh_d()}, {"omega", m.omega},
            {"log_space", m.log_space}};
}

json systole_json(const SystoleClass& c) {
    return {{"length", c.length}, {"word", c.word}, {"curve_id", c.curve_id}, {"representatives", c.representatives}};
}

// ---------------------------------------------------------------- commands

Report cmd_trig(const Options& o) {
    check_eps(o.eps);
    Report r("trig");
    r.config()["eps"] = o.eps;
    const double L = hexagon_side_length(o.eps);
    const double cosh_h = 1.0 + std::sin(o.eps);
    r.put("L", L, Tol::rel, kClosedForm);
    r.put("cosh_L", 1.0 + 1.0 / std::sin(o.eps), Tol::rel, kClosedForm);
    r.put("H", std::acosh(cosh_h), Tol::rel, kClosedForm);
    r.put("cosh_H", cosh_h, Tol::rel, kClosedForm);

    const HexagonGeometry hex = build_hexagon(o.eps);
    const auto sides = hex.measured_sides();
    const auto angles = hex.measured_angles();
    double side_res = 0, angle_res = 0;
    for (int p = 0; p < 6; ++p) {
        side_res = std::max(side_res, std::abs(sides[p] - L));
        angle_res = std::max(angle_res, std::abs(angles[p] - hex.inner_angles[p]));
    }
    r.put("inner_angles", std::vector<double>(hex.inner_angles.begin(), hex.inner_angles.end()), Tol::abs, kClosedForm);
    r.put("side_residual", side_res, Tol::abs, kMeasured);
    r.put("angle_residual", angle_res, Tol::abs, kMeasured);

    if (std::abs(o.eps - kPi / 2) <= 1e-6) {
        const double lp = saccheri_diagonal();
        const double two_l = 2 * hexagon_side_length(kPi / 2);
        r.put("cosh_L_prime", std::cosh(lp), Tol::rel, kClosedForm);
        r.put("cosh_L_prime_measured", std::cosh(saccheri_diagonal_measured(build_hexagon(kPi / 2))), Tol::rel, kMeasured);
        r.put("cosh_2L", std::cosh(two_l), Tol::rel, kClosedForm);
        r.put("L_prime_below_2L", lp < two_l);
        r.note("Saccheri values are evaluated at eps = pi/2 exactly");
    }
    return r;
}

Report cmd_pants(const Options& o, std::ostream& out, bool& printed) {
    Report r("pants");
    r.config()["k"] = o.k;
    if (o.grid.empty()) {
        if (o.format == "csv") throw CliFailure{"Usage", "csv output needs --grid", 2};
        check_eps(o.eps);
        r.config()["eps"] = o.eps;
        const PantsMetrics m = pants_metrics(o.k, o.eps);
        const json fields = pants_json(m);
        for (const auto& [key, v] : fields.items())
            if (key == "log_space") r.put(key, v);
            else if (key == "eps") r.put(key, v, Tol::exact, 0);
            else r.put(key, v, Tol::rel, kMeasured);
        return r;
    }
    const std::vector<double> grid = parse_grid(o.grid);
    r.config()["grid"] = o.grid;
    std::vector<std::vector<double>> rows;
    json samples = json::array();
    for (double e : grid) {
        const PantsMetrics m = pants_metrics(o.k, e);
        std::vector<double> row{e, m.L, m.H, m.d, m.h, m.cosh_d()};
        row.insert(row.end(), m.omega.begin(), m.omega.end());
        rows.push_back(row);
        samples.push_back(pants_json(m));
    }
    if (!o.svg.empty()) {
        std::vector<std::vector<double>> ys(o.k - 1);
        for (const auto& row : rows)
            for (int i = 0; i < o.k - 1; ++i) ys[i].push_back(row[6 + i]);
        write_file(o.svg, line_plot("omega_i against eps, k = " + std::to_string(o.k), "omega", grid, ys));
    }
    if (o.format == "csv") {
        std::vector<std::string> header{"eps", "L", "H", "d", "h", "cosh_d"};
        for (int i = 1; i < o.k; ++i) header.push_back("omega_" + std::to_string(i));
        emit_csv(out, header, rows);
        printed = true;
        return r;
    }
    r.put("samples", samples, Tol::rel, kMeasured);
    r.note("eps in each sample is the grid point itself");
    return r;
}

Report cmd_asymptotics(const Options& o, std::ostream& out, bool& printed) {
    Report r("pants-asymptotics");
    const std::vector<int> ks = parse_ints(o.ks, "--k");
    r.config()["k"] = ks;
    r.config()["hi"] = o.hi;
    r.config()["lo"] = o.lo;
    r.config()["n"] = o.n;
    if (!(o.hi > o.lo && o.lo > 0 && o.hi < kPi) || o.n < 4)
        throw Error(ErrorKind::BadGrid, "need hi > lo > 0 and at least four points");
    const std::vector<double> grid = geometric_grid(o.hi, o.lo, o.n);

    std::vector<double> cosh_l, big_h;
    for (double e : grid) {
        cosh_l.push_back(std::cosh(hexagon_side_length(e)));
        big_h.push_back(pants_metrics(3, e).H);
    }
    std::vector<std::vector<double>> rows;
    std::vector<double> slope_h, slope_cd, slope_w;
    bool within = true;
    const double s_l = asymptotic_slope(cosh_l, grid), s_big = asymptotic_slope(big_h, grid);
    within = within && std::abs(s_l + 1) <= 0.02 && std::abs(s_big - 0.5) <= 0.02;
    for (int k : ks) {
        std::vector<double> h, cd, w;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const PantsMetrics m = pants_metrics(k, grid[i]);
            h.push_back(m.h);
            cd.push_back(m.cosh_d());
            w.push_back(omega_last_exact(k, grid[i]));
            rows.push_back({grid[i], double(k), cosh_l[i], m.H, m.h, m.cosh_d(), w.back()});
        }
        slope_h.push_back(asymptotic_slope(h, grid));
        slope_cd.push_back(asymptotic_slope(cd, grid));
        slope_w.push_back(asymptotic_slope(w, grid));
        within = within && std::abs(slope_h.back() - 0.5 * (k - 1)) <= 0.02 && std::abs(slope_cd.back() - (1 - k)) <= 0.05 &&
                 std::abs(slope_w.back() - 0.5) <= 0.05;
    }
    if (o.format == "csv") {
        emit_csv(out, {"eps", "k", "cosh_L", "H", "h", "cosh_d", "omega_last"}, rows);
        printed = true;
        return r;
    }
    r.put("k", ks);
    r.put("slope_cosh_L", s_l, Tol::abs, 0.02);
    r.put("slope_H", s_big, Tol::abs, 0.02);
    r.put("slope_h", slope_h, Tol::abs, 0.02);
    r.put("slope_cosh_d", slope_cd, Tol::abs, 0.05);
    r.put("slope_omega_last", slope_w, Tol::abs, 0.05);
    json expected = {{"cosh_L", -1.0}, {"H", 0.5}, {"h", json::array()}, {"cosh_d", json::array()}, {"omega_last", 0.5}};
    for (int k : ks) {
        expected["h"].push_back(0.5 * (k - 1));
        expected["cosh_d"].push_back(double(1 - k));
    }
    r.put("expected", expected, Tol::exact, 0);
    r.put("within_tolerance", within);
    r.note("slopes are least-squares fits of log f against log eps on a geometric grid");
    return r;
}

Report cmd_preset_build(const Options& o) {
    Report r("preset build");
    r.config()["name"] = o.name;
    const CombMap m = preset(o.name);
    const std::string text = map_to_json(m);
    r.put("name", o.name);
    r.put("faces", m.face_count());
    r.put("edges", m.edge_count());
    r.put("vertices", m.vertex_count());
    r.put("genus", genus(m));
    if (!o.out_path.empty()) {
        write_file(o.out_path, text + "\n");
        r.config()["out"] = o.out_path;
        r.put("file", o.out_path);
    }
    r.put("map", json::parse(text));
    return r;
}

Report cmd_axioms(const Options& o, int& code) {
    Report r("axioms check");
    const CombMap m = load_map(o, "gen17", r.config());
    const AxiomReport a = validate_axioms(m);
    json list = json::array();
    for (int i = 0; i < 5; ++i)
        list.push_back({{"name", "AX" + std::to_string(i + 1)}, {"pass", a.ax[i].pass}, {"witnesses", a.ax[i].witnesses}});
    r.put("faces", m.face_count());
    r.put("edges", m.edge_count());
    r.put("vertices", m.vertex_count());
    r.put("genus", genus(m));
    r.put("axioms", list);
    r.put("k", a.k);
    r.put("all_pass", a.all());
    if (o.strict && !a.all()) code = 2;
    return r;
}

Report cmd_curves(const Options& o) {
    Report r("curves list");
    const CombMap m = load_map(o, "gen17", r.config());
    const std::vector<Curve> curves = extract_curves(m);
    json list = json::array();
    std::map<int, int> per_index;
    for (const Curve& c : curves) {
        list.push_back({{"id", c.id},
                        {"colour", to_string(c.colour)},
                        {"index", c.index},
                        {"edge_count", c.edge_count()},
                        {"half_edges", c.half_edges}});
        per_index[c.index]++;
    }
    json idx = json::object();
    for (const auto& [i, n] : per_index) idx[std::to_string(i)] = n;
    r.put("count", static_cast<int>(curves.size()));
    r.put("per_index", idx);
    r.put("curves", list);
    return r;
}

std::vector<int> select_curves(const Options& o, const std::vector<Curve>& curves, json& config) {
    if (!o.curve_ids.empty()) {
        const std::vector<int> ids = parse_ints(o.curve_ids, "--curves");
        for (int id : ids)
            if (id < 0 || id >= static_cast<int>(curves.size()))
                throw Error(ErrorKind::OutOfRange, "no curve with id " + std::to_string(id));
        config["curves"] = ids;
        return ids;
    }
    std::vector<int> ids;
    if (o.indices.empty()) {
        for (const Curve& c : curves) ids.push_back(c.id);
        return ids;
    }
    const std::vector<int> wanted = parse_ints(o.indices, "--indices");
    config["indices"] = wanted;
    for (const Curve& c : curves)
        if (std::find(wanted.begin(), wanted.end(), c.index) != wanted.end()) ids.push_back(c.id);
    if (ids.empty()) throw Error(ErrorKind::OutOfRange, "no curve carries the requested indices");
    return ids;
}

Report cmd_filling(const Options& o) {
    Report r("filling");
    const CombMap m = load_map(o, "gen17", r.config());
    const std::vector<Curve> curves = extract_curves(m);
    const std::vector<int> subset = select_curves(o, curves, r.config());
    const FillingResult f = filling_check(m, curves, subset);
    r.put("subset", subset);
    r.put("size", static_cast<int>(subset.size()));
    r.put("filling", f.filling);
    r.put("components", f.components);
    r.put("euler", f.euler);
    r.put("polygon_sizes", f.polygon_sizes);
    if (o.budget > 0) {
        r.config()["search_budget"] = o.budget;
        r.config()["seed"] = o.seed;
        const SubsetSearch s = filling_subset_search(m, curves, subset, o.budget, o.seed);
        r.put("search_best", s.best);
        r.put("search_best_size", static_cast<int>(s.best.size()));
        r.put("search_checks", s.checks);
    }
    return r;
}

Report cmd_systoles(const Options& o) {
    check_eps(o.eps);
    if (o.radius < 4) throw CliFailure{"OutOfRange", "--radius must be at least 4", 2};
    if (o.window < 0) throw CliFailure{"OutOfRange", "--window must be non-negative", 2};
    Report r("systoles");
    const CombMap m = load_map(o, "gen17", r.config());
    r.config()["eps"] = o.eps;
    r.config()["radius"] = o.radius;
    r.config()["window"] = o.window;
    const DevelopedSurface s = develop(m, o.eps);
    const SystoleCensus c = enumerate_systoles(s, o.radius, o.window);
    json minimal = json::array(), spectrum = json::array();
    int on_curves = 0;
    for (const SystoleClass& k : c.minimal) {
        minimal.push_back(systole_json(k));
        on_curves += k.curve_id >= 0;
    }
    for (const SystoleClass& k : c.spectrum) spectrum.push_back(systole_json(k));
    r.put("closure_residual", s.closure_residual, Tol::abs, kMeasured);
    r.put("min_length", c.min_length, Tol::abs, kLoopLength);
    r.put("minimal_count", static_cast<int>(c.minimal.size()));
    r.put("minimal_on_curves", on_curves);
    if (const int k = validate_axioms(m).k; k > 0) r.put("curve_length", k * hexagon_side_length(o.eps), Tol::rel, kClosedForm);
    r.put("minimal", minimal, Tol::abs, kLoopLength);
    if (o.window > 0) r.put("spectrum", spectrum, Tol::abs, kLoopLength);
    r.put("walks", c.walks);
    r.note(c.caveat);
    if (!o.svg.empty()) {
        write_file(o.svg, developed_svg(s, o.depth));
        r.config()["svg"] = o.svg;
    }
    return r;
}

Report cmd_bracket(const Options& o) {
    check_eps(o.eps);
    Report r("bracket");
    const CombMap m = load_map(o, "gen17", r.config());
    r.config()["eps"] = o.eps;
    r.config()["elide"] = o.elide;
    const std::vector<Curve> curves = extract_curves(m);
    const std::vector<PantsAttachment> att = attach_all(m, curves);
    const BracketMatrix M = bracket_matrix(m, curves, att, o.eps);
    std::vector<int> b;
    for (const PantsAttachment& a : att) b.push_back(a.b_half_edge);
    r.put("dimension", static_cast<int>(M.entry.size()));
    r.put("blue", M.blue);
    r.put("b_choice", b);
    r.put("delta", determinant(M.entry), Tol::rel, kDeterminant);
    r.put("max_deviation", M.max_deviation(), Tol::abs, kClosedForm);
    r.put("sigma_bound", singular_lower_bound(M.entry), Tol::rel, kSigmaBound);
    if (o.elide) {
        std::vector<double> diag;
        for (std::size_t i = 0; i < M.entry.size(); ++i) diag.push_back(M.entry[i][i]);
        r.put("diagonal", diag, Tol::abs, kClosedForm);
        r.note("matrix elided; only the diagonal is shown");
    } else {
        r.put("matrix", M.entry, Tol::abs, kClosedForm);
    }
    return r;
}

Report cmd_delta(const Options& o, std::ostream& out, bool& printed) {
    Report r("delta");
    const CombMap m = load_map(o, "gen17", r.config());
    const std::string spec = o.grid.empty() ? "pi2:0.1,0.05,0.01" : o.grid;
    r.config()["grid"] = spec;
    const std::vector<double> grid = parse_grid(spec);
    const BracketReport b = delta_scan(m, grid, o.threads);
    if (!o.svg.empty()) {
        std::vector<double> lg;
        for (double d : b.delta) lg.push_back(d != 0.0 ? std::log10(std::abs(d)) : NAN);
        write_file(o.svg, line_plot("log10 |delta| against eps", "log10 |delta|", grid, {lg}));
        r.config()["svg"] = o.svg;
    }
    if (o.format == "csv") {
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < grid.size(); ++i) rows.push_back({grid[i], b.delta[i], b.deviation[i], b.sigma_bound[i]});
        emit_csv(out, {"eps", "delta", "deviation", "sigma_bound"}, rows);
        printed = true;
        return r;
    }
    r.put("dimension", b.dimension);
    r.put("b_choice", b.b_choice);
    r.put("eps", b.eps, Tol::exact, 0);
    r.put("delta", b.delta, Tol::rel, kDeterminant);
    r.put("deviation", b.deviation, Tol::abs, kClosedForm);
    r.put("sigma_bound", b.sigma_bound, Tol::rel, kSigmaBound);
    r.put("witnesses", b.witnesses, Tol::exact, 0);
    r.put("certified", b.certified, Tol::exact, 0);
    r.note("witnesses: grid points within 0.2 of pi/2 with |delta| > 1e-8");
    r.note("certified: grid points within 0.2 of pi/2 with sigma_bound > 1e-8, sigma_bound = 1/|M^-1|_F");
    return r;
}

Report cmd_codim(const Options& o) {
    Report r("codim-report");
    const CombMap m = load_map(o, "gen17", r.config());
    const std::vector<Curve> curves = extract_curves(m);
    const std::vector<int> subset = select_curves(o, curves, r.config());
    const std::string spec = o.grid.empty() ? "pi2:0.1,0.05,0.01" : o.grid;
    r.config()["grid"] = spec;
    const BracketReport b = delta_scan(m, parse_grid(spec), o.threads);
    const CodimReport c = codim_report(m, curves, subset, b);
    r.put("genus", c.genus);
    r.put("curves", static_cast<int>(curves.size()));
    r.put("filling_size", c.curves);
    r.put("codim_bound", c.bound);
    r.put("two_g_minus_1", c.comparison);
    r.put("witness_kind", b.witnesses.empty() ? "certified" : "delta");
    r.put("witnesses", c.witnesses, Tol::exact, 0);
    r.put("eps", b.eps, Tol::exact, 0);
    r.put("delta", b.delta, Tol::rel, kDeterminant);
    r.put("sigma_bound", b.sigma_bound, Tol::rel, kSigmaBound);
    for (const std::string& n : c.notes) r.note(n);
    return r;
}

Report cmd_bolza(const Options& o) {
    check_tolerance(o.tol, "--tol");
    check_eps(o.eps_low);
    check_eps(o.eps_high);
    if (!(o.eps_low < o.eps_high)) throw CliFailure{"OutOfRange", "--lo must be below --hi", 2};
    Report r("bolza-crossing");
    const CombMap m = load_map(o, "gen2", r.config());
    r.config()["tol"] = o.tol;
    r.config()["lo"] = o.eps_low;
    r.config()["hi"] = o.eps_high;
    const BolzaCrossing x = find_length_crossing(m, o.eps_low, o.eps_high, o.tol);
    r.put("eps", x.eps, Tol::abs, o.tol);
    r.put("offset_from_pi_over_4", x.eps - kPi / 4, Tol::abs, o.tol);
    r.put("iterations", x.iterations);
    r.put("competitor", x.competitor);
    r.put("competitor_length", x.competitor_length_at_root, Tol::abs, kLoopLength);
    r.put("curve_length", 2 * hexagon_side_length(x.eps), Tol::rel, kClosedForm);
    return r;
}

Report cmd_bound(const Options& o) {
    Report r("bound");
    r.config()["g"] = o.g;
    const double t1 = bound_theorem1(o.g), im1 = bound_im1(o.g);
    r.put("g", o.g);
    r.put("theorem1", t1, Tol::rel, kClosedForm);
    r.put("im1", im1, Tol::rel, kClosedForm);
    r.put("ratio", t1 / im1, Tol::abs, kClosedForm);
    return r;
}

void add_source(CLI::App* s, Options& o, const char* fallback) {
    auto* p = s->add_option("--preset", o.preset, std::string("preset map: gen2 or gen17 (default ") + fallback + ")");
    auto* m = s->add_option("--map", o.map_path, "map file in the JSON map format");
    p->excludes(m);
}

json failure(const std::string& kind, const std::string& message, int code) {
    return {{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    // --tolerance is process state; put it back for the next caller
    struct Restore {
        double saved = default_tolerance();
        ~Restore() { set_default_tolerance(saved); }
    } restore;
    Options o;
    CLI::App app{"Deformed hexagonal tessellations: trigonometry, surfaces, systoles and duality reports", "hexspine"};
    app.require_subcommand(1);
    app.add_option("--tolerance", o.tolerance, "incidence and angle tolerance, in [1e-14, 1e-3]");
    app.add_option("--threads", o.threads, "worker threads (default: HEXSPINE_THREADS or all cores)")
        ->check(CLI::PositiveNumber);

    auto* trig = app.add_subcommand("trig", "hexagon side length, cosh L, cosh H and measured residuals");
    trig->add_option("--eps", o.eps, "vertex angle")->required();

    auto* pants = app.add_subcommand("pants", "pants metrics L, H, d, h, omega at one eps or over a grid");
    pants->add_option("--k", o.k, "edges per boundary curve")->required();
    auto* pants_eps = pants->add_option("--eps", o.eps, "vertex angle");
    auto* pants_grid = pants->add_option("--grid", o.grid, "grid spec: lin:a:b:n, geom:hi:lo:n, pi2:o1,.. or a list");
    pants_eps->excludes(pants_grid);
    pants->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}));
    pants->add_option("--svg", o.svg, "write an omega plot (grid only)");

    auto* asym = app.add_subcommand("pants-asymptotics", "log-log slopes as eps goes to 0");
    asym->add_option("--k", o.ks, "comma list of k");
    asym->add_option("--hi", o.hi);
    asym->add_option("--lo", o.lo);
    asym->add_option("--n", o.n, "grid points");
    asym->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}));

    auto* preset_cmd = app.add_subcommand("preset", "preset maps");
    preset_cmd->require_subcommand(1);
    auto* build = preset_cmd->add_subcommand("build", "emit a preset map");
    build->add_option("--name", o.name, "gen2 or gen17");
    build->add_option("--out", o.out_path, "also write the map file here");

    auto* axioms = app.add_subcommand("axioms", "tessellation axioms");
    axioms->require_subcommand(1);
    auto* check = axioms->add_subcommand("check", "check AX1-AX5");
    add_source(check, o, "gen17");
    check->add_flag("--strict", o.strict, "exit 2 when an axiom fails");

    auto* curves_cmd = app.add_subcommand("curves", "tessellation curves");
    curves_cmd->require_subcommand(1);
    auto* list = curves_cmd->add_subcommand("list", "list the curves");
    add_source(list, o, "gen17");

    auto* filling = app.add_subcommand("filling", "check whether a curve subset fills");
    add_source(filling, o, "gen17");
    auto* f_idx = filling->add_option("--indices", o.indices, "decoration indices, comma list");
    auto* f_ids = filling->add_option("--curves", o.curve_ids, "curve ids, comma list");
    f_idx->excludes(f_ids);
    filling->add_option("--search", o.budget, "run a subset search with this budget of filling checks");
    filling->add_option("--seed", o.seed);

    auto* systoles = app.add_subcommand("systoles", "enumerate shortest dual loops");
    add_source(systoles, o, "gen17");
    systoles->add_option("--eps", o.eps);
    systoles->add_option("--radius", o.radius, "maximum crossings per loop (>= 4)");
    systoles->add_option("--window", o.window, "also list classes up to min + window");
    systoles->add_option("--svg", o.svg, "write the developed tiles around face 0");
    systoles->add_option("--depth", o.depth, "svg development depth");

    auto* bracket = app.add_subcommand("bracket", "bracket matrix of blue curves against their duals");
    add_source(bracket, o, "gen17");
    bracket->add_option("--eps", o.eps)->required();
    bracket->add_flag("--elide", o.elide, "print only the diagonal");

    auto* delta = app.add_subcommand("delta", "determinant of the bracket matrix over a grid");
    add_source(delta, o, "gen17");
    delta->add_option("--grid", o.grid, "grid spec (default pi2:0.1,0.05,0.01)");
    delta->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}));
    delta->add_option("--svg", o.svg, "write a log10 |delta| plot");

    auto* codim = app.add_subcommand("codim-report", "codimension bound from a filling subset");
    add_source(codim, o, "gen17");
    auto* c_idx = codim->add_option("--indices", o.indices, "decoration indices, comma list");
    auto* c_ids = codim->add_option("--curves", o.curve_ids, "curve ids, comma list");
    c_idx->excludes(c_ids);
    codim->add_option("--grid", o.grid, "grid spec (default pi2:0.1,0.05,0.01)");

    auto* bolza = app.add_subcommand("bolza-crossing", "where tessellation curves stop being shortest");
    add_source(bolza, o, "gen2");
    bolza->add_option("--tol", o.tol, "root tolerance, in [1e-14, 1e-3]");
    bolza->add_option("--lo", o.eps_low);
    bolza->add_option("--hi", o.eps_high);

    auto* bound = app.add_subcommand("bound", "systole-count bounds for large genus");
    bound->add_option("--g", o.g, "genus")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << failure("Usage", e.what(), 2).dump() << '\n';
        return 2;
    }

    try {
        if (app.count("--tolerance")) {
            check_tolerance(o.tolerance, "--tolerance");
            set_default_tolerance(o.tolerance);
        }
        if (o.threads > 0) setenv("HEXSPINE_THREADS", std::to_string(o.threads).c_str(), 1);

        int code = 0;
        bool printed = false;
        Report r("");
        if (trig->parsed()) r = cmd_trig(o);
        else if (pants->parsed()) r = cmd_pants(o, out, printed);
        else if (asym->parsed()) r = cmd_asymptotics(o, out, printed);
        else if (build->parsed()) r = cmd_preset_build(o);
        else if (check->parsed()) r = cmd_axioms(o, code);
        else if (list->parsed()) r = cmd_curves(o);
        else if (filling->parsed()) r = cmd_filling(o);
        else if (systoles->parsed()) r = cmd_systoles(o);
        else if (bracket->parsed()) r = cmd_bracket(o);
        else if (delta->parsed()) r = cmd_delta(o, out, printed);
        else if (codim->parsed()) r = cmd_codim(o);
        else if (bolza->parsed()) r = cmd_bolza(o);
        else if (bound->parsed()) r = cmd_bound(o);
        if (app.count("--tolerance")) r.config()["tolerance"] = o.tolerance;
        if (!printed) out << r.finish().dump(2) << '\n';
        return code;
    } catch (const CliFailure& f) {
        err << failure(f.kind, f.message, f.code).dump() << '\n';
        return f.code;
    } catch (const Error& e) {
        const int code = is_numeric_failure(e.kind()) ? 3 : 2;
        err << failure(to_string(e.kind()), e.what(), code).dump() << '\n';
        return code;
    } catch (const std::exception& e) {
        err << failure("Internal", e.what(), 3).dump() << '\n';
        return 3;
    }
}

} // namespace hexspine
