#include "config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "nsfs/nsf1.hpp"

namespace nsfs::app {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"grid", {"dim", "N", "L"}},
        {"force", {"family", "amplitude", "width", "center", "direction", "radius", "separation", "path"}},
        {"solver",
         {"schedule", "damping", "residual_tol", "max_iters", "divergence_guard", "damping_floor", "gradient_tables",
          "memory_budget_mb", "singular_rule", "singular_subsamples"}},
        {"diagnostics", {"enabled", "shells", "window_lo", "window_hi", "tail_radii", "theta_r", "sample_lattice"}},
        {"output", {"dir"}},
    };
    return keys;
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const char* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end || !std::isfinite(out)) throw ConfigError(key, "expected a number, got '" + v + "'");
    return out;
}

long long to_int(const std::string& key, const std::string& v) {
    long long out = 0;
    const char* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) throw ConfigError(key, "expected an integer, got '" + v + "'");
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "off" || v == "0" || v == "no") return false;
    throw ConfigError(key, "expected true/false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) throw ConfigError(key, "empty list entry in '" + v + "'");
        out.push_back(to_double(key, item.substr(b, e - b + 1)));
    }
    if (out.empty()) throw ConfigError(key, "expected a comma-separated list");
    return out;
}

std::string join(const std::vector<double>& v) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void require(bool ok, const std::string& key, const std::string& msg) {
    if (!ok) throw ConfigError(key, msg);
}

// Rethrows library validation failures against the key they concern.
template <class Fn>
void checked(const std::string& key, Fn&& fn) {
    try {
        fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(key, e.what());
    }
}

}  // namespace

RunConfig parse_run_config(std::istream& is) {
    pt::ptree tree;
    try {
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("<syntax>", std::string("line ") + std::to_string(e.line()) + ": " + e.message());
    }
    RunConfig c;
    for (const auto& [section, body] : tree) {
        const auto it = known_keys().find(section);
        if (body.empty() && !body.data().empty()) throw ConfigError(section, "key outside any section");
        if (it == known_keys().end()) throw ConfigError(section, "unknown section");
        for (const auto& [name, node] : body) {
            const std::string key = section + "." + name;
            if (!it->second.contains(name)) throw ConfigError(key, "unknown key");
            const std::string v = node.get_value<std::string>();
            if (section == "grid") {
                if (name == "dim") c.dim = static_cast<int>(to_int(key, v));
                if (name == "N") c.points = to_int(key, v);
                if (name == "L") c.half_width = to_double(key, v);
            } else if (section == "force") {
                if (name == "family") {
                    require(v == "zero" || v == "gaussian" || v == "ring" || v == "dipole" || v == "file", key,
                            "must be one of zero, gaussian, ring, dipole, file");
                    c.force.family = v;
                }
                if (name == "amplitude") c.force.amplitude = to_double(key, v);
                if (name == "width") c.force.width = to_double(key, v);
                if (name == "center") c.force.center = to_list(key, v);
                if (name == "direction") c.force.direction = to_list(key, v);
                if (name == "radius") c.force.ring_radius = to_double(key, v);
                if (name == "separation") c.force.separation = to_double(key, v);
                if (name == "path") c.force.path = v;
            } else if (section == "solver") {
                if (name == "schedule") c.solver.schedule = to_list(key, v);
                if (name == "damping") c.solver.damping = to_double(key, v);
                if (name == "residual_tol") c.solver.residual_tol = to_double(key, v);
                if (name == "max_iters") c.solver.max_iters_per_stage = static_cast<int>(to_int(key, v));
                if (name == "divergence_guard") c.solver.divergence_guard = to_double(key, v);
                if (name == "damping_floor") c.solver.damping_floor = to_double(key, v);
                if (name == "gradient_tables") {
                    require(v == "auto" || v == "on" || v == "off", key, "must be auto, on or off");
                    c.gradient_tables = v == "auto" ? GradientTables::automatic
                                                    : (v == "on" ? GradientTables::on : GradientTables::off);
                }
                if (name == "memory_budget_mb") c.memory_budget_mb = to_double(key, v);
                if (name == "singular_rule") {
                    require(v == "lattice-zeta" || v == "cell-average", key, "must be lattice-zeta or cell-average");
                    c.singular_rule =
                        v == "lattice-zeta" ? SingularCellRule::lattice_zeta : SingularCellRule::cell_average;
                }
                if (name == "singular_subsamples") c.singular_subsamples = static_cast<int>(to_int(key, v));
            } else if (section == "diagnostics") {
                if (name == "enabled") c.diagnostics = to_bool(key, v);
                if (name == "shells") c.diag.profile.shells = static_cast<int>(to_int(key, v));
                if (name == "window_lo") c.diag.profile.window_lo = to_double(key, v);
                if (name == "window_hi") c.diag.profile.window_hi = to_double(key, v);
                if (name == "tail_radii") c.diag.tail_radii = to_list(key, v);
                if (name == "theta_r") c.diag.theta_r = to_double(key, v);
                if (name == "sample_lattice") c.diag.sample_lattice = static_cast<int>(to_int(key, v));
            } else if (section == "output") {
                if (name == "dir") c.output_dir = v;
            }
        }
    }

    checked("grid", [&] { (void)c.grid(); });
    checked("solver", [&] { c.solver.validate(); });
    const auto n = static_cast<std::size_t>(c.dim);
    if (!c.force.center.empty()) require(c.force.center.size() == n, "force.center", "needs grid.dim entries");
    if (!c.force.direction.empty()) {
        require(c.force.direction.size() == n, "force.direction", "needs grid.dim entries");
        double s = 0.0;
        for (double d : c.force.direction) s += d * d;
        require(s > 0.0, "force.direction", "must be nonzero");
    }
    require(c.force.width > 0.0, "force.width", "must be positive");
    require(c.force.ring_radius > 0.0, "force.radius", "must be positive");
    require(c.force.separation > 0.0, "force.separation", "must be positive");
    require(c.force.family != "file" || !c.force.path.empty(), "force.path", "required when family = file");
    require(c.memory_budget_mb > 0.0, "solver.memory_budget_mb", "must be positive");
    require(c.singular_subsamples >= 1 && c.singular_subsamples % 2 == 1, "solver.singular_subsamples",
            "must be a positive odd integer");
    require(c.diag.profile.shells >= 4, "diagnostics.shells", "must be >= 4");
    require(c.diag.profile.window_lo > 0.0 && c.diag.profile.window_lo < c.diag.profile.window_hi &&
                c.diag.profile.window_hi <= 1.0,
            "diagnostics.window_lo", "need 0 < window_lo < window_hi <= 1");
    for (double r : c.diag.tail_radii)
        require(r > 0.0 && r < c.half_width, "diagnostics.tail_radii", "radii must lie in (0, L)");
    require(c.diag.theta_r >= 0.0, "diagnostics.theta_r", "must be >= 0 (0 selects the default)");
    require(c.diag.sample_lattice >= 1, "diagnostics.sample_lattice", "must be >= 1");
    return c;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("<file>", "cannot open " + path);
    return parse_run_config(is);
}

std::vector<std::pair<std::string, std::string>> resolved_entries(const RunConfig& c) {
    const auto n = static_cast<std::size_t>(c.dim);
    std::vector<double> center = c.force.center.empty() ? std::vector<double>(n, 0.0) : c.force.center;
    std::vector<double> dir = c.force.direction;
    if (dir.empty()) {
        dir.assign(n, 0.0);
        dir[0] = 1.0;
    }
    const char* tables = c.gradient_tables == GradientTables::automatic
                             ? "auto"
                             : (c.gradient_tables == GradientTables::on ? "on" : "off");
    return {
        {"grid.dim", std::to_string(c.dim)},
        {"grid.N", std::to_string(c.points)},
        {"grid.L", num(c.half_width)},
        {"force.family", c.force.family},
        {"force.amplitude", num(c.force.amplitude)},
        {"force.width", num(c.force.width)},
        {"force.center", join(center)},
        {"force.direction", join(dir)},
        {"force.radius", num(c.force.ring_radius)},
        {"force.separation", num(c.force.separation)},
        {"force.path", c.force.path},
        {"solver.schedule", join(c.solver.schedule)},
        {"solver.damping", num(c.solver.damping)},
        {"solver.residual_tol", num(c.solver.residual_tol)},
        {"solver.max_iters", std::to_string(c.solver.max_iters_per_stage)},
        {"solver.divergence_guard", num(c.solver.divergence_guard)},
        {"solver.damping_floor", num(c.solver.damping_floor)},
        {"solver.gradient_tables", tables},
        {"solver.memory_budget_mb", num(c.memory_budget_mb)},
        {"solver.singular_rule", to_string(c.singular_rule)},
        {"solver.singular_subsamples", std::to_string(c.singular_subsamples)},
        {"diagnostics.enabled", c.diagnostics ? "true" : "false"},
        {"diagnostics.shells", std::to_string(c.diag.profile.shells)},
        {"diagnostics.window_lo", num(c.diag.profile.window_lo)},
        {"diagnostics.window_hi", num(c.diag.profile.window_hi)},
        {"diagnostics.tail_radii", c.diag.tail_radii.empty() ? "default" : join(c.diag.tail_radii)},
        {"diagnostics.theta_r", c.diag.theta_r > 0.0 ? num(c.diag.theta_r) : "default"},
        {"diagnostics.sample_lattice", std::to_string(c.diag.sample_lattice)},
        {"output.dir", c.output_dir},
    };
}

PlanOptions plan_options(const RunConfig& c) {
    PlanOptions o;
    o.gradient_tables = c.gradient_tables != GradientTables::off;
    o.gradient_tables_if_fit = c.gradient_tables == GradientTables::automatic;
    o.memory_budget_bytes = static_cast<std::size_t>(c.memory_budget_mb * 1024.0 * 1024.0);
    o.singular_rule = c.singular_rule;
    o.singular_subsamples = c.singular_subsamples;
    return o;
}

namespace {

double truncated_gaussian(double d2, double w) { return d2 > 16.0 * w * w ? 0.0 : std::exp(-d2 / (w * w)); }

}  // namespace

VectorField build_force(const ForceSpec& spec, const GridSpec& g) {
    const int n = g.dim();
    const auto un = static_cast<std::size_t>(n);
    if (spec.family == "zero") return VectorField(g);
    if (spec.family == "file") {
        VectorField f = read_vector_field(spec.path);
        require_same_grid(g, f.grid, "force file");
        return f;
    }
    std::vector<double> c = spec.center.empty() ? std::vector<double>(un, 0.0) : spec.center;
    std::vector<double> d = spec.direction;
    if (d.empty()) {
        d.assign(un, 0.0);
        d[0] = 1.0;
    }
    if (c.size() != un || d.size() != un) throw DomainError("force centre/direction dimension mismatch");
    double norm = 0.0;
    for (double v : d) norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : d) v /= norm;
    const double a = spec.amplitude;
    const double w = spec.width;

    if (spec.family == "gaussian") {
        return sample_vector(g, [&](std::span<const double> x, std::span<double> out) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < un; ++k) d2 += (x[k] - c[k]) * (x[k] - c[k]);
            const double s = a * truncated_gaussian(d2, w);
            for (std::size_t k = 0; k < un; ++k) out[k] = s * d[k];
        });
    }
    if (spec.family == "dipole") {
        const double h = 0.5 * spec.separation;
        return sample_vector(g, [&](std::span<const double> x, std::span<double> out) {
            double dp = 0.0;
            double dm = 0.0;
            for (std::size_t k = 0; k < un; ++k) {
                const double y = x[k] - c[k];
                dp += (y - h * d[k]) * (y - h * d[k]);
                dm += (y + h * d[k]) * (y + h * d[k]);
            }
            const double s = a * (truncated_gaussian(dp, w) - truncated_gaussian(dm, w));
            for (std::size_t k = 0; k < un; ++k) out[k] = s * d[k];
        });
    }
    if (spec.family == "ring") {
        // Swirl of radius R in the (x_0, x_1) plane through the centre.
        const double big_r = spec.ring_radius;
        return sample_vector(g, [&](std::span<const double> x, std::span<double> out) {
            for (std::size_t k = 0; k < un; ++k) out[k] = 0.0;
            const double y0 = x[0] - c[0];
            const double y1 = x[1] - c[1];
            const double rho = std::hypot(y0, y1);
            if (rho == 0.0) return;
            double d2 = (rho - big_r) * (rho - big_r);
            for (std::size_t k = 2; k < un; ++k) d2 += (x[k] - c[k]) * (x[k] - c[k]);
            const double s = a * truncated_gaussian(d2, w);
            out[0] = -s * y1 / rho;
            out[1] = s * y0 / rho;
        });
    }
    throw DomainError("unknown force family '" + spec.family + "'");
}

}  // namespace nsfs::app
