#include "qgt/cli.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qgt/distances.hpp"
#include "qgt/inequalities.hpp"
#include "qgt/tensors.hpp"

namespace qgt::cli {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------- parsing

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& s, int line, int col) {
    try {
        size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected a number, got '" + s + "'", line, col);
    }
}

long parse_int(const std::string& s, int line, int col) {
    try {
        size_t used = 0;
        const long v = std::stol(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected an integer, got '" + s + "'", line, col);
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    return out;
}

ParameterPoint parse_point(const std::string& s, int line, int col) {
    const std::vector<std::string> parts = split(s, ',');
    ParameterPoint p(static_cast<Eigen::Index>(parts.size()));
    for (size_t i = 0; i < parts.size(); ++i)
        p[static_cast<Eigen::Index>(i)] = parse_double(parts[i], line, col);
    return p;
}

std::vector<GridAxis> parse_grid(const std::string& s, int line, int col) {
    std::vector<GridAxis> axes;
    for (const std::string& part : split(s, ',')) {
        const std::vector<std::string> f = split(part, ':');
        if (f.size() != 4)
            throw ParseError("grid axis must be name:start:stop:count, got '" + part + "'",
                             line, col);
        GridAxis a;
        a.name = f[0];
        a.start = parse_double(f[1], line, col);
        a.stop = parse_double(f[2], line, col);
        a.count = static_cast<int>(parse_int(f[3], line, col));
        if (a.count < 1) throw ParseError("grid axis count must be >= 1", line, col);
        axes.push_back(std::move(a));
    }
    return axes;
}

FdScheme scheme_from_name(const std::string& name, int line, int col) {
    if (name == "central2") return FdScheme::central2;
    if (name == "central4") return FdScheme::central4;
    if (name == "richardson") return FdScheme::richardson;
    throw ParseError("unknown fd scheme '" + name + "'", line, col);
}

void apply_key(RunConfig& cfg, const std::string& section, const std::string& key,
               const std::string& value, int line, int col) {
    auto is = [&](const char* s, const char* k) { return section == s && key == k; };
    if (is("run", "task")) {
        try {
            cfg.task = task_from_name(value);
        } catch (const ValidationError&) {
            throw ParseError("unknown task '" + value + "'", line, col);
        }
    } else if (is("run", "model")) {
        cfg.model = value;
    } else if (is("run", "suite")) {
        cfg.suite = value;
    } else if (is("run", "seed")) {
        cfg.suite_seed = static_cast<std::uint64_t>(parse_int(value, line, col));
    } else if (is("run", "draws")) {
        cfg.draws = static_cast<int>(parse_int(value, line, col));
    } else if (is("model", "beta")) {
        cfg.mc.beta = parse_double(value, line, col);
    } else if (is("model", "omega")) {
        cfg.mc.omega = parse_double(value, line, col);
    } else if (is("model", "ncut")) {
        cfg.mc.n_cut = static_cast<int>(parse_int(value, line, col));
    } else if (is("model", "seed")) {
        cfg.mc.seed = static_cast<std::uint64_t>(parse_int(value, line, col));
    } else if (is("model", "dim")) {
        cfg.dim = static_cast<int>(parse_int(value, line, col));
    } else if (is("model", "nparams")) {
        cfg.n_params = static_cast<int>(parse_int(value, line, col));
    } else if (is("region", "at")) {
        cfg.at = parse_point(value, line, col);
    } else if (is("region", "to")) {
        cfg.to = parse_point(value, line, col);
    } else if (is("region", "grid")) {
        cfg.grid = parse_grid(value, line, col);
    } else if (is("region", "curve")) {
        cfg.curve_spec = value;
    } else if (is("region", "patch")) {
        cfg.patch_spec = value;
    } else if (is("region", "steps")) {
        cfg.curve_steps = static_cast<int>(parse_int(value, line, col));
    } else if (is("fd", "step")) {
        cfg.fd.h = parse_double(value, line, col);
    } else if (is("fd", "scheme")) {
        cfg.fd.scheme = scheme_from_name(value, line, col);
    } else if (is("output", "path")) {
        cfg.output_path = value;
    } else if (is("output", "format")) {
        if (value == "csv")
            cfg.format = OutputFormat::csv;
        else if (value == "json")
            cfg.format = OutputFormat::json;
        else
            throw ParseError("unknown output format '" + value + "'", line, col);
    } else if (is("output", "threads")) {
        cfg.threads = static_cast<int>(parse_int(value, line, col));
    } else {
        throw ParseError("unknown key '" + section + "." + key + "'", line, col);
    }
}

// ------------------------------------------------------------- formatting

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json matrix_json(const RealMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_json(const RealVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

json complex_matrix_json(const ComplexMatrix& m) {
    return json{{"re", matrix_json(m.real())}, {"im", matrix_json(m.imag())}};
}

json qgt_json(const QgtResult& q) {
    json out;
    out["q"] = complex_matrix_json(q.q);
    out["g_fr"] = matrix_json(q.g_fr);
    out["g_fs"] = matrix_json(q.g_fs);
    out["omega"] = matrix_json(q.omega);
    out["weights"] = vector_json(q.weights);
    json levels = json::array();
    for (const LevelTensor& lt : q.per_level)
        levels.push_back(json{{"q", complex_matrix_json(lt.q)}, {"f", matrix_json(lt.f)}});
    out["per_level"] = std::move(levels);
    return out;
}

json report_json(const InequalityReport& r) {
    return json{{"name", r.name},     {"lhs", r.lhs},   {"rhs", r.rhs},
                {"residual", r.residual}, {"pass", r.pass}, {"context", r.context}};
}

void write_atomic(const std::string& path, const std::string& body) {
    if (path.empty()) {
        std::cout << body;
        return;
    }
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot open output file " + tmp.string());
        out << body;
        if (!out) throw ValidationError("failed writing " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string point_string(const ParameterPoint& p) {
    std::string s = "(";
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (i) s += ",";
        s += fmt17(p[i]);
    }
    return s + ")";
}

// --------------------------------------------------------------- tensors

// Column order of the sweep CSV: R1..Rk, reQ upper triangle including the
// diagonal, imQ strict upper, gFR and gFS upper including the diagonal,
// omega strict upper.
std::string tensor_csv_header(Eigen::Index k) {
    std::ostringstream os;
    for (Eigen::Index i = 0; i < k; ++i) os << (i ? "," : "") << "R" << i + 1;
    auto block = [&](const char* name, bool diagonal) {
        for (Eigen::Index mu = 0; mu < k; ++mu)
            for (Eigen::Index nu = diagonal ? mu : mu + 1; nu < k; ++nu)
                os << "," << name << "_" << mu + 1 << nu + 1;
    };
    block("reQ", true);
    block("imQ", false);
    block("gFR", true);
    block("gFS", true);
    block("omega", false);
    return os.str();
}

std::string tensor_csv_row(const ParameterPoint& r, const QgtResult& q) {
    const Eigen::Index k = q.n_axes();
    std::ostringstream os;
    for (Eigen::Index i = 0; i < k; ++i) os << (i ? "," : "") << fmt17(r[i]);
    auto block = [&](const RealMatrix& m, bool diagonal) {
        for (Eigen::Index mu = 0; mu < k; ++mu)
            for (Eigen::Index nu = diagonal ? mu : mu + 1; nu < k; ++nu)
                os << "," << fmt17(m(mu, nu));
    };
    block(q.q.real(), true);
    block(q.q.imag(), false);
    block(q.g_fr, true);
    block(q.g_fs, true);
    block(q.omega, false);
    return os.str();
}

QgtResult tensor_at(const StateFamily& fam, const ParameterPoint& r,
                    const StepPolicy& policy) {
    return fam.is_pure() ? pure_qgt(fam, r, policy) : sjoqvist_qgt(fam, r, policy);
}

int resolve_threads(const RunConfig& cfg) {
    if (cfg.threads > 0) return cfg.threads;
    if (const char* env = std::getenv("QGT_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Worker pool over an atomic index; results land indexed, so output order
// never depends on scheduling.
template <typename Fn>
void parallel_for(long count, int threads, const Fn& fn) {
    if (threads <= 1 || count < 2) {
        for (long i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::atomic<long> next(0);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                const long i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    next.store(count);
                    return;
                }
            }
        });
    }
    for (std::thread& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

// ------------------------------------------------------------------ tasks

int run_tensor(const RunConfig& cfg) {
    const FamilyPtr fam = make_family(cfg);
    const ParameterPoint r = *cfg.at;
    QgtResult q;
    try {
        q = tensor_at(*fam, r, cfg.fd);
    } catch (const NumericalError& e) {
        throw NumericalError(std::string(e.what()) + " at point " + point_string(r));
    }

    if (cfg.format == OutputFormat::csv) {
        std::string body = tensor_csv_header(q.n_axes()) + "\n" + tensor_csv_row(r, q) + "\n";
        write_atomic(cfg.output_path, body);
        return 0;
    }
    json out = qgt_json(q);
    out["point"] = vector_json(r);
    if (!fam->is_pure()) out["g_bures"] = matrix_json(bures_metric(*fam, r, cfg.fd).g_b);
    write_atomic(cfg.output_path, out.dump(2) + "\n");
    return 0;
}

int run_sweep(const RunConfig& cfg) {
    const FamilyPtr fam = make_family(cfg);
    const Eigen::Index k = fam->n_params();
    if (static_cast<Eigen::Index>(cfg.grid.size()) != k)
        throw IncompatibleTaskRegion("sweep grid must name one axis per model parameter");

    std::vector<long> shape;
    long count = 1;
    for (const GridAxis& a : cfg.grid) {
        shape.push_back(a.count);
        count *= a.count;
    }
    auto point_of = [&](long index) {
        ParameterPoint p(k);
        long rest = index;
        for (Eigen::Index axis = k - 1; axis >= 0; --axis) {
            const GridAxis& a = cfg.grid[static_cast<size_t>(axis)];
            const long i = rest % a.count;
            rest /= a.count;
            p[axis] = a.count == 1
                          ? a.start
                          : a.start + (a.stop - a.start) * static_cast<double>(i) /
                                          (a.count - 1);
        }
        return p;
    };

    std::vector<QgtResult> results(static_cast<size_t>(count));
    parallel_for(count, resolve_threads(cfg), [&](long i) {
        const ParameterPoint p = point_of(i);
        try {
            results[static_cast<size_t>(i)] = tensor_at(*fam, p, cfg.fd);
        } catch (const Error& e) {
            throw NumericalError(std::string(e.what()) + " at point " + point_string(p));
        }
    });

    std::ostringstream body;
    if (cfg.format == OutputFormat::csv) {
        body << tensor_csv_header(k) << "\n";
        for (long i = 0; i < count; ++i)
            body << tensor_csv_row(point_of(i), results[static_cast<size_t>(i)]) << "\n";
    } else {
        json out;
        out["header"] = tensor_csv_header(k);
        json data = json::array();
        for (long i = 0; i < count; ++i) {
            json entry = qgt_json(results[static_cast<size_t>(i)]);
            entry["point"] = vector_json(point_of(i));
            data.push_back(std::move(entry));
        }
        out["points"] = std::move(data);
        body << out.dump(2) << "\n";
    }
    write_atomic(cfg.output_path, body.str());
    return 0;
}

int run_transport(const RunConfig& cfg) {
    const FamilyPtr fam = make_family(cfg);
    const Curve curve = make_curve(cfg);
    const TransportResult res = horizontal_lift(*fam, curve, cfg.fd);

    if (cfg.format == OutputFormat::csv) {
        std::ostringstream body;
        body << "t";
        for (Eigen::Index n = 0; n < res.raw_phases.size(); ++n) body << ",theta_" << n;
        body << "\n";
        for (size_t j = 0; j < res.phase_history.size(); ++j) {
            body << fmt17(static_cast<double>(j) / curve.n_steps);
            const RealVector& phases = res.phase_history[j].phases;
            for (Eigen::Index n = 0; n < phases.size(); ++n) body << "," << fmt17(phases[n]);
            body << "\n";
        }
        write_atomic(cfg.output_path, body.str());
        return 0;
    }

    json out;
    out["berry_phases"] = vector_json(res.berry_phases);
    json windings = json::array();
    for (Eigen::Index n = 0; n < res.windings.size(); ++n) windings.push_back(res.windings[n]);
    out["windings"] = std::move(windings);
    out["raw_phases"] = vector_json(res.raw_phases);
    out["weights"] = vector_json(res.weights);
    out["connection_residual_max"] = res.connection_residual_max;
    out["theta_total"] = res.theta_total;
    write_atomic(cfg.output_path, out.dump(2) + "\n");
    return 0;
}

int run_theta_g(const RunConfig& cfg) {
    const FamilyPtr fam = make_family(cfg);
    const ThetaGResult res = theta_g(*fam, make_patch(cfg), cfg.fd);
    json out;
    out["theta_g"] = res.value;
    out["per_level"] = vector_json(res.per_level);
    out["cells"] = res.cells;
    write_atomic(cfg.output_path, out.dump(2) + "\n");
    return 0;
}

int run_volume(const RunConfig& cfg) {
    const FamilyPtr fam = make_family(cfg);
    const VolumePhaseReport res = volume_phase_relation(*fam, make_patch(cfg), cfg.fd);
    json out;
    out["volume"] = res.volume;
    out["curvature_integral"] = res.curvature_integral;
    out["theta_g"] = res.theta_g;
    out["volume_vs_curvature"] = report_json(res.volume_vs_curvature);
    out["curvature_vs_theta"] = report_json(res.curvature_vs_theta);
    write_atomic(cfg.output_path, out.dump(2) + "\n");
    return 0;
}

int run_verify(const RunConfig& cfg) {
    if (cfg.suite != "inequalities")
        throw ValidationError("unknown verify suite '" + cfg.suite + "'");
    const SuiteResult res = run_inequality_suite(cfg.suite_seed, cfg.draws);
    json out;
    out["suite"] = cfg.suite;
    out["draws"] = res.draws;
    out["reports"] = res.reports;
    out["min_residual"] = res.min_residual;
    out["argmin"] = res.argmin_context;
    out["pass"] = res.pass;
    write_atomic(cfg.output_path, out.dump(2) + "\n");
    if (!res.pass) {
        std::cerr << "inequality suite failed: min scaled residual " << res.min_residual
                  << " at " << res.argmin_context << "\n";
        return 3;
    }
    return 0;
}

int run_distance(const RunConfig& cfg) {
    const FamilyPtr fam = make_family(cfg);
    const DensityMatrix a = fam->evaluate(*cfg.at);
    const DensityMatrix b = fam->evaluate(*cfg.to);
    const DistanceResult d = sjoqvist_finite_distance(a, b);
    json out;
    out["distance"] = d.value;
    out["near_degenerate"] = d.near_degenerate;
    out["from"] = vector_json(*cfg.at);
    out["to"] = vector_json(*cfg.to);
    write_atomic(cfg.output_path, out.dump(2) + "\n");
    return 0;
}

int run_models(const RunConfig& cfg) {
    json out = json::array();
    out.push_back({{"name", "thermal-bloch"}, {"params", {"theta", "phi"}},
                   {"options", {"beta", "omega"}}});
    out.push_back({{"name", "pure-bloch"}, {"params", {"theta", "phi"}}, {"options", json::array()}});
    out.push_back({{"name", "pure-bloch-lower"}, {"params", {"theta", "phi"}}, {"options", json::array()}});
    out.push_back({{"name", "bosonic-coherent"}, {"params", {"x", "y"}},
                   {"options", {"beta", "omega", "ncut"}}});
    out.push_back({{"name", "random"}, {"params", {"R1..Rk"}},
                   {"options", {"seed", "dim", "nparams"}}});
    write_atomic(cfg.output_path, out.dump(2) + "\n");
    return 0;
}

}  // namespace

ParameterPoint parse_point_arg(const std::string& text) { return parse_point(text, 0, 0); }

std::vector<GridAxis> parse_grid_arg(const std::string& text) {
    return parse_grid(text, 0, 0);
}

Task task_from_name(const std::string& name) {
    if (name == "tensor") return Task::tensor;
    if (name == "sweep") return Task::sweep;
    if (name == "transport") return Task::transport;
    if (name == "theta-g") return Task::theta_g;
    if (name == "volume") return Task::volume;
    if (name == "verify") return Task::verify;
    if (name == "distance") return Task::distance;
    if (name == "models") return Task::models;
    throw ValidationError("unknown task '" + name + "'");
}

const char* task_name(Task task) {
    switch (task) {
        case Task::tensor: return "tensor";
        case Task::sweep: return "sweep";
        case Task::transport: return "transport";
        case Task::theta_g: return "theta-g";
        case Task::volume: return "volume";
        case Task::verify: return "verify";
        case Task::distance: return "distance";
        case Task::models: return "models";
    }
    return "?";
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError("unterminated section header", line_no, 1);
            section = trim(line.substr(1, line.size() - 2));
            if (section != "run" && section != "model" && section != "region" &&
                section != "fd" && section != "output")
                throw ParseError("unknown section '" + section + "'", line_no, 1);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected key = value", line_no, 1);
        if (section.empty())
            throw ParseError("key outside any [section]", line_no, 1);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const int col = static_cast<int>(raw.find(key)) + 1;
        apply_key(cfg, section, key, value, line_no, col);
    }
    return cfg;
}

void validate_config(const RunConfig& cfg) {
    if (cfg.task != Task::models && cfg.task != Task::verify && cfg.model.empty())
        throw ValidationError("a model is required (use --model or [run] model = ...)");

    const bool has_point = cfg.at.has_value();
    const bool has_grid = !cfg.grid.empty();
    const bool has_curve = !cfg.curve_spec.empty();
    const bool has_patch = !cfg.patch_spec.empty();

    auto incompatible = [&](const char* need) {
        std::ostringstream os;
        os << "task " << task_name(cfg.task) << " requires a " << need << " region";
        throw IncompatibleTaskRegion(os.str());
    };
    switch (cfg.task) {
        case Task::tensor:
            if (!has_point || has_curve || has_patch) incompatible("point (--at)");
            break;
        case Task::sweep:
            if (!has_grid || has_curve || has_patch) incompatible("grid (--grid)");
            break;
        case Task::transport:
            if (!has_curve || has_grid || has_patch) incompatible("curve (--curve)");
            break;
        case Task::theta_g:
        case Task::volume:
            if (!has_patch || has_grid || has_curve) incompatible("patch (--patch)");
            break;
        case Task::distance:
            if (!has_point || !cfg.to.has_value()) incompatible("point pair (--at/--to)");
            break;
        case Task::verify:
        case Task::models:
            break;
    }
    cfg.fd.validate();
    make_family(cfg);  // surfaces UnknownModel and bad model options early
}

FamilyPtr make_family(const RunConfig& cfg) {
    if (cfg.task == Task::models || cfg.task == Task::verify) {
        // These tasks do not evaluate a model; a placeholder suffices.
        return bloch_pure_family();
    }
    if (cfg.model == "thermal-bloch") return bloch_thermal_family(cfg.mc.beta, cfg.mc.omega);
    if (cfg.model == "pure-bloch") return bloch_pure_family();
    if (cfg.model == "pure-bloch-lower") return bloch_pure_lower_family();
    if (cfg.model == "bosonic-coherent") return bosonic_coherent_family(cfg.mc);
    if (cfg.model == "random")
        return random_smooth_family(cfg.mc.seed, cfg.dim, cfg.n_params);
    throw UnknownModel("unknown model '" + cfg.model + "'");
}

Curve make_curve(const RunConfig& cfg) {
    const std::string& spec = cfg.curve_spec;
    const auto colon = spec.find(':');
    const std::string kind = colon == std::string::npos ? spec : spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);

    if (kind == "circle") {
        const ParameterPoint v = parse_point(rest, 0, 0);
        if (v.size() != 3)
            throw ValidationError("circle curve needs cx,cy,radius");
        ParameterPoint center(2);
        center << v[0], v[1];
        return circle_curve(center, v[2], cfg.curve_steps);
    }
    if (kind == "rect") {
        const ParameterPoint v = parse_point(rest, 0, 0);
        if (v.size() != 4) throw ValidationError("rect curve needs u0,v0,u1,v1");
        ParameterPoint lo(2), hi(2);
        lo << v[0], v[1];
        hi << v[2], v[3];
        return rectangle_curve(lo, hi, cfg.curve_steps);
    }
    if (kind == "points") {
        std::vector<ParameterPoint> pts;
        for (const std::string& part : split(rest, ';'))
            pts.push_back(parse_point(part, 0, 0));
        if (pts.size() < 2) throw ValidationError("points curve needs at least two waypoints");
        const bool closed = (pts.front() - pts.back()).norm() == 0.0;
        Curve c = polyline_curve(std::move(pts), closed);
        // The piecewise-linear path resamples cleanly at any resolution.
        c.n_steps = std::max(c.n_steps, cfg.curve_steps);
        return c;
    }
    throw ValidationError("unknown curve kind '" + kind + "'");
}

SurfacePatch make_patch(const RunConfig& cfg) {
    const std::vector<std::string> axes = split(cfg.patch_spec, ',');
    if (axes.size() != 2)
        throw ValidationError("patch must be u0:u1:nu,v0:v1:nv");
    SurfacePatch patch;
    patch.lo.resize(2);
    patch.hi.resize(2);
    for (int axis = 0; axis < 2; ++axis) {
        const std::vector<std::string> f = split(axes[static_cast<size_t>(axis)], ':');
        if (f.size() != 3)
            throw ValidationError("patch axis must be start:stop:count");
        patch.lo[axis] = parse_double(f[0], 0, 0);
        patch.hi[axis] = parse_double(f[1], 0, 0);
        const long count = parse_int(f[2], 0, 0);
        if (axis == 0)
            patch.n_u = static_cast<int>(count);
        else
            patch.n_v = static_cast<int>(count);
    }
    patch.validate();
    return patch;
}

int run(const RunConfig& cfg) {
    try {
        validate_config(cfg);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    try {
        switch (cfg.task) {
            case Task::tensor: return run_tensor(cfg);
            case Task::sweep: return run_sweep(cfg);
            case Task::transport: return run_transport(cfg);
            case Task::theta_g: return run_theta_g(cfg);
            case Task::volume: return run_volume(cfg);
            case Task::verify: return run_verify(cfg);
            case Task::distance: return run_distance(cfg);
            case Task::models: return run_models(cfg);
        }
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error in task " << task_name(cfg.task) << ": " << e.what() << "\n";
        return 3;
    }
}

}  // namespace qgt::cli
