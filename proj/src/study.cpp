#include "pxfem/study.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "pxfem/exact_solutions.hpp"

namespace pxfem {

namespace {

std::string shortest(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw std::invalid_argument("bad float field: " + s);
    }
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

void StudyConfig::validate() const {
    dc.validate();
    if (b_values.empty() || grid_sides.empty()) {
        throw std::invalid_argument("StudyConfig: b_values and grid_sides must be nonempty");
    }
    for (double b : b_values) {
        if (!(b >= 0.0)) throw std::invalid_argument("StudyConfig: b values must be >= 0");
    }
    for (std::size_t i = 0; i < grid_sides.size(); ++i) {
        if (grid_sides[i] < 2) {
            throw std::invalid_argument("StudyConfig: grid sides must be >= 2");
        }
        if (i > 0 && grid_sides[i] <= grid_sides[i - 1]) {
            throw std::invalid_argument("StudyConfig: grid sides must be strictly increasing");
        }
    }
    triangle_rule(quad_rule);  // throws on a bad selector
}

std::vector<StudyRecord> run_study(const StudyConfig& config) {
    config.validate();
    const QuadratureRule& rule = triangle_rule(config.quad_rule);
    std::vector<StudyRecord> records;
    records.reserve(config.b_values.size() * config.grid_sides.size());
    for (double b : config.b_values) {
        for (int grid : config.grid_sides) {
            StudyRecord rec;
            rec.b = b;
            rec.grid_side = grid;
            rec.dof = static_cast<long long>(grid) * grid;
            const auto start = std::chrono::steady_clock::now();
            try {
                const Mesh mesh =
                    build_uniform_rect_mesh({-1.0, 1.0}, {-1.0, 1.0}, grid - 1);
                const BenchmarkCase bench = make_benchmark(b);
                const NodalField boundary_data = interpolate(bench.exact_u, mesh);
                const DCResult run =
                    dc_iterate(bench.f, bench.exponent, boundary_data, mesh, config.dc);
                if (!run.state.converged) {
                    throw std::runtime_error(
                        "splitting iteration did not reach tolerance: residual " +
                        std::to_string(run.state.residual));
                }
                rec.iters = run.state.n;
                rec.error = w1p_error_norm(bench.exact_u, bench.exact_grad,
                                           run.state.u, bench.exponent, mesh, rule);
                if (config.dump_solutions) {
                    std::filesystem::create_directories(config.out_dir);
                    write_solution(run.state.u,
                                   (std::filesystem::path(config.out_dir) /
                                    solution_filename(b, grid)).string());
                }
            } catch (const std::exception&) {
                rec.ok = false;
                rec.error = std::numeric_limits<double>::quiet_NaN();
                rec.iters = 0;
            }
            rec.seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                    .count();
            records.push_back(rec);
        }
    }
    return records;
}

RateFit fit_rate(const std::vector<StudyRecord>& records) {
    if (records.size() < 3) {
        throw std::invalid_argument("fit_rate: need at least 3 records");
    }
    const double b = records.front().b;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const StudyRecord& rec : records) {
        if (rec.b != b) {
            throw std::invalid_argument("fit_rate: records mix several b values");
        }
        if (!rec.ok || !(rec.error > 0.0)) {
            throw std::invalid_argument("fit_rate: records must carry positive errors");
        }
        const double x = std::log(static_cast<double>(rec.grid_side));
        const double y = std::log(rec.error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(records.size());
    const double denom = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    RateFit fit;
    fit.b = b;
    fit.alpha = -slope;
    // prefactor of the h-model: error = C * (grid/2)^(-alpha), h = 2/grid
    fit.C = std::exp(intercept - fit.alpha * std::log(2.0));
    fit.ssr = 0.0;
    for (const StudyRecord& rec : records) {
        const double x = std::log(static_cast<double>(rec.grid_side));
        const double resid = std::log(rec.error) - (intercept + slope * x);
        fit.ssr += resid * resid;
    }
    return fit;
}

std::vector<RateFit> fit_all_rates(const std::vector<StudyRecord>& records) {
    std::vector<double> order;
    std::map<double, std::vector<StudyRecord>> groups;
    for (const StudyRecord& rec : records) {
        if (!groups.count(rec.b)) order.push_back(rec.b);
        groups[rec.b].push_back(rec);
    }
    std::vector<RateFit> fits;
    for (double b : order) {
        fits.push_back(fit_rate(groups[b]));
    }
    return fits;
}

void write_records_csv(const std::vector<StudyRecord>& records, std::ostream& out) {
    out << "b,grid_side,dof,error,iters,seconds\n";
    for (const StudyRecord& rec : records) {
        out << shortest(rec.b) << ',' << rec.grid_side << ',' << rec.dof << ','
            << shortest(rec.error) << ',' << rec.iters << ','
            << shortest(rec.seconds) << '\n';
    }
}

std::vector<StudyRecord> read_records_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "b,grid_side,dof,error,iters,seconds") {
        throw std::invalid_argument("records csv: bad header");
    }
    std::vector<StudyRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 6) throw std::invalid_argument("records csv: bad row");
        StudyRecord rec;
        rec.b = parse_double(fields[0]);
        rec.grid_side = static_cast<int>(std::stol(fields[1]));
        rec.dof = std::stoll(fields[2]);
        rec.error = fields[3] == "nan" ? std::numeric_limits<double>::quiet_NaN()
                                       : parse_double(fields[3]);
        rec.iters = static_cast<int>(std::stol(fields[4]));
        rec.seconds = parse_double(fields[5]);
        rec.ok = !std::isnan(rec.error);
        records.push_back(rec);
    }
    return records;
}

void write_fits_csv(const std::vector<RateFit>& fits, std::ostream& out) {
    out << "b,alpha,C,ssr\n";
    for (const RateFit& fit : fits) {
        out << shortest(fit.b) << ',' << shortest(fit.alpha) << ','
            << shortest(fit.C) << ',' << shortest(fit.ssr) << '\n';
    }
}

namespace {

struct PlotSeries {
    double b;
    std::vector<std::pair<double, double>> points;  // (grid, error)
};

const char* kSeriesColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                               "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

void write_loglog_svg(const std::vector<StudyRecord>& records, std::ostream& out) {
    std::vector<PlotSeries> series;
    for (const StudyRecord& rec : records) {
        if (!rec.ok || !(rec.error > 0.0)) continue;
        auto it = std::find_if(series.begin(), series.end(),
                               [&](const PlotSeries& s) { return s.b == rec.b; });
        if (it == series.end()) {
            series.push_back({rec.b, {}});
            it = series.end() - 1;
        }
        it->points.push_back({static_cast<double>(rec.grid_side), rec.error});
    }
    if (series.empty()) {
        throw std::invalid_argument("write_loglog_svg: no plottable records");
    }
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series) {
        for (auto [x, y] : s.points) {
            xmin = std::min(xmin, std::log10(x));
            xmax = std::max(xmax, std::log10(x));
            ymin = std::min(ymin, std::log10(y));
            ymax = std::max(ymax, std::log10(y));
        }
    }
    if (xmax - xmin < 1e-12) { xmin -= 0.5; xmax += 0.5; }
    if (ymax - ymin < 1e-12) { ymin -= 0.5; ymax += 0.5; }

    const double width = 640, height = 480;
    const double left = 70, right = 30, top = 30, bottom = 50;
    const auto px = [&](double lx) {
        return left + (lx - xmin) / (xmax - xmin) * (width - left - right);
    };
    const auto py = [&](double ly) {
        return height - bottom - (ly - ymin) / (ymax - ymin) * (height - top - bottom);
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // frame
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\""
        << width - left - right << "\" height=\"" << height - top - bottom
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    // decade grid lines and labels
    for (int d = static_cast<int>(std::ceil(ymin)); d <= std::floor(ymax); ++d) {
        const double y = py(d);
        out << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\""
            << width - right << "\" y2=\"" << y
            << "\" stroke=\"#cccccc\" stroke-dasharray=\"3 3\"/>\n"
            << "<text x=\"" << left - 8 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\" font-size=\"12\">1e" << d << "</text>\n";
    }
    for (double gx : {20.0, 40.0, 60.0, 80.0, 100.0, 140.0}) {
        const double lx = std::log10(gx);
        if (lx < xmin - 1e-9 || lx > xmax + 1e-9) continue;
        const double x = px(lx);
        out << "<line x1=\"" << x << "\" y1=\"" << top << "\" x2=\"" << x
            << "\" y2=\"" << height - bottom
            << "\" stroke=\"#cccccc\" stroke-dasharray=\"3 3\"/>\n"
            << "<text x=\"" << x << "\" y=\"" << height - bottom + 18
            << "\" text-anchor=\"middle\" font-size=\"12\">" << gx << "</text>\n";
    }
    out << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-size=\"13\">grid side (log scale)</text>\n";
    out << "<text x=\"16\" y=\"" << (top + height - bottom) / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
        << (top + height - bottom) / 2 << ")\">error (log scale)</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kSeriesColors[s % 8];
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"";
        for (auto [x, y] : series[s].points) {
            out << px(std::log10(x)) << ',' << py(std::log10(y)) << ' ';
        }
        out << "\"/>\n";
        for (auto [x, y] : series[s].points) {
            out << "<circle cx=\"" << px(std::log10(x)) << "\" cy=\""
                << py(std::log10(y)) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        }
        out << "<text x=\"" << width - right - 6 << "\" y=\""
            << top + 16 + 16 * s << "\" text-anchor=\"end\" font-size=\"12\" fill=\""
            << color << "\">b = " << shortest(series[s].b) << "</text>\n";
    }
    out << "</svg>\n";
}

void emit(const std::vector<StudyRecord>& records,
          const std::vector<RateFit>& fits, const StudyConfig& config) {
    if (records.empty()) {
        throw std::invalid_argument("emit: no records");
    }
    const std::filesystem::path dir(config.out_dir.empty() ? "." : config.out_dir);
    std::filesystem::create_directories(dir);

    {
        std::ofstream out(dir / "records.csv");
        if (!out) throw std::runtime_error("emit: cannot write records.csv");
        write_records_csv(records, out);
    }
    {
        std::ofstream out(dir / "fits.csv");
        if (!out) throw std::runtime_error("emit: cannot write fits.csv");
        write_fits_csv(fits, out);
    }
    {
        std::ofstream out(dir / "meta.txt");
        if (!out) throw std::runtime_error("emit: cannot write meta.txt");
        out << "domain=[-1,1]x[-1,1]\n"
            << "dof_convention=all_vertices (mesh has grid_side-1 squares per side)\n"
            << "quad_rule=" << config.quad_rule << " ("
            << triangle_rule(config.quad_rule).size() << "-point, degree "
            << triangle_rule(config.quad_rule).degree << ")\n"
            << "fit_model=error = C * (grid_side/2)^(-alpha)\n"
            << "tol=" << shortest(config.dc.tol) << '\n'
            << "cg_tol=" << shortest(config.dc.cg_tol) << '\n'
            << "scalar_tol=" << shortest(config.dc.scalar_tol) << '\n'
            << "rho=" << shortest(config.dc.rho) << '\n'
            << "max_iter=" << config.dc.max_iter << '\n';
    }
    if (config.plot) {
        std::ofstream out(dir / "plot.svg");
        if (!out) throw std::runtime_error("emit: cannot write plot.svg");
        write_loglog_svg(records, out);
    }
}

void write_solution(const NodalField& field, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << field.values.size() << '\n';
    for (double v : field.values) {
        out << shortest(v) << '\n';
    }
    if (!out.good()) throw std::runtime_error("write failed: " + path);
}

std::vector<double> read_solution(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open solution file: " + path);
    std::size_t n = 0;
    if (!(in >> n)) throw std::invalid_argument("solution file: bad header");
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::string token;
        if (!(in >> token)) throw std::invalid_argument("solution file: truncated");
        values[i] = parse_double(token);
    }
    return values;
}

std::string solution_filename(double b, int grid_side) {
    return "solution_b" + shortest(b) + "_n" + std::to_string(grid_side) + ".txt";
}

}  // namespace pxfem
