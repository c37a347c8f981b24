#include "cspt/scan.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cspt::scan {

namespace {

using nlohmann::json;

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t point_seed(std::uint64_t base, double lambda, double u) {
  const std::uint64_t a = std::bit_cast<std::uint64_t>(lambda);
  const std::uint64_t b = std::bit_cast<std::uint64_t>(u);
  return mix64(mix64(base ^ a) ^ b);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

PhasePoint run_point(double lambda, double u, const SweepConfig& cfg) {
  PhasePoint pt;
  pt.lambda = lambda;
  pt.u = u;
  try {
    const parent::HamiltonianSpec spec = parent::hamiltonian_spec(lambda, u);
    itebd::EvolutionConfig evo = cfg.evolution;
    evo.seed = point_seed(cfg.evolution.seed, lambda, u);
    const itebd::EvolutionResult res = itebd::find_ground_states(spec, evo);

    pt.converged = res.converged;
    pt.steps_used = res.steps_used;
    pt.energy_per_site = res.energy_per_site;
    pt.final_residual_left = res.residual_left.empty() ? 0 : res.residual_left.back();
    pt.final_residual_right = res.residual_right.empty() ? 0 : res.residual_right.back();
    if (res.measured) {
      pt.es_doublet_split_left = spt::leading_doublet_split(res.left);
      pt.es_doublet_split_right = spt::leading_doublet_split(res.right);
      try {
        pt.indices_left = spt::extract_indices(res.left);
      } catch (const Error& e) {
        pt.indices_left.failure = e.what();
      }
      try {
        pt.indices_right = spt::extract_indices(res.right);
      } catch (const Error& e) {
        pt.indices_right.failure = e.what();
      }
    }
    // Non-convergence is treated as gapless territory; the label stays
    // "unconverged" even when indices were extractable.
    pt.phase_label = pt.converged
                         ? spt::classify_pair(pt.indices_left, pt.indices_right)
                         : "unconverged";
  } catch (const std::exception& e) {
    pt.converged = false;
    pt.phase_label = "unconverged";
    if (pt.indices_left.failure.empty()) pt.indices_left.failure = e.what();
  }
  return pt;
}

std::vector<PhasePoint> run_sweep(const SweepConfig& cfg) {
  if (cfg.lambda_grid.empty() || cfg.u_grid.empty())
    throw UsageError("run_sweep: empty grid");
  const i64 nl = static_cast<i64>(cfg.lambda_grid.size());
  const i64 nu = static_cast<i64>(cfg.u_grid.size());
  std::vector<PhasePoint> points(static_cast<size_t>(nl * nu));

#ifdef _OPENMP
  const int threads = cfg.parallelism > 0 ? cfg.parallelism : omp_get_max_threads();
#else
  const int threads = 1;
#endif
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (i64 idx = 0; idx < nl * nu; ++idx) {
    const double u = cfg.u_grid[static_cast<size_t>(idx / nl)];
    const double lambda = cfg.lambda_grid[static_cast<size_t>(idx % nl)];
    points[static_cast<size_t>(idx)] = run_point(lambda, u, cfg);
  }

  std::string out_dir = cfg.output_dir;
  if (const char* env = std::getenv("CSPT_OUTPUT_DIR"); env && *env) out_dir = env;
  std::filesystem::create_directories(out_dir);
  write_csv(points, out_dir + "/results.csv");
  write_json(points, out_dir + "/results.json");
  if (cfg.emit_svg) {
    std::ofstream p(out_dir + "/phase_map.svg");
    p << svg_phase_map(points);
    std::ofstream r(out_dir + "/residual_map.svg");
    r << svg_residual_map(points);
    if (!p || !r) throw Error("failed to write SVG artifacts to " + out_dir);
  }
  return points;
}

void write_csv(const std::vector<PhasePoint>& points, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open for writing: " + path);
  os << "lambda,u,omega_L,omega_R,beta_L,beta_R,gamma_gx_L,gamma_gx_R,"
        "gamma_gz_L,gamma_gz_R,energy_re,energy_im,residual_L,residual_R,"
        "steps,converged,label\n";
  for (const PhasePoint& p : points) {
    os << fmt(p.lambda) << "," << fmt(p.u) << "," << p.indices_left.omega.rounded
       << "," << p.indices_right.omega.rounded << "," << p.indices_left.beta.rounded
       << "," << p.indices_right.beta.rounded << ","
       << p.indices_left.gamma_gx.rounded << "," << p.indices_right.gamma_gx.rounded
       << "," << p.indices_left.gamma_gz.rounded << ","
       << p.indices_right.gamma_gz.rounded << "," << fmt(p.energy_per_site.real())
       << "," << fmt(p.energy_per_site.imag()) << ","
       << fmt(p.final_residual_left) << "," << fmt(p.final_residual_right) << ","
       << p.steps_used << "," << (p.converged ? 1 : 0) << "," << p.phase_label
       << "\n";
  }
  if (!os) throw Error("write failed: " + path);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(field);
  return out;
}

spt::IndexValue value_from_rounded(int rounded) {
  spt::IndexValue v;
  v.rounded = rounded;
  v.raw = static_cast<double>(rounded);
  v.determinate = rounded != 0;
  v.distance = 0;
  return v;
}

}  // namespace

std::vector<PhasePoint> read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(is, line)) throw Error("empty CSV: " + path);
  std::vector<PhasePoint> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 17) throw Error("malformed CSV row in " + path);
    PhasePoint p;
    p.lambda = std::stod(f[0]);
    p.u = std::stod(f[1]);
    p.indices_left.omega = value_from_rounded(std::stoi(f[2]));
    p.indices_right.omega = value_from_rounded(std::stoi(f[3]));
    p.indices_left.beta = value_from_rounded(std::stoi(f[4]));
    p.indices_right.beta = value_from_rounded(std::stoi(f[5]));
    p.indices_left.gamma_gx = value_from_rounded(std::stoi(f[6]));
    p.indices_right.gamma_gx = value_from_rounded(std::stoi(f[7]));
    p.indices_left.gamma_gz = value_from_rounded(std::stoi(f[8]));
    p.indices_right.gamma_gz = value_from_rounded(std::stoi(f[9]));
    p.energy_per_site = cx{std::stod(f[10]), std::stod(f[11])};
    p.final_residual_left = std::stod(f[12]);
    p.final_residual_right = std::stod(f[13]);
    p.steps_used = std::stoll(f[14]);
    p.converged = f[15] == "1";
    p.phase_label = f[16];
    out.push_back(std::move(p));
  }
  return out;
}

bool csv_equal(const PhasePoint& a, const PhasePoint& b) {
  const auto same = [](double x, double y) {
    return (std::isnan(x) && std::isnan(y)) || x == y;
  };
  return same(a.lambda, b.lambda) && same(a.u, b.u) &&
         a.indices_left.omega.rounded == b.indices_left.omega.rounded &&
         a.indices_right.omega.rounded == b.indices_right.omega.rounded &&
         a.indices_left.beta.rounded == b.indices_left.beta.rounded &&
         a.indices_right.beta.rounded == b.indices_right.beta.rounded &&
         a.indices_left.gamma_gx.rounded == b.indices_left.gamma_gx.rounded &&
         a.indices_right.gamma_gx.rounded == b.indices_right.gamma_gx.rounded &&
         a.indices_left.gamma_gz.rounded == b.indices_left.gamma_gz.rounded &&
         a.indices_right.gamma_gz.rounded == b.indices_right.gamma_gz.rounded &&
         same(a.energy_per_site.real(), b.energy_per_site.real()) &&
         same(a.energy_per_site.imag(), b.energy_per_site.imag()) &&
         same(a.final_residual_left, b.final_residual_left) &&
         same(a.final_residual_right, b.final_residual_right) &&
         a.steps_used == b.steps_used && a.converged == b.converged &&
         a.phase_label == b.phase_label;
}

namespace {

json value_json(const spt::IndexValue& v) {
  return json{{"raw", {v.raw.real(), v.raw.imag()}},
              {"rounded", v.rounded},
              {"determinate", v.determinate},
              {"distance", v.distance}};
}

json report_json(const spt::IndexReport& r) {
  json j{{"omega", value_json(r.omega)},
         {"beta", value_json(r.beta)},
         {"gamma_gx", value_json(r.gamma_gx)},
         {"gamma_gz", value_json(r.gamma_gz)},
         {"dominance",
          {{"gx", r.dominance_gx}, {"gz", r.dominance_gz}, {"T", r.dominance_t}}},
         {"alpha",
          {{"gx", {r.alpha_gx.real(), r.alpha_gx.imag()}},
           {"gz", {r.alpha_gz.real(), r.alpha_gz.imag()}},
           {"T", {r.alpha_t.real(), r.alpha_t.imag()}}}}};
  if (!r.failure.empty()) j["failure"] = r.failure;
  return j;
}

}  // namespace

std::string index_report_json(const spt::IndexReport& report) {
  return report_json(report).dump(2);
}

void write_json(const std::vector<PhasePoint>& points, const std::string& path) {
  json arr = json::array();
  for (const PhasePoint& p : points) {
    arr.push_back(json{
        {"lambda", p.lambda},
        {"u", p.u},
        {"left", report_json(p.indices_left)},
        {"right", report_json(p.indices_right)},
        {"label", p.phase_label},
        {"energy_per_site", {p.energy_per_site.real(), p.energy_per_site.imag()}},
        {"residual_left", p.final_residual_left},
        {"residual_right", p.final_residual_right},
        {"steps", p.steps_used},
        {"converged", p.converged},
        {"es_doublet_split_left", p.es_doublet_split_left},
        {"es_doublet_split_right", p.es_doublet_split_right}});
  }
  std::ofstream os(path);
  if (!os) throw Error("cannot open for writing: " + path);
  os << arr.dump(2) << "\n";
  if (!os) throw Error("write failed: " + path);
}

std::array<int, 3> rgb_channels(double gamma_gz_left, double gamma_gz_right,
                                double omega) {
  const auto chan = [](double v) {
    const double c = v / 5.0 + 0.6;
    const long b = std::lround(c * 255.0);
    return static_cast<int>(std::clamp<long>(b, 0, 255));
  };
  return {chan(gamma_gz_left), chan(gamma_gz_right), chan(omega)};
}

namespace {

struct GridLayout {
  std::vector<double> xs, ys;  // sorted lambda, u values
  std::map<std::pair<double, double>, const PhasePoint*> cells;
};

GridLayout layout(const std::vector<PhasePoint>& points) {
  GridLayout g;
  std::set<double> xs, ys;
  for (const auto& p : points) {
    xs.insert(p.lambda);
    ys.insert(p.u);
    if (!g.cells.emplace(std::make_pair(p.lambda, p.u), &p).second)
      throw Error("svg layout: duplicate grid point");
  }
  g.xs.assign(xs.begin(), xs.end());
  g.ys.assign(ys.begin(), ys.end());
  if (g.cells.size() != g.xs.size() * g.ys.size())
    throw Error("svg layout: grid is not rectangular");
  return g;
}

constexpr int kCell = 26;
constexpr int kMarginL = 74;
constexpr int kMarginB = 46;
constexpr int kMarginT = 16;
constexpr int kMarginR = 16;

std::string svg_open(const GridLayout& g, const std::string& title) {
  const size_t w = kMarginL + kCell * g.xs.size() + kMarginR;
  const size_t h = kMarginT + kCell * g.ys.size() + kMarginB;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
     << "\" height=\"" << h << "\">\n";
  os << "<title>" << title << "</title>\n";
  os << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  return os.str();
}

std::string svg_axes(const GridLayout& g) {
  std::ostringstream os;
  const size_t plot_h = kCell * g.ys.size();
  const size_t plot_w = kCell * g.xs.size();
  os << "<text x=\"" << kMarginL << "\" y=\"" << kMarginT + plot_h + 18
     << "\" font-size=\"12\">" << g.xs.front() << "</text>\n";
  os << "<text x=\"" << kMarginL + plot_w - 10 << "\" y=\"" << kMarginT + plot_h + 18
     << "\" font-size=\"12\">" << g.xs.back() << "</text>\n";
  os << "<text x=\"" << kMarginL + plot_w / 2 << "\" y=\"" << kMarginT + plot_h + 36
     << "\" font-size=\"13\" text-anchor=\"middle\">lambda</text>\n";
  os << "<text x=\"" << kMarginL - 8 << "\" y=\"" << kMarginT + plot_h
     << "\" font-size=\"12\" text-anchor=\"end\">" << g.ys.front() << "</text>\n";
  os << "<text x=\"" << kMarginL - 8 << "\" y=\"" << kMarginT + 10
     << "\" font-size=\"12\" text-anchor=\"end\">" << g.ys.back() << "</text>\n";
  os << "<text x=\"" << kMarginL - 40 << "\" y=\"" << kMarginT + plot_h / 2
     << "\" font-size=\"13\" text-anchor=\"middle\">U</text>\n";
  return os.str();
}

void cell_origin(const GridLayout& g, size_t ix, size_t iy, int& x, int& y) {
  x = static_cast<int>(kMarginL + kCell * ix);
  // u grows upward
  y = static_cast<int>(kMarginT + kCell * (g.ys.size() - 1 - iy));
}

}  // namespace

std::string svg_phase_map(const std::vector<PhasePoint>& points) {
  const GridLayout g = layout(points);
  std::ostringstream os;
  os << svg_open(g, "phase map");
  for (size_t iy = 0; iy < g.ys.size(); ++iy)
    for (size_t ix = 0; ix < g.xs.size(); ++ix) {
      const PhasePoint& p = *g.cells.at({g.xs[ix], g.ys[iy]});
      int x, y;
      cell_origin(g, ix, iy, x, y);
      if (p.converged) {
        const auto rgb = rgb_channels(p.indices_left.gamma_gz.raw.real(),
                                      p.indices_right.gamma_gz.raw.real(),
                                      p.indices_right.omega.raw.real());
        os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCell
           << "\" height=\"" << kCell << "\" fill=\"rgb(" << rgb[0] << ","
           << rgb[1] << "," << rgb[2] << ")\"/>\n";
      } else {
        // Unconverged cells are first-class data: gray with a hatch mark.
        os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCell
           << "\" height=\"" << kCell << "\" fill=\"rgb(127,127,127)\"/>\n";
        os << "<line x1=\"" << x << "\" y1=\"" << y << "\" x2=\"" << x + kCell
           << "\" y2=\"" << y + kCell << "\" stroke=\"white\" stroke-width=\"1\"/>\n";
        os << "<line x1=\"" << x + kCell << "\" y1=\"" << y << "\" x2=\"" << x
           << "\" y2=\"" << y + kCell << "\" stroke=\"white\" stroke-width=\"1\"/>\n";
      }
    }
  os << svg_axes(g);
  os << "</svg>\n";
  return os.str();
}

std::string svg_residual_map(const std::vector<PhasePoint>& points) {
  const GridLayout g = layout(points);
  std::ostringstream os;
  os << svg_open(g, "residual map (log10 e)");
  for (size_t iy = 0; iy < g.ys.size(); ++iy)
    for (size_t ix = 0; ix < g.xs.size(); ++ix) {
      const PhasePoint& p = *g.cells.at({g.xs[ix], g.ys[iy]});
      int x, y;
      cell_origin(g, ix, iy, x, y);
      const double e =
          std::max({p.final_residual_left, p.final_residual_right, 1e-16});
      const double t = std::clamp((std::log10(e) + 16.0) / 16.0, 0.0, 1.0);
      const int r = static_cast<int>(std::lround(255.0 * t));
      const int b = static_cast<int>(std::lround(255.0 * (1.0 - t)));
      os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCell
         << "\" height=\"" << kCell << "\" fill=\"rgb(" << r << ",48," << b
         << ")\"/>\n";
    }
  os << svg_axes(g);
  os << "</svg>\n";
  return os.str();
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_grid(const std::string& value) {
  std::vector<double> out;
  if (value.find(':') != std::string::npos) {
    // min:max:step expansion, inclusive of max within half a step.
    double lo, hi, step;
    char c1, c2;
    std::istringstream is(value);
    if (!(is >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' ||
        step <= 0)
      throw UsageError("bad grid range: " + value);
    for (double v = lo; v <= hi + 0.5 * step; v += step)
      out.push_back(std::min(v, hi));
    return out;
  }
  std::istringstream is(value);
  std::string item;
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(std::stod(item));
  }
  if (out.empty()) throw UsageError("empty grid: " + value);
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw UsageError("bad boolean: " + v);
}

}  // namespace

SweepConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot open config file: " + path);
  SweepConfig cfg;
  bool allow_any_box = false;
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      if (section != "grid" && section != "evolution" && section != "output" &&
          section != "run")
        throw UsageError("unknown config section [" + section + "] at line " +
                         std::to_string(lineno));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("expected key = value at line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string qual = section + "." + key;
    if (qual == "grid.lambda") cfg.lambda_grid = parse_grid(value);
    else if (qual == "grid.u") cfg.u_grid = parse_grid(value);
    else if (qual == "evolution.D") cfg.evolution.D = std::stoll(value);
    else if (qual == "evolution.dtau") cfg.evolution.dtau = std::stod(value);
    else if (qual == "evolution.epsilon") cfg.evolution.epsilon = std::stod(value);
    else if (qual == "evolution.max_steps") cfg.evolution.max_steps = std::stoll(value);
    else if (qual == "evolution.trotter_order") cfg.evolution.trotter_order = std::stoi(value);
    else if (qual == "evolution.seed") cfg.evolution.seed = std::stoull(value);
    else if (qual == "evolution.init") cfg.evolution.init = value;
    else if (qual == "evolution.weight_floor") cfg.evolution.weight_floor = std::stod(value);
    else if (qual == "evolution.checkpoint_every") cfg.evolution.checkpoint_every = std::stoll(value);
    else if (qual == "evolution.checkpoint_dir") cfg.evolution.checkpoint_dir = value;
    else if (qual == "output.dir") cfg.output_dir = value;
    else if (qual == "output.emit_svg") cfg.emit_svg = parse_bool(value);
    else if (qual == "run.parallelism") cfg.parallelism = std::stoi(value);
    else if (qual == "run.allow_any_box") allow_any_box = parse_bool(value);
    else
      throw UsageError("unknown config key '" + key + "' in section [" +
                       section + "] at line " + std::to_string(lineno));
  }
  if (cfg.lambda_grid.empty() || cfg.u_grid.empty())
    throw UsageError("config must define grid.lambda and grid.u");
  // Guard rails on the sweep box, overridable with run.allow_any_box.
  if (!allow_any_box) {
    for (double l : cfg.lambda_grid)
      if (l < 0.0 || l > 1.2)
        throw UsageError("lambda grid value outside [0, 1.2]: " + fmt(l) +
                         " (set run.allow_any_box = true to override)");
    for (double u : cfg.u_grid)
      if (u < 0.0 || u > 3.0)
        throw UsageError("u grid value outside [0, 3]: " + fmt(u) +
                         " (set run.allow_any_box = true to override)");
  }
  return cfg;
}

}  // namespace cspt::scan
