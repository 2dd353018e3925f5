// Experiment runner: every subcommand reads a system (preset or JSON file),
// runs one module-level experiment, and writes a JSON summary plus CSV
// tables and SVG plots into --out. All outputs are deterministic for a
// fixed seed (floats at 17 significant digits, no timestamps).

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "skewsim/attractor.hpp"
#include "skewsim/ergodic.hpp"
#include "skewsim/measures.hpp"
#include "skewsim/report.hpp"
#include "skewsim/rng.hpp"
#include "skewsim/skew_system.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace skewsim;

namespace {

struct CommonOpts {
  std::string preset = "default";
  std::string system_file;
  std::string out_dir = ".";
  std::uint64_t seed = 1;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--preset", c.preset, "System preset: default | bony");
  cmd->add_option("--system", c.system_file, "System JSON file (overrides --preset)");
  cmd->add_option("--out", c.out_dir, "Output directory");
  cmd->add_option("--seed", c.seed, "Master seed");
}

SkewSystem make_preset(const std::string& name) {
  if (name == "default") return make_default_step_system();
  if (name == "bony") return make_bony_perturbation(make_default_step_system(), 2);
  throw std::invalid_argument("unknown preset: " + name +
                              " (expected default | bony)");
}

SkewSystem load_system(const CommonOpts& c) {
  if (c.system_file.empty()) return make_preset(c.preset);
  std::ifstream in(c.system_file);
  if (!in) throw std::runtime_error("cannot read " + c.system_file);
  json j;
  in >> j;
  return j.get<SkewSystem>();
}

std::string system_stamp(const SkewSystem& s) {
  const std::string text = json(s).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_summary(const CommonOpts& c, const std::string& subcommand,
                   const SkewSystem& s, json config, json result) {
  json summary = {{"subcommand", subcommand},
                  {"config", std::move(config)},
                  {"seed", c.seed},
                  {"system_stamp", system_stamp(s)},
                  {"result", std::move(result)}};
  summary["config"]["preset"] = c.preset;
  summary["config"]["system_file"] = c.system_file;
  write_text_file((fs::path(c.out_dir) / (subcommand + ".json")).string(),
                  summary.dump(2) + "\n");
}

std::string kind_name(FiberKind k) {
  switch (k) {
    case FiberKind::Point: return "point";
    case FiberKind::Bone: return "bone";
    default: return "indeterminate";
  }
}

// Deterministic family of targeted words: the first n binary words of
// length 5 in lexicographic order, placed at indices -5..-1 between two
// constant-0 tails.
std::vector<SymbolWindow> targeted_windows(int k, int n) {
  std::vector<SymbolWindow> out;
  const int len = 5;
  for (int v = 0; v < n; ++v) {
    std::vector<int> word(len);
    for (int i = 0; i < len; ++i) word[i] = (v >> (len - 1 - i)) & 1;
    out.emplace_back(k, -len, word, Tail::constant(0), Tail::constant(0));
  }
  return out;
}

CsvTable census_table(const CensusRecord& rec, const std::string& origin) {
  CsvTable t;
  t.columns = {"digest", "origin", "kind", "value", "lo", "hi", "width", "depth"};
  for (const auto& row : rec.rows)
    t.add_row({row.digest, origin, kind_name(row.cls.kind),
               format_double(row.cls.value), format_double(row.cls.lo),
               format_double(row.cls.hi), format_double(row.cls.width),
               std::to_string(row.cls.depth)});
  return t;
}

std::vector<double> parse_deltas(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  if (out.empty()) throw std::invalid_argument("empty --deltas list");
  return out;
}

// ---------------------------------------------------------------- plotting

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  if (rows.size() < 2) throw std::runtime_error("malformed CSV: " + path);
  return rows;
}

int column_index(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end())
    throw std::runtime_error("CSV column not found: " + name);
  return static_cast<int>(it - header.begin());
}

std::string plot_csv(const std::string& csv_path, const std::string& kind) {
  const auto rows = read_csv(csv_path);
  const auto& header = rows.front();
  if (kind == "graph-scatter") {
    const int ci = column_index(header, "id");
    const int cg = column_index(header, "gamma");
    PlotSeries s;
    for (std::size_t i = 1; i < rows.size(); ++i)
      s.points.push_back({std::stod(rows[i][ci]), std::stod(rows[i][cg])});
    return render_svg({s}, PlotKind::Scatter, "sample", "gamma",
                      "invariant graph sample");
  }
  if (kind == "width-histogram") {
    const int cw = column_index(header, "width");
    std::vector<double> widths;
    for (std::size_t i = 1; i < rows.size(); ++i)
      widths.push_back(std::stod(rows[i][cw]));
    const double wmax = std::max(1e-12, *std::max_element(widths.begin(), widths.end()));
    const int bins = 40;
    std::vector<int> counts(bins, 0);
    for (double w : widths) {
      int b = std::min(bins - 1, static_cast<int>(w / wmax * bins));
      ++counts[b];
    }
    PlotSeries s;
    for (int b = 0; b < bins; ++b)
      s.points.push_back({(b + 0.5) * wmax / bins, static_cast<double>(counts[b])});
    return render_svg({s}, PlotKind::Bars, "fiber width", "count",
                      "fiber width histogram");
  }
  if (kind == "decay-curve") {
    const int cl = column_index(header, "lag");
    const int cc = column_index(header, "c");
    PlotSeries s;
    for (std::size_t i = 1; i < rows.size(); ++i)
      s.points.push_back({std::stod(rows[i][cl]), std::stod(rows[i][cc])});
    return render_svg({s}, PlotKind::Line, "lag", "|C_n|", "correlation decay");
  }
  if (kind == "sweep-lines") {
    const int cd = column_index(header, "delta");
    std::vector<PlotSeries> series;
    for (std::size_t col = 0; col < header.size(); ++col) {
      if (static_cast<int>(col) == cd) continue;
      PlotSeries s;
      s.label = header[col];
      for (std::size_t i = 1; i < rows.size(); ++i)
        s.points.push_back({std::stod(rows[i][cd]), std::stod(rows[i][col])});
      series.push_back(std::move(s));
    }
    return render_svg(series, PlotKind::Line, "delta", "value",
                      "perturbation sweep");
  }
  throw std::invalid_argument("unknown plot kind: " + kind);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random skew products over the Bernoulli shift"};
  app.require_subcommand(1);

  CommonOpts common;
  int grid = 10000, depth = 200, samples = 1000, bins = 1000;
  int horizon = 10000, max_iter = 5000, targeted_words = 0;
  double tol = 1e-6, epsilon = 0.1, eps_bone = 1e-4, delta = 0.02;
  double grid_step = 0.01;
  std::string deltas = "0.04,0.02,0.01";
  std::string lags = "0,1,2,5,10,20,50";
  std::string system2_file, csv_path, plot_kind;

  auto* c_check = app.add_subcommand("check-conditions", "verify the step-system hypotheses");
  add_common(c_check, common);
  c_check->add_option("--grid", grid, "verification grid size");

  auto* c_graph = app.add_subcommand("graph", "sample the invariant graph");
  add_common(c_graph, common);
  c_graph->add_option("--depth", depth);
  c_graph->add_option("--samples", samples);

  auto* c_bones = app.add_subcommand("bones", "fiber classification census");
  add_common(c_bones, common);
  c_bones->add_option("--depth", depth);
  c_bones->add_option("--samples", samples);
  c_bones->add_option("--epsilon-bone", eps_bone);
  c_bones->add_option("--targeted-words", targeted_words,
                      "also classify this many targeted 0-tail words");

  auto* c_thick = app.add_subcommand("thickness", "backward-coding coverage of B");
  add_common(c_thick, common);
  c_thick->add_option("--depth", depth);
  c_thick->add_option("--grid-step", grid_step);

  auto* c_lyap = app.add_subcommand("lyapunov", "fiber Lyapunov exponent estimates");
  add_common(c_lyap, common);
  c_lyap->add_option("--depth", depth);
  c_lyap->add_option("--samples", samples);
  c_lyap->add_option("--grid", grid);
  c_lyap->add_option("--bins", bins);

  auto* c_stat = app.add_subcommand("stationary", "stationary measure by power iteration");
  add_common(c_stat, common);
  c_stat->add_option("--bins", bins);
  c_stat->add_option("--tol", tol);
  c_stat->add_option("--max-iter", max_iter);

  auto* c_hutch = app.add_subcommand("hutchinson", "Hutchinson-metric diagnostics of the stationary measure");
  add_common(c_hutch, common);
  c_hutch->add_option("--bins", bins);
  c_hutch->add_option("--tol", tol);

  auto* c_stab = app.add_subcommand("stability", "orbit exceedance statistics under perturbation");
  add_common(c_stab, common);
  c_stab->add_option("--samples", samples);
  c_stab->add_option("--horizon", horizon);
  c_stab->add_option("--epsilon", epsilon);
  c_stab->add_option("--delta", delta, "C2 distance of the comparison system");
  c_stab->add_option("--system2", system2_file, "explicit comparison system JSON");

  auto* c_gdist = app.add_subcommand("graph-distance", "bracket of the graph-measure distance");
  add_common(c_gdist, common);
  c_gdist->add_option("--samples", samples);
  c_gdist->add_option("--depth", depth);
  c_gdist->add_option("--delta", delta);
  c_gdist->add_option("--system2", system2_file);

  auto* c_gmeas = app.add_subcommand("graph-measure", "sample the graph measure and its fiber marginal");
  add_common(c_gmeas, common);
  c_gmeas->add_option("--samples", samples);
  c_gmeas->add_option("--depth", depth);
  c_gmeas->add_option("--bins", bins);

  auto* c_mix = app.add_subcommand("mixing", "correlation-decay proxy along the graph");
  add_common(c_mix, common);
  c_mix->add_option("--samples", samples);
  c_mix->add_option("--depth", depth);
  c_mix->add_option("--lags", lags);

  auto* c_sweep = app.add_subcommand("sweep", "perturbation sweep over C2 distances");
  add_common(c_sweep, common);
  c_sweep->add_option("--deltas", deltas);
  c_sweep->add_option("--samples", samples);
  c_sweep->add_option("--depth", depth);
  c_sweep->add_option("--horizon", horizon);
  c_sweep->add_option("--epsilon", epsilon);

  auto* c_plot = app.add_subcommand("plot", "render an SVG from a CSV produced by run");
  c_plot->add_option("--csv", csv_path)->required();
  c_plot->add_option("--kind", plot_kind,
                     "graph-scatter | width-histogram | decay-curve | sweep-lines")
      ->required();
  c_plot->add_option("--out", common.out_dir);

  CLI11_PARSE(app, argc, argv);

  try {
    fs::create_directories(common.out_dir);
    const fs::path out(common.out_dir);

    if (c_plot->parsed()) {
      const std::string svg = plot_csv(csv_path, plot_kind);
      write_text_file((out / (plot_kind + ".svg")).string(), svg);
      return 0;
    }

    const SkewSystem sys = load_system(common);

    if (c_check->parsed()) {
      const ConditionReport rep = check_conditions(sys, grid);
      write_summary(common, "check-conditions", sys, {{"grid", grid}},
                    rep.to_json());
      std::cout << rep.to_json().dump(2) << "\n";
      if (!rep.all_pass()) return 2;
    } else if (c_graph->parsed() || c_gmeas->parsed()) {
      const std::string name = c_graph->parsed() ? "graph" : "graph-measure";
      const ProductSample ps = graph_measure(sys, samples, depth, common.seed);
      CsvTable t;
      t.columns = {"id", "digest", "gamma"};
      for (const auto& r : ps.rows)
        t.add_row({std::to_string(r.id), r.digest, format_double(r.gamma)});
      t.write((out / (name + ".csv")).string());
      json result = {{"n_samples", samples},
                     {"used", ps.rows.size()},
                     {"bones_excluded", ps.bones_excluded}};
      if (c_gmeas->parsed()) {
        const DiscreteMeasure marginal = ps.fiber_marginal_histogram(bins);
        CsvTable mt;
        mt.columns = {"bin", "weight"};
        for (int b = 0; b < marginal.n_bins(); ++b)
          mt.add_row({std::to_string(b), format_double(marginal.weights()[b])});
        mt.write((out / "graph-measure-marginal.csv").string());
        if (sys.is_step()) {
          const StationaryResult st =
              stationary_measure(sys.step_maps(), bins, 1e-8, max_iter);
          result["marginal_vs_stationary"] =
              hutchinson_distance(marginal, st.measure);
        }
      } else {
        write_text_file((out / "graph.svg").string(),
                        plot_csv((out / "graph.csv").string(), "graph-scatter"));
      }
      write_summary(common, name, sys,
                    {{"depth", depth}, {"samples", samples}, {"bins", bins}},
                    result);
    } else if (c_bones->parsed()) {
      const CensusRecord rec =
          bone_census(sys, samples, depth, eps_bone, common.seed);
      CsvTable t = census_table(rec, "bernoulli");
      int targeted_bones = 0;
      if (targeted_words > 0) {
        const CensusRecord trec = targeted_census(
            sys, targeted_windows(sys.alphabet_size(), targeted_words), depth,
            eps_bone);
        const CsvTable tt = census_table(trec, "targeted");
        for (const auto& row : tt.rows) t.rows.push_back(row);
        targeted_bones = trec.bones;
      }
      t.write((out / "bones.csv").string());
      write_text_file((out / "bones.svg").string(),
                      plot_csv((out / "bones.csv").string(), "width-histogram"));
      write_summary(common, "bones", sys,
                    {{"depth", depth},
                     {"samples", samples},
                     {"epsilon_bone", eps_bone},
                     {"targeted_words", targeted_words}},
                    {{"points", rec.points},
                     {"bones", rec.bones},
                     {"indeterminate", rec.indeterminate},
                     {"targeted_bones", targeted_bones}});
    } else if (c_thick->parsed()) {
      const auto& meta = sys.metadata();
      const double x0 = meta.at("B").at(0).get<double>();
      const double x1 = meta.at("B").at(1).get<double>();
      const CoverageRecord rec = thickness_coverage(sys, x0, x1, grid_step, depth);
      CsvTable t;
      t.columns = {"x", "lo", "hi", "width"};
      for (const auto& r : rec.rows)
        t.add_row({format_double(r.x), format_double(r.lo),
                   format_double(r.hi), format_double(r.width())});
      t.write((out / "thickness.csv").string());
      write_summary(common, "thickness", sys,
                    {{"depth", depth}, {"grid_step", grid_step}},
                    {{"coverage", rec.coverage}, {"rows", rec.rows.size()}});
    } else if (c_lyap->parsed()) {
      const ExponentEstimate sup =
          sup_norm_exponent(sys, depth, grid == 10000 ? 256 : grid, samples,
                            common.seed);
      const ExponentEstimate pt =
          pointwise_exponent(sys, depth, samples, common.seed);
      json result = {{"sup_norm", {{"value", sup.value}, {"std_error", sup.std_error}}},
                     {"pointwise", {{"value", pt.value}, {"std_error", pt.std_error}}}};
      if (sys.is_step()) {
        const StationaryResult st =
            stationary_measure(sys.step_maps(), bins, 1e-8, max_iter);
        result["stationary_integral"] =
            stationary_integral_exponent(st.measure, sys.step_maps());
      }
      CsvTable t;
      t.columns = {"estimator", "value", "std_error", "depth", "samples"};
      t.add_row({"sup_norm", format_double(sup.value), format_double(sup.std_error),
                 std::to_string(depth), std::to_string(samples)});
      t.add_row({"pointwise", format_double(pt.value), format_double(pt.std_error),
                 std::to_string(depth), std::to_string(samples)});
      t.write((out / "lyapunov.csv").string());
      write_summary(common, "lyapunov", sys,
                    {{"depth", depth}, {"samples", samples}, {"grid", grid}},
                    result);
    } else if (c_stat->parsed()) {
      const StationaryResult st =
          stationary_measure(sys.step_maps(), bins, tol, max_iter);
      CsvTable t;
      t.columns = {"bin", "weight"};
      for (int b = 0; b < st.measure.n_bins(); ++b)
        t.add_row({std::to_string(b), format_double(st.measure.weights()[b])});
      t.write((out / "stationary.csv").string());
      const double residual = hutchinson_distance(
          st.measure, transfer_apply(st.measure, sys.step_maps()));
      write_summary(common, "stationary", sys,
                    {{"bins", bins}, {"tol", tol}, {"max_iter", max_iter}},
                    {{"iterations", st.iterations},
                     {"final_delta", st.final_delta},
                     {"stationarity_residual", residual}});
    } else if (c_hutch->parsed()) {
      const StationaryResult st =
          stationary_measure(sys.step_maps(), bins, tol, max_iter);
      const DiscreteMeasure uniform = DiscreteMeasure::uniform_histogram(bins);
      write_summary(common, "hutchinson", sys, {{"bins", bins}, {"tol", tol}},
                    {{"residual", hutchinson_distance(
                          st.measure, transfer_apply(st.measure, sys.step_maps()))},
                     {"distance_to_uniform",
                      hutchinson_distance(st.measure, uniform)},
                     {"iterations", st.iterations}});
    } else if (c_stab->parsed() || c_gdist->parsed()) {
      SkewSystem other = system2_file.empty()
                             ? make_shifted_step_system(delta)
                             : [&] {
                                 CommonOpts o = common;
                                 o.system_file = system2_file;
                                 return load_system(o);
                               }();
      if (c_stab->parsed()) {
        const StabilityRecord rec =
            orbit_stability(sys, other, samples, horizon, epsilon, common.seed);
        CsvTable t;
        t.columns = {"sample", "exceedance"};
        for (std::size_t i = 0; i < rec.exceedance.size(); ++i)
          t.add_row({std::to_string(i), format_double(rec.exceedance[i])});
        t.write((out / "stability.csv").string());
        write_summary(common, "stability", sys,
                      {{"samples", samples},
                       {"horizon", horizon},
                       {"epsilon", epsilon},
                       {"delta", delta},
                       {"system2", system2_file}},
                      {{"median", rec.median},
                       {"mean", rec.mean},
                       {"dist_c2", dist_c2(sys, other)}});
      } else {
        const GraphDistanceResult rec =
            graph_distance(sys, other, samples, depth, common.seed);
        write_summary(common, "graph-distance", sys,
                      {{"samples", samples},
                       {"depth", depth},
                       {"delta", delta},
                       {"system2", system2_file}},
                      {{"lower", rec.lower},
                       {"upper", rec.upper},
                       {"used", rec.n_used},
                       {"bones_excluded", rec.bones_excluded}});
      }
    } else if (c_mix->parsed()) {
      std::vector<int> lag_list;
      for (double d : parse_deltas(lags)) lag_list.push_back(static_cast<int>(d));
      const DecayRecord rec =
          correlation_decay(sys, depth, lag_list, samples, common.seed);
      CsvTable t;
      t.columns = {"lag", "c", "std_error"};
      for (std::size_t i = 0; i < lag_list.size(); ++i)
        t.add_row({std::to_string(lag_list[i]), format_double(rec.c[i]),
                   format_double(rec.std_error[i])});
      t.write((out / "mixing.csv").string());
      write_text_file((out / "mixing.svg").string(),
                      plot_csv((out / "mixing.csv").string(), "decay-curve"));
      write_summary(common, "mixing", sys,
                    {{"depth", depth}, {"samples", samples}, {"lags", lags}},
                    {{"n_samples", rec.n_samples},
                     {"bones_excluded", rec.bones_excluded}});
    } else if (c_sweep->parsed()) {
      CsvTable t;
      t.columns = {"delta", "dist_C2", "graph_distance_U", "exceedance_median"};
      json rows = json::array();
      for (double d : parse_deltas(deltas)) {
        const SkewSystem other = make_shifted_step_system(d);
        const double dc2 = dist_c2(sys, other);
        const GraphDistanceResult gd =
            graph_distance(sys, other, samples, depth, common.seed);
        const StabilityRecord st =
            orbit_stability(sys, other, samples, horizon, epsilon, common.seed);
        t.add_row({format_double(d), format_double(dc2),
                   format_double(gd.upper), format_double(st.median)});
        rows.push_back({{"delta", d},
                        {"dist_c2", dc2},
                        {"graph_distance_upper", gd.upper},
                        {"graph_distance_lower", gd.lower},
                        {"exceedance_median", st.median}});
      }
      t.write((out / "sweep.csv").string());
      write_text_file((out / "sweep.svg").string(),
                      plot_csv((out / "sweep.csv").string(), "sweep-lines"));
      write_summary(common, "sweep", sys,
                    {{"deltas", deltas},
                     {"samples", samples},
                     {"depth", depth},
                     {"horizon", horizon},
                     {"epsilon", epsilon}},
                    {{"rows", rows}});
    }
    return 0;
  } catch (const std::exception& e) {
    const json err = {{"error", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
}
