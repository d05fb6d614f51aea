#pragma once

// Command-line front end. run() is the whole program minus process setup so tests can
// drive it in-process.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dipole/entanglement.hpp"
#include "dipole/errors.hpp"
#include "dipole/ha_limit.hpp"
#include "dipole/parallel.hpp"
#include "dipole/pipeline.hpp"
#include "dipole/solver.hpp"
#include "dipole/twobody.hpp"

namespace dipole::cli {

enum ExitCode : int { ok = 0, failure = 1, config = 2, convergence = 3, numerical_quality = 4 };

using json = nlohmann::ordered_json;

struct Table1Row {
  double g;
  int size;
  double gamma_ref;
  double energy_ref;
};

inline const std::vector<Table1Row>& table1_reference() {
  static const std::vector<Table1Row> rows{
      {1e-4, 40, 1.577, 1.50333}, {1e-4, 50, 1.581, 1.50330}, {0.01, 40, 1.940, 1.58259}, {0.01, 50, 1.960, 1.58249},
      {1.0, 30, 4.092, 2.67084},  {1.0, 40, 4.228, 2.67079},  {5.0, 20, 5.942, 3.98386},  {5.0, 30, 6.240, 3.98383},
      {1000.0, 5, 30.37, 24.6666}, {1000.0, 10, 31.29, 24.6665}};
  return rows;
}

inline constexpr double table1_energy_tolerance = 2e-4;
inline constexpr double table1_gamma_tolerance = 0.01;  // relative

struct Table1Result {
  Table1Row ref;
  double gamma = 0.0;
  double energy = 0.0;
  bool energy_ok() const { return std::abs(energy - ref.energy_ref) <= table1_energy_tolerance; }
  bool gamma_ok() const { return std::abs(gamma / ref.gamma_ref - 1.0) <= table1_gamma_tolerance; }
};

inline std::vector<Table1Result> compute_table1() {
  const auto& rows = table1_reference();
  return parallel_map(rows.size(), [&](std::size_t i) {
    const auto& r = rows[i];
    Table1Result out{r};
    out.gamma = optimize_gamma(InteractionModel::strict1d(r.g), r.size).gamma_opt;
    out.energy = solve_strict1d(r.g, r.size, out.gamma, Parity::even, {.certify = false}).energy;
    return out;
  });
}

// Fixed-format number for CSV output.
inline std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c == '\n' ? ' ' : c;
  }
  return q + '"';
}

struct Options {
  double g = std::nan("");
  std::optional<double> eps;
  bool strict = false;
  bool ideal = false;
  std::string stat = "boson";
  int basis_size = 0;
  std::string gamma = "auto";
  std::optional<double> grid_l;
  std::optional<int> grid_n;
  int points = 61;
  double g_min = 1e-4;
  double g_max = 1e4;
  std::string out;
  std::string format;
  std::optional<double> q;
  std::string psi_out;
  std::string spectrum_out;
};

inline Statistics parse_stat(const std::string& s) {
  if (s == "boson") return Statistics::boson;
  if (s == "fermion") return Statistics::fermion;
  throw config_error("--stat must be boson or fermion");
}

inline PipelineOptions pipeline_options(const Options& o) {
  PipelineOptions p;
  p.basis_size = o.basis_size;
  if (o.gamma != "auto") {
    try {
      std::size_t used = 0;
      p.gamma = std::stod(o.gamma, &used);
      if (used != o.gamma.size()) throw std::invalid_argument(o.gamma);
    } catch (const std::logic_error&) {
      throw config_error("--gamma must be 'auto' or a number");
    }
  }
  p.grid_half_width = o.grid_l;
  p.grid_points = o.grid_n;
  return p;
}

// Exactly one of --eps / --strict for commands that solve an interacting model.
inline ModelChoice model_choice(const Options& o) {
  if (o.eps && o.strict) throw config_error("give either --eps or --strict, not both");
  if (o.eps) return ModelChoice::quasi(*o.eps);
  if (o.strict) return ModelChoice::strict();
  throw config_error("one of --eps or --strict is required");
}

inline void require_g(const Options& o) {
  if (std::isnan(o.g)) throw config_error("--g is required");
}

inline json convergence_json(const std::optional<Convergence>& c) {
  if (!c) return nullptr;
  return {{"reference_size", c->reference_size},
          {"energy_shift", c->energy_shift},
          {"tolerance", c->tolerance},
          {"converged", c->converged()},
          {"pointwise_shift", c->pointwise_shift}};
}

inline json relative_json(const RelativeSolution& r) {
  json j{{"energy", r.energy},
         {"parity", to_string(r.parity)},
         {"basis", r.basis.is_ho() ? (r.basis.kind == BasisSpec::Kind::ho_even ? "ho_even" : "ho_odd") : "pseudoharmonic"},
         {"basis_size", r.basis.size}};
  if (!r.basis.is_ho()) j["gamma"] = r.basis.gamma;
  j["convergence"] = convergence_json(r.convergence);
  return j;
}

inline json grid_json(const GridSpec& g) {
  return {{"half_width", g.half_width}, {"points", g.points}, {"spacing", g.spacing()}};
}

inline json spectrum_json(const EntanglementSpectrum& s, std::optional<double> q) {
  json lead = json::array();
  for (std::size_t l = 0; l < std::min<std::size_t>(10, s.occupancies.size()); ++l) lead.push_back(s.occupancies[l]);
  json j{{"statistics", to_string(s.statistics)},
         {"s_vn", s.s_vn},
         {"lambda_max", s.lambda_max()},
         {"schmidt_count", s.schmidt_count()},
         {"participation_ratio", s.participation_ratio},
         {"degeneracy", s.degeneracy()},
         {"leading_occupancies", lead}};
  if (q) {
    j["q"] = *q;
    j["renyi"] = renyi_entropy(s, *q);
  }
  return j;
}

class Writer {
 public:
  Writer(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw config_error("cannot open output file " + path);
      os_ = &file_;
    }
  }
  std::ostream& stream() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

inline void write_json(const json& j, const Options& o, std::ostream& out) {
  Writer w(o.out, out);
  w.stream() << j.dump(2) << '\n';
}

// Single-record CSV: header line of keys, one line of values (nested objects flattened).
inline void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& kv) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    const auto& v = it.value();
    if (v.is_object()) {
      flatten(v, key, kv);
    } else if (v.is_number_float()) {
      kv.emplace_back(key, num(v.get<double>()));
    } else if (v.is_string()) {
      kv.emplace_back(key, csv_quote(v.get<std::string>()));
    } else if (v.is_array()) {
      std::string s;
      for (const auto& e : v) s += (s.empty() ? "" : ";") + (e.is_number_float() ? num(e.get<double>()) : e.dump());
      kv.emplace_back(key, s);
    } else {
      kv.emplace_back(key, v.dump());
    }
  }
}

inline void write_record(const json& j, const Options& o, const std::string& schema, std::ostream& out) {
  if (o.format == "csv") {
    std::vector<std::pair<std::string, std::string>> kv;
    flatten(j, "", kv);
    Writer w(o.out, out);
    w.stream() << "# " << schema << '\n';
    for (std::size_t i = 0; i < kv.size(); ++i) w.stream() << (i ? "," : "") << kv[i].first;
    w.stream() << '\n';
    for (std::size_t i = 0; i < kv.size(); ++i) w.stream() << (i ? "," : "") << kv[i].second;
    w.stream() << '\n';
  } else {
    write_json(j, o, out);
  }
}

inline void dump_state(const TwoBodyState& state, const Options& o) {
  if (o.psi_out.empty()) return;
  Writer w(o.psi_out, std::cout);
  write_state_csv(state, w.stream());
}

inline void dump_spectrum(const EntanglementSpectrum& s, const Options& o) {
  if (o.spectrum_out.empty()) return;
  Writer w(o.spectrum_out, std::cout);
  write_spectrum_csv(s, w.stream());
}

inline int cmd_table1(const Options& o, std::ostream& out) {
  const auto results = compute_table1();
  bool all_ok = true;
  for (const auto& r : results) all_ok = all_ok && r.energy_ok() && r.gamma_ok();

  if (o.format == "json") {
    json rows = json::array();
    for (const auto& r : results)
      rows.push_back({{"g", r.ref.g},
                      {"N", r.ref.size},
                      {"gamma_opt", r.gamma},
                      {"gamma_reference", r.ref.gamma_ref},
                      {"energy", r.energy},
                      {"energy_reference", r.ref.energy_ref},
                      {"energy_deviation", r.energy - r.ref.energy_ref},
                      {"pass", r.energy_ok() && r.gamma_ok()}});
    write_json({{"rows", rows}, {"energy_tolerance", table1_energy_tolerance}, {"pass", all_ok}}, o, out);
  } else {
    Writer w(o.out, out);
    auto& s = w.stream();
    s << "# dipole-table1 v1 energy_tolerance=" << num(table1_energy_tolerance)
      << " gamma_rel_tolerance=" << num(table1_gamma_tolerance) << '\n';
    s << "g,N,gamma_opt,gamma_reference,energy,energy_reference,energy_deviation,status\n";
    for (const auto& r : results)
      s << num(r.ref.g) << ',' << r.ref.size << ',' << num(r.gamma) << ',' << num(r.ref.gamma_ref) << ','
        << num(r.energy) << ',' << num(r.ref.energy_ref) << ',' << num(r.energy - r.ref.energy_ref) << ','
        << (r.energy_ok() && r.gamma_ok() ? "ok" : "FAIL") << '\n';
  }
  return all_ok ? ok : numerical_quality;
}

inline int cmd_scan(const Options& o, std::ostream& out) {
  const Statistics stat = parse_stat(o.stat);
  if (o.ideal) throw config_error("scan does not take --ideal");
  std::vector<ModelChoice> models;
  if (o.eps || o.strict) {
    models.push_back(model_choice(o));
  } else {
    models = {ModelChoice::quasi(5), ModelChoice::quasi(10), ModelChoice::quasi(50), ModelChoice::strict()};
  }
  const auto gs = log_grid(o.g_min, o.g_max, o.points);
  const auto popts = pipeline_options(o);

  if (o.format == "json") {
    json all = json::array();
    for (const auto& m : models) {
      for (const auto& row : entropy_scan(m, stat, gs, popts)) {
        json j{{"model", m.label()}, {"ln_g", std::log(row.g)}, {"g", row.g}};
        if (row.result) {
          j["spectrum"] = spectrum_json(row.result->spectrum, o.q);
          j["relative"] = relative_json(*row.result->relative);
          j["grid"] = grid_json(row.result->grid);
        } else {
          j["error_kind"] = row.error_kind;
          j["error"] = row.error;
        }
        all.push_back(j);
      }
    }
    write_json({{"schema", "dipole-scan v1"}, {"statistics", to_string(stat)}, {"rows", all}}, o, out);
    return ok;
  }

  Writer w(o.out, out);
  auto& s = w.stream();
  s << "# dipole-scan v1 statistics=" << to_string(stat) << " points=" << o.points << " g_min=" << num(o.g_min)
    << " g_max=" << num(o.g_max) << '\n';
  s << "model,ln_g,g,s_vn,lambda_max,schmidt_count,participation_ratio,energy,basis_size,gamma,energy_shift,"
       "energy_converged,pointwise_shift,grid_l,grid_n,error_kind,error\n";
  for (const auto& m : models) {
    for (const auto& row : entropy_scan(m, stat, gs, popts)) {
      s << m.label() << ',' << num(std::log(row.g)) << ',' << num(row.g) << ',';
      if (row.result) {
        const auto& r = *row.result;
        const auto& rel = *r.relative;
        const auto& c = rel.convergence;
        s << num(r.spectrum.s_vn) << ',' << num(r.spectrum.lambda_max()) << ',' << r.spectrum.schmidt_count() << ','
          << num(r.spectrum.participation_ratio) << ',' << num(rel.energy) << ',' << rel.basis.size << ','
          << (rel.basis.is_ho() ? "" : num(rel.basis.gamma)) << ',' << (c ? num(c->energy_shift) : "") << ','
          << (c ? (c->converged() ? "1" : "0") : "") << ',' << (c ? num(c->pointwise_shift) : "") << ','
          << num(r.grid.half_width) << ',' << r.grid.points << ",,\n";
      } else {
        s << ",,,,,,,,,,,,," << row.error_kind << ',' << csv_quote(row.error) << '\n';
      }
    }
  }
  return ok;
}

inline int cmd_solve(const Options& o, std::ostream& out) {
  require_g(o);
  const auto m = model_choice(o);
  const Statistics stat = parse_stat(o.stat);
  const auto rel = solve_relative(m, o.g, parity_of(stat), pipeline_options(o));
  json j{{"command", "solve"}, {"model", m.label()}, {"g", o.g}, {"relative", relative_json(rel)}};
  write_record(j, o, "dipole-solve v1", out);
  return ok;
}

inline int cmd_entropy(const Options& o, std::ostream& out) {
  const Statistics stat = parse_stat(o.stat);
  const auto popts = pipeline_options(o);
  json j{{"command", "entropy"}};
  TwoBodyState state;
  if (o.ideal) {
    if (o.eps || o.strict) throw config_error("--ideal excludes --eps and --strict");
    if (!std::isnan(o.g) && o.g != 0.0) throw config_error("--ideal is the g = 0 system; drop --g");
    const GridSpec grid = resolve_grid(InteractionModel::strict1d(0.0), 0.0, stat, popts);
    state = assemble_ideal(stat, grid);
    j["model"] = "ideal";
    j["g"] = 0.0;
  } else {
    require_g(o);
    const auto m = model_choice(o);
    if (m.is_strict() && o.g == 0.0)
      throw config_error("--strict with --g 0 is the non-interacting system; use --ideal instead");
    const auto rel = solve_relative(m, o.g, parity_of(stat), popts);
    const auto model = m.at(o.g);
    const GridSpec grid = resolve_grid(model, o.g, stat, popts);
    state = assemble_interacting(rel, grid, model);
    j["model"] = m.label();
    j["g"] = o.g;
    j["relative"] = relative_json(rel);
  }
  const auto spec = occupancy_spectrum(state);
  j["provenance"] = to_string(state.provenance.kind);
  j["grid"] = grid_json(state.grid);
  j["spectrum"] = spectrum_json(spec, o.q);
  dump_state(state, o);
  dump_spectrum(spec, o);
  write_record(j, o, "dipole-entropy v1", out);
  return ok;
}

inline int cmd_tg(const Options& o, std::ostream& out) {
  const auto popts = pipeline_options(o);
  const GridSpec grid = resolve_grid(InteractionModel::strict1d(0.0), 0.0, Statistics::boson, popts);
  const auto state = assemble_tg(grid);
  const auto spec = occupancy_spectrum(state);
  json j{{"command", "tg"}, {"provenance", to_string(state.provenance.kind)}, {"grid", grid_json(grid)},
         {"spectrum", spectrum_json(spec, o.q)}};
  dump_state(state, o);
  dump_spectrum(spec, o);
  write_record(j, o, "dipole-tg v1", out);
  return ok;
}

inline int cmd_ha(const Options& o, std::ostream& out) {
  require_g(o);
  if (!(o.g > 0.0)) throw config_error("ha: --g must be positive");
  const auto& c = ha::constants();
  json k = json::array();
  for (int l = 0; l < 6; ++l) k.push_back(ha::schmidt_coefficient(l));
  json j{{"command", "ha"},
         {"g", o.g},
         {"w", c.w},
         {"z", c.z},
         {"x_c", ha::classical_separation(o.g)},
         {"energy", ha::ha_energy(o.g)},
         {"s_vn_boson", ha::ha_vn(Statistics::boson)},
         {"s_vn_fermion", ha::ha_vn(Statistics::fermion)},
         {"schmidt_coefficients", k}};
  if (o.q) {
    j["q"] = *o.q;
    j["renyi"] = ha::ha_renyi(*o.q);
  }
  write_record(j, o, "dipole-ha v1", out);
  return ok;
}

/// Runs body, mapping library exceptions to exit codes and messages on err.
template <class F>
int guarded(F&& body, std::ostream& err) {
  try {
    return body();
  } catch (const config_error& e) {
    err << "configuration error: " << e.what() << '\n';
    return config;
  } catch (const convergence_error& e) {
    err << "convergence failure: " << e.what() << '\n';
    return convergence;
  } catch (const numerical_quality_error& e) {
    err << "numerical quality failure: " << e.what() << '\n';
    return numerical_quality;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return failure;
  }
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Two dipolar particles in a harmonic trap: energies and entanglement"};
  app.require_subcommand(1);
  Options o;

  auto add_model = [&](CLI::App* c) {
    c->add_option("--g", o.g, "Dimensionless coupling g >= 0");
    c->add_option("--eps", o.eps, "Trap anisotropy for the quasi-1D model (>= 1)");
    c->add_flag("--strict", o.strict, "Strict 1D limit g sqrt2/|x|^3");
    c->add_option("--stat", o.stat, "boson or fermion")->check(CLI::IsMember({"boson", "fermion"}));
    c->add_option("--basis-size", o.basis_size, "Basis size N (default 300 quasi-1D, 50 strict)");
    c->add_option("--gamma", o.gamma, "Pseudoharmonic exponent: auto or a value > 1.5");
  };
  auto* table1 = app.add_subcommand("table1", "Strict-1D ground-state energies at the reference (g, N) rows");
  auto* scan = app.add_subcommand("scan", "Entropy versus g (all four default models unless --eps/--strict)");
  auto* solve = app.add_subcommand("solve", "Relative-motion ground state");
  auto* entropy = app.add_subcommand("entropy", "Entanglement of the two-body ground state");
  auto* ha = app.add_subcommand("ha", "Harmonic-approximation (large g) closed forms");
  auto* tg = app.add_subcommand("tg", "Tonks-Girardeau state entanglement");

  for (auto* c : {scan, solve, entropy}) add_model(c);
  for (auto* c : {scan, entropy, tg}) c->add_option("--q", o.q, "Renyi order q > 0, q != 1");
  for (auto* c : {scan, entropy, tg}) {
    c->add_option("--grid-l", o.grid_l, "Grid half width L");
    c->add_option("--grid-n", o.grid_n, "Grid points n");
  }
  for (auto* c : {entropy, tg}) {
    c->add_option("--psi-out", o.psi_out, "Write psi(x1,x2) as CSV");
    c->add_option("--spectrum-out", o.spectrum_out, "Write the occupancy spectrum as CSV");
  }
  entropy->add_flag("--ideal", o.ideal, "Non-interacting (g = 0) state");
  scan->add_option("--points", o.points, "Number of log-spaced couplings");
  scan->add_option("--g-min", o.g_min, "Smallest coupling");
  scan->add_option("--g-max", o.g_max, "Largest coupling");
  ha->add_option("--g", o.g, "Coupling g > 0");
  ha->add_option("--q", o.q, "Renyi order q > 0, q != 1");
  for (auto* c : {table1, scan, solve, entropy, ha, tg}) {
    c->add_option("--out", o.out, "Output file (default stdout)");
    c->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return config;
  }

  return guarded(
      [&] {
        if (o.format.empty()) o.format = (table1->parsed() || scan->parsed()) ? "csv" : "json";
        if (o.q && (!(*o.q > 0.0) || *o.q == 1.0)) throw config_error("--q must be positive and different from 1");
        if (table1->parsed()) return cmd_table1(o, out);
        if (scan->parsed()) return cmd_scan(o, out);
        if (solve->parsed()) return cmd_solve(o, out);
        if (entropy->parsed()) return cmd_entropy(o, out);
        if (ha->parsed()) return cmd_ha(o, out);
        return cmd_tg(o, out);
      },
      err);
}

}  // namespace dipole::cli
