#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "dilation_lab/distinguish.hpp"
#include "dilation_lab/dynamics.hpp"
#include "dilation_lab/errors.hpp"
#include "dilation_lab/spectra.hpp"

namespace dlab::cli {

namespace {

using json = nlohmann::ordered_json;

using Cell = std::variant<double, std::string, std::uint64_t, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::string name, Cell value) {
    if (rows.empty()) rows.emplace_back();
    columns.push_back(std::move(name));
    rows.back().push_back(std::move(value));
  }
};

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string format_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) return format_number(v);
        else if constexpr (std::is_same_v<T, std::string>) return v;
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return std::to_string(v);
      },
      c);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

json cell_json(const Cell& c) {
  return std::visit([](const auto& v) { return json(v); }, c);
}

/// single: the table holds one record (key/value report) rather than a list of rows.
void emit(const Table& t, Format f, bool single, std::ostream& os) {
  switch (f) {
    case Format::csv: {
      for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_escape(t.columns[i]);
      os << '\n';
      for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(format_cell(row[i]));
        os << '\n';
      }
      break;
    }
    case Format::json: {
      json rows = json::array();
      for (const auto& row : t.rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = cell_json(row[i]);
        rows.push_back(std::move(obj));
      }
      os << (single && rows.size() == 1 ? rows[0] : rows).dump(2) << '\n';
      break;
    }
    case Format::table: {
      if (single && t.rows.size() == 1) {
        std::size_t w = 0;
        for (const auto& c : t.columns) w = std::max(w, c.size());
        for (std::size_t i = 0; i < t.columns.size(); ++i) {
          os << std::left << std::setw(static_cast<int>(w) + 2) << t.columns[i] << format_cell(t.rows[0][i]) << '\n';
        }
        break;
      }
      std::vector<std::size_t> w(t.columns.size());
      for (std::size_t i = 0; i < t.columns.size(); ++i) w[i] = t.columns[i].size();
      for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) w[i] = std::max(w[i], format_cell(row[i]).size());
      }
      for (std::size_t i = 0; i < t.columns.size(); ++i) {
        os << std::left << std::setw(static_cast<int>(w[i]) + 2) << t.columns[i];
      }
      os << '\n';
      for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
          os << std::left << std::setw(static_cast<int>(w[i]) + 2) << format_cell(row[i]);
        }
        os << '\n';
      }
      break;
    }
  }
}

double scale_of(const RunConfig& cfg) {
  return std::max({1.0, std::abs(cfg.params.E0), std::abs(cfg.params.s), cfg.pert.norm()});
}

void add_matrix(Table& t, const std::string& name, const CMatrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const std::string key = name + "[" + std::to_string(r) + "][" + std::to_string(c) + "]";
      t.add(key + ".re", m(r, c).real());
      t.add(key + ".im", m(r, c).imag());
    }
  }
}

void print_matrix(std::ostream& os, const std::string& name, const CMatrix& m) {
  os << name << ":\n";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    os << "  ";
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const Complex z = m(r, c);
      std::string cell = format_number(z.real()) + (z.imag() < 0 ? " - " : " + ") + format_number(std::abs(z.imag())) + "i";
      os << std::left << std::setw(34) << cell << ' ';
    }
    os << '\n';
  }
}

std::vector<PictureResult> all_pictures(const RunConfig& cfg, const Tolerances& tol) {
  const StateBasis basis = cfg.basis();
  const StateBasis basis_p = cfg.basis_p();
  Probabilities probs = probabilities_from_state(cfg.params, cfg.pert, cfg.state, basis, basis_p, tol);
  if (cfg.p_plus) {
    probs.p_plus = *cfg.p_plus;
    probs.p_minus = 1.0 - *cfg.p_plus;
  }
  if (cfg.pp_plus) {
    probs.pp_plus = *cfg.pp_plus;
    probs.pp_minus = 1.0 - *cfg.pp_plus;
  }
  probs.validate(tol);
  return {
      bell_simulation(cfg.params, cfg.pert, cfg.state, tol),
      bell_classical(cfg.params, cfg.pert, probs, tol),
      bell_classical_biased(cfg.params, probs, tol),
      bell_local_hermitian(cfg.params, cfg.pert, cfg.state, basis_p, basis, tol),
      bell_genuine_local(cfg.params, cfg.pert, cfg.state, basis, basis_p, tol),
  };
}

int cmd_dilate(const RunConfig& cfg, const Tolerances& tol, std::ostream& os, std::ostream& err) {
  const DilatedHamiltonian d = build_general_dilation(cfg.params, cfg.pert, tol);
  const CMatrix perp = compute_perp(d).matrix;
  const CMatrix perp_closed = perp_closed_form(cfg.params, cfg.pert, tol).matrix;
  const DilationResiduals res = verify_dilation(d, 64, cfg.seed.value_or(0));
  const double scale = scale_of(cfg);

  const double perp_mismatch = max_abs(perp - perp_closed);
  const bool perp_is_target = max_abs(perp - d.target) <= tol.hermiticity * scale;
  const bool h4_is_h1 = max_abs(d.H4 - d.H1) <= tol.hermiticity * scale;

  std::vector<std::string> failures;
  if (res.embedding > tol.general_intertwining * scale) failures.push_back("embedding identity");
  if (res.complementary > tol.general_intertwining * scale) failures.push_back("complementary identity");
  if (res.hermiticity > tol.hermiticity * scale) failures.push_back("hermiticity of the dilation");
  if (perp_mismatch > tol.dual_path * scale) failures.push_back("perp closed form");

  Table t;
  t.add("kind", std::string(d.kind == DilationKind::special ? "special" : "general"));
  t.add("embedding_residual", res.embedding);
  t.add("complementary_residual", res.complementary);
  t.add("hermiticity_residual", res.hermiticity);
  t.add("perp_closed_form_mismatch", perp_mismatch);
  t.add("perp_equals_H", perp_is_target);
  t.add("H4_equals_H1", h4_is_h1);
  t.add("probe_trials", static_cast<std::uint64_t>(res.trials));
  t.add("probe_seed", cfg.seed.value_or(0));
  t.add("passed", failures.empty());

  if (cfg.format == Format::table) {
    print_matrix(os, "H1'", d.H1);
    print_matrix(os, "H2'", d.H2);
    print_matrix(os, "H4'", d.H4);
    print_matrix(os, "(H_perp)'", perp);
    emit(t, cfg.format, true, os);
  } else {
    add_matrix(t, "H1p", d.H1);
    add_matrix(t, "H2p", d.H2);
    add_matrix(t, "H4p", d.H4);
    add_matrix(t, "perp", perp);
    emit(t, cfg.format, true, os);
  }
  for (const auto& f : failures) err << "invariant failed: " << f << '\n';
  return failures.empty() ? kOk : kInternal;
}

void add_spectral(Table& t, const SpectralData& sd) {
  t.add("lambda_minus", sd.lambda_minus);
  t.add("lambda_plus", sd.lambda_plus);
  t.add("lambda_p_minus", sd.lambda_p_minus);
  t.add("lambda_p_plus", sd.lambda_p_plus);
  t.add("lambda_pp_minus", sd.lambda_pp_minus);
  t.add("lambda_pp_plus", sd.lambda_pp_plus);
  t.add("omega0", sd.omega0);
  t.add("omega0_p", sd.omega0_p);
  t.add("omega0_pp", sd.omega0_pp);
  t.add("E0_prime", sd.E0_prime);
}

void add_inputs(Table& t, const RunConfig& cfg) {
  t.add("E0", cfg.params.E0);
  t.add("s", cfg.params.s);
  t.add("alpha", cfg.params.alpha);
  t.add("a", cfg.pert.a);
  t.add("b", cfg.pert.b);
  t.add("c", cfg.pert.c);
  t.add("d", cfg.pert.d);
}

int cmd_spectrum(const RunConfig& cfg, const Tolerances& tol, std::ostream& os) {
  const SpectralData sd = spectral_data(cfg.params, cfg.pert, tol);
  const CoefficientSet k = coefficients(cfg.params, cfg.pert, tol);
  Table t;
  add_inputs(t, cfg);
  add_spectral(t, sd);
  t.add("A1", k.A1);
  t.add("A2", k.A2);
  t.add("C1_re", k.C1.real());
  t.add("C1_im", k.C1.imag());
  t.add("C2_re", k.C2.real());
  t.add("C2_im", k.C2.imag());
  t.add("A1p", k.A1p);
  t.add("A2p", k.A2p);
  t.add("C1p", k.C1p);
  t.add("C2p", k.C2p);
  t.add("discriminant_imag", k.perp_discriminant().imag());
  emit(t, cfg.format, true, os);
  return kOk;
}

int cmd_bell(const RunConfig& cfg, const Tolerances& tol, std::ostream& os) {
  Table t;
  t.columns = {"picture", "value", "constant", "shift", "deviation", "bound"};
  for (const auto& r : all_pictures(cfg, tol)) {
    t.rows.push_back({std::string(to_string(r.picture)), r.value, r.constant_part, r.shift, r.deviation, r.bound});
  }
  emit(t, cfg.format, false, os);
  return kOk;
}

int cmd_distinguish(const RunConfig& cfg, const Tolerances& tol, std::ostream& os) {
  const DistinguishReport r = classify(cfg.params, cfg.pert, tol);
  Table t;
  t.add("vs_local", std::string(to_string(r.vs_local)));
  t.add("vs_genuine", std::string(to_string(r.vs_genuine)));
  t.add("shift", r.shift);
  t.add("omega0_p", r.omega0_p);
  t.add("omega0_pp", r.omega0_pp);
  t.add("omega_gap", r.omega0_p - r.omega0_pp);
  t.add("same_eigenvalues", r.same_eigenvalues);
  t.add("indistinguishable_d", indistinguishable_d(cfg.params));
  t.add("notes", r.notes);
  emit(t, cfg.format, true, os);
  return kOk;
}

int cmd_scan(const RunConfig& cfg, const Tolerances& tol, std::ostream& os) {
  if (!cfg.sweep) throw ValidationError("scan: config has no sweep (sweep_variable, sweep_start, sweep_stop, sweep_steps)");
  const Sweep& sw = *cfg.sweep;
  Table t;
  for (std::size_t k = 0; k < sw.steps; ++k) {
    const double x = k + 1 == sw.steps ? sw.stop
                                       : sw.start + (sw.stop - sw.start) * static_cast<double>(k) /
                                                        static_cast<double>(sw.steps - 1);
    RunConfig point = cfg;
    if (sw.variable == "alpha") point.params.alpha = x;
    else if (sw.variable == "a") point.pert.a = x;
    else if (sw.variable == "b") point.pert.b = x;
    else if (sw.variable == "c") point.pert.c = x;
    else if (sw.variable == "d") point.pert.d = x;
    else {
      point.angles.alpha_state = x;
      point.state = LocalState::from_angles(x, point.angles.Delta);
    }

    Table row;
    row.add("index", static_cast<std::uint64_t>(k));
    row.add(sw.variable, x);
    add_inputs(row, point);
    const SpectralData sd = spectral_data(point.params, point.pert, tol);
    add_spectral(row, sd);
    row.add("omega_gap", sd.omega0_p - sd.omega0_pp);
    for (const auto& r : all_pictures(point, tol)) {
      const std::string name(to_string(r.picture));
      row.add(name + "_value", r.value);
      row.add(name + "_bound", r.bound);
    }
    if (t.columns.empty()) t.columns = row.columns;
    t.rows.push_back(std::move(row.rows[0]));
  }
  emit(t, cfg.format, false, os);
  return kOk;
}

int cmd_evolve(const RunConfig& cfg, const Tolerances& tol, std::ostream& os, std::ostream& err) {
  const EvolutionReport r = evolve_check(cfg.params, cfg.pert, cfg.psi0, cfg.times, tol);
  Table t;
  t.columns = {"t", "residual", "norm_ratio", "fidelity"};
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    t.rows.push_back({r.times[k], r.postselect_residuals[k], r.norm_ratios[k], r.fidelities[k]});
  }
  emit(t, cfg.format, false, os);
  if (r.max_residual() > tol.general_intertwining * scale_of(cfg)) {
    err << "invariant failed: post-selected evolution residual " << format_number(r.max_residual()) << '\n';
    return kInternal;
  }
  return kOk;
}

int cmd_sample(const RunConfig& cfg, const Tolerances& tol, std::ostream& os) {
  if (!cfg.seed) throw ValidationError("sample: an explicit seed is required (--seed or \"seed\" in the config)");
  const SampleEstimate est = sample_bell(cfg.params, cfg.pert, cfg.state, cfg.samples, *cfg.seed, cfg.workers, tol);
  const double exact = bell_simulation(cfg.params, cfg.pert, cfg.state, tol).value;
  Table t;
  t.add("mean", est.mean);
  t.add("stderr", est.std_error);
  t.add("n", static_cast<std::uint64_t>(est.n));
  t.add("seed", est.seed);
  t.add("workers", static_cast<std::uint64_t>(est.workers));
  t.add("exact", exact);
  t.add("z", est.std_error > 0.0 ? (est.mean - exact) / est.std_error : 0.0);
  emit(t, cfg.format, true, os);
  return kOk;
}

double number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ValidationError("config: \"" + key + "\" must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ValidationError("config: \"" + key + "\" must be finite");
  return x;
}

std::uint64_t unsigned_integer(const json& v, const std::string& key) {
  if (!v.is_number_unsigned()) throw ValidationError("config: \"" + key + "\" must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string text(const json& v, const std::string& key) {
  if (!v.is_string()) throw ValidationError("config: \"" + key + "\" must be a string");
  return v.get<std::string>();
}

}  // namespace

std::optional<Format> format_from_string(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  if (name == "table") return Format::table;
  return std::nullopt;
}

RunConfig parse_config(const std::string& source) {
  json doc;
  try {
    doc = json::parse(source);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("config: top level must be a JSON object");

  RunConfig cfg;
  Complex u = 0.0, v = 0.0;
  bool has_uv = false, has_state_angles = false;
  std::optional<std::string> sweep_var;
  std::optional<double> sweep_start, sweep_stop;
  std::optional<std::uint64_t> sweep_steps;

  for (const auto& [key, val] : doc.items()) {
    if (key == "E0") cfg.params.E0 = number(val, key);
    else if (key == "s") cfg.params.s = number(val, key);
    else if (key == "alpha") cfg.params.alpha = number(val, key);
    else if (key == "a") cfg.pert.a = number(val, key);
    else if (key == "b") cfg.pert.b = number(val, key);
    else if (key == "c") cfg.pert.c = number(val, key);
    else if (key == "d") cfg.pert.d = number(val, key);
    else if (key == "u_re") { u.real(number(val, key)); has_uv = true; }
    else if (key == "u_im") { u.imag(number(val, key)); has_uv = true; }
    else if (key == "v_re") { v.real(number(val, key)); has_uv = true; }
    else if (key == "v_im") { v.imag(number(val, key)); has_uv = true; }
    else if (key == "alpha_state") { cfg.angles.alpha_state = number(val, key); has_state_angles = true; }
    else if (key == "Delta") { cfg.angles.Delta = number(val, key); has_state_angles = true; }
    else if (key == "delta") cfg.angles.delta = number(val, key);
    else if (key == "Delta_prime") cfg.angles.Delta_prime = number(val, key);
    else if (key == "p_plus") cfg.p_plus = number(val, key);
    else if (key == "pp_plus") cfg.pp_plus = number(val, key);
    else if (key == "sweep_variable") sweep_var = text(val, key);
    else if (key == "sweep_start") sweep_start = number(val, key);
    else if (key == "sweep_stop") sweep_stop = number(val, key);
    else if (key == "sweep_steps") sweep_steps = unsigned_integer(val, key);
    else if (key == "seed") cfg.seed = unsigned_integer(val, key);
    else if (key == "output") cfg.output = text(val, key);
    else if (key == "format") {
      const auto f = format_from_string(text(val, key));
      if (!f) throw ValidationError("config: \"format\" must be csv, json or table");
      cfg.format = *f;
    } else if (key == "times") {
      if (!val.is_array()) throw ValidationError("config: \"times\" must be an array of numbers");
      cfg.times.clear();
      for (const auto& x : val) cfg.times.push_back(number(x, key));
    } else if (key == "psi0") {
      if (!val.is_array() || val.size() != 4) throw ValidationError("config: \"psi0\" must be [re0, im0, re1, im1]");
      cfg.psi0 = CMatrix::column({Complex(number(val[0], key), number(val[1], key)),
                                  Complex(number(val[2], key), number(val[3], key))});
    } else if (key == "samples") {
      cfg.samples = unsigned_integer(val, key);
      if (cfg.samples == 0) throw ValidationError("config: \"samples\" must be at least 1");
    } else if (key == "workers") {
      cfg.workers = unsigned_integer(val, key);
      if (cfg.workers == 0) throw ValidationError("config: \"workers\" must be at least 1");
    } else {
      throw ValidationError("config: unknown key \"" + key + "\"");
    }
  }

  if (has_uv && has_state_angles) {
    throw ValidationError("config: give the local state either as u_re/u_im/v_re/v_im or as alpha_state/Delta");
  }
  if (has_uv) cfg.state = LocalState{u, v};
  else cfg.state = cfg.angles.state();
  cfg.state.validate();
  cfg.pert.validate();

  const bool any_sweep = sweep_var || sweep_start || sweep_stop || sweep_steps;
  if (any_sweep) {
    if (!(sweep_var && sweep_start && sweep_stop && sweep_steps)) {
      throw ValidationError("config: sweep needs sweep_variable, sweep_start, sweep_stop and sweep_steps");
    }
    static const std::vector<std::string> allowed = {"alpha", "a", "b", "c", "d", "state-angle"};
    if (std::find(allowed.begin(), allowed.end(), *sweep_var) == allowed.end()) {
      throw ValidationError("config: unknown sweep variable \"" + *sweep_var + "\"");
    }
    if (*sweep_steps < 2) throw ValidationError("config: sweep_steps must be at least 2");
    cfg.sweep = Sweep{*sweep_var, *sweep_start, *sweep_stop, static_cast<std::size_t>(*sweep_steps)};
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hermitian dilations of a two-level PT-symmetric Hamiltonian"};
  app.require_subcommand(1);

  std::string config_path, output_path, format_name;
  std::uint64_t seed = 0;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"dilate", "build the dilation and check its block identities"},
      {"spectrum", "closed-form spectra of H, (H_perp)' and H4'"},
      {"bell", "Bell-operator expectation in every picture"},
      {"distinguish", "whether the simulation picture can be told apart"},
      {"scan", "sweep one parameter and emit one row per point"},
      {"evolve", "post-selected time evolution check"},
      {"sample", "Monte Carlo estimate of the simulation-picture Bell value"},
  };
  std::vector<CLI::App*> subs;
  std::vector<CLI::Option*> seed_opts;
  for (const auto& [name, desc] : commands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path, "flat JSON config")->required();
    sub->add_option("--output", output_path, "write the report here instead of stdout");
    sub->add_option("--format", format_name, "csv, json or table")->check(CLI::IsMember({"csv", "json", "table"}));
    seed_opts.push_back(sub->add_option("--seed", seed, "u64 seed"));
    subs.push_back(sub);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  std::size_t which = 0;
  while (!subs[which]->parsed()) ++which;
  const std::string command = commands[which].first;

  try {
    const Tolerances tol = Tolerances::from_environment();
    RunConfig cfg = load_config(config_path);
    if (!output_path.empty()) cfg.output = output_path;
    if (!format_name.empty()) cfg.format = *format_from_string(format_name);
    if (seed_opts[which]->count() > 0) cfg.seed = seed;
    cfg.params.validate(tol);

    std::ostringstream body;
    int code = kOk;
    if (command == "dilate") code = cmd_dilate(cfg, tol, body, err);
    else if (command == "spectrum") code = cmd_spectrum(cfg, tol, body);
    else if (command == "bell") code = cmd_bell(cfg, tol, body);
    else if (command == "distinguish") code = cmd_distinguish(cfg, tol, body);
    else if (command == "scan") code = cmd_scan(cfg, tol, body);
    else if (command == "evolve") code = cmd_evolve(cfg, tol, body, err);
    else code = cmd_sample(cfg, tol, body);

    if (cfg.output) {
      std::ofstream file(*cfg.output, std::ios::binary);
      if (!file) throw ValidationError("cannot write " + *cfg.output);
      file << body.str();
    } else {
      out << body.str();
    }
    return code;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const InternalInconsistency& e) {
    err << "internal inconsistency: " << e.what() << '\n';
    return kInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace dlab::cli
