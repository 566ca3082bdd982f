#include "gllb/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "gllb/errors.hpp"
#include "gllb/params.hpp"

namespace gllb {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be a table");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
T get(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError("missing key '" + key + "' in " + where);
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("key '" + key + "' in " + where + " has the wrong type");
  }
}

template <class T>
T get_or(const json& obj, const std::string& key, const std::string& where, T fallback) {
  if (!obj.contains(key)) return fallback;
  return get<T>(obj, key, where);
}

// A scalar is broadcast to every axis.
std::vector<int> int_list(const json& obj, const std::string& key, const std::string& where,
                          int dim) {
  const json& v = obj.at(key);
  if (v.is_number_integer()) return std::vector<int>(dim, v.get<int>());
  auto out = get<std::vector<int>>(obj, key, where);
  if (static_cast<int>(out.size()) != dim) {
    throw ConfigError("'" + key + "' in " + where + " needs one entry per axis");
  }
  return out;
}

BoxDomain parse_domain(const json& j, const std::vector<int>& trunc_hint, int& dim_out) {
  check_keys(j, "domain", {"dim", "lengths", "quad_points"});
  const auto lengths = get<std::vector<double>>(j, "lengths", "domain");
  const int dim = static_cast<int>(lengths.size());
  if (j.contains("dim") && get<int>(j, "dim", "domain") != dim) {
    throw ConfigError("domain.dim does not match the number of lengths");
  }
  if (dim < 1 || dim > 3) throw ConfigError("domain dimension must be 1, 2 or 3");
  std::vector<int> quad;
  if (j.contains("quad_points")) {
    quad = int_list(j, "quad_points", "domain", dim);
  } else {
    for (int n : trunc_hint) quad.push_back(std::max(4, 2 * n));
  }
  dim_out = dim;
  try {
    return BoxDomain(lengths, quad);
  } catch (const InputError& e) {
    throw ConfigError(std::string("domain: ") + e.what());
  }
}

GLLBParams parse_params(const json& j) {
  check_keys(j, "params", {"kappa", "physical"});
  const bool kappa = j.contains("kappa");
  const bool physical = j.contains("physical");
  if (kappa == physical) {
    throw ConfigError("params needs exactly one of 'kappa' or 'physical'");
  }
  if (kappa) {
    const json& k = j.at("kappa");
    check_keys(k, "params.kappa", {"kappa1", "kappa2", "gamma", "mu"});
    GLLBParams p;
    p.kappa1 = get_or(k, "kappa1", "params.kappa", p.kappa1);
    p.kappa2 = get_or(k, "kappa2", "params.kappa", p.kappa2);
    p.gamma = get_or(k, "gamma", "params.kappa", p.gamma);
    p.mu = get_or(k, "mu", "params.kappa", p.mu);
    validate(p);
    return p;
  }
  const json& ph = j.at("physical");
  const std::string w = "params.physical";
  check_keys(ph, w, {"gamma", "kappa1", "chi_par", "temperature", "curie_temperature"});
  return map_physical_params(get<double>(ph, "gamma", w), get<double>(ph, "kappa1", w),
                             get<double>(ph, "chi_par", w), get<double>(ph, "temperature", w),
                             get<double>(ph, "curie_temperature", w));
}

void parse_potential(const json& j, RunConfig& rc) {
  const std::string w = "potential";
  check_keys(j, w, {"kind", "alpha", "matrix", "terms", "bound_mode", "sampling"});
  const auto kind = get_or<std::string>(j, "kind", w, "quadratic");
  try {
    if (kind == "quadratic") {
      rc.solver.potential = Potential::quadratic(get_or(j, "alpha", w, 1.0));
    } else if (kind == "anisotropic") {
      const auto rows = get<std::vector<std::vector<double>>>(j, "matrix", w);
      if (rows.size() != 3) throw ConfigError("potential.matrix must be 3x3");
      Mat3 a;
      for (int r = 0; r < 3; ++r) {
        if (rows[r].size() != 3) throw ConfigError("potential.matrix must be 3x3");
        for (int c = 0; c < 3; ++c) a(r, c) = rows[r][c];
      }
      rc.solver.potential = Potential::anisotropic(a);
    } else if (kind == "polynomial") {
      if (!j.contains("terms") || !j.at("terms").is_array()) {
        throw ConfigError("polynomial potential needs a 'terms' array");
      }
      std::vector<Monomial> terms;
      for (const auto& t : j.at("terms")) {
        check_keys(t, "potential.terms[]", {"powers", "coefficient"});
        const auto p = get<std::vector<int>>(t, "powers", "potential.terms[]");
        if (p.size() != 3) throw ConfigError("monomial powers need three entries");
        terms.push_back({{p[0], p[1], p[2]}, get<double>(t, "coefficient", "potential.terms[]")});
      }
      rc.solver.potential = Potential::polynomial(std::move(terms));
    } else {
      throw ConfigError("unknown potential kind '" + kind + "'");
    }
  } catch (const InputError& e) {
    throw ConfigError(std::string("potential: ") + e.what());
  }

  const auto mode = get_or<std::string>(j, "bound_mode", w, "analytic");
  if (mode == "analytic") {
    rc.bound_mode = BoundMode::kAnalytic;
  } else if (mode == "sampled") {
    rc.bound_mode = BoundMode::kSampled;
  } else {
    throw ConfigError("bound_mode must be 'analytic' or 'sampled'");
  }
  if (j.contains("sampling")) {
    const json& s = j.at("sampling");
    const std::string ws = "potential.sampling";
    check_keys(s, ws, {"shells", "directions", "lambda_max", "safety"});
    rc.sampling.shells = get_or(s, "shells", ws, rc.sampling.shells);
    rc.sampling.directions = get_or(s, "directions", ws, rc.sampling.directions);
    rc.sampling.lambda_max = get_or(s, "lambda_max", ws, rc.sampling.lambda_max);
    rc.sampling.safety = get_or(s, "safety", ws, rc.sampling.safety);
  }
}

InitialData parse_initial(const json& j, int dim, std::uint64_t seed) {
  const std::string w = "initial";
  if (!j.is_object()) throw ConfigError("initial must be a table");
  const auto kind = get_or<std::string>(j, "kind", w, "zero");
  try {
    if (kind == "zero") {
      check_keys(j, w, {"kind"});
      return ModeTable{dim, {}};
    }
    if (kind == "single_mode") {
      check_keys(j, w, {"kind", "component", "k", "amplitude"});
      return single_mode(dim, get_or(j, "component", w, 0), get<std::vector<int>>(j, "k", w),
                         get_or(j, "amplitude", w, 1.0));
    }
    if (kind == "random") {
      check_keys(j, w, {"kind", "modes", "amplitude", "decay"});
      return random_band_limited(dim, int_list(j, "modes", w, dim),
                                 get_or(j, "amplitude", w, 1.0), get_or(j, "decay", w, 2.0),
                                 seed);
    }
    if (kind == "modes") {
      check_keys(j, w, {"kind", "entries"});
      if (!j.contains("entries") || !j.at("entries").is_array()) {
        throw ConfigError("initial.entries must be an array");
      }
      ModeTable table{dim, {}};
      for (const auto& e : j.at("entries")) {
        const std::string we = "initial.entries[]";
        check_keys(e, we, {"component", "k", "value"});
        ModeEntry m{get_or(e, "component", we, 0), get<std::vector<int>>(e, "k", we),
                    get<double>(e, "value", we)};
        if (m.component < 0 || m.component >= kComponents) {
          throw ConfigError("mode component must be 0, 1 or 2");
        }
        if (static_cast<int>(m.k.size()) != dim) {
          throw ConfigError("mode index needs one entry per axis");
        }
        for (int k : m.k) {
          if (k < 0) throw ConfigError("mode indices must be nonnegative");
        }
        if (!std::isfinite(m.value)) throw ConfigError("mode values must be finite");
        table.entries.push_back(std::move(m));
      }
      return table;
    }
  } catch (const InputError& e) {
    throw ConfigError(std::string("initial: ") + e.what());
  }
  throw ConfigError("unknown initial kind '" + kind + "'");
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  check_keys(root, "config", {"domain", "params", "potential", "solver", "initial", "outputs",
                              "study"});
  if (!root.contains("domain")) throw ConfigError("config needs a 'domain' section");
  if (!root.contains("params")) throw ConfigError("config needs a 'params' section");
  if (!root.contains("solver")) throw ConfigError("config needs a 'solver' section");

  const json& s = root.at("solver");
  const std::string ws = "solver";
  check_keys(s, ws, {"trunc", "dt", "t_end", "stepper", "record_every", "blowup_threshold",
                     "seed", "t_max", "calibration_samples", "sup_refine",
                     "estimate_step_error"});
  const json& dj = root.at("domain");
  if (!dj.is_object() || !dj.contains("lengths") || !dj.at("lengths").is_array()) {
    throw ConfigError("domain needs a 'lengths' array");
  }
  const int dim_hint = static_cast<int>(dj.at("lengths").size());
  if (dim_hint < 1 || dim_hint > 3) throw ConfigError("domain dimension must be 1, 2 or 3");
  if (!s.contains("trunc")) throw ConfigError("missing key 'trunc' in solver");
  const std::vector<int> trunc = int_list(s, "trunc", ws, dim_hint);

  int dim = 0;
  RunConfig rc{.solver = SolverConfig{.domain = parse_domain(dj, trunc, dim), .trunc = trunc}};
  rc.solver.params = parse_params(root.at("params"));
  rc.solver.dt = get_or(s, "dt", ws, rc.solver.dt);
  rc.solver.t_end = get_or(s, "t_end", ws, rc.solver.t_end);
  const auto stepper = get_or<std::string>(s, "stepper", ws, "if_rk4");
  if (stepper == "if_rk4") {
    rc.solver.stepper = Stepper::kIfRk4;
  } else if (stepper == "if_euler") {
    rc.solver.stepper = Stepper::kIfEuler;
  } else {
    throw ConfigError("stepper must be 'if_rk4' or 'if_euler'");
  }
  rc.solver.record_every = get_or(s, "record_every", ws, rc.solver.record_every);
  rc.solver.blowup_threshold = get_or(s, "blowup_threshold", ws, rc.solver.blowup_threshold);
  rc.solver.sup_refine = get_or(s, "sup_refine", ws, rc.solver.sup_refine);
  rc.solver.estimate_step_error =
      get_or(s, "estimate_step_error", ws, rc.solver.estimate_step_error);
  rc.seed = get_or<std::uint64_t>(s, "seed", ws, rc.seed);
  rc.t_max = get_or(s, "t_max", ws, rc.t_max);
  rc.calibration_samples = get_or(s, "calibration_samples", ws, rc.calibration_samples);
  if (!(rc.t_max > 0.0) || !std::isfinite(rc.t_max)) throw ConfigError("t_max must be positive");
  if (rc.calibration_samples < 100) throw ConfigError("calibration_samples must be >= 100");

  if (root.contains("potential")) parse_potential(root.at("potential"), rc);
  try {
    validate(rc.solver);
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  // Cheap probe so invalid sampling parameters fail at load time. A zero
  // lambda_max means "choose from the initial data" and is resolved later.
  if (rc.bound_mode == BoundMode::kSampled) {
    SamplingParams probe = rc.sampling;
    probe.shells = std::min(probe.shells, 1);
    probe.directions = std::min(probe.directions, 1);
    if (probe.lambda_max == 0.0) probe.lambda_max = 1.0;
    bounds(rc.solver.potential, rc.bound_mode, probe);
  }

  rc.initial = root.contains("initial") ? parse_initial(root.at("initial"), dim, rc.seed)
                                        : InitialData{ModeTable{dim, {}}};

  if (root.contains("outputs")) {
    const json& o = root.at("outputs");
    check_keys(o, "outputs", {"dir", "checkpoint_every"});
    rc.outputs.dir = get_or<std::string>(o, "dir", "outputs", "out");
    rc.outputs.checkpoint_every = get_or(o, "checkpoint_every", "outputs", 0);
    if (rc.outputs.checkpoint_every < 0) throw ConfigError("checkpoint_every must be >= 0");
  }

  if (root.contains("study")) {
    const json& st = root.at("study");
    const std::string w = "study";
    check_keys(st, w, {"n_list", "oracle_n", "grid_list", "fd_dt_factor"});
    StudySettings study;
    study.n_list = get_or(st, "n_list", w, study.n_list);
    study.oracle_n = get_or(st, "oracle_n", w, study.oracle_n);
    study.grid_list = get_or(st, "grid_list", w, study.grid_list);
    study.fd_dt_factor = get_or(st, "fd_dt_factor", w, study.fd_dt_factor);
    if (!(study.fd_dt_factor > 0.0)) throw ConfigError("fd_dt_factor must be positive");
    rc.study = std::move(study);
  }

  rc.echo = root.dump();
  return rc;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

namespace {

void write_row(std::ostream& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out << ',';
    out << format_number(v);
    first = false;
  }
  out << '\n';
}

const char* outcome_name(Outcome o) {
  return o == Outcome::kCompleted ? "completed" : "blowup";
}

json number(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

}  // namespace

void write_energy_csv(std::ostream& out, std::span<const EnergyRecord> records) {
  out << kEnergyCsvHeader << '\n';
  for (const auto& r : records) {
    write_row(out, {r.t, r.l2sq, r.h1sq, r.h2sq, r.h3sq, r.dt_norm, r.sup_est,
                    r.aliasing_residual, r.identity_residual_l2, r.identity_residual_h2});
  }
}

void write_majorant_csv(std::ostream& out, const Majorant& majorant) {
  out << "t,y\n";
  const auto& t = majorant.times();
  const auto& y = majorant.values();
  for (std::size_t i = 0; i < t.size(); ++i) write_row(out, {t[i], y[i]});
}

void write_convergence_csv(std::ostream& out, const ConvergenceReport& report) {
  out << "n_coarse,n_fine,diverged,l2,h1,sup\n";
  for (std::size_t i = 0; i < report.pairwise_diffs.size(); ++i) {
    const auto& d = report.pairwise_diffs[i];
    const bool diverged = report.diverged[i] || report.diverged[i + 1];
    out << d.n_coarse << ',' << d.n_fine << ',' << (diverged ? 1 : 0) << ','
        << format_number(d.l2) << ',' << format_number(d.h1) << ',' << format_number(d.sup)
        << '\n';
  }
}

void write_rates_csv(std::ostream& out, const ConvergenceReport& report) {
  out << "n_coarse,n_mid,n_fine,rate_l2,rate_h1,rate_sup\n";
  for (std::size_t i = 0; i < report.rates_l2.size(); ++i) {
    out << report.n_list[i] << ',' << report.n_list[i + 1] << ',' << report.n_list[i + 2]
        << ',' << format_number(report.rates_l2[i]) << ','
        << format_number(report.rates_h1[i]) << ',' << format_number(report.rates_sup[i])
        << '\n';
  }
}

void write_oracle_csv(std::ostream& out, std::span<const int> grid_list,
                      std::span<const CrossValidation> rows) {
  out << "grid_n,fd_dt,max_l2_error,spectral_outcome,fd_outcome\n";
  for (std::size_t i = 0; i < rows.size() && i < grid_list.size(); ++i) {
    out << grid_list[i] << ',' << format_number(rows[i].fd_dt) << ','
        << format_number(rows[i].max_l2_error) << ',' << outcome_name(rows[i].spectral_outcome)
        << ',' << outcome_name(rows[i].fd_outcome) << '\n';
  }
}

void write_report(std::ostream& out, const RunReport& report) {
  json j;
  j["format_version"] = 1;
  j["config"] = report.config_echo.empty() ? json::object() : json::parse(report.config_echo);
  j["outcome"] = outcome_name(report.outcome);
  if (report.blowup) {
    const auto& b = *report.blowup;
    j["blowup"] = {{"time", number(b.time)},
                   {"last_valid_time", number(b.last_valid_time)},
                   {"reason", b.reason},
                   {"last_l2sq", number(b.last_norms.l2sq)},
                   {"last_h2sq", number(b.last_norms.h2sq)}};
  }
  if (report.constants) {
    const auto& c = *report.constants;
    j["calibration"] = {{"c_inf", number(c.c_inf)},
                        {"k6", number(c.k6)},
                        {"k3", number(c.k3)},
                        {"samples", c.samples},
                        {"seed", c.seed},
                        {"safety", kCalibrationSafety}};
  }
  if (report.majorant) {
    const auto& m = *report.majorant;
    json table_t = json::array(), table_y = json::array();
    for (double t : m.times()) table_t.push_back(number(t));
    for (double y : m.values()) table_y.push_back(number(y));
    j["majorant"] = {{"y0", number(m.y0())},
                     {"tstar", number(m.tstar())},
                     {"t_max", number(m.t_max())},
                     {"threshold", number(m.threshold())},
                     {"doubled", m.doubled()},
                     {"t", std::move(table_t)},
                     {"y", std::move(table_y)}};
    j["majorant"]["blowup_time"] =
        m.blowup_time() ? number(*m.blowup_time()) : json(nullptr);
  }
  if (report.dominance) {
    const auto& d = *report.dominance;
    json viol = json::array();
    for (const auto& v : d.violations) {
      viol.push_back({{"t", number(v.t)}, {"energy", number(v.energy)},
                      {"majorant", number(v.majorant)}});
    }
    j["dominance"] = {{"dominated", d.dominated},
                      {"checked", d.checked},
                      {"min_margin", number(d.min_margin)},
                      {"violations", std::move(viol)}};
  }
  json rows = json::array();
  for (const auto& r : report.energy) {
    rows.push_back({number(r.t), number(r.l2sq), number(r.h1sq), number(r.h2sq),
                    number(r.h3sq), number(r.dt_norm), number(r.sup_est),
                    number(r.aliasing_residual), number(r.identity_residual_l2),
                    number(r.identity_residual_h2)});
  }
  j["energy"] = {{"columns", std::string(kEnergyCsvHeader)}, {"rows", std::move(rows)}};
  out << j.dump(2) << '\n';
}

namespace {

void put_bytes(std::ostream& out, std::uint64_t v, int bytes) {
  std::array<char, 8> b{};
  for (int i = 0; i < bytes; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  out.write(b.data(), bytes);
}

std::uint64_t get_bytes(std::istream& in, int bytes) {
  std::array<unsigned char, 8> b{};
  in.read(reinterpret_cast<char*>(b.data()), bytes);
  if (in.gcount() != bytes) throw InputError("checkpoint is truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

void put_f64(std::ostream& out, double x) { put_bytes(out, std::bit_cast<std::uint64_t>(x), 8); }
double get_f64(std::istream& in) { return std::bit_cast<double>(get_bytes(in, 8)); }
void put_i32(std::ostream& out, int v) {
  put_bytes(out, static_cast<std::uint32_t>(static_cast<std::int32_t>(v)), 4);
}
int get_i32(std::istream& in) {
  return static_cast<std::int32_t>(static_cast<std::uint32_t>(get_bytes(in, 4)));
}

constexpr std::string_view kMagic = "GLLBCKPT";

}  // namespace

void write_checkpoint(std::ostream& out, const SpectralField& field, double time) {
  const BoxDomain& dom = field.domain();
  out.write(kMagic.data(), static_cast<std::streamsize>(kMagic.size()));
  put_bytes(out, kCheckpointVersion, 4);
  put_bytes(out, static_cast<std::uint32_t>(dom.dim()), 4);
  for (double len : dom.lengths()) put_f64(out, len);
  for (int n : dom.quad_points()) put_i32(out, n);
  for (int n : field.trunc()) put_i32(out, n);
  put_f64(out, time);
  put_bytes(out, field.coeffs().size(), 8);
  for (double c : field.coeffs()) put_f64(out, c);
}

Checkpoint read_checkpoint(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (in.gcount() != 8 || std::string_view(magic.data(), 8) != kMagic) {
    throw InputError("not a checkpoint file");
  }
  const auto version = get_bytes(in, 4);
  if (version != kCheckpointVersion) {
    throw InputError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto dim = get_bytes(in, 4);
  if (dim < 1 || dim > 3) throw InputError("checkpoint has an invalid dimension");
  std::vector<double> lengths(dim);
  std::vector<int> quad(dim), trunc(dim);
  for (auto& v : lengths) v = get_f64(in);
  for (auto& v : quad) v = get_i32(in);
  for (auto& v : trunc) v = get_i32(in);
  const double time = get_f64(in);
  const auto count = get_bytes(in, 8);
  std::uint64_t expected = kComponents;
  for (int n : trunc) {
    if (n < 1 || n > (1 << 20)) throw InputError("checkpoint has an invalid truncation");
    expected *= static_cast<std::uint64_t>(n);
  }
  if (count != expected) throw InputError("checkpoint coefficient count mismatch");
  std::vector<double> coeffs(count);
  for (auto& c : coeffs) c = get_f64(in);
  return {time, SpectralField(BoxDomain(std::move(lengths), std::move(quad)), std::move(trunc),
                              std::move(coeffs))};
}

void save_checkpoint(const std::filesystem::path& path, const SpectralField& field,
                     double time) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write checkpoint " + path.string());
  write_checkpoint(out, field, time);
  if (!out) throw IoError("failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read checkpoint " + path.string());
  return read_checkpoint(in);
}

}  // namespace gllb
