#pragma once

// Command-line front end: radius, zeros, verify, sweep.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spiralrad/spiralrad.hpp"

namespace spiralrad::cli {

using nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitParameter = 2;
inline constexpr int kExitFailure = 3;

inline const std::vector<std::string>& param_names() {
  static const std::vector<std::string> names{"kappa", "delta", "mu", "nu", "a", "n", "u", "beta", "p", "c"};
  return names;
}

struct SweepAxis {
  std::string name;
  double start = 0.0;
  double stop = 0.0;
  int count = 1;

  double value(int i) const { return count == 1 ? start : start + (stop - start) * i / (count - 1); }
};

struct Request {
  std::string subcommand;
  std::string family;
  std::map<std::string, double> params;
  std::string norm = "g";
  std::string kind = "spirallike";
  double gamma = 0.0;  // radians
  double alpha = 0.0;
  double tol = kRadiusTol;
  int samples = kDefaultSamples;
  int count = 3;
  std::optional<double> radius;
  bool override_membership = false;
  int wi_depth = kWiDefaultDepth;
  bool paper_literal_legendre = false;
  bool empirical = false;
  std::string format = "json";
  std::string out_path;
  std::vector<SweepAxis> sweep;
};

// ---------------------------------------------------------------------------
// Formatting.

/// Shortest round-trip decimal form, independent of the C locale.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline std::string format_plain(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, r.ptr);
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

// ---------------------------------------------------------------------------
// Request -> library objects.

inline Norm parse_norm(const std::string& s) {
  if (s == "f") return Norm::f;
  if (s == "g") return Norm::g;
  if (s == "h") return Norm::h;
  throw ParameterError("unknown normalization '" + s + "' (expected f, g or h)");
}

inline Kind parse_kind(const std::string& s) {
  if (s == "spirallike") return Kind::spirallike;
  if (s == "convex") return Kind::convex;
  throw ParameterError("unknown kind '" + s + "' (expected spirallike or convex)");
}

inline int integral_param(double v, const char* name) {
  if (!(std::fabs(v - std::round(v)) < 1e-9) || std::fabs(v) > 1e6) {
    throw ParameterError(std::string(name) + " must be an integer");
  }
  return static_cast<int>(std::lround(v));
}

inline FamilySpec build_spec(const Request& rq) {
  const auto take = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [k, v] : rq.params) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; })) {
        throw ParameterError("parameter '" + k + "' does not apply to family " + rq.family);
      }
    }
  };
  const auto get = [&](const char* k, double fallback) {
    const auto it = rq.params.find(k);
    return it == rq.params.end() ? fallback : it->second;
  };
  const std::string& f = rq.family;
  if (f == "wright") {
    take({"kappa", "delta"});
    Wright w;
    return Wright{get("kappa", w.kappa), get("delta", w.delta)};
  }
  if (f == "mittag-leffler") {
    take({"mu", "nu", "a"});
    MittagLeffler m;
    return MittagLeffler{get("mu", m.mu), get("nu", m.nu), get("a", m.a), rq.override_membership};
  }
  if (f == "legendre") {
    take({"n"});
    return Legendre{integral_param(get("n", Legendre{}.n), "n")};
  }
  if (f == "lommel") {
    take({"u"});
    return Lommel{get("u", Lommel{}.u)};
  }
  if (f == "struve") {
    take({"beta"});
    return Struve{get("beta", Struve{}.beta)};
  }
  if (f == "ramanujan") {
    take({"beta", "p", "c"});
    Ramanujan r;
    return Ramanujan{get("beta", r.beta), get("p", r.p), get("c", r.c)};
  }
  if (f.empty()) throw ParameterError("--family is required");
  throw ParameterError("unknown family '" + f + "'");
}

inline json params_json(const FamilySpec& spec) {
  return std::visit(
      [](const auto& s) -> json {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Wright>) return {{"kappa", s.kappa}, {"delta", s.delta}};
        if constexpr (std::is_same_v<S, MittagLeffler>) return {{"mu", s.mu}, {"nu", s.nu}, {"a", s.a}};
        if constexpr (std::is_same_v<S, Legendre>) return {{"n", s.n}};
        if constexpr (std::is_same_v<S, Lommel>) return {{"u", s.u}};
        if constexpr (std::is_same_v<S, Struve>) return {{"beta", s.beta}};
        if constexpr (std::is_same_v<S, Ramanujan>) return {{"beta", s.beta}, {"p", s.p}, {"c", s.c}};
        return json::object();
      },
      spec);
}

inline LegendreEquation legendre_reading(const Request& rq) {
  return rq.paper_literal_legendre ? LegendreEquation::as_displayed : LegendreEquation::corrected;
}

/// Fields a `radius` JSON document shares with a request, so the output can be fed back.
inline json request_echo(const Request& rq, const FamilySpec& spec) {
  json j;
  j["family"] = family_name(spec);
  j["params"] = params_json(spec);
  if (std::holds_alternative<MittagLeffler>(spec) && rq.override_membership) j["override_membership"] = true;
  j["norm"] = rq.norm;
  j["kind"] = rq.kind;
  j["gamma"] = rq.gamma;
  j["alpha"] = rq.alpha;
  j["tol"] = rq.tol;
  if (rq.paper_literal_legendre) j["paper_literal_legendre"] = true;
  return j;
}

inline void apply_request_file(Request& rq, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open request file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ParameterError(std::string("request file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParameterError("request file must hold a JSON object");
  try {
    if (j.contains("family")) rq.family = j.at("family").get<std::string>();
    if (j.contains("params")) {
      for (const auto& [k, v] : j.at("params").items()) {
        if (std::find(param_names().begin(), param_names().end(), k) == param_names().end()) {
          throw ParameterError("unknown parameter '" + k + "' in request file");
        }
        rq.params[k] = v.get<double>();
      }
    }
    if (j.contains("norm")) rq.norm = j.at("norm").get<std::string>();
    if (j.contains("kind")) rq.kind = j.at("kind").get<std::string>();
    if (j.contains("gamma")) rq.gamma = j.at("gamma").get<double>();
    if (j.contains("alpha")) rq.alpha = j.at("alpha").get<double>();
    if (j.contains("tol")) rq.tol = j.at("tol").get<double>();
    if (j.contains("samples")) rq.samples = j.at("samples").get<int>();
    if (j.contains("wi_depth")) rq.wi_depth = j.at("wi_depth").get<int>();
    if (j.contains("override_membership")) rq.override_membership = j.at("override_membership").get<bool>();
    if (j.contains("paper_literal_legendre")) rq.paper_literal_legendre = j.at("paper_literal_legendre").get<bool>();
  } catch (const json::exception& e) {
    throw ParameterError(std::string("malformed request file: ") + e.what());
  }
}

inline SweepAxis parse_axis(const std::string& text, bool degrees) {
  const auto eq = text.find('=');
  const auto c1 = text.find(':', eq == std::string::npos ? 0 : eq);
  const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
  if (eq == std::string::npos || c1 == std::string::npos || c2 == std::string::npos) {
    throw ParameterError("sweep axis must look like name=start:stop:count, got '" + text + "'");
  }
  SweepAxis ax;
  ax.name = text.substr(0, eq);
  const auto number = [&](const std::string& s) {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
      throw ParameterError("bad number '" + s + "' in sweep axis '" + text + "'");
    }
    return v;
  };
  ax.start = number(text.substr(eq + 1, c1 - eq - 1));
  ax.stop = number(text.substr(c1 + 1, c2 - c1 - 1));
  const double cnt = number(text.substr(c2 + 1));
  ax.count = integral_param(cnt, "sweep count");
  if (ax.count < 1 || ax.count > 100000) throw ParameterError("sweep count must lie in [1, 100000]");
  const bool known = ax.name == "gamma" || ax.name == "alpha" ||
                     std::find(param_names().begin(), param_names().end(), ax.name) != param_names().end();
  if (!known) throw ParameterError("cannot sweep over '" + ax.name + "'");
  if (ax.name == "gamma" && degrees) {
    ax.start *= std::numbers::pi / 180.0;
    ax.stop *= std::numbers::pi / 180.0;
  }
  return ax;
}

// ---------------------------------------------------------------------------
// Subcommands.

struct Output {
  json doc;
  std::string text;  // preformatted (csv / plain)
};

inline std::string plain_lines(const json& j, const std::string& prefix = "") {
  std::string s;
  for (const auto& [k, v] : j.items()) {
    const std::string key = prefix.empty() ? k : prefix + "." + k;
    if (v.is_object()) {
      s += plain_lines(v, key);
    } else if (v.is_array()) {
      s += key + ":";
      for (const auto& e : v) s += " " + (e.is_number_float() ? format_plain(e.get<double>()) : e.dump());
      s += "\n";
    } else if (v.is_number_float()) {
      s += key + ": " + format_plain(v.get<double>()) + "\n";
    } else if (v.is_string()) {
      s += key + ": " + v.get<std::string>() + "\n";
    } else {
      s += key + ": " + v.dump() + "\n";
    }
  }
  return s;
}

struct Solved {
  FamilySpec spec;
  NormalizedForm form;
  SpiralOrder order;
  Kind kind;
  RadiusResult result;
};

inline Solved solve_request(const Request& rq, bool with_certificate) {
  FamilySpec spec = build_spec(rq);
  NormalizedForm form = make_form(spec, parse_norm(rq.norm), rq.wi_depth);
  const SpiralOrder order = SpiralOrder::make(rq.gamma, rq.alpha);
  const Kind kind = parse_kind(rq.kind);
  RadiusResult r = solve_radius(form, kind, order, rq.tol, legendre_reading(rq));
  if (with_certificate) r = certify(form, order, r, rq.samples);
  return {std::move(spec), std::move(form), order, kind, r};
}

inline json radius_json(const Request& rq, const Solved& s) {
  json j = request_echo(rq, s.spec);
  j["radius"] = s.result.radius;
  j["bracket"] = {s.result.lo, s.result.hi};
  j["singularity"] = s.result.singularity;
  j["residual"] = s.result.residual;
  j["iterations"] = s.result.iterations;
  j["certification"] = to_string(s.result.certification);
  return j;
}

inline Output run_radius(const Request& rq) {
  const Solved s = solve_request(rq, true);
  return {radius_json(rq, s), {}};
}

inline Output run_zeros(const Request& rq) {
  if (rq.count < 1) throw ParameterError("--count must be >= 1");
  const FamilySpec spec = build_spec(rq);
  const NormalizedForm form = make_form(spec, parse_norm(rq.norm), rq.wi_depth);
  const auto count = static_cast<std::size_t>(rq.count);
  const ZeroSequence kz = positive_zeros(form.kernel(), count, {}, "kernel");
  const ZeroSequence dz = positive_zeros(form.derivative_function(), count, {}, "derivative function");
  json j;
  j["family"] = family_name(spec);
  j["params"] = params_json(spec);
  j["norm"] = rq.norm;
  j["count"] = rq.count;
  j["kernel_zeros"] = kz.zeros;
  j["kernel_simple"] = kz.simple;
  j["derivative_zeros"] = dz.zeros;
  j["derivative_simple"] = dz.simple;
  j["interlacing"] = to_string(check_interlacing(kz, dz));
  return {j, {}};
}

inline Output run_verify(const Request& rq) {
  FamilySpec spec = build_spec(rq);
  const NormalizedForm form = make_form(spec, parse_norm(rq.norm), rq.wi_depth);
  const SpiralOrder order = SpiralOrder::make(rq.gamma, rq.alpha);
  const Kind kind = parse_kind(rq.kind);
  double R = 0.0;
  std::string source;
  if (rq.radius) {
    R = *rq.radius;
    if (!(R > 0.0)) throw ParameterError("--radius must be positive");
    source = "given";
  } else {
    R = solve_radius(form, kind, order, rq.tol, legendre_reading(rq)).radius;
    source = "solved";
  }
  const DiskCertificate cert = certify_disk(form, kind, order, R, rq.samples);
  const EmpiricalRadius emp = empirical_radius(form, kind, order, R, rq.tol, rq.samples);
  json j = request_echo(rq, spec);
  j["radius"] = R;
  j["radius_source"] = source;
  j["certificate"] = {{"valid", cert.valid},
                      {"checked_radius", cert.checked_radius},
                      {"min_value", cert.min_value},
                      {"threshold", cert.threshold},
                      {"at_angle", cert.at_angle}};
  j["empirical_radius"] = emp.radius;
  j["crossing_found"] = emp.crossing_found;
  j["gap"] = emp.radius - R;
  return {j, {}};
}

inline void set_axis_value(Request& rq, const std::string& name, double v) {
  if (name == "gamma") {
    rq.gamma = v;
  } else if (name == "alpha") {
    rq.alpha = v;
  } else {
    rq.params[name] = v;
  }
}

inline unsigned thread_budget(std::size_t jobs) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SPIRALRAD_THREADS")) {
    int cap = 0;
    const std::string s(env);
    const auto r = std::from_chars(s.data(), s.data() + s.size(), cap);
    if (r.ec == std::errc() && cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
  }
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

struct SweepRow {
  std::vector<double> coords;
  std::optional<RadiusResult> result;
  std::optional<EmpiricalRadius> empirical;
  std::string error;
};

inline Output run_sweep(const Request& rq) {
  if (rq.sweep.empty() || rq.sweep.size() > 2) throw ParameterError("sweep needs one or two --sweep axes");
  if (rq.sweep.size() == 2 && rq.sweep[0].name == rq.sweep[1].name) {
    throw ParameterError("sweep axes must be distinct");
  }
  // Validate the family once so that misspelled parameters fail up front.
  {
    Request probe = rq;
    for (const auto& ax : rq.sweep) set_axis_value(probe, ax.name, ax.value(0));
    build_spec(probe);
    parse_norm(rq.norm);
    parse_kind(rq.kind);
  }

  const int n0 = rq.sweep[0].count;
  const int n1 = rq.sweep.size() == 2 ? rq.sweep[1].count : 1;
  const std::size_t total = static_cast<std::size_t>(n0) * static_cast<std::size_t>(n1);
  std::vector<SweepRow> rows(total);

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t idx = next++; idx < total; idx = next++) {
      const int i = static_cast<int>(idx / n1);
      const int k = static_cast<int>(idx % n1);
      Request point = rq;
      SweepRow& row = rows[idx];
      row.coords.push_back(rq.sweep[0].value(i));
      set_axis_value(point, rq.sweep[0].name, row.coords.back());
      if (rq.sweep.size() == 2) {
        row.coords.push_back(rq.sweep[1].value(k));
        set_axis_value(point, rq.sweep[1].name, row.coords.back());
      }
      try {
        const Solved s = solve_request(point, true);
        row.result = s.result;
        if (rq.empirical) row.empirical = empirical_radius(s.form, s.kind, s.order, s.result.radius, rq.tol, rq.samples);
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };
  const unsigned threads = thread_budget(total);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<std::string> columns;
  for (const auto& ax : rq.sweep) columns.push_back(ax.name);
  for (const char* c : {"radius", "residual", "certified"}) columns.emplace_back(c);
  if (rq.empirical) columns.emplace_back("empirical_radius");
  columns.emplace_back("error");

  json doc = json::array();
  std::ostringstream text;
  const char sep = rq.format == "plain" ? ' ' : ',';
  const char* eol = rq.format == "plain" ? "\n" : "\r\n";
  for (std::size_t c = 0; c < columns.size(); ++c) text << (c ? std::string(1, sep) : "") << columns[c];
  text << eol;
  for (const SweepRow& row : rows) {
    std::vector<std::string> cells;
    json obj;
    for (std::size_t a = 0; a < row.coords.size(); ++a) {
      cells.push_back(format_number(row.coords[a]));
      obj[rq.sweep[a].name] = row.coords[a];
    }
    if (row.result) {
      cells.push_back(format_number(row.result->radius));
      cells.push_back(format_number(row.result->residual));
      cells.emplace_back(to_string(row.result->certification));
      obj["radius"] = row.result->radius;
      obj["residual"] = row.result->residual;
      obj["certified"] = to_string(row.result->certification);
    } else {
      cells.insert(cells.end(), 3, "");
      obj["radius"] = nullptr;
    }
    if (rq.empirical) {
      cells.push_back(row.empirical ? format_number(row.empirical->radius) : "");
      if (row.empirical) obj["empirical_radius"] = row.empirical->radius;
    }
    cells.push_back(rq.format == "plain" ? (row.error.empty() ? "-" : "\"" + row.error + "\"") : csv_field(row.error));
    if (!row.error.empty()) obj["error"] = row.error;
    for (std::size_t c = 0; c < cells.size(); ++c) text << (c ? std::string(1, sep) : "") << cells[c];
    text << eol;
    doc.push_back(std::move(obj));
  }
  return {doc, text.str()};
}

// ---------------------------------------------------------------------------
// Entry point.

struct Options {
  std::string family;
  std::map<std::string, std::optional<double>> params;
  std::optional<std::string> norm, kind;
  std::optional<double> gamma, alpha, tol, radius;
  std::optional<int> samples, wi_depth;
  int count = 3;
  bool override_membership = false;
  bool degrees = false;
  bool paper_literal = false;
  bool empirical = false;
  bool json_fmt = false, csv_fmt = false, plain_fmt = false;
  std::string out_path;
  std::string request_path;
  std::vector<std::string> sweep;
};

inline void add_common(CLI::App* app, Options& o) {
  app->add_option("--family", o.family, "wright | mittag-leffler | legendre | lommel | struve | ramanujan");
  for (const auto& name : param_names()) {
    app->add_option("--" + name, o.params[name], "family parameter " + name);
  }
  app->add_flag("--override-membership", o.override_membership, "accept Mittag-Leffler parameters without a W_i certificate");
  app->add_option("--wi-depth", o.wi_depth, "depth of the W_i membership search (default 10)");
  app->add_option("--norm", o.norm, "f | g | h (default g)");
  app->add_option("--kind", o.kind, "spirallike | convex (default spirallike)");
  app->add_option("--gamma", o.gamma, "spiral angle, radians unless --degrees");
  app->add_option("--alpha", o.alpha, "order, 0 <= alpha < 1");
  app->add_flag("--degrees", o.degrees, "read gamma in degrees");
  app->add_option("--tol", o.tol, "relative solver tolerance (default 1e-10)");
  app->add_option("--samples", o.samples, "boundary samples for certification (default 2048)");
  app->add_flag("--paper-literal-legendre", o.paper_literal, "use the uncorrected Legendre root equations");
  app->add_option("--request", o.request_path, "JSON file with request fields (e.g. a previous radius output)");
  app->add_flag("--json", o.json_fmt, "JSON output");
  app->add_flag("--csv", o.csv_fmt, "CSV output");
  app->add_flag("--plain", o.plain_fmt, "plain text output");
  app->add_option("--out", o.out_path, "write output to FILE instead of stdout");
}

inline Request to_request(const std::string& sub, const Options& o) {
  Request rq;
  rq.subcommand = sub;
  rq.format = sub == "sweep" ? "csv" : "json";
  if (!o.request_path.empty()) apply_request_file(rq, o.request_path);
  if (!o.family.empty()) rq.family = o.family;
  for (const auto& [k, v] : o.params) {
    if (v) rq.params[k] = *v;
  }
  if (o.norm) rq.norm = *o.norm;
  if (o.kind) rq.kind = *o.kind;
  if (o.gamma) rq.gamma = o.degrees ? *o.gamma * std::numbers::pi / 180.0 : *o.gamma;
  if (o.alpha) rq.alpha = *o.alpha;
  if (o.tol) rq.tol = *o.tol;
  if (o.samples) rq.samples = *o.samples;
  if (o.wi_depth) rq.wi_depth = *o.wi_depth;
  if (o.override_membership) rq.override_membership = true;
  if (o.paper_literal) rq.paper_literal_legendre = true;
  rq.radius = o.radius;
  rq.count = o.count;
  rq.empirical = o.empirical;
  rq.out_path = o.out_path;
  if (o.json_fmt + o.csv_fmt + o.plain_fmt > 1) throw ParameterError("choose at most one of --json, --csv, --plain");
  if (o.json_fmt) rq.format = "json";
  if (o.csv_fmt) rq.format = "csv";
  if (o.plain_fmt) rq.format = "plain";
  if (rq.format == "csv" && sub != "sweep") throw ParameterError("--csv applies to sweep only");
  for (const auto& s : o.sweep) rq.sweep.push_back(parse_axis(s, o.degrees));
  if (!(rq.tol > 0.0)) throw ParameterError("--tol must be positive");
  if (rq.samples < 3) throw ParameterError("--samples must be >= 3");
  return rq;
}

inline std::string error_line(const char* type, const std::string& message) {
  return json{{"error", type}, {"message", message}}.dump() + "\n";
}

inline const char* error_type(const std::exception& e) {
  if (dynamic_cast<const ParameterError*>(&e)) return "ParameterError";
  if (dynamic_cast<const TruncationError*>(&e)) return "TruncationError";
  if (dynamic_cast<const ScanError*>(&e)) return "ScanError";
  if (dynamic_cast<const SolverError*>(&e)) return "SolverError";
  if (dynamic_cast<const OracleError*>(&e)) return "OracleError";
  return "Error";
}

inline Output dispatch(const Request& rq) {
  if (rq.subcommand == "radius") return run_radius(rq);
  if (rq.subcommand == "zeros") return run_zeros(rq);
  if (rq.subcommand == "verify") return run_verify(rq);
  return run_sweep(rq);
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radii of spirallikeness and convex spirallikeness for special-function families", "spiralrad"};
  app.require_subcommand(1);
  Options o;
  CLI::App* radius = app.add_subcommand("radius", "solve for the radius");
  CLI::App* zeros = app.add_subcommand("zeros", "first zeros of the kernel and derivative function");
  CLI::App* verify = app.add_subcommand("verify", "boundary certificate and empirical radius");
  CLI::App* sweep = app.add_subcommand("sweep", "radius over a one- or two-axis grid");
  for (CLI::App* sub : {radius, zeros, verify, sweep}) add_common(sub, o);
  zeros->add_option("--count", o.count, "number of zeros (default 3)");
  verify->add_option("--radius", o.radius, "radius to check (default: solve)");
  sweep->add_option("--sweep", o.sweep, "axis name=start:stop:count (gamma, alpha or a family parameter)")
      ->required();
  sweep->add_flag("--empirical", o.empirical, "also measure the empirical radius");

  std::vector<std::string> argv;
  argv.reserve(args.size());
  for (auto it = args.rbegin(); it != args.rend(); ++it) argv.push_back(*it);
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << error_line("UsageError", e.what());
    return kExitParameter;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    const Request rq = to_request(sub, o);
    const Output result = dispatch(rq);
    std::string body;
    if (rq.format == "json") {
      body = result.doc.dump(rq.subcommand == "sweep" ? -1 : 2) + "\n";
    } else if (!result.text.empty()) {
      body = result.text;
    } else {
      body = plain_lines(result.doc);
    }
    if (rq.out_path.empty()) {
      out << body;
    } else {
      std::ofstream f(rq.out_path, std::ios::binary);
      if (!f) throw ParameterError("cannot open output file '" + rq.out_path + "'");
      f << body;
    }
    return kExitOk;
  } catch (const ParameterError& e) {
    err << error_line("ParameterError", e.what());
    return kExitParameter;
  } catch (const std::exception& e) {
    err << error_line(error_type(e), e.what());
    return kExitFailure;
  }
}

}  // namespace spiralrad::cli
