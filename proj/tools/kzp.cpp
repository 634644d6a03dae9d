// Command-line front end: builds a context from a JSON config plus flags and
// streams certificates as newline-delimited JSON.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "kzp/suite.hpp"

using nlohmann::json;
using namespace kzp;

namespace {

struct RunConfig {
  std::optional<int> n;
  std::optional<uint64_t> p;
  int ext_degree = 1;
  json h = 1;  // integer, or digit list over F_p for extension fields
  uint64_t seed = 1;
  std::optional<int> trials;
  std::vector<int> depth;
  std::optional<std::string> q;  // "auto" or an integer
  std::string out;
  std::string suite;
  std::string check;
  bool mutate = false;
  bool timing = false;
};

[[noreturn]] void config_error(const std::string& msg) { fail(ErrorKind::Config, msg); }

template <class T>
T get_as(const json& j, const char* key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    config_error(std::string("config key '") + key + "' has the wrong type");
  }
}

void load_config(const std::string& path, RunConfig& c) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    config_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) config_error("config must be a JSON object");
  for (auto& [key, v] : j.items()) {
    if (key == "n") c.n = get_as<int>(v, "n");
    else if (key == "p") c.p = get_as<uint64_t>(v, "p");
    else if (key == "ext_degree") c.ext_degree = get_as<int>(v, "ext_degree");
    else if (key == "h") c.h = v;
    else if (key == "seed") c.seed = get_as<uint64_t>(v, "seed");
    else if (key == "trials") c.trials = get_as<int>(v, "trials");
    else if (key == "depth") c.depth = v.is_array() ? get_as<std::vector<int>>(v, "depth") : std::vector<int>{get_as<int>(v, "depth")};
    else if (key == "q") c.q = v.is_string() ? v.get<std::string>() : std::to_string(get_as<int>(v, "q"));
    else if (key == "out") c.out = get_as<std::string>(v, "out");
    else if (key == "suite") c.suite = get_as<std::string>(v, "suite");
    else if (key == "check") c.check = get_as<std::string>(v, "check");
    else if (key == "mutate") c.mutate = get_as<bool>(v, "mutate");
    else if (key == "timing") c.timing = get_as<bool>(v, "timing");
    else config_error("unknown config key '" + key + "'");
  }
}

json parse_h(const std::string& s) {
  // "3", "-2" or a digit list "1,2" for an extension field.
  try {
    if (s.find(',') == std::string::npos && s.find('[') == std::string::npos) return std::stoll(s);
    std::string t = s;
    if (t.front() != '[') t = "[" + t + "]";
    return json::parse(t);
  } catch (const std::exception&) {
    config_error("cannot parse --h '" + s + "'");
  }
}

KZContext make_context(const RunConfig& c) {
  if (!c.n || !c.p) config_error("n and p are required (flags or config)");
  if (*c.n < 2) config_error("n must be at least 2");
  if (c.ext_degree < 1) config_error("ext-degree must be positive");
  FieldRef K = c.ext_degree == 1 ? Field::prime(*c.p) : Field::extension(*c.p, c.ext_degree);
  Elt h;
  if (c.h.is_number_integer()) {
    h = K->from_int(c.h.get<int64_t>());
  } else if (c.h.is_array()) {
    std::vector<uint64_t> d;
    for (auto& x : c.h) {
      if (!x.is_number_integer() || x.get<int64_t>() < 0 || x.get<uint64_t>() >= *c.p) config_error("h digits must lie in [0, p)");
      d.push_back(x.get<uint64_t>());
    }
    if (int(d.size()) > K->degree()) config_error("h has more digits than the extension degree");
    h = K->from_digits(d);
  } else {
    config_error("h must be an integer or a digit list");
  }
  return KZContext::make(*c.n, K, h);
}

SuiteOptions options(const RunConfig& c) {
  SuiteOptions o;
  o.seed = c.seed;
  o.trials = c.trials;
  o.depths = c.depth;
  o.mutate = c.mutate;
  o.timing = c.timing;
  if (c.q) {
    o.katz = true;
    if (*c.q != "auto") {
      try {
        o.katz_q = std::stoi(*c.q);
      } catch (const std::exception&) {
        config_error("--q must be an integer or 'auto'");
      }
    }
  }
  return o;
}

class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) config_error("cannot write " + path);
    }
  }
  std::ostream& out() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
  void emit(const Certificate& c) {
    out() << c.to_json().dump() << '\n';
    certs_.push_back(c);
  }
  void emit_all(const std::vector<Certificate>& cs) {
    for (auto& c : cs) emit(c);
  }
  int finish() {
    out().flush();
    size_t counts[4] = {0, 0, 0, 0};
    for (auto& c : certs_) ++counts[int(c.status)];
    std::cerr << certs_.size() << " certificates: " << counts[0] << " pass, " << counts[1] << " fail, " << counts[2]
              << " not-applicable, " << counts[3] << " error\n";
    return exit_status(certs_);
  }

 private:
  std::ofstream file_;
  std::vector<Certificate> certs_;
};

json matrix_json(const FMatrix& m) {
  json rows = json::array();
  for (size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (size_t j = 0; j < m.cols(); ++j) r.push_back(m.field()->format(m(i, j)));
    rows.push_back(r);
  }
  return rows;
}

json params_json(const SolutionParams& sp, const Field& F) {
  json out = json::array();
  for (auto& [beta, v] : sp) {
    json vals = json::array();
    for (Elt x : v) vals.push_back(F.format(x));
    out.push_back({{"beta", beta}, {"value", vals}});
  }
  return out;
}

int cmd_gen(const RunConfig& c) {
  auto ctx = make_context(c);
  json doc = context_params(ctx);
  doc["plus"] = json::array();
  doc["minus"] = json::array();
  if (ctx.h == 0) {
    doc["note"] = "h = 0: the families are empty";
  } else {
    ctx.require_rational_nonzero_h();
    for (auto sign : {Sign::Plus, Sign::Minus}) {
      auto fam = p_solutions(ctx, sign);
      if (c.mutate && sign == Sign::Plus && fam.size() > 0) mutate_family(fam);
      json& dst = doc[sign == Sign::Plus ? "plus" : "minus"];
      for (size_t l = 0; l < fam.size(); ++l)
        dst.push_back({{"l", l + 1}, {"degree", fam.degree(int(l) + 1)}, {"vector", poly_vector_json(fam.vectors[l])}});
    }
  }
  if (c.out.empty()) {
    std::cout << doc.dump(1) << '\n';
  } else {
    std::ofstream f(c.out, std::ios::binary | std::ios::trunc);
    if (!f) config_error("cannot write " + c.out);
    f << doc.dump(1) << '\n';
  }
  return 0;
}

int cmd_suite(const RunConfig& c) {
  auto opt = options(c);
  Sink sink(c.out);
  if (!c.suite.empty() && c.suite != "single") {
    for (auto& ctx : suite_grid(c.suite)) sink.emit_all(run_suite(ctx, opt));
  } else {
    sink.emit_all(run_suite(make_context(c), opt));
  }
  return sink.finish();
}

int cmd_check(const RunConfig& c) {
  if (c.check.empty()) config_error("check needs --check <name>");
  const auto& names = check_names();
  if (std::find(names.begin(), names.end(), c.check) == names.end()) config_error("unknown check '" + c.check + "'");
  auto ctx = make_context(c);
  Sink sink(c.out);
  sink.emit_all(run_check(ctx, c.check, options(c)));
  return sink.finish();
}

int cmd_pcurv(const RunConfig& c) {
  auto ctx = make_context(c);
  auto opt = options(c);
  Sink sink(c.out);
  int count = c.trials.value_or(3);
  auto pts = seeded_points(sample_field(ctx), ctx.n, count, derive_seed(opt.seed, "psi-matrix", ctx));
  for (auto& a : pts)
    for (int k = 1; k <= ctx.n; ++k) {
      Certificate m = make_certificate("psi-matrix", opt.seed);
      m.params = context_params(ctx);
      m.detail = {{"k", k}, {"point", a.to_json()}, {"on_V", matrix_json(psi_at_point(ctx, k, a).on_V())}};
      sink.emit(m);
    }
  for (auto name : {"nilpotency", "curvature-structure", "closed-form"}) sink.emit_all(run_check(ctx, name, opt));
  return sink.finish();
}

int cmd_formal(const RunConfig& c) {
  auto ctx = make_context(c);
  auto opt = options(c);
  Sink sink(c.out);
  if (ctx.h_in_prime_field()) {
    sink.emit_all(run_check(ctx, "formal-rank", opt));
    auto a = seeded_points(sample_field(ctx), ctx.n, 1, derive_seed(opt.seed, "formal-basis", ctx))[0];
    int D = opt.depths.empty() ? int(ctx.p()) : opt.depths.front();
    Certificate b = make_certificate("formal-basis", opt.seed);
    b.params = context_params(ctx);
    b.params["truncation"] = D;
    try {
      auto basis = formal_solve(ctx, a, D);
      json ps = json::array();
      for (auto& sp : basis.params) ps.push_back(params_json(sp, *a.field));
      b.detail = {{"point", a.to_json()}, {"dimension", basis.dimension}, {"basis", ps}};
    } catch (const Error& e) {
      b.status = Status::Error;
      b.witness = {{"error", e.what()}};
    }
    sink.emit(b);
  } else {
    sink.emit_all(run_check(ctx, "no-solutions", opt));
  }
  return sink.finish();
}

int cmd_spectrum(const RunConfig& c) {
  Sink sink(c.out);
  sink.emit_all(run_check(make_context(c), "spectrum", options(c)));
  return sink.finish();
}

int cmd_katz(const RunConfig& c) {
  auto ctx = make_context(c);
  auto opt = options(c);
  Sink sink(c.out);
  sink.emit_all(run_check(ctx, "genus", opt));
  sink.emit_all(run_check(ctx, "katz", opt));
  return sink.finish();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-field verifier for KZ connections in characteristic p"};
  app.require_subcommand(1, 1);
  app.set_help_flag("--help", "print help");

  RunConfig cfg;
  std::string config_path, h_flag, q_flag;
  std::optional<int> n_flag, ext_flag, trials_flag;
  std::optional<uint64_t> p_flag, seed_flag;
  std::vector<int> depth_flag;
  std::string out_flag, suite_flag, check_flag;
  bool mutate_flag = false, timing_flag = false;

  auto add_common = [&](CLI::App* sub) {
    // --h is the level, so help is long-form only.
    sub->set_help_flag("--help", "print help");
    sub->add_option("--config", config_path, "JSON config file (flags override it)");
    sub->add_option("--n", n_flag, "number of points n");
    sub->add_option("--p", p_flag, "characteristic p");
    sub->add_option("--ext-degree", ext_flag, "degree k of the field F_{p^k}");
    sub->add_option("--h", h_flag, "level: integer, or digits over F_p such as 1,2");
    sub->add_option("--seed", seed_flag, "base seed");
    sub->add_option("--trials", trials_flag, "points per pointwise check");
    sub->add_option("--depth", depth_flag, "formal truncation order(s)");
    sub->add_option("--q", q_flag, "auxiliary cover exponent for the Katz check, or 'auto'");
    sub->add_option("--out", out_flag, "output file (default stdout)");
    sub->add_option("--suite", suite_flag, "single, quick or grid");
    sub->add_option("--check", check_flag, "check name");
    sub->add_flag("--mutate", mutate_flag, "corrupt the +h family (self-test)");
    sub->add_flag("--timing", timing_flag, "record timings (output is then not reproducible)");
  };
  std::map<std::string, std::function<int(const RunConfig&)>> commands{
      {"gen", cmd_gen},       {"suite", cmd_suite},       {"check", cmd_check}, {"pcurv", cmd_pcurv},
      {"formal", cmd_formal}, {"spectrum", cmd_spectrum}, {"katz", cmd_katz}};
  const std::map<std::string, std::string> help{
      {"gen", "write both p-hypergeometric families as polynomial JSON"},
      {"suite", "run every check for a context or a named grid"},
      {"check", "run one named check"},
      {"pcurv", "p-curvature matrices and their structure checks"},
      {"formal", "formal solutions at a point"},
      {"spectrum", "eigenvalues of p-curvature against critical points"},
      {"katz", "genus identity and the Katz factorization of p-curvature"}};
  for (auto& [name, _] : commands) add_common(app.add_subcommand(name, help.at(name)));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (!config_path.empty()) load_config(config_path, cfg);
    if (n_flag) cfg.n = n_flag;
    if (p_flag) cfg.p = p_flag;
    if (ext_flag) cfg.ext_degree = *ext_flag;
    if (!h_flag.empty()) cfg.h = parse_h(h_flag);
    if (seed_flag) cfg.seed = *seed_flag;
    if (trials_flag) cfg.trials = trials_flag;
    if (!depth_flag.empty()) cfg.depth = depth_flag;
    if (!q_flag.empty()) cfg.q = q_flag;
    if (!out_flag.empty()) cfg.out = out_flag;
    if (!suite_flag.empty()) cfg.suite = suite_flag;
    if (!check_flag.empty()) cfg.check = check_flag;
    cfg.mutate = cfg.mutate || mutate_flag;
    cfg.timing = cfg.timing || timing_flag;
    if (cfg.trials && *cfg.trials < 1) config_error("trials must be positive");
    for (int d : cfg.depth)
      if (d < 1) config_error("depth must be positive");
    return commands.at(app.get_subcommands().front()->get_name())(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
}
