#include "polyaforge/cli.hpp"

#include <CLI11.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "polyaforge/boltzmann.hpp"
#include "polyaforge/crt.hpp"
#include "polyaforge/enumeration.hpp"
#include "polyaforge/limit_stats.hpp"
#include "polyaforge/oracle.hpp"

namespace polyaforge {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kDigits = 12;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string omega = "1+";
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::string format = "csv";
  std::string method = "conditioned";
  unsigned threads = 1;
  std::size_t max_n = 20;
  std::size_t n = 0;
  std::vector<std::size_t> sizes;
  std::size_t count = 1;
  std::size_t samples = 1000;
  std::string cls = "auto";
  bool stats_only = false;
  bool statistical = false;
  std::size_t oracle_max_n = 10;
  std::size_t draws = 20000;
  std::size_t k = 2;
  bool all_vertices = false;
  std::string in_path;
  double x = 1;
  double tol = 1e-15;
  int moment = 1;
  double xmax = 3;
  double step = 0.01;
};

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(kDigits) << v;
  return s.str();
}

double round_sig(double v) { return std::stod(fmt(v)); }

std::string csv_field(const std::string& s) {
  return s.find(',') == std::string::npos ? s : '"' + s + '"';
}

// Output sink: the --out file when given, otherwise stdout.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw UsageError("cannot open " + path + " for writing");
    stream_ = file_.get();
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

DegreeRestriction restriction_of(const Options& o, std::ostream& err) {
  auto r = DegreeRestriction::from_omega(DegreeSet::parse(o.omega));
  err << "omega=" << r.omega.to_string() << " period=" << r.period << " min_n=2\n";
  return r;
}

std::uint64_t seed_of(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("POLYAFORGE_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("POLYAFORGE_SEED is not an unsigned integer: ") + env);
  }
  return 0;
}

SamplerOptions sampler_of(const Options& o) {
  SamplerOptions s;
  s.threads = o.threads;
  if (o.method == "rejection") {
    s.method = SamplingMethod::rejection;
  } else if (o.method != "conditioned") {
    throw UsageError("--method must be conditioned or rejection");
  }
  return s;
}

void require_size(const DegreeRestriction& r, std::size_t n) {
  if (n < 2 || !r.size_admissible(static_cast<long long>(n))) {
    throw UsageError("no trees with n = " + std::to_string(n) + " vertices for omega " + r.omega.to_string() +
                     ": need n >= 2 and n = 2 mod " + std::to_string(r.period) + " (gcd of omega - 1)");
  }
}

std::size_t max_of(const std::vector<std::size_t>& v) { return v.empty() ? 0 : *std::max_element(v.begin(), v.end()); }

int cmd_count(const Options& o, std::ostream& out, std::ostream& err) {
  auto r = restriction_of(o, err);
  auto c = cycle_pointing_counts(r.omega, std::max<std::size_t>(o.max_n, 1));
  Sink sink(o.out_path, out);
  const bool json = o.format == "json" || o.format == "ndjson";
  if (!json && o.format != "csv") throw UsageError("--format must be csv or json");
  if (!json) *sink << "n,a_n,s_n,e_n,v_n,f_n,identity_ok\n";
  for (std::size_t n = 0; n <= o.max_n; ++n) {
    const bool ok = n < 2 || c.identity_holds(n);
    if (json) {
      // written by hand: counts exceed 64 bits and JSON numbers have no size limit
      *sink << "{\"n\":" << n << ",\"a_n\":" << c.a[n] << ",\"s_n\":" << c.s[n] << ",\"e_n\":" << c.e[n]
            << ",\"v_n\":" << c.v[n] << ",\"f_n\":" << c.f[n] << ",\"identity_ok\":" << (ok ? "true" : "false")
            << "}\n";
    } else {
      *sink << n << ',' << c.a[n] << ',' << c.s[n] << ',' << c.e[n] << ',' << c.v[n] << ',' << c.f[n] << ','
            << (ok ? "true" : "false") << '\n';
    }
  }
  return kExitOk;
}

CyclePointedTree sample_class(const BoltzmannContext& ctx, const std::string& cls, std::size_t n, RandomSource& rng,
                              SamplingMethod m) {
  if (cls == "S") return sample_S_exact(ctx, n, rng, m);
  if (cls == "E") return sample_E_exact(ctx, n, rng, m);
  if (cls == "V") return sample_V_exact(ctx, n, rng, m);
  return sample_unrooted_exact(ctx, n, rng, m);
}

int cmd_sample(const Options& o, std::ostream& out, std::ostream& err) {
  auto r = restriction_of(o, err);
  require_size(r, o.n);
  if (o.cls != "auto" && o.cls != "S" && o.cls != "E" && o.cls != "V") {
    throw UsageError("--class must be S, E, V or auto");
  }
  const auto opts = sampler_of(o);
  const auto ctx = BoltzmannContext::build(r.omega, o.n);
  auto trees = replicate(o.count, derive_seed(seed_of(o), o.n), opts.threads, [&](RandomSource& rng, std::size_t) {
    return sample_class(ctx, o.cls, o.n, rng, opts.method);
  });
  Sink sink(o.out_path, out);
  if (o.stats_only) *sink << "index,diameter,class,attempts\n";
  for (std::size_t i = 0; i < trees.size(); ++i) {
    const auto& t = trees[i];
    if (o.stats_only) {
      *sink << i << ',' << diameter(t.tree) << ',' << to_char(t.cls) << ',' << t.attempts << '\n';
    } else {
      *sink << to_json(t.tree).dump() << '\n';
    }
  }
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  auto r = restriction_of(o, err);
  bool ok = true;
  auto report = [&](const std::string& what, bool pass) {
    out << what << ": " << (pass ? "ok" : "FAILED") << '\n';
    ok = ok && pass;
  };
  CyclePointingCounts c;
  try {
    c = cycle_pointing_counts(r.omega, std::max<std::size_t>(o.max_n, 2));
    report("integrality n <= " + std::to_string(c.max_n()), true);
  } catch (const IntegralityViolation& e) {
    report(std::string("integrality (") + e.what() + ")", false);
    return kExitFailed;
  }
  std::size_t bad = 0;
  for (std::size_t n = 2; n <= c.max_n(); ++n) bad += !c.identity_holds(n);
  report("identity n f_n = s_n + e_n + v_n for 2 <= n <= " + std::to_string(c.max_n()) + " (" +
             std::to_string(bad) + " mismatches)",
         bad == 0);

  bool periodic = true;
  for (std::size_t n = 2; n <= c.max_n(); ++n) {
    if (!r.size_admissible(static_cast<long long>(n))) periodic = periodic && c.f[n] == 0 && c.pointed[n] == 0;
  }
  report("periodicity n = 2 mod " + std::to_string(r.period), periodic);

  const auto oracle_n = std::min({o.oracle_max_n, c.max_n(), static_cast<std::size_t>(kBruteForceMaxN)});
  bool oracle = true;
  for (std::size_t n = 1; n <= oracle_n; ++n) {
    const int m = static_cast<int>(n);
    oracle = oracle && c.a[n] == brute_force_enumerate(r.omega, m, ObjectKind::rooted).size() &&
             c.f[n] == brute_force_enumerate(r.omega, m, ObjectKind::free).size() &&
             c.s[n] == brute_force_enumerate(r.omega, m, ObjectKind::S).size() &&
             c.e[n] == brute_force_enumerate(r.omega, m, ObjectKind::E).size() &&
             c.v[n] == brute_force_enumerate(r.omega, m, ObjectKind::V).size();
  }
  report("brute-force oracle n <= " + std::to_string(oracle_n), oracle);

  if (o.statistical) {
    const auto opts = sampler_of(o);
    const std::size_t top = std::min<std::size_t>(c.max_n(), 10);
    const auto ctx = BoltzmannContext::build(r.omega, top);
    for (std::size_t n = 4; n <= top; ++n) {
      if (!r.size_admissible(static_cast<long long>(n))) continue;
      auto codes = brute_force_enumerate(r.omega, static_cast<int>(n), ObjectKind::free);
      if (codes.size() < 2) continue;
      std::map<CanonicalCode, std::size_t> index;
      for (std::size_t i = 0; i < codes.size(); ++i) index[codes[i]] = i;
      auto hits = replicate(o.draws, derive_seed(seed_of(o), n), opts.threads, [&](RandomSource& rng, std::size_t) {
        auto it = index.find(free_canonical_code(sample_unrooted_exact(ctx, n, rng, opts.method).tree));
        return it == index.end() ? codes.size() : it->second;
      });
      std::vector<double> observed(codes.size(), 0);
      bool known = true;
      for (auto h : hits) {
        if (h == codes.size()) {
          known = false;
        } else {
          observed[h] += 1;
        }
      }
      const double e = static_cast<double>(o.draws) / static_cast<double>(codes.size());
      double stat = 0;
      for (double x : observed) stat += (x - e) * (x - e) / e;
      boost::math::chi_squared dist(static_cast<double>(codes.size() - 1));
      const double p = boost::math::cdf(boost::math::complement(dist, stat));
      report("sampler uniformity n = " + std::to_string(n) + " (p = " + fmt(p) + ")", known && p > 1e-3);
    }
  }
  return ok ? kExitOk : kExitFailed;
}

int cmd_diam_stats(const Options& o, std::ostream& out, std::ostream& err) {
  auto r = restriction_of(o, err);
  for (auto n : o.sizes) require_size(r, n);
  const auto opts = sampler_of(o);
  const auto ctx = BoltzmannContext::build(r.omega, max_of(o.sizes));
  Sink sink(o.out_path, out);
  *sink << "omega,n,sample_idx,diameter\n";
  const auto omega = csv_field(r.omega.to_string());
  for (auto n : o.sizes) {
    auto s = collect_diameters(ctx, n, o.samples, seed_of(o), opts);
    for (std::size_t i = 0; i < s.values.size(); ++i) *sink << omega << ',' << n << ',' << i << ',' << fmt(s.values[i]) << '\n';
  }
  return kExitOk;
}

// Reads omega,n,sample_idx,diameter rows as written by diam-stats.
std::vector<DiameterSample> read_diameters(const std::string& path, const DegreeSet& omega) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::string line;
  std::getline(in, line);
  if (line.rfind("omega,n,sample_idx,diameter", 0) != 0) throw UsageError(path + ": unexpected header");
  std::map<std::size_t, DiameterSample> by_n;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t pos = 0;
    if (line[0] == '"') {
      pos = line.find('"', 1);
      if (pos == std::string::npos) throw UsageError(path + ": unterminated quote");
      ++pos;
    } else {
      pos = line.find(',');
    }
    std::vector<std::string> rest;
    std::stringstream tail(line.substr(pos + 1));
    for (std::string f; std::getline(tail, f, ',');) rest.push_back(f);
    if (rest.size() != 3) throw UsageError(path + ": malformed row: " + line);
    const auto n = static_cast<std::size_t>(std::stoull(rest[0]));
    auto& s = by_n[n];
    s.omega = omega;
    s.n = n;
    s.values.push_back(std::stod(rest[2]));
  }
  std::vector<DiameterSample> out;
  for (auto& [n, s] : by_n) out.push_back(std::move(s));
  return out;
}

int cmd_calibrate(const Options& o, std::ostream& out, std::ostream& err) {
  auto r = restriction_of(o, err);
  std::vector<DiameterSample> samples;
  if (!o.in_path.empty()) {
    samples = read_diameters(o.in_path, r.omega);
  } else {
    for (auto n : o.sizes) require_size(r, n);
    const auto ctx = BoltzmannContext::build(r.omega, max_of(o.sizes));
    for (auto n : o.sizes) samples.push_back(collect_diameters(ctx, n, o.samples, seed_of(o), sampler_of(o)));
  }
  auto cal = calibrate_scaling(samples);
  nlohmann::ordered_json j;
  j["omega"] = r.omega.to_string();
  j["e_hat"] = round_sig(cal.e_hat);
  j["per_n"] = nlohmann::ordered_json::object();
  for (const auto& [n, e] : cal.per_n) j["per_n"][std::to_string(n)] = round_sig(e);
  j["per_n_stderr"] = nlohmann::ordered_json::object();
  for (const auto& [n, se] : cal.per_n_stderr) j["per_n_stderr"][std::to_string(n)] = round_sig(se);
  j["stderr"] = round_sig(cal.std_error);
  Sink sink(o.out_path, out);
  *sink << j.dump() << '\n';
  return kExitOk;
}

int cmd_local_stats(const Options& o, std::ostream& out, std::ostream& err) {
  auto r = restriction_of(o, err);
  for (auto n : o.sizes) require_size(r, n);
  const auto opts = sampler_of(o);
  const auto ctx = BoltzmannContext::build(r.omega, max_of(o.sizes));
  Sink sink(o.out_path, out);
  *sink << "code,count,n,k\n";
  for (auto n : o.sizes) {
    auto d = neighborhood_census(ctx, n, o.k, o.samples, seed_of(o), opts, o.all_vertices);
    for (const auto& [code, c] : d.counts) *sink << code.to_string() << ',' << c << ',' << n << ',' << o.k << '\n';
  }
  return kExitOk;
}

int cmd_crt(const std::string& which, const Options& o, std::ostream& out) {
  if (which == "tail") {
    out << fmt(crt_diameter_tail(o.x, o.tol).value) << '\n';
  } else if (which == "moment") {
    out << fmt(crt_diameter_moment(o.moment).value) << '\n';
  } else {
    if (!(o.step > 0) || !(o.xmax >= 0)) throw UsageError("--step must be positive and --xmax non-negative");
    Sink sink(o.out_path, out);
    *sink << "x,tail\n";
    const auto steps = static_cast<std::size_t>(std::floor(o.xmax / o.step + 1e-9));
    for (std::size_t i = 0; i <= steps; ++i) {
      const double x = static_cast<double>(i) * o.step;
      *sink << fmt(x) << ',' << fmt(crt_diameter_tail(x).value) << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Unlabelled trees with degree restrictions: counting, sampling and limit statistics", "polyaforge"};
  app.require_subcommand(1);
  Options o;

  auto add_omega = [&](CLI::App* c) {
    c->add_option("--omega", o.omega, "degree set, e.g. 1,3 or 1,2,3+")->capture_default_str();
  };
  auto add_seed = [&](CLI::App* c) {
    c->add_option("--seed", o.seed, "64-bit seed (fallback: POLYAFORGE_SEED, then 0)");
    c->add_option("--threads", o.threads, "worker threads; output does not depend on it")->capture_default_str();
    c->add_option("--method", o.method, "conditioned or rejection")->capture_default_str();
  };

  auto* count = app.add_subcommand("count", "exact counts a_n, s_n, e_n, v_n, f_n");
  add_omega(count);
  count->add_option("--max-n", o.max_n, "largest n")->capture_default_str();
  count->add_option("--format", o.format, "csv or json")->capture_default_str();
  count->add_option("--out", o.out_path, "output file");

  auto* sample = app.add_subcommand("sample", "uniform random trees as NDJSON");
  add_omega(sample);
  add_seed(sample);
  sample->add_option("-n", o.n, "number of vertices")->required();
  sample->add_option("--count", o.count, "number of trees")->capture_default_str();
  sample->add_option("--class", o.cls, "S, E, V or auto")->capture_default_str();
  sample->add_flag("--stats-only", o.stats_only, "CSV of index, diameter, class, attempts");
  sample->add_option("--out", o.out_path, "output file");

  auto* verify = app.add_subcommand("verify", "check counting invariants; exit 1 on failure");
  add_omega(verify);
  add_seed(verify);
  verify->add_option("--max-n", o.max_n, "largest n for the exact checks")->capture_default_str();
  verify->add_option("--oracle-max-n", o.oracle_max_n, "largest n for brute force")->capture_default_str();
  verify->add_flag("--statistical", o.statistical, "also chi-square test the sampler at small n");
  verify->add_option("--draws", o.draws, "draws per size for --statistical")->capture_default_str();

  auto* diam = app.add_subcommand("diam-stats", "diameters of uniform random trees");
  add_omega(diam);
  add_seed(diam);
  diam->add_option("--n", o.sizes, "sizes, comma separated")->delimiter(',')->required();
  diam->add_option("--samples", o.samples, "trees per size")->capture_default_str();
  diam->add_option("--out", o.out_path, "output file");

  auto* calibrate = app.add_subcommand("calibrate", "estimate the diameter scaling constant");
  add_omega(calibrate);
  add_seed(calibrate);
  calibrate->add_option("--in", o.in_path, "diam-stats CSV (otherwise sample afresh)");
  calibrate->add_option("--n", o.sizes, "sizes, comma separated")->delimiter(',');
  calibrate->add_option("--samples", o.samples, "trees per size")->capture_default_str();
  calibrate->add_option("--out", o.out_path, "output file");

  auto* local = app.add_subcommand("local-stats", "census of radius-k neighborhoods of a uniform vertex");
  add_omega(local);
  add_seed(local);
  local->add_option("--k", o.k, "radius")->capture_default_str();
  local->add_option("--n", o.sizes, "sizes, comma separated")->delimiter(',')->required();
  local->add_option("--samples", o.samples, "trees per size")->capture_default_str();
  local->add_flag("--all-vertices", o.all_vertices, "count every vertex of every tree");
  local->add_option("--out", o.out_path, "output file");

  auto* crt = app.add_subcommand("crt", "diameter law of the continuum random tree");
  crt->require_subcommand(1);
  auto* tail = crt->add_subcommand("tail", "P(D > x)");
  tail->add_option("--x", o.x, "argument")->required();
  tail->add_option("--tol", o.tol, "truncation tolerance")->capture_default_str();
  auto* moment = crt->add_subcommand("moment", "E[D^k]");
  moment->add_option("--k", o.moment, "order")->required();
  auto* table = crt->add_subcommand("table", "x,tail CSV");
  table->add_option("--xmax", o.xmax, "largest x")->capture_default_str();
  table->add_option("--step", o.step, "grid step")->capture_default_str();
  table->add_option("--out", o.out_path, "output file");

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*count) return cmd_count(o, out, err);
    if (*sample) return cmd_sample(o, out, err);
    if (*verify) return cmd_verify(o, out, err);
    if (*diam) return cmd_diam_stats(o, out, err);
    if (*calibrate) return cmd_calibrate(o, out, err);
    if (*local) return cmd_local_stats(o, out, err);
    if (*tail) return cmd_crt("tail", o, out);
    if (*moment) return cmd_crt("moment", o, out);
    if (*table) return cmd_crt("table", o, out);
  } catch (const IntegralityViolation& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace polyaforge
