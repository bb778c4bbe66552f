// polywalk: scenario-driven experiment runner over the C API.
//
// polywalk sample|mixing-scan|trace|validate --config FILE
//          [--seed N] [--threads N] [--out DIR]
//
// Configs are single JSON documents (see README for the schema); flags
// override config fields, POLYWALK_THREADS is the thread-count fallback.
// Seeds are always explicit — there is no wall-clock seeding anywhere, and
// outputs are byte-identical for a given (config, seed) at any thread count.
//
// Exit codes: 0 success, 1 runtime failure or validation violations,
// 2 config/usage errors.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <regex>
#include <string>
#include <thread>
#include <vector>

#include "polywalk.h"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// config/usage problems: reported and exited with status 2 (main thread only)
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] void bad_config(const std::string& msg) {
  throw ConfigError("config: " + msg);
}

void require_ok(pw_status st, const std::string& what) {
  if (st == PW_OK) return;
  throw std::runtime_error(what + " failed (" + pw_status_name(st) +
                           "): " + pw_last_error());
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct PolyDelete {
  void operator()(pw_polytope* p) const { pw_polytope_free(p); }
};
struct TrajDelete {
  void operator()(pw_trajectory* t) const { pw_trajectory_free(t); }
};
using PolyPtr = std::unique_ptr<pw_polytope, PolyDelete>;
using TrajPtr = std::unique_ptr<pw_trajectory, TrajDelete>;

PolyPtr generate(const std::string& family, long long m, long long d,
                 uint64_t seed) {
  pw_polytope* p = nullptr;
  const pw_status st = pw_polytope_generate(family.c_str(), m, d, seed, &p);
  // family name and sizes come straight from the config, so a parameter
  // rejection here is the user's config, not a runtime failure
  if (st == PW_ERR_BAD_PARAMS) bad_config(pw_last_error());
  require_ok(st, "generate " + family);
  return PolyPtr(p);
}

// Index-sliced worker pool. Slot-addressed outputs keep results deterministic
// no matter which thread claims which index.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn) {
  const int nt = int(std::min<std::size_t>(std::max(threads, 1), n ? n : 1));
  if (nt <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(nt);
  std::vector<std::thread> pool;
  for (int t = 0; t < nt; ++t)
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// ---- config access ----------------------------------------------------------

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad_config("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    bad_config(path + " is not valid JSON: " + e.what());
  }
}

const json& need(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) bad_config(std::string("missing field '") + key + "'");
  return *it;
}

long long need_count(const json& j, const char* key, long long at_least) {
  const json& v = need(j, key);
  if (!v.is_number_integer() || v.get<long long>() < at_least)
    bad_config(std::string("'") + key + "' must be an integer >= " +
               std::to_string(at_least));
  return v.get<long long>();
}

// ---- family sweeps ------------------------------------------------------------

struct SweepPoint {
  long long n, d;
};

struct FamilySpec {
  std::string name;
  uint64_t gen_seed = 0;
  std::vector<SweepPoint> points;
  std::string axis;  // "n", "d", or "none"
  bool hypercube = false;
};

// m rules like "2d", "2d^2", "2d^3": coefficient times a power of d
long long apply_rule(const std::string& rule, long long d) {
  static const std::regex re(R"(^(\d+)d(\^(\d+))?$)");
  std::smatch mret;
  if (!std::regex_match(rule, mret, re))
    bad_config("m rule '" + rule + "' (want e.g. \"2d\" or \"2d^3\")");
  const long long coef = std::stoll(mret[1]);
  const long long pow = mret[3].matched ? std::stoll(mret[3]) : 1;
  long long v = coef;
  for (long long p = 0; p < pow; ++p) v *= d;
  return v;
}

std::vector<long long> int_list(const json& v, const char* key) {
  std::vector<long long> out;
  for (const json& e : v) {
    if (!e.is_number_integer()) bad_config(std::string(key) + ": integer list");
    out.push_back(e.get<long long>());
  }
  if (out.empty()) bad_config(std::string(key) + ": empty list");
  return out;
}

FamilySpec parse_family(const json& j) {
  FamilySpec f;
  f.name = need(j, "name").get<std::string>();
  f.hypercube = f.name == "hypercube_repeated";
  f.gen_seed = j.value("seed", 0ull);

  const json& dj = need(j, "d");
  const json& mj = need(j, "m");
  if (dj.is_array() && mj.is_array())
    bad_config("only one of m, d may be a list");

  if (dj.is_array()) {
    if (!mj.is_string()) bad_config("a d sweep needs an m rule string");
    for (long long d : int_list(dj, "d"))
      f.points.push_back({apply_rule(mj.get<std::string>(), d), d});
    f.axis = "d";
  } else {
    const long long d = dj.get<long long>();
    if (mj.is_array()) {
      for (long long n : int_list(mj, "m")) f.points.push_back({n, d});
      f.axis = "n";
    } else {
      const long long n = mj.is_string() ? apply_rule(mj.get<std::string>(), d)
                                         : mj.get<long long>();
      f.points.push_back({n, d});
      f.axis = "none";
    }
  }
  for (const SweepPoint& p : f.points)
    if (p.n < 1 || p.d < 1) bad_config("family sizes must be >= 1");
  return f;
}

// ---- walks ----------------------------------------------------------------

struct WalkSpec {
  std::string name;
  int kind = PW_WALK_DIKIN;
  double r = 0;            // resolved radius
  bool auto_r = false;
  double tuned_acceptance = -1;  // filled when auto_r
  bool tuned_converged = true;
};

int walk_kind_of(const std::string& s) {
  if (s == "dikin") return PW_WALK_DIKIN;
  if (s == "vaidya") return PW_WALK_VAIDYA;
  if (s == "john") return PW_WALK_JOHN;
  bad_config("unknown walk kind '" + s + "'");
}

WalkSpec parse_walk(const json& j) {
  WalkSpec w;
  w.name = need(j, "kind").get<std::string>();
  w.kind = walk_kind_of(w.name);
  const json& rj = need(j, "r");
  if (rj.is_string()) {
    if (rj.get<std::string>() != "auto") bad_config("r must be a number or \"auto\"");
    w.auto_r = true;
  } else {
    w.r = rj.get<double>();
    if (!(w.r > 0)) bad_config("r must be > 0");
  }
  return w;
}

std::vector<WalkSpec> parse_walks(const json& cfg) {
  const json& wj = need(cfg, "walks");
  if (!wj.is_array() || wj.empty()) bad_config("'walks' must be a nonempty list");
  std::vector<WalkSpec> walks;
  for (const json& e : wj) walks.push_back(parse_walk(e));
  return walks;
}

pw_walk_config c_config(const WalkSpec& w) {
  pw_walk_config c{};
  c.kind = w.kind;
  c.r = w.r;
  c.john_tol = 0;
  c.lazy_prob = -1;
  c.scale_override = 0;
  return c;
}

// "auto" radius: tune once per sweep on the given instance, target 0.5
void resolve_radius(WalkSpec& w, pw_polytope* P, uint64_t tune_seed) {
  if (!w.auto_r) return;
  pw_walk_config probe = c_config(w);
  probe.r = 0.5;
  int converged = 0;
  require_ok(pw_tune_radius(P, &probe, nullptr, 0.5, tune_seed, &w.r,
                            &w.tuned_acceptance, &converged),
             "tune_radius(" + w.name + ")");
  w.tuned_converged = converged != 0;
  if (!w.tuned_converged)
    std::cerr << "polywalk: warning: radius tuning for " << w.name
              << " missed the 0.5 target (best acceptance "
              << w.tuned_acceptance << ")\n";
}

json walk_meta(const std::vector<WalkSpec>& walks) {
  json out = json::array();
  for (const WalkSpec& w : walks) {
    json e{{"kind", w.name}, {"r", w.r}, {"r_source", w.auto_r ? "auto" : "config"}};
    if (w.auto_r) {
      e["tuned_acceptance"] = w.tuned_acceptance;
      e["tuned_converged"] = w.tuned_converged;
    }
    out.push_back(e);
  }
  return out;
}

// ---- shared run context ----------------------------------------------------

struct RunContext {
  json cfg;
  uint64_t seed = 0;
  int threads = 1;
  fs::path out_dir;
};

std::ofstream open_out_file(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

void write_meta(const RunContext& rc, json meta) {
  meta["seed"] = rc.seed;
  meta["threads"] = rc.threads;
  auto out = open_out_file(rc.out_dir / "run_meta.json");
  out << meta.dump(2) << '\n';
}

// per-d warm-start width: the Fig-4 value for d=2, the M=100 solve otherwise
double sigma_for(const json& cfg, long long d) {
  if (cfg.contains("sigma")) return need(cfg, "sigma").get<double>();
  if (d == 2) return 0.2;
  double s = 0;
  require_ok(pw_box_sigma_for_warmness(d, 100.0, &s), "box_sigma_for_warmness");
  return s;
}

// ---- scenarios --------------------------------------------------------------

int run_sample(const RunContext& rc) {
  const json& cfg = rc.cfg;
  FamilySpec fam = parse_family(need(cfg, "family"));
  if (fam.axis != "none") bad_config("sample takes a single (m, d), not a sweep");
  std::vector<WalkSpec> walks = parse_walks(cfg);
  const long long chains = need_count(cfg, "chains", 1);
  const long long steps = need_count(cfg, "steps", 0);
  const long long thin = cfg.contains("thin") ? need_count(cfg, "thin", 1) : 1;
  const bool warm = cfg.contains("sigma_warm");
  const double sigma = warm ? need(cfg, "sigma_warm").get<double>() : 0.0;

  PolyPtr P = generate(fam.name, fam.points[0].n, fam.points[0].d, fam.gen_seed);
  const long long d = pw_polytope_dim(P.get());

  for (std::size_t w = 0; w < walks.size(); ++w)
    resolve_radius(walks[w], P.get(),
                   pw_chain_seed(pw_chain_seed(rc.seed, w), 0));

  // chain (w, c) runs on its own seed hierarchy:
  //   walk stream  = chain_seed(seed, w)
  //   chain stream = chain_seed(walk stream, 1 + c)   (0 is the tuner's)
  //   warm draw    = chain_seed(chain stream, 0), walk = chain_seed(.., 1)
  struct Job {
    TrajPtr traj;
    double m_bound = 0;
  };
  std::vector<Job> jobs(walks.size() * chains);
  parallel_for(jobs.size(), rc.threads, [&](std::size_t i) {
    const std::size_t w = i / chains, c = i % chains;
    const uint64_t sc = pw_chain_seed(pw_chain_seed(rc.seed, w), 1 + c);
    std::vector<double> x0(d);
    const double* x0p = nullptr;
    if (warm) {
      require_ok(pw_warm_start(P.get(), sigma, pw_chain_seed(sc, 0), x0.data(),
                               &jobs[i].m_bound, nullptr),
                 "warm_start");
      x0p = x0.data();
    }
    pw_walk_config wc = c_config(walks[w]);
    pw_trajectory* t = nullptr;
    require_ok(pw_run_chain(P.get(), &wc, x0p, steps, pw_chain_seed(sc, 1),
                            thin, &t),
               "run_chain(" + walks[w].name + ")");
    jobs[i].traj.reset(t);
  });

  json files = json::array();
  for (std::size_t w = 0; w < walks.size(); ++w)
    for (long long c = 0; c < chains; ++c) {
      const Job& job = jobs[w * chains + c];
      const std::string base =
          "sample_" + walks[w].name + "_chain" + std::to_string(c);
      const fs::path csv = rc.out_dir / (base + ".csv");
      const fs::path stats = rc.out_dir / (base + "_stats.json");
      require_ok(pw_trajectory_write_csv(job.traj.get(), csv.string().c_str()),
                 "write " + csv.string());
      require_ok(
          pw_trajectory_stats_json(job.traj.get(), stats.string().c_str()),
          "write " + stats.string());
      files.push_back(base + ".csv");
      files.push_back(base + "_stats.json");
    }

  json meta{{"scenario", "sample"},
            {"family", cfg["family"]},
            {"walks", walk_meta(walks)},
            {"chains", chains},
            {"steps", steps},
            {"thin", thin},
            {"start", warm ? "warm" : "analytic-center"}};
  if (warm) {
    meta["sigma_warm"] = sigma;
    meta["warmness_bound"] = jobs[0].m_bound;
  }
  meta["outputs"] = files;
  write_meta(rc, meta);
  return 0;
}

// khat by grid TV for families where the hypercube target set is undefined:
// each chain's states are recorded every tv_every steps, and khat is the first
// cadence whose across-chain empirical distribution is within threshold of
// uniform. Flagged as "grid_tv" in run_meta.json.
struct TvMixRow {
  uint64_t khat = 0;
  bool not_mixed = false;
};

TvMixRow grid_tv_mix(pw_polytope* P, const pw_walk_config& wc, long long chains,
                     double sigma, double threshold, long long max_k,
                     long long tv_every, int grid_n, uint64_t seed,
                     int threads) {
  const long long d = pw_polytope_dim(P);
  if (d != 2) bad_config("grid-TV mixing needs d = 2");
  if (chains < 10ll * grid_n * grid_n)
    bad_config("grid-TV mixing needs chains >= 10 * grid_n^2");

  const long long slots = max_k / tv_every + 1;
  std::vector<double> states(chains * slots * 2);
  parallel_for(chains, threads, [&](std::size_t c) {
    const uint64_t sc = pw_chain_seed(seed, c);
    std::vector<double> x0(d);
    require_ok(pw_warm_start(P, sigma, pw_chain_seed(sc, 0), x0.data(), nullptr,
                             nullptr),
               "warm_start");
    pw_trajectory* t = nullptr;
    require_ok(pw_run_chain(P, &wc, x0.data(), max_k, pw_chain_seed(sc, 1),
                            tv_every, &t),
               "run_chain");
    TrajPtr traj(t);
    std::vector<double> pts(pw_trajectory_len(t) * 2);
    require_ok(pw_trajectory_points(t, pts.data()), "trajectory_points");
    for (long long s = 0; s < slots; ++s) {
      states[(s * chains + c) * 2] = pts[2 * s];
      states[(s * chains + c) * 2 + 1] = pts[2 * s + 1];
    }
  });

  for (long long s = 0; s < slots; ++s) {
    double tv = 0;
    require_ok(pw_grid_tv_to_uniform(P, &states[s * chains * 2], chains, grid_n,
                                     &tv),
               "grid_tv_to_uniform");
    if (tv <= threshold) return {uint64_t(s * tv_every), false};
  }
  return {uint64_t(max_k), true};
}

int run_mixing_scan(const RunContext& rc) {
  const json& cfg = rc.cfg;
  FamilySpec fam = parse_family(need(cfg, "family"));
  std::vector<WalkSpec> walks = parse_walks(cfg);
  const long long chains = need_count(cfg, "chains", 1);
  const long long max_k = need_count(cfg, "max_k", 1);
  const double threshold = cfg.value("threshold", 0.05);
  const long long tv_every =
      cfg.contains("tv_every") ? need_count(cfg, "tv_every", 1) : 10;
  const int grid_n = int(cfg.value("grid_n", 4));

  auto mixing = open_out_file(rc.out_dir / "mixing.csv");
  mixing << "family,n,d,walk,r,khat,threshold,replications,seed\n";

  json sigmas = json::array();
  struct FitPoint {
    double x, khat;
  };
  std::vector<std::vector<FitPoint>> fit(walks.size());
  bool any_not_mixed = false;

  for (std::size_t w = 0; w < walks.size(); ++w) {
    const uint64_t walk_stream = pw_chain_seed(rc.seed, w);
    {
      PolyPtr first =
          generate(fam.name, fam.points[0].n, fam.points[0].d, fam.gen_seed);
      resolve_radius(walks[w], first.get(), pw_chain_seed(walk_stream, 0));
    }
    pw_walk_config wc = c_config(walks[w]);

    for (std::size_t i = 0; i < fam.points.size(); ++i) {
      const SweepPoint pt = fam.points[i];
      PolyPtr P = generate(fam.name, pt.n, pt.d, fam.gen_seed);
      const double sigma = sigma_for(cfg, pt.d);
      if (w == 0)
        sigmas.push_back(json{{"d", pt.d}, {"sigma", sigma}});
      const uint64_t row_seed = pw_chain_seed(walk_stream, 1 + i);

      uint64_t khat = 0;
      bool not_mixed = false;
      if (fam.hypercube) {
        pw_mix_result mix{};
        require_ok(pw_khat_mix(P.get(), &wc, chains, sigma, threshold, max_k,
                               row_seed, rc.threads, &mix),
                   "khat_mix");
        khat = mix.khat;
        not_mixed = mix.not_mixed != 0;
      } else {
        TvMixRow row = grid_tv_mix(P.get(), wc, chains, sigma, threshold, max_k,
                                   tv_every, grid_n, row_seed, rc.threads);
        khat = row.khat;
        not_mixed = row.not_mixed;
      }
      if (not_mixed) {
        any_not_mixed = true;
        std::cerr << "polywalk: warning: " << walks[w].name << " at n=" << pt.n
                  << " d=" << pt.d << " not mixed within max_k=" << max_k
                  << "\n";
      }

      mixing << fam.name << ',' << pt.n << ',' << pt.d << ',' << walks[w].name
             << ',' << fmt17(walks[w].r) << ',' << khat << ','
             << fmt17(threshold) << ',' << chains << ',' << row_seed << '\n';
      if (khat >= 1 && !not_mixed)
        fit[w].push_back({double(fam.axis == "d" ? pt.d : pt.n), double(khat)});
    }
  }
  mixing.close();

  json slope_meta = json::array();
  if (fam.axis != "none") {
    auto slopes = open_out_file(rc.out_dir / "slopes.csv");
    slopes << "walk,slope,intercept,r2\n";
    for (std::size_t w = 0; w < walks.size(); ++w) {
      if (fit[w].size() < 3) {
        std::cerr << "polywalk: warning: " << walks[w].name << " has "
                  << fit[w].size() << " usable points; slope skipped\n";
        slope_meta.push_back(json{{"kind", walks[w].name}, {"fit", "skipped"}});
        continue;
      }
      std::vector<double> xs, ys;
      for (const FitPoint& p : fit[w]) xs.push_back(p.x), ys.push_back(p.khat);
      double slope = 0, icpt = 0, r2 = 0;
      require_ok(pw_fit_loglog_slope(xs.data(), ys.data(), xs.size(), &slope,
                                     &icpt, &r2),
                 "fit_loglog_slope");
      slopes << walks[w].name << ',' << fmt17(slope) << ',' << fmt17(icpt)
             << ',' << fmt17(r2) << '\n';
      slope_meta.push_back(json{{"kind", walks[w].name},
                                {"slope", slope},
                                {"intercept", icpt},
                                {"r2", r2}});
    }
  }

  json meta{{"scenario", "mixing-scan"},
            {"family", cfg["family"]},
            {"walks", walk_meta(walks)},
            {"khat_method", fam.hypercube ? "target_set" : "grid_tv"},
            {"sweep_axis", fam.axis},
            {"chains", chains},
            {"max_k", max_k},
            {"threshold", threshold},
            {"sigma", sigmas},
            {"slopes", slope_meta},
            {"outputs", json::array({"mixing.csv", "slopes.csv"})}};
  if (!fam.hypercube) {
    meta["tv_every"] = tv_every;
    meta["grid_n"] = grid_n;
  }
  write_meta(rc, meta);
  return any_not_mixed ? 1 : 0;
}

int run_trace(const RunContext& rc) {
  const json& cfg = rc.cfg;
  FamilySpec fam = parse_family(need(cfg, "family"));
  if (fam.axis != "none") bad_config("trace takes a single (m, d), not a sweep");
  WalkSpec walk = cfg.contains("walk") ? parse_walk(need(cfg, "walk"))
                                       : parse_walks(cfg).at(0);
  const long long steps = need_count(cfg, "steps", 0);
  const long long thin = cfg.contains("thin") ? need_count(cfg, "thin", 1) : 1;
  const uint64_t direction_seed = cfg.value("direction_seed", rc.seed);

  PolyPtr P = generate(fam.name, fam.points[0].n, fam.points[0].d, fam.gen_seed);
  resolve_radius(walk, P.get(), pw_chain_seed(pw_chain_seed(rc.seed, 0), 0));
  pw_walk_config wc = c_config(walk);

  pw_trajectory* traw = nullptr;
  require_ok(pw_run_chain(P.get(), &wc, nullptr, steps,
                          pw_chain_seed(pw_chain_seed(rc.seed, 0), 1), thin,
                          &traw),
             "run_chain");
  TrajPtr traj(traw);

  const long long len = pw_trajectory_len(traj.get());
  const long long d = pw_trajectory_dim(traj.get());
  std::vector<double> pts(len * d), proj(len);
  std::vector<uint64_t> steps_idx(len);
  require_ok(pw_trajectory_points(traj.get(), pts.data()), "trajectory_points");
  require_ok(pw_trajectory_steps(traj.get(), steps_idx.data()),
             "trajectory_steps");
  require_ok(pw_random_projection_trace(pts.data(), len, d, direction_seed,
                                        proj.data()),
             "random_projection_trace");

  auto out = open_out_file(rc.out_dir / "trace.csv");
  out << "step,proj\n";
  for (long long i = 0; i < len; ++i)
    out << steps_idx[i] << ',' << fmt17(proj[i]) << '\n';

  write_meta(rc, json{{"scenario", "trace"},
                      {"family", cfg["family"]},
                      {"walks", walk_meta({walk})},
                      {"steps", steps},
                      {"thin", thin},
                      {"direction_seed", direction_seed},
                      {"outputs", json::array({"trace.csv"})}});
  return 0;
}

int run_validate(const RunContext& rc, bool have_out_dir) {
  const long long instances = rc.cfg.contains("instances")
                                  ? need_count(rc.cfg, "instances", 1)
                                  : 100;
  std::string report_path;
  if (have_out_dir)
    report_path = (rc.out_dir / "validate_report.txt").string();

  int violations = 0;
  require_ok(pw_validate(int(instances), rc.seed,
                         have_out_dir ? report_path.c_str() : nullptr,
                         &violations),
             "validate");
  std::cout << "validate: " << instances << " instances, " << violations
            << " violation(s)";
  if (have_out_dir) std::cout << " (report: " << report_path << ")";
  std::cout << '\n';
  return violations == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"interior-point polytope sampler and mixing diagnostics"};
  app.require_subcommand(1);

  std::string config_path, out_flag;
  std::optional<uint64_t> seed_flag;
  std::optional<int> threads_flag;
  for (const char* name : {"sample", "mixing-scan", "trace", "validate"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON scenario config")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", seed_flag, "override the config seed");
    sub->add_option("--threads", threads_flag, "worker threads");
    sub->add_option("--out", out_flag, "output directory override");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // app.exit prints the message (or help text); fold CLI11's assorted
    // parse-error codes into the documented usage-error exit
    return app.exit(e) == 0 ? 0 : 2;
  }
  const std::string scenario = app.get_subcommands().at(0)->get_name();

  try {
    RunContext rc;
    rc.cfg = load_config(config_path);

    if (rc.cfg.contains("scenario") &&
        rc.cfg["scenario"].get<std::string>() != scenario)
      bad_config("config is for scenario '" +
                 rc.cfg["scenario"].get<std::string>() + "', not '" + scenario +
                 "'");

    if (seed_flag)
      rc.seed = *seed_flag;
    else if (rc.cfg.contains("seed"))
      rc.seed = rc.cfg["seed"].get<uint64_t>();
    else
      bad_config("a seed is required (config field or --seed)");

    if (threads_flag)
      rc.threads = *threads_flag;
    else if (rc.cfg.contains("threads"))
      rc.threads = rc.cfg["threads"].get<int>();
    else if (const char* env = std::getenv("POLYWALK_THREADS"))
      rc.threads = std::atoi(env);
    if (rc.threads < 1) rc.threads = 1;

    bool have_out = true;
    if (!out_flag.empty())
      rc.out_dir = out_flag;
    else if (rc.cfg.contains("out"))
      rc.out_dir = rc.cfg["out"].get<std::string>();
    else
      have_out = scenario != "validate";  // validate can run report-less
    if (have_out && rc.out_dir.empty()) rc.out_dir = ".";
    if (have_out) fs::create_directories(rc.out_dir);

    if (scenario == "sample") return run_sample(rc);
    if (scenario == "mixing-scan") return run_mixing_scan(rc);
    if (scenario == "trace") return run_trace(rc);
    return run_validate(rc, have_out);
  } catch (const ConfigError& e) {
    std::cerr << "polywalk: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "polywalk: " << e.what() << '\n';
    return 1;
  }
}
