#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <ostream>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "dicke/correlations.hpp"
#include "dicke/entanglement.hpp"
#include "dicke/grid.hpp"
#include "dicke/separability.hpp"
#include "dicke/steady_state.hpp"

namespace dicke {

inline constexpr const char* kSchemaVersion = "1";
inline constexpr int kMaxSweepParticles = 256;

inline const std::vector<std::string>& all_measures() {
  static const std::vector<std::string> names{"observables", "purity", "concurrence", "negativity",
                                              "gmn",         "discord2", "discord_bip", "gqd",
                                              "mid",         "jmulti",   "hankel"};
  return names;
}

inline bool is_entanglement_measure(const std::string& m) {
  return m == "concurrence" || m == "negativity" || m == "gmn";
}

enum class OutputFormat { Csv, Jsonl };
enum class FixedAxis { Z, X };

inline std::string to_string(FixedAxis a) { return a == FixedAxis::Z ? "z" : "x"; }

/// Angles (theta, phi) per qubit of the fixed local measurement.
inline std::vector<double> fixed_angles(FixedAxis a, int qubits) {
  std::vector<double> out(2 * qubits, 0.0);
  for (int q = 0; q < qubits; ++q) out[2 * q] = a == FixedAxis::Z ? std::numbers::pi : std::numbers::pi / 2;
  return out;
}

struct SweepConfig {
  std::vector<int> n_list{8};
  double omega_min = kDefaultOmegaMin;
  double omega_max = kDefaultOmegaMax;
  int steps = kDefaultOmegaSteps;
  GridScale scale = GridScale::Log;
  std::optional<bool> densify;  // unset: densify when an entanglement measure is requested
  std::vector<std::string> measures;
  std::vector<int> n_a;  // empty: N/2 for negativity and discord_bip
  std::vector<int> n_r;  // empty: min(N, 4) for gmn, gqd and mid
  FixedAxis mid_axis = FixedAxis::Z;
  double diag_tol = kDiagonalityTol;
  int workers = 1;
  std::string output;  // empty: stdout
  OutputFormat format = OutputFormat::Csv;
  bool timing = true;
  std::string cache_dir;

  std::vector<double> grid() const {
    auto g = omega_grid(omega_min, omega_max, steps, scale);
    const bool dense = densify.value_or(std::any_of(measures.begin(), measures.end(), is_entanglement_measure));
    return dense ? densify_transition(std::move(g)) : g;
  }

  std::vector<int> na_for(const std::string& measure, int n) const {
    if (!n_a.empty()) return n_a;
    (void)measure;
    return {std::max(1, n / 2)};
  }

  std::vector<int> nr_for(int n) const {
    if (!n_r.empty()) return n_r;
    return {std::min(n, 4)};
  }

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const {
    if (measures.empty()) throw std::invalid_argument("no measures requested");
    if (n_list.empty()) throw std::invalid_argument("no particle numbers requested");
    if (workers < 1) throw std::invalid_argument("workers must be >= 1");
    (void)omega_grid(omega_min, omega_max, steps, scale);
    auto fail = [](const std::string& m, int n, const std::string& why) {
      throw std::invalid_argument(m + " at N = " + std::to_string(n) + ": " + why);
    };
    for (const auto& m : measures)
      if (std::find(all_measures().begin(), all_measures().end(), m) == all_measures().end())
        throw std::invalid_argument("unknown measure '" + m + "'");
    for (int n : n_list) {
      if (n < 1 || n > kMaxSweepParticles)
        throw std::invalid_argument("N = " + std::to_string(n) + " outside [1, " + std::to_string(kMaxSweepParticles) + "]");
      for (const auto& m : measures) {
        if ((m == "concurrence" || m == "discord2" || m == "jmulti") && n < 2) fail(m, n, "needs N >= 2");
        if (m == "jmulti" && n > kMaxMultipartiteQubits) fail(m, n, "limited to N <= 9");
        if (m == "negativity")
          for (int na : na_for(m, n))
            if (na < 1 || na > n / 2) fail(m, n, "n_a = " + std::to_string(na) + " outside [1, N/2]");
        if (m == "discord_bip")
          for (int na : na_for(m, n))
            if (na < 1 || na > n - 1) fail(m, n, "n_a = " + std::to_string(na) + " outside [1, N-1]");
        if (m == "gmn" || m == "gqd" || m == "mid") {
          const int cap = m == "gmn" ? kMaxGmnQubits
                          : m == "gqd" ? kMaxGlobalDiscordOptimizeQubits
                                       : kMaxGlobalDiscordFixedQubits;
          for (int nr : nr_for(n)) {
            if (nr < 2 || nr > n) fail(m, n, "n_r = " + std::to_string(nr) + " outside [2, N]");
            if (nr > cap) fail(m, n, "n_r = " + std::to_string(nr) + " exceeds cap " + std::to_string(cap));
          }
        }
      }
    }
  }
};

inline SweepConfig config_from_json(const nlohmann::json& j) {
  SweepConfig c;
  if (j.contains("n")) c.n_list = j.at("n").get<std::vector<int>>();
  if (j.contains("omega")) {
    const auto& o = j.at("omega");
    c.omega_min = o.value("min", c.omega_min);
    c.omega_max = o.value("max", c.omega_max);
    c.steps = o.value("steps", c.steps);
    const auto scale = o.value("scale", std::string("log"));
    if (scale != "log" && scale != "linear") throw std::invalid_argument("omega.scale must be 'log' or 'linear'");
    c.scale = scale == "log" ? GridScale::Log : GridScale::Linear;
    if (o.contains("densify")) c.densify = o.at("densify").get<bool>();
  }
  if (j.contains("measures")) c.measures = j.at("measures").get<std::vector<std::string>>();
  if (j.contains("na")) c.n_a = j.at("na").get<std::vector<int>>();
  if (j.contains("nr")) c.n_r = j.at("nr").get<std::vector<int>>();
  if (j.contains("angles")) {
    const auto a = j.at("angles").get<std::string>();
    if (a != "z" && a != "x") throw std::invalid_argument("angles must be 'z' or 'x'");
    c.mid_axis = a == "z" ? FixedAxis::Z : FixedAxis::X;
  }
  c.diag_tol = j.value("diag_tol", c.diag_tol);
  c.workers = j.value("workers", c.workers);
  c.output = j.value("output", c.output);
  if (j.contains("format")) {
    const auto f = j.at("format").get<std::string>();
    if (f != "csv" && f != "jsonl") throw std::invalid_argument("format must be 'csv' or 'jsonl'");
    c.format = f == "csv" ? OutputFormat::Csv : OutputFormat::Jsonl;
  }
  c.timing = j.value("timing", c.timing);
  c.cache_dir = j.value("cache", c.cache_dir);
  return c;
}

// ---------------------------------------------------------------------------
// state files

inline nlohmann::json state_to_json(const DickeDensityMatrix& rho, double omega) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (int i = 0; i < rho.dim(); ++i) {
    nlohmann::json rr = nlohmann::json::array(), ri = nlohmann::json::array();
    for (int j = 0; j < rho.dim(); ++j) {
      rr.push_back(rho(i, j).real());
      ri.push_back(rho(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return {{"schema_version", kSchemaVersion}, {"n", rho.n_particles()}, {"omega", omega}, {"re", re}, {"im", im}};
}

inline void write_state(const DickeDensityMatrix& rho, double omega, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << state_to_json(rho, omega).dump() << '\n';
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

inline std::pair<DickeDensityMatrix, double> read_state(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("'" + path.string() + "': " + e.what());
  }
  const int n = j.at("n").get<int>();
  const auto re = j.at("re").get<std::vector<std::vector<double>>>();
  const auto im = j.at("im").get<std::vector<std::vector<double>>>();
  if (static_cast<int>(re.size()) != n + 1 || im.size() != re.size())
    throw std::runtime_error("'" + path.string() + "': matrix shape does not match n");
  CMatrix m(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) {
    if (static_cast<int>(re[i].size()) != n + 1 || static_cast<int>(im[i].size()) != n + 1)
      throw std::runtime_error("'" + path.string() + "': ragged matrix row");
    for (int k = 0; k <= n; ++k) m(i, k) = cplx(re[i][k], im[i][k]);
  }
  return {DickeDensityMatrix(n, m), j.at("omega").get<double>()};
}

/// Compute the steady state for (N, Omega) and write it to `path`.
inline DickeDensityMatrix dump_state(int n, double omega, const std::filesystem::path& path) {
  if (n < 1 || n > kMaxSweepParticles) throw std::invalid_argument("dump_state: N outside [1, 256]");
  auto rho = steady_state({n, omega});
  write_state(rho, omega, path);
  return rho;
}

// ---------------------------------------------------------------------------
// steady-state cache

/// Omega rendered with 12 significant digits; the cache key.
inline std::string omega_key(double omega) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", omega);
  return buf;
}

/// Concurrent reads, exclusive insertion; each key is computed exactly once.
class SteadyStateCache {
 public:
  using Ptr = std::shared_ptr<const DickeDensityMatrix>;

  explicit SteadyStateCache(std::string dir = {}) : dir_(std::move(dir)) {
    if (!dir_.empty()) std::filesystem::create_directories(dir_);
  }

  Ptr get(int n, double omega) {
    const auto key = std::make_pair(n, omega_key(omega));
    {
      std::shared_lock lock(mutex_);
      if (auto it = map_.find(key); it != map_.end()) return it->second.get();
    }
    std::promise<Ptr> promise;
    std::shared_future<Ptr> fut;
    {
      std::unique_lock lock(mutex_);
      if (auto it = map_.find(key); it != map_.end()) {
        fut = it->second;
      } else {
        fut = promise.get_future().share();
        map_.emplace(key, fut);
        lock.unlock();
        try {
          promise.set_value(load_or_compute(n, omega));
          computed_.fetch_add(1);
        } catch (...) {
          promise.set_exception(std::current_exception());
        }
      }
    }
    return fut.get();
  }

  int computed() const noexcept { return computed_.load(); }

 private:
  Ptr load_or_compute(int n, double omega) {
    if (!dir_.empty()) {
      const auto path = std::filesystem::path(dir_) / ("ss_" + std::to_string(n) + "_" + omega_key(omega) + ".json");
      if (std::filesystem::exists(path)) {
        auto [rho, w] = read_state(path);
        if (rho.n_particles() == n && omega_key(w) == omega_key(omega)) return std::make_shared<const DickeDensityMatrix>(rho);
      }
      auto rho = steady_state({n, omega});
      write_state(rho, omega, path);
      return std::make_shared<const DickeDensityMatrix>(std::move(rho));
    }
    return std::make_shared<const DickeDensityMatrix>(steady_state({n, omega}));
  }

  std::string dir_;
  std::shared_mutex mutex_;
  std::map<std::pair<int, std::string>, std::shared_future<Ptr>> map_;
  std::atomic<int> computed_{0};
};

// ---------------------------------------------------------------------------
// sweep

struct SweepRecord {
  int n = 0;
  double omega = 0.0;
  std::string measure;
  std::string params;
  double value = std::numeric_limits<double>::quiet_NaN();
  nlohmann::json aux = nlohmann::json::object();
  double wall_time_ms = 0.0;
  std::string error;  // non-empty for failed points

  bool failed() const { return !error.empty(); }
};

struct MeasureTask {
  int n;
  double omega;
  std::string measure;
  std::string params;
  int na = 0;
  int nr = 0;
};

namespace detail {

inline std::vector<MeasureTask> plan_tasks(const SweepConfig& cfg) {
  std::vector<MeasureTask> tasks;
  const auto grid = cfg.grid();
  for (int n : cfg.n_list)
    for (double w : grid)
      for (const auto& m : cfg.measures) {
        if (m == "negativity" || m == "discord_bip") {
          for (int na : cfg.na_for(m, n)) tasks.push_back({n, w, m, "na=" + std::to_string(na), na, 0});
        } else if (m == "gmn" || m == "gqd") {
          for (int nr : cfg.nr_for(n)) tasks.push_back({n, w, m, "nr=" + std::to_string(nr), 0, nr});
        } else if (m == "mid") {
          for (int nr : cfg.nr_for(n))
            tasks.push_back({n, w, m, "nr=" + std::to_string(nr) + ";axis=" + to_string(cfg.mid_axis), 0, nr});
        } else {
          tasks.push_back({n, w, m, "", 0, 0});
        }
      }
  return tasks;
}

inline SweepRecord blank_record(const MeasureTask& t) {
  SweepRecord r;
  r.n = t.n;
  r.omega = t.omega;
  r.measure = t.measure;
  r.params = t.params;
  return r;
}

inline CMatrix reduced_register(const DickeDensityMatrix& rho, int nr) {
  return expand_to_qubits(nr == rho.n_particles() ? rho : reduce_dicke(rho, nr), kMaxGlobalDiscordFixedQubits);
}

/// One or more records for a task (observables yields one per component).
inline std::vector<SweepRecord> evaluate(const MeasureTask& t, const DickeDensityMatrix& rho, const SweepConfig& cfg) {
  SweepRecord r = blank_record(t);
  const auto& m = t.measure;
  if (m == "observables") {
    const auto o = observables(rho);
    std::vector<SweepRecord> out;
    for (auto [name, v] : {std::pair{"jx", o.jx}, {"jy", o.jy}, {"jz", o.jz}}) {
      SweepRecord c = r;
      c.params = std::string("component=") + name;
      c.value = v;
      out.push_back(std::move(c));
    }
    return out;
  }
  if (m == "purity") {
    r.value = (rho.matrix() * rho.matrix()).trace().real();
  } else if (m == "concurrence") {
    r.value = concurrence_pairwise(rho);
  } else if (m == "negativity") {
    r.value = negativity(rho, t.na).value;
  } else if (m == "gmn") {
    const auto res = gmn(reduced_register(rho, t.nr));
    r.value = res.gmn;
    r.aux = {{"duality_gap", res.duality_gap}, {"iterations", res.iterations},
             {"status", sdp::to_string(res.status)}, {"symmetric", res.symmetric}};
    if (res.status != sdp::Status::Optimal) r.error = std::string("solver status ") + sdp::to_string(res.status);
  } else if (m == "discord2") {
    const auto d = discord_2qubit(rho);
    r.value = d.discord;
    r.aux = {{"theta", d.optimal_angles[0]}, {"phi", d.optimal_angles[1]}, {"classical", d.classical},
             {"total", d.total}};
  } else if (m == "discord_bip") {
    const auto d = discord_bipartite_upper(rho, t.na);
    r.value = d.discord;
    r.aux = {{"theta", d.optimal_angles[0]}, {"phi", d.optimal_angles[1]}, {"classical", d.classical},
             {"total", d.total}};
  } else if (m == "gqd") {
    const auto g = global_discord_optimized(reduced_register(rho, t.nr));
    r.value = g.value;
    r.aux = {{"angles", g.angles}};
  } else if (m == "mid") {
    r.value = global_discord_at(reduced_register(rho, t.nr), fixed_angles(cfg.mid_axis, t.nr));
  } else if (m == "jmulti") {
    const auto j = multipartite_classical_correlation(rho);
    r.value = j.value;
    r.aux = {{"theta", j.angles[0]}, {"phi", j.angles[1]}};
  } else if (m == "hankel") {
    const auto v = hankel_test(diagonal_symmetric_chi(rho, cfg.diag_tol));
    r.value = std::min(v.min_eig_h0, v.min_eig_h1);
    r.aux = {{"separable", v.separable}, {"min_eig_h0", v.min_eig_h0}, {"min_eig_h1", v.min_eig_h1},
             {"off_diagonal_mass", off_diagonal_mass(rho.matrix())}};
  } else {
    throw std::invalid_argument("unknown measure '" + m + "'");
  }
  return {r};
}

}  // namespace detail

/// Evaluate every (N, Omega, measure, params) point. Failures become error records.
inline std::vector<SweepRecord> run_sweep(const SweepConfig& cfg, SteadyStateCache* cache = nullptr) {
  cfg.validate();
  SteadyStateCache local(cfg.cache_dir);
  SteadyStateCache& states = cache ? *cache : local;
  const auto tasks = detail::plan_tasks(cfg);
  std::vector<std::vector<SweepRecord>> slots(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
      const auto& t = tasks[i];
      const auto start = std::chrono::steady_clock::now();
      try {
        const auto rho = states.get(t.n, t.omega);
        slots[i] = detail::evaluate(t, *rho, cfg);
      } catch (const std::exception& e) {
        SweepRecord r = detail::blank_record(t);
        r.error = e.what();
        slots[i] = {r};
      }
      const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      for (auto& r : slots[i]) r.wall_time_ms = cfg.timing ? ms : 0.0;
    }
  };
  const int nthreads = std::min<int>(cfg.workers, std::max<std::size_t>(tasks.size(), 1));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < nthreads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  std::vector<SweepRecord> out;
  for (auto& s : slots)
    for (auto& r : s) out.push_back(std::move(r));
  std::stable_sort(out.begin(), out.end(), [](const SweepRecord& a, const SweepRecord& b) {
    return std::tie(a.n, a.omega, a.measure, a.params) < std::tie(b.n, b.omega, b.measure, b.params);
  });
  return out;
}

// ---------------------------------------------------------------------------
// output

inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
  os << "n,omega,measure,params,value,wall_time_ms\n";
  for (const auto& r : records)
    os << r.n << ',' << format_real(r.omega) << ',' << r.measure << ',' << r.params << ','
       << format_real(r.failed() ? std::numeric_limits<double>::quiet_NaN() : r.value) << ','
       << format_real(r.wall_time_ms) << '\n';
}

inline void write_jsonl(std::ostream& os, const std::vector<SweepRecord>& records) {
  for (const auto& r : records) {
    nlohmann::json j{{"schema_version", kSchemaVersion}, {"n", r.n},          {"omega", r.omega},
                     {"measure", r.measure},             {"params", r.params}, {"aux", r.aux},
                     {"wall_time_ms", r.wall_time_ms}};
    if (r.failed()) {
      j["value"] = nullptr;
      j["error"] = r.error;
    } else {
      j["value"] = r.value;
    }
    os << j.dump() << '\n';
  }
}

inline void write_records(std::ostream& os, const std::vector<SweepRecord>& records, OutputFormat f) {
  f == OutputFormat::Csv ? write_csv(os, records) : write_jsonl(os, records);
}

}  // namespace dicke
