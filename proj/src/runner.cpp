#include "redsim/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace fs = std::filesystem;

namespace redsim {

namespace {

std::string fmt9(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  return buf;
}

std::string fmt_alpha(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

TrafficPattern parse_pattern(const std::string& p) {
  if (p == "constant") return TrafficPattern::Constant;
  if (p == "gravity") return TrafficPattern::Gravity;
  throw std::runtime_error("runner: unknown pattern " + p);
}

bool is_caching_policy(const std::string& p) {
  return p == "none" || p == "all" || p == "cachedbit" || p == "nbsc";
}

std::ofstream open_out(const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("runner: cannot write " + path.string());
  return out;
}

CachenetOptions cachenet_options(const ScenarioConfig& cfg,
                                 const std::string& policy,
                                 std::size_t capacity) {
  CachenetOptions o;
  o.policy = *parse_policy(policy);
  o.capacity_chunks = capacity;
  o.chunk_size = cfg.chunk_size;
  o.cachedbit_last_copy = cfg.cachedbit_last_copy;
  o.nbsc_radius = cfg.nbsc_radius;
  o.exchange_period = cfg.nbsc_exchange;
  o.nbsc_probe_every_hop = cfg.nbsc_probe_every_hop;
  o.bloom_bits_per_chunk = cfg.bloom_bits_per_chunk;
  o.bloom_hashes = cfg.bloom_hashes;
  return o;
}

}  // namespace

std::string scenario_key(const ScenarioPoint& p) {
  std::ostringstream os;
  os << p.topology << "-" << level_name(p.level) << "-" << p.policy << "-c"
     << p.cache_chunks << "-a" << fmt_alpha(p.alpha) << "-" << p.pattern;
  return os.str();
}

std::vector<ScenarioPoint> expand_matrix(
    const ScenarioConfig& cfg, const std::vector<std::string>& topology_labels,
    const std::vector<Level>& topology_levels) {
  std::vector<ScenarioPoint> points;
  for (std::size_t t = 0; t < topology_labels.size(); ++t)
    for (const std::string& policy : cfg.policies)
      for (std::size_t cap : cfg.cache_chunks)
        for (double alpha : cfg.alphas)
          for (const std::string& pattern : cfg.patterns) {
            ScenarioPoint p;
            p.topology = topology_labels[t];
            p.level = topology_levels[t];
            p.policy = policy;
            p.cache_chunks = cap;
            p.alpha = alpha;
            p.pattern = pattern;
            points.push_back(std::move(p));
          }
  return points;
}

std::vector<FulfillmentRecord> process_trace(
    const SimContext& ctx, const std::vector<RequestEvent>& trace,
    const CachenetOptions& opts, std::uint64_t admission_seed) {
  std::vector<FulfillmentRecord> records;
  records.reserve(trace.size());
  CrNetwork net(ctx.paths(), opts, admission_seed);
  for (const RequestEvent& ev : trace) records.push_back(net.process(ev));
  return records;
}

CachingRun run_caching(const SimContext& ctx, const Catalog& catalog,
                 const Placement& placement, TrafficPattern pattern,
                 std::size_t n_requests, std::uint64_t seed,
                 const CachenetOptions& opts, double warmup_fraction) {
  std::vector<RequestEvent> trace = generate_trace(
      catalog, placement, ctx.topo(), pattern, n_requests, seed);

  CachingRun run;
  run.records = process_trace(ctx, trace, opts, seed);

  run.warmup_count = std::min(
      static_cast<std::size_t>(warmup_fraction * static_cast<double>(n_requests)),
      n_requests - 1);
  std::span<const FulfillmentRecord> measured(run.records);
  measured = measured.subspan(run.warmup_count);

  // Uncached replay of the identical trace for the footprint baseline.
  CachenetOptions base_opts = opts;
  base_opts.policy = Policy::None;
  CrNetwork baseline_net(ctx.paths(), base_opts, seed);
  double baseline = 0.0;
  for (const RequestEvent& ev : trace) {
    FulfillmentRecord r = baseline_net.process(ev);
    if (ev.seq >= run.warmup_count)
      baseline += static_cast<double>(r.bytes_hops);
  }

  run.report.hit_rate = hit_rate(measured);
  run.report.hop_cdf = hop_cdf(measured);
  run.report.baseline_bytes_hops = baseline;
  run.report.reduced_bytes_hops =
      static_cast<double>(total_bytes_hops(measured));
  run.report.footprint_reduction = footprint_reduction(
      run.report.reduced_bytes_hops, run.report.baseline_bytes_hops);
  run.report.bandwidth_savings = run.report.hit_rate;
  run.report.metadata["rng"] = kRngAlgorithm;
  run.report.metadata["seed"] = std::to_string(seed);
  run.report.metadata["policy"] = policy_name(opts.policy);
  run.report.metadata["requests"] = std::to_string(n_requests);
  run.report.metadata["warmup_count"] = std::to_string(run.warmup_count);
  if (run.report.hop_cdf.empty()) run.report.metadata["hop_cdf"] = "no hits";
  return run;
}

SeedOutcome run_scenario_seed(const SimContext& ctx, const ScenarioConfig& cfg,
                              const ScenarioPoint& point, std::uint64_t seed,
                              const std::string& out_dir) {
  const Catalog catalog =
      build_catalog(cfg.catalog_chunks, point.alpha, cfg.chunk_size);
  const Placement placement =
      select_servers(ctx.topo(), resolve_server_count(cfg, ctx.topo()));
  const TrafficPattern pattern = parse_pattern(point.pattern);
  const std::size_t warmup_count = std::min(
      static_cast<std::size_t>(cfg.warmup * static_cast<double>(cfg.requests)),
      cfg.requests - 1);

  SeedOutcome out;
  out.seed = seed;

  if (!out_dir.empty() && cfg.export_traces) {
    std::vector<RequestEvent> trace = generate_trace(
        catalog, placement, ctx.topo(), pattern, cfg.requests, seed);
    std::ostringstream name;
    name << point.topology << "-" << level_name(point.level) << "-a"
         << fmt_alpha(point.alpha) << "-" << point.pattern << "-seed" << seed
         << ".csv";
    auto f = open_out(fs::path(out_dir) / "traces" / name.str());
    write_trace_csv(f, trace);
  }

  if (is_caching_policy(point.policy)) {
    CachingRun run =
        run_caching(ctx, catalog, placement, pattern, cfg.requests, seed,
                 cachenet_options(cfg, point.policy, point.cache_chunks),
                 cfg.warmup);
    out.hit_rate = run.report.hit_rate;
    out.footprint_reduction = run.report.footprint_reduction;
    out.bandwidth_savings = run.report.bandwidth_savings;
    if (!out_dir.empty()) {
      const std::string key = scenario_key(point);
      if (cfg.export_hop_cdf) {
        auto f = open_out(fs::path(out_dir) / "hopcdf" /
                          (key + "-seed" + std::to_string(seed) + ".csv"));
        write_hop_cdf_csv(f, run.report.hop_cdf);
      }
      if (cfg.export_fulfillment) {
        auto f = open_out(fs::path(out_dir) / "fulfillment" /
                          (key + "-seed" + std::to_string(seed) + ".csv"));
        write_fulfillment_csv(f, run.records);
      }
    }
    return out;
  }

  // Redundancy-elimination policies share the same trace generation.
  std::vector<RequestEvent> trace = generate_trace(
      catalog, placement, ctx.topo(), pattern, cfg.requests, seed);

  if (point.policy == "endre") {
    ReOutcome re = simulate_endre(trace, point.cache_chunks, ctx.paths(),
                                  cfg.chunk_size, cfg.shim_bytes, warmup_count);
    out.hit_rate = 0.0;
    out.footprint_reduction = re.reduction_fraction;
    out.bandwidth_savings = re.bandwidth_savings;
    return out;
  }

  if (point.policy == "smartre-lp" || point.policy == "smartre-greedy") {
    RedundancyProfile profile =
        build_redundancy_profile(trace, cfg.smartre_window, cfg.chunk_size);
    Capacities caps;
    if (cfg.smartre_capacity_mode == "ideal") {
      caps = nonbinding_capacities(profile, ctx.paths());
    } else {
      caps.assign(ctx.topo().node_count(),
                  static_cast<double>(point.cache_chunks) * cfg.chunk_size);
    }
    CachingManifest manifest =
        point.policy == "smartre-lp"
            ? solve_manifest_lp(profile, caps, ctx.paths())
            : solve_manifest_greedy(profile, caps, ctx.paths());
    ReOutcome re =
        simulate_smartre(trace, manifest, profile, ctx.paths(), cfg.chunk_size,
                         cfg.shim_bytes, warmup_count);
    out.hit_rate = 0.0;
    out.footprint_reduction = re.reduction_fraction;
    out.bandwidth_savings = re.bandwidth_savings;
    if (!out_dir.empty()) {
      const std::string key = scenario_key(point);
      auto fp = open_out(fs::path(out_dir) / "smartre" /
                         (key + "-seed" + std::to_string(seed) + "-profile.csv"));
      write_profile_csv(fp, profile);
      auto fm = open_out(fs::path(out_dir) / "smartre" /
                         (key + "-seed" + std::to_string(seed) + "-manifest.csv"));
      write_manifest_csv(fm, manifest);
    }
    return out;
  }

  throw std::runtime_error("runner: unknown policy " + point.policy);
}

namespace {

struct LoadedTopologies {
  std::vector<std::unique_ptr<SimContext>> contexts;
  std::vector<std::string> labels;
  std::vector<Level> levels;
};

LoadedTopologies load_all(const ScenarioConfig& cfg) {
  LoadedTopologies out;
  for (const std::string& path : cfg.topologies) {
    Topology t = load_topology_file(path);
    if (cfg.level && t.level != *cfg.level)
      throw std::runtime_error("runner: " + path + " is " +
                               level_name(t.level) + "-level, config wants " +
                               level_name(*cfg.level));
    out.labels.push_back(t.name);
    out.levels.push_back(t.level);
    out.contexts.push_back(std::make_unique<SimContext>(std::move(t)));
  }
  return out;
}

}  // namespace

MatrixResult run_matrix(const ScenarioConfig& cfg, const std::string& out_dir,
                        int parallel) {
  LoadedTopologies topos = load_all(cfg);
  std::vector<ScenarioPoint> points =
      expand_matrix(cfg, topos.labels, topos.levels);

  const std::string hash_hex = [&] {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    return std::string(buf);
  }();

  MatrixResult result;
  std::map<std::string, std::size_t> label_to_index;
  for (std::size_t i = 0; i < topos.labels.size(); ++i)
    label_to_index[topos.labels[i]] = i;

  // Each (scenario, seed) cell is an independent unit of work; outputs are
  // merged in matrix order afterward, so the result does not depend on the
  // worker count.
  struct Job {
    std::size_t point_index;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t p = 0; p < points.size(); ++p)
    for (std::uint64_t seed : cfg.seeds) jobs.push_back({p, seed});
  std::vector<SeedOutcome> cell(jobs.size());
  std::vector<std::string> cell_error(jobs.size());

  auto run_cell = [&](std::size_t j) {
    const ScenarioPoint& point = points[jobs[j].point_index];
    const SimContext& ctx = *topos.contexts[label_to_index.at(point.topology)];
    try {
      cell[j] = run_scenario_seed(ctx, cfg, point, jobs[j].seed, out_dir);
    } catch (const std::exception& e) {
      cell_error[j] = e.what();
    }
  };

  if (parallel <= 1) {
    for (std::size_t j = 0; j < jobs.size(); ++j) run_cell(j);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t j = next.fetch_add(1); j < jobs.size();
           j = next.fetch_add(1))
        run_cell(j);
    };
    std::vector<std::thread> threads;
    std::size_t count = std::min<std::size_t>(parallel, jobs.size());
    threads.reserve(count);
    for (std::size_t i = 0; i < count; ++i) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }
  for (std::size_t j = 0; j < jobs.size(); ++j)
    if (!cell_error[j].empty())
      throw std::runtime_error(
          "matrix: scenario " + scenario_key(points[jobs[j].point_index]) +
          " seed " + std::to_string(jobs[j].seed) + ": " + cell_error[j]);

  std::size_t job_index = 0;
  for (const ScenarioPoint& point : points) {
    ScenarioOutcome outcome;
    outcome.point = point;
    for (std::size_t s = 0; s < cfg.seeds.size(); ++s)
      outcome.per_seed.push_back(cell[job_index++]);
    auto agg = [&](auto getter) {
      double lo = 1e300, hi = -1e300, sum = 0.0;
      for (const SeedOutcome& s : outcome.per_seed) {
        double v = getter(s);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        sum += v;
      }
      return std::pair<double, double>(
          sum / static_cast<double>(outcome.per_seed.size()), hi - lo);
    };
    auto [mh, sh] = agg([](const SeedOutcome& s) { return s.hit_rate; });
    auto [mf, sf] =
        agg([](const SeedOutcome& s) { return s.footprint_reduction; });
    auto [mb, sb] =
        agg([](const SeedOutcome& s) { return s.bandwidth_savings; });
    outcome.mean = {0, mh, mf, mb};
    outcome.spread = {0, sh, sf, sb};
    result.scenarios.push_back(std::move(outcome));
  }

  fs::path report_path = fs::path(out_dir) / "report.csv";
  auto report = open_out(report_path);
  report << "topology,level,policy,cache_chunks,alpha,pattern,seed,hit_rate,"
            "footprint_reduction,bandwidth_savings,hit_rate_spread,"
            "footprint_reduction_spread,bandwidth_savings_spread,config_hash\n";
  for (const ScenarioOutcome& sc : result.scenarios) {
    auto prefix = [&](std::ostream& os) {
      os << sc.point.topology << "," << level_name(sc.point.level) << ","
         << sc.point.policy << "," << sc.point.cache_chunks << ","
         << fmt_alpha(sc.point.alpha) << "," << sc.point.pattern << ",";
    };
    for (const SeedOutcome& s : sc.per_seed) {
      prefix(report);
      report << s.seed << "," << fmt9(s.hit_rate) << ","
             << fmt9(s.footprint_reduction) << "," << fmt9(s.bandwidth_savings)
             << ",,,," << hash_hex << "\n";
    }
    prefix(report);
    report << "mean," << fmt9(sc.mean.hit_rate) << ","
           << fmt9(sc.mean.footprint_reduction) << ","
           << fmt9(sc.mean.bandwidth_savings) << ","
           << fmt9(sc.spread.hit_rate) << ","
           << fmt9(sc.spread.footprint_reduction) << ","
           << fmt9(sc.spread.bandwidth_savings) << "," << hash_hex << "\n";
  }
  report.close();
  result.report_path = report_path.string();

  auto meta = open_out(fs::path(out_dir) / "run_meta.txt");
  meta << "config_hash = " << hash_hex << "\n" << canonical_config_text(cfg);
  return result;
}

std::vector<CompareRow> compare_policies(const ScenarioConfig& cfg,
                                         const std::string& out_dir) {
  std::vector<std::string> left = cfg.compare_left;
  if (left.empty())
    for (const std::string& p : cfg.policies)
      if (p == "all" || p == "cachedbit" || p == "nbsc") left.push_back(p);
  if (left.empty())
    throw std::runtime_error("compare: no caching policies configured");
  const std::string& right = cfg.compare_right;

  // The reference scale ladder must land on configured capacity points.
  if (right == "smartre-lp" || right == "smartre-greedy") {
    std::size_t cap_max =
        *std::max_element(cfg.cache_chunks.begin(), cfg.cache_chunks.end());
    std::set<std::size_t> axis(cfg.cache_chunks.begin(),
                               cfg.cache_chunks.end());
    std::string missing;
    for (double scale : cfg.smartre_scales) {
      auto point = static_cast<std::size_t>(
          std::llround(scale * static_cast<double>(cap_max)));
      if (!axis.count(point))
        missing += (missing.empty() ? "" : ", ") + std::to_string(point);
    }
    if (!missing.empty())
      throw std::runtime_error(
          "compare: capacity axes mismatch; scaled points missing from "
          "cache_chunks: " +
          missing);
  }

  LoadedTopologies topos = load_all(cfg);
  std::vector<CompareRow> rows;

  auto mean_reduction = [&](const SimContext& ctx, const std::string& policy,
                            std::size_t cap, Level level,
                            const std::string& label) {
    ScenarioPoint point;
    point.topology = label;
    point.level = level;
    point.policy = policy;
    point.cache_chunks = cap;
    point.alpha = cfg.alphas.front();
    point.pattern = cfg.patterns.front();
    double sum = 0.0;
    for (std::uint64_t seed : cfg.seeds)
      sum += run_scenario_seed(ctx, cfg, point, seed).footprint_reduction;
    return sum / static_cast<double>(cfg.seeds.size());
  };

  for (std::size_t t = 0; t < topos.contexts.size(); ++t) {
    const SimContext& ctx = *topos.contexts[t];
    std::vector<std::size_t> caps = cfg.cache_chunks;
    std::sort(caps.begin(), caps.end());
    for (std::size_t cap : caps) {
      double ref = mean_reduction(ctx, right, cap, topos.levels[t],
                                  topos.labels[t]);
      for (const std::string& policy : left) {
        CompareRow row;
        row.topology = topos.labels[t];
        row.level = topos.levels[t];
        row.cache_chunks = cap;
        row.policy = policy;
        row.policy_reduction =
            policy == right
                ? ref
                : mean_reduction(ctx, policy, cap, topos.levels[t],
                                 topos.labels[t]);
        row.reference = right;
        row.reference_reduction = ref;
        if (ref > 1e-12) {
          row.ratio_defined = true;
          row.ratio = row.policy_reduction / ref;
        }
        rows.push_back(std::move(row));
      }
    }
  }

  if (!out_dir.empty()) {
    auto out = open_out(fs::path(out_dir) / "compare.csv");
    out << "topology,level,cache_chunks,policy,policy_reduction,reference,"
           "reference_reduction,ratio\n";
    for (const CompareRow& r : rows) {
      out << r.topology << "," << level_name(r.level) << "," << r.cache_chunks
          << "," << r.policy << "," << fmt9(r.policy_reduction) << ","
          << r.reference << "," << fmt9(r.reference_reduction) << ",";
      if (r.ratio_defined) out << fmt9(r.ratio);
      out << "\n";
    }
  }
  return rows;
}

void plot_report(const std::string& report_csv, const std::string& out_svg,
                 const std::string& metric) {
  std::ifstream in(report_csv);
  if (!in) throw std::runtime_error("plot: cannot open " + report_csv);
  std::string header;
  std::getline(in, header);
  std::vector<std::string> cols;
  {
    std::stringstream ss(header);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
  }
  auto col_index = [&](const std::string& name) {
    auto it = std::find(cols.begin(), cols.end(), name);
    if (it == cols.end())
      throw std::runtime_error("plot: no column " + name + " in report");
    return static_cast<std::size_t>(it - cols.begin());
  };
  const std::size_t c_topo = col_index("topology");
  const std::size_t c_policy = col_index("policy");
  const std::size_t c_cap = col_index("cache_chunks");
  const std::size_t c_seed = col_index("seed");
  const std::size_t c_metric = col_index(metric);

  std::map<std::string, std::map<double, double>> series;  // label -> x -> y
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) f.push_back(c);
    if (f.size() <= c_metric || f[c_seed] != "mean") continue;
    series[f[c_topo] + "/" + f[c_policy]][std::stod(f[c_cap])] =
        std::stod(f[c_metric]);
  }
  if (series.empty()) throw std::runtime_error("plot: no mean rows in report");

  double xmin = 1e300, xmax = -1e300, ymax = 1e-9;
  for (const auto& [label, pts] : series)
    for (const auto& [x, y] : pts) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymax = std::max(ymax, y);
    }
  if (xmax <= xmin) xmax = xmin + 1;

  const double W = 760, H = 420, L = 70, B = 50, T = 30, R = 190;
  auto sx = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  auto sy = [&](double y) { return H - B - y / ymax * (H - B - T); };

  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  std::ofstream out(out_svg);
  if (!out) throw std::runtime_error("plot: cannot write " + out_svg);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='"
      << H << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
  out << "<line x1='" << L << "' y1='" << H - B << "' x2='" << W - R << "' y2='"
      << H - B << "' stroke='black'/>\n";
  out << "<line x1='" << L << "' y1='" << T << "' x2='" << L << "' y2='"
      << H - B << "' stroke='black'/>\n";
  out << "<text x='" << (L + (W - L - R) / 2) << "' y='" << H - 12
      << "' text-anchor='middle' font-size='13'>cache_chunks</text>\n";
  out << "<text x='18' y='" << (T + (H - B - T) / 2)
      << "' text-anchor='middle' font-size='13' transform='rotate(-90 18 "
      << (T + (H - B - T) / 2) << ")'>" << metric << "</text>\n";
  for (int i = 0; i <= 4; ++i) {
    double y = ymax * i / 4.0;
    out << "<text x='" << L - 8 << "' y='" << sy(y) + 4
        << "' text-anchor='end' font-size='11'>" << fmt9(y).substr(0, 5)
        << "</text>\n";
  }
  std::size_t idx = 0;
  for (const auto& [label, pts] : series) {
    const char* color = palette[idx % 8];
    out << "<polyline fill='none' stroke='" << color << "' stroke-width='2' points='";
    for (const auto& [x, y] : pts) out << sx(x) << "," << sy(y) << " ";
    out << "'/>\n";
    for (const auto& [x, y] : pts)
      out << "<circle cx='" << sx(x) << "' cy='" << sy(y) << "' r='3' fill='"
          << color << "'/>\n";
    out << "<text x='" << W - R + 14 << "' y='" << T + 16 + 16 * idx
        << "' font-size='12' fill='" << color << "'>" << label << "</text>\n";
    ++idx;
  }
  out << "</svg>\n";
}

}  // namespace redsim
