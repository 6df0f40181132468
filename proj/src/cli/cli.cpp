#include "lakebench/cli.hpp"

#include <algorithm>
#include <memory>

#include "CLI11.hpp"
#include "json.hpp"
#include "lakebench/bench.hpp"
#include "lakebench/ease.hpp"
#include "lakebench/error.hpp"
#include "lakebench/ingest.hpp"
#include "lakebench/io.hpp"
#include "lakebench/workload.hpp"

#ifndef LAKEBENCH_VERSION
#define LAKEBENCH_VERSION "unknown"
#endif

namespace lakebench {
namespace {

namespace fs = std::filesystem;

// Bad flag combinations that CLI11 cannot express on its own.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check_output(const fs::path& path, bool force) {
  if (!force && fs::exists(path)) {
    throw Error(path.string() + " already exists (pass --force to overwrite)");
  }
}

bool is_help(const std::string& a) { return a == "-h" || a == "--help"; }

bool has_flag(std::span<const std::string> args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

// Appends `--key value` for every key of the --config JSON object that was not
// given on the command line, so explicit flags win.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  if (std::any_of(args.begin(), args.end(), is_help)) return args;
  std::optional<fs::path> path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    }
  }
  if (!path) return args;

  const auto text = read_file(*path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError::at_offset(*path, e.byte, "invalid JSON config");
  }
  if (!j.is_object()) throw InvalidInput(path->string() + ": config must be a JSON object");

  std::vector<std::string> extra;
  for (const auto& [key, value] : j.items()) {
    const auto flag = "--" + key;
    if (key == "config" || has_flag(args, flag)) continue;
    if (value.is_null() || (value.is_boolean() && !value.get<bool>())) continue;
    if (value.is_boolean()) {
      extra.push_back(flag);
      continue;
    }
    std::string joined;
    const auto scalar = [&](const nlohmann::json& v) {
      if (v.is_object() || v.is_array()) {
        throw InvalidInput(path->string() + ": config key '" + key + "' has a nested value");
      }
      return v.is_string() ? v.get<std::string>() : v.dump();
    };
    if (value.is_array()) {
      for (const auto& v : value) {
        if (!joined.empty()) joined.push_back(',');
        joined += scalar(v);
      }
    } else {
      joined = scalar(value);
    }
    extra.push_back(flag);
    extra.push_back(joined);
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

void print_ingest(std::ostream& out, const IngestReport& r, const fs::path& dir) {
  out << "wrote " << r.nodes_written << " nodes and " << r.edges_written << " edges to "
      << dir.string() << "\n";
  if (r.records_read > 0 || r.records_skipped > 0) {
    out << "records: " << r.records_read << " read, " << r.records_accepted << " accepted, "
        << r.records_skipped << " skipped\n";
  }
  for (const auto& n : r.notes) out << "note: " << n << "\n";
}

std::string join(const std::vector<std::string>& words, char sep) {
  std::string s;
  for (const auto& w : words) {
    if (!s.empty()) s.push_back(sep);
    s += w;
  }
  return s;
}

struct Cli {
  CLI::App app{"Keyword-search benchmark over graph-shaped data lakes", "lakebench"};
  std::ostream& out;
  std::ostream& err;
  std::function<void()> action;
  std::string config_path;  // consumed by merge_config
  bool force = false;

  Cli(std::ostream& o, std::ostream& e) : out(o), err(e) {
    app.require_subcommand(1);
    app.set_version_flag("--version", LAKEBENCH_VERSION);
    add_ingest();
    add_synth();
    add_sample();
    add_queries();
    add_search();
    add_bench();
    add_report();
  }

  CLI::App* sub(const std::string& name, const std::string& desc) {
    auto* s = app.add_subcommand(name, desc);
    s->add_option("--config", config_path,
                  "JSON object of flag values; explicit flags take precedence");
    s->add_flag("--force", force, "Overwrite existing outputs");
    return s;
  }

  struct IngestArgs {
    std::string format;
    fs::path movies, ratings, tags, xml, log, out;
    std::optional<std::uint64_t> scale;
  } ingest;

  void add_ingest() {
    auto* s = sub("ingest", "Convert a raw dataset into node/edge files");
    auto& a = ingest;
    s->add_option("--format", a.format, "Input format")
        ->required()
        ->check(CLI::IsMember({"movies", "dblp", "apache"}));
    s->add_option("--movies", a.movies, "movies.csv (movies format)");
    s->add_option("--ratings", a.ratings, "ratings.csv (movies format)");
    s->add_option("--tags", a.tags, "tags.csv (movies format)");
    s->add_option("--xml", a.xml, "Bibliography XML (dblp format)");
    s->add_option("--scale", a.scale, "Keep the first N publication records (dblp format)");
    s->add_option("--log", a.log, "Error log (apache format)");
    s->add_option("--out", a.out, "Output directory")->required();
    s->callback([this] {
      action = [this] {
        auto& a = ingest;
        const auto need = [&](const fs::path& p, const char* flag) {
          if (p.empty()) throw UsageError(std::string(flag) + " is required for --format " + a.format);
        };
        IngestReport r;
        if (a.format == "movies") {
          need(a.movies, "--movies");
          need(a.ratings, "--ratings");
          need(a.tags, "--tags");
          check_output(a.out, force);
          r = ingest_movies(a.movies, a.ratings, a.tags, a.out);
        } else if (a.format == "dblp") {
          need(a.xml, "--xml");
          check_output(a.out, force);
          std::optional<ScaleSpec> scale;
          if (a.scale) scale = ScaleSpec{*a.scale};
          r = ingest_dblp(a.xml, a.out, scale);
        } else {
          need(a.log, "--log");
          check_output(a.out, force);
          r = ingest_apache_log(a.log, a.out);
        }
        print_ingest(out, r, a.out);
      };
    });
  }

  SynthConfig synth_cfg;
  fs::path synth_out;

  void add_synth() {
    auto* s = sub("synth", "Generate a seeded synthetic graph");
    auto& c = synth_cfg;
    s->add_option("--nodes", c.node_count, "Number of nodes")->required();
    s->add_option("--vocab", c.vocab_size, "Vocabulary size")->required();
    s->add_option("--kw-per-node", c.keywords_per_node, "Keywords per node")->required();
    s->add_option("--mean-degree", c.mean_degree, "Target mean degree")->capture_default_str();
    s->add_option("--zipf", c.zipf_exponent, "Zipf exponent of keyword frequencies")
        ->capture_default_str();
    s->add_option("--seed", synth_cfg.seed, "Random seed")->capture_default_str();
    s->add_option("--out", synth_out, "Output directory")->required();
    s->callback([this] {
      action = [this] {
        check_output(synth_out, force);
        print_ingest(out, generate_synthetic(synth_cfg, synth_out), synth_out);
      };
    });
  }

  struct SampleArgs {
    fs::path nodes, edges, out;
    std::uint64_t scale = 0;
  } sample;

  void add_sample() {
    auto* s = sub("sample", "Keep the first N nodes of a graph and the edges among them");
    s->add_option("--nodes", sample.nodes, "Node file")->required();
    s->add_option("--edges", sample.edges, "Edge file")->required();
    s->add_option("--scale", sample.scale, "Number of nodes to keep")->required();
    s->add_option("--out", sample.out, "Output directory")->required();
    s->callback([this] {
      action = [this] {
        check_output(sample.out, force);
        print_ingest(out, subsample(sample.nodes, sample.edges, ScaleSpec{sample.scale}, sample.out),
                     sample.out);
      };
    });
  }

  struct QueriesArgs {
    fs::path nodes, edges, out;
    WorkloadConfig cfg;
    std::string policy = "random";
  } queries;

  void add_queries() {
    auto* s = sub("queries", "Generate single- and multi-keyword query suites");
    auto& a = queries;
    s->add_option("--nodes", a.nodes, "Node file")->required();
    s->add_option("--edges", a.edges, "Edge file")->required();
    s->add_option("--out", a.out, "Output directory for <suite>.txt files")->required();
    s->add_option("--single-count", a.cfg.single_count, "Queries in the single suite")
        ->capture_default_str();
    s->add_option("--k", a.cfg.multi_counts, "Keywords per multi query, one suite each")
        ->delimiter(',')
        ->capture_default_str();
    s->add_option("--multi-count", a.cfg.multi_query_count, "Queries per multi suite")
        ->capture_default_str();
    s->add_option("--policy", a.policy, "Multi-keyword sampling policy")
        ->check(CLI::IsMember({"random", "related"}))
        ->capture_default_str();
    s->add_option("--r", a.cfg.radius, "Co-occurrence radius for the related policy")
        ->capture_default_str();
    s->add_option("--cutoff", a.cfg.cutoff_fraction, "Fraction of top keywords forming the pool")
        ->capture_default_str();
    s->add_option("--seed", a.cfg.seed, "Random seed")->capture_default_str();
    s->callback([this] {
      action = [this] {
        auto& a = queries;
        a.cfg.policy = parse_policy(a.policy);
        a.cfg.validate();
        check_output(a.out, force);
        const auto graph = load_graph(a.nodes, a.edges);
        const auto suites = generate_workload(graph, a.cfg);
        fs::create_directories(a.out);
        for (const auto& suite : suites) {
          const auto path = a.out / (suite.name + ".txt");
          write_suite(suite, path);
          out << "wrote " << suite.queries.size() << " queries to " << path.string() << "\n";
        }
      };
    });
  }

  void add_index_flags(CLI::App* s, IndexConfig& c, std::string& mode) {
    s->add_option("--r", c.radius, "Subgraph radius in hops")->capture_default_str();
    s->add_option("--mode", mode, "Match mode")
        ->check(CLI::IsMember({"any", "all"}))
        ->capture_default_str();
    s->add_option("--max-results", c.max_results, "Hits to return per query")
        ->capture_default_str();
  }

  struct SearchArgs {
    fs::path nodes, edges, index, save_index, stats_out;
    std::string query;
    std::string mode = "any";
    IndexConfig cfg;
    CLI::Option* r_opt = nullptr;
  } search_args;

  void add_search() {
    auto* s = sub("search", "Run one keyword query; prints center, matched keywords, members");
    auto& a = search_args;
    auto* nodes = s->add_option("--nodes", a.nodes, "Node file");
    auto* edges = s->add_option("--edges", a.edges, "Edge file");
    auto* index = s->add_option("--index", a.index, "Load a saved index instead of building one");
    nodes->needs(edges);
    edges->needs(nodes);
    index->excludes(nodes)->excludes(edges);
    s->add_option("--query", a.query, "Query keywords")->required();
    add_index_flags(s, a.cfg, a.mode);
    a.r_opt = s->get_option("--r");
    s->add_option("--save-index", a.save_index, "Write the index to this file");
    s->add_option("--stats-out", a.stats_out, "Write index statistics as JSON");
    s->callback([this] {
      action = [this] {
        auto& a = search_args;
        if (a.index.empty() && a.nodes.empty()) {
          throw UsageError("either --nodes/--edges or --index is required");
        }
        a.cfg.match_mode = parse_match_mode(a.mode);
        if (!a.save_index.empty()) check_output(a.save_index, force);
        if (!a.stats_out.empty()) check_output(a.stats_out, force);
        KeywordIndex idx;
        if (!a.index.empty()) {
          idx = KeywordIndex::load(a.index);
          if (a.r_opt->count() == 0) a.cfg.radius = idx.radius();
        } else {
          a.cfg.validate();
          idx = build_index(load_graph(a.nodes, a.edges), a.cfg);
        }
        if (!a.save_index.empty()) idx.save(a.save_index);
        if (!a.stats_out.empty()) write_file_atomic(a.stats_out, index_stats_json(index_stats(idx)));
        const std::vector<std::string> query{a.query};
        for (const auto& hit : search(idx, query, a.cfg).hits) {
          out << idx.external_id(hit.center) << '\t' << join(hit.matched, ' ') << '\t'
              << hit.member_count << '\n';
        }
      };
    });
  }

  struct BenchArgs {
    BenchPlan plan;
    std::vector<fs::path> suites;
    std::string mode = "any";
    fs::path report, csv, work_dir, nodes, edges, xml;
    SynthConfig synth;
    CLI::Option* vocab = nullptr;
  } bench;

  void add_bench() {
    auto* s = sub("bench", "Time graph load, index build and query suites across scales");
    auto& a = bench;
    s->add_option("--scales", a.plan.scales, "Ascending scale list")
        ->delimiter(',')
        ->capture_default_str();
    s->add_option("--suites", a.suites, "Query suite files")->delimiter(',')->required();
    s->add_option("--report", a.report, "JSON report output")->required();
    s->add_option("--csv", a.csv, "Also write the CSV long form here");
    s->add_option("--work-dir", a.work_dir, "Keep per-scale data here instead of a temp dir");
    s->add_option("--reps", a.plan.repetitions, "Timed repetitions")->capture_default_str();
    s->add_option("--warmup", a.plan.warmup_runs, "Untimed warmup runs")->capture_default_str();
    add_index_flags(s, a.plan.index_config, a.mode);

    auto* src = s->add_option_group("data source", "Exactly one of these");
    auto* nodes = src->add_option("--nodes", a.nodes, "Node file to subsample per scale");
    auto* edges = src->add_option("--edges", a.edges, "Edge file to subsample per scale");
    auto* xml = src->add_option("--xml", a.xml, "Bibliography XML, first N records per scale");
    a.vocab = src->add_option("--vocab", a.synth.vocab_size, "Synthetic source: vocabulary size");
    src->add_option("--kw-per-node", a.synth.keywords_per_node, "Synthetic source: keywords per node");
    src->add_option("--mean-degree", a.synth.mean_degree, "Synthetic source: mean degree");
    src->add_option("--zipf", a.synth.zipf_exponent, "Synthetic source: Zipf exponent");
    src->add_option("--seed", a.synth.seed, "Synthetic source: seed");
    nodes->needs(edges);
    edges->needs(nodes);
    xml->excludes(nodes)->excludes(edges)->excludes(a.vocab);
    a.vocab->excludes(nodes)->excludes(edges);

    s->callback([this] {
      action = [this] {
        auto& a = bench;
        DataSource source;
        if (!a.nodes.empty()) {
          source = GraphFileSource{a.nodes, a.edges};
        } else if (!a.xml.empty()) {
          source = DblpSource{a.xml};
        } else if (a.vocab->count() > 0) {
          source = SyntheticSource{a.synth};
        } else {
          throw UsageError("a data source is required: --nodes/--edges, --xml or --vocab");
        }
        a.plan.index_config.match_mode = parse_match_mode(a.mode);
        check_output(a.report, force);
        if (!a.csv.empty()) check_output(a.csv, force);
        for (const auto& p : a.suites) a.plan.suites.push_back(read_suite(p));
        a.plan.validate();

        BenchOptions opts;
        opts.work_dir = a.work_dir;
        const auto report = run_bench(a.plan, source, opts);
        write_report(report, a.report, ReportFormat::json);
        if (!a.csv.empty()) write_report(report, a.csv, ReportFormat::csv);

        for (const auto& w : report.warnings) err << "warning: " << w << "\n";
        for (const auto& e : report.scales) {
          out << "scale " << e.scale;
          if (!e.error.empty()) {
            out << ": failed: " << e.error << "\n";
            continue;
          }
          out << ": " << e.node_count << " nodes, graph " << e.graph_build_ns << " ns, index "
              << e.index_build_ns << " ns (" << e.index_size_bytes << " bytes)";
          for (const auto& t : e.suites) out << ", " << t.name << " " << t.total_ns << " ns";
          out << "\n";
        }
        out << "report written to " << a.report.string() << "\n";
        if (report.any_failed()) throw Error("one or more scales failed; see the report");
      };
    });
  }

  struct ReportArgs {
    fs::path in, out, trend_out;
    std::string format = "json";
    bool trend = false;
  } report;

  void add_report() {
    auto* s = sub("report", "Convert a bench report and run the trend check");
    auto& a = report;
    s->add_option("--in", a.in, "Bench report (JSON or CSV)")->required();
    s->add_option("--format", a.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    s->add_option("--out", a.out, "Write the converted report here (default: stdout)");
    s->add_flag("--trend", a.trend, "Print build ratios, multi/single ratios and stragglers");
    s->add_option("--trend-out", a.trend_out, "Write the trend summary as JSON");
    s->callback([this] {
      action = [this] {
        auto& a = report;
        const auto format = parse_report_format(a.format);
        if (!a.out.empty()) check_output(a.out, force);
        if (!a.trend_out.empty()) check_output(a.trend_out, force);
        const auto r = load_report(a.in);
        std::optional<TrendSummary> trend;
        if (a.trend || !a.trend_out.empty()) trend = trend_check(r);
        if (!a.out.empty()) {
          write_report(r, a.out, format);
        } else if (!trend) {
          out << render_report(r, format);
        }
        if (!a.trend_out.empty()) write_file_atomic(a.trend_out, render_trend_json(*trend));
        if (a.trend) out << render_trend_text(*trend);
      };
    });
  }

  std::string help_for(const std::vector<std::string>& args) {
    if (!args.empty()) {
      for (auto* s : app.get_subcommands({})) {
        if (s->get_name() == args[0]) return s->help(app.get_name());
      }
    }
    return app.help();
  }
};

}  // namespace

int run_cli(std::span<const std::string> args_in, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(args_in.begin(), args_in.end());
  Cli cli(out, err);
  try {
    args = merge_config(std::move(args));
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 1;
  }

  const auto usage = [&](const std::string& what) {
    err << what << "\n\n" << cli.help_for(args);
    return 2;
  };
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    cli.app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << cli.help_for(args);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << LAKEBENCH_VERSION << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    return usage(e.what());
  }

  try {
    cli.action();
  } catch (const UsageError& e) {
    return usage(e.what());
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace lakebench
