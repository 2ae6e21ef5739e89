// Command-line front end: generate synthetic spike trains, count episodes
// with any of the counting algorithms, run level-wise mining, and produce
// benchmark sweeps as CSV.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "episodic/episodic.hpp"

namespace {

using namespace episodic;

std::vector<IntervalConstraint> parse_constraint_list(const std::string& text) {
  std::vector<IntervalConstraint> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find(';', pos);
    std::string part = text.substr(pos, next == std::string::npos ? next : next - pos);
    std::size_t open = part.find('(');
    std::size_t comma = part.find(',', open);
    std::size_t close = part.find(']', comma);
    if (open == std::string::npos || comma == std::string::npos || close == std::string::npos)
      throw ParseError(ParseError::Kind::syntax, part, "constraint must look like '(5,10]'");
    TimeMs low = std::stoll(part.substr(open + 1, comma - open - 1));
    TimeMs high = std::stoll(part.substr(comma + 1, close - comma - 1));
    if (low < 0 || low >= high)
      throw ParseError(ParseError::Kind::empty_interval, part,
                       "empty constraint interval '" + part + "'");
    out.push_back({low, high});
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (out.empty())
    throw ParseError(ParseError::Kind::syntax, text, "no constraints given");
  return out;
}

CompactionStrategy strategy_from(const std::string& name) {
  if (name == "csw") return CompactionStrategy::count_scan_write;
  if (name == "flag") return CompactionStrategy::flag_compact;
  if (name == "append") return CompactionStrategy::concurrent_append;
  throw ParseError(ParseError::Kind::syntax, name, "unknown strategy '" + name + "'");
}

struct GenerateArgs {
  TypeId neurons = 64;
  double duration = 100.0;
  double rate = 20.0;
  std::vector<std::string> embeds;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_generate(const GenerateArgs& args) {
  GenConfig cfg;
  cfg.neurons = args.neurons;
  cfg.duration_s = args.duration;
  cfg.base_rate_hz = args.rate;
  cfg.seed = args.seed;
  SymbolTable symbols = SymbolTable::numeric(args.neurons);
  for (const std::string& spec : args.embeds) {
    std::size_t colon = spec.rfind(':');
    if (colon == std::string::npos)
      throw ParseError(ParseError::Kind::syntax, spec, "--embed expects 'EPISODE:RATE'");
    Episode ep = parse_episode(spec.substr(0, colon), symbols);
    double rate = std::stod(spec.substr(colon + 1));
    cfg.embedded.push_back({ep, rate});
  }

  GenResult data = generate(cfg);
  std::ofstream out(args.out);
  if (!out) throw DataError("cannot write '" + args.out + "'");
  out << "# generated: neurons=" << args.neurons << " duration_s=" << args.duration
      << " rate_hz=" << args.rate << " seed=" << args.seed << "\n";
  serialize_stream(out, data.stream, data.symbols);

  std::string truth_path = args.out + ".truth.csv";
  std::ofstream truth(truth_path);
  if (!truth) throw DataError("cannot write '" + truth_path + "'");
  truth << "episode_index,episode,start_ms,end_ms\n";
  for (std::size_t e = 0; e < data.injections.size(); ++e)
    for (const auto& occ : data.injections[e])
      truth << e << ',' << format_episode(cfg.embedded[e].episode, data.symbols) << ','
            << occ.start << ',' << occ.end << '\n';

  std::cout << "events=" << data.stream.size() << " out=" << args.out
            << " truth=" << truth_path << "\n";
  return 0;
}

struct CountArgs {
  std::string data;
  std::string episode;
  std::string algo = "tracking";
  std::string strategy = "csw";
  std::string direction = "fwd";
  unsigned workers = default_workers();
  std::size_t segments = 4;
};

int cmd_count(const CountArgs& args) {
  LoadedStream loaded = load_stream_file(args.data);
  Episode ep = parse_episode(args.episode, loaded.symbols);

  std::uint64_t count = 0;
  auto started = std::chrono::steady_clock::now();
  if (args.algo == "fsm") {
    count = count_fsm(loaded.stream, ep);
  } else if (args.algo == "tracking") {
    TypeIndex index = build_index(loaded.stream);
    TrackingOptions opt;
    opt.strategy = strategy_from(args.strategy);
    opt.direction = args.direction == "bwd" ? Direction::backward : Direction::forward;
    opt.workers = args.workers;
    count = count_tracking(loaded.stream, index, ep, opt);
  } else if (args.algo == "mapconcat") {
    count = count_mapconcat(loaded.stream, ep, args.segments, args.workers);
  } else if (args.algo == "oracle") {
    count = oracle_count(loaded.stream, ep);
  } else {
    throw ParseError(ParseError::Kind::syntax, args.algo, "unknown algo '" + args.algo + "'");
  }
  double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
          .count();
  std::cout << format_episode(ep, loaded.symbols) << ',' << count << ',' << ms << "\n";
  return 0;
}

struct MineArgs {
  std::string data;
  std::uint64_t threshold = 1;
  std::string constraints;
  std::size_t max_level = 16;
  std::string algo = "tracking";
  std::size_t switch_level = 3;
  unsigned workers = default_workers();
  std::size_t segments = 4;
  std::string out_csv;
  std::string out_json;
};

int cmd_mine(const MineArgs& args) {
  LoadedStream loaded = load_stream_file(args.data);
  MiningConfig cfg;
  cfg.threshold = args.threshold;
  cfg.constraint_alphabet = parse_constraint_list(args.constraints);
  cfg.max_level = args.max_level;
  cfg.strategy_switch_level = args.switch_level;
  cfg.workers = args.workers;
  cfg.segments = args.segments;
  if (args.algo == "fsm")
    cfg.backend = CountAlgo::fsm;
  else if (args.algo == "tracking")
    cfg.backend = CountAlgo::tracking;
  else if (args.algo == "mapconcat")
    cfg.backend = CountAlgo::mapconcat;
  else
    throw ParseError(ParseError::Kind::syntax, args.algo, "unknown algo '" + args.algo + "'");

  MiningResult result = mine(loaded.stream, cfg);
  if (args.out_csv.empty()) {
    write_mining_csv(std::cout, result, loaded.symbols);
  } else {
    std::ofstream out(args.out_csv);
    if (!out) throw DataError("cannot write '" + args.out_csv + "'");
    write_mining_csv(out, result, loaded.symbols);
  }
  if (!args.out_json.empty()) {
    std::ofstream out(args.out_json);
    if (!out) throw DataError("cannot write '" + args.out_json + "'");
    write_mining_json(out, result, loaded.symbols, cfg);
  }
  return 0;
}

struct BenchArgs {
  std::string suite;
  std::vector<double> sizes;
  int repeats = 3;
  std::string out;
  unsigned workers = default_workers();
  std::uint64_t seed = 7;
  TypeId neurons = 64;
  double rate = 20.0;
  double duration = 100.0;
  std::size_t episode_len = 5;
  TimeMs gap_low = 5;
  TimeMs gap_high = 10;
  double embed_rate = 1.0;
};

int cmd_bench(const BenchArgs& args) {
  BenchConfig cfg;
  cfg.suite = args.suite;
  cfg.sizes = args.sizes;
  cfg.repeats = args.repeats;
  cfg.workers = args.workers;
  cfg.seed = args.seed;
  cfg.neurons = args.neurons;
  cfg.rate_hz = args.rate;
  cfg.duration_s = args.duration;
  cfg.episode_len = args.episode_len;
  cfg.gap = {args.gap_low, args.gap_high};
  cfg.embed_rate_hz = args.embed_rate;
  validate(cfg.gap);

  BenchReport report = run_bench(cfg);
  std::ofstream out(args.out);
  if (!out) throw DataError("cannot write '" + args.out + "'");
  write_bench_csv(out, report.rows);
  std::cout << "suite=" << cfg.suite << " cells=" << report.cells << " rows="
            << report.rows.size() << " validated=" << report.validated
            << " mismatches=" << report.mismatches << " out=" << args.out << "\n";
  if (report.mismatches > 0) throw DataError("bench validation found count mismatches");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-overlapped serial-episode counting and mining over event streams"};
  app.require_subcommand(1);

  GenerateArgs gen_args;
  auto* gen = app.add_subcommand("generate", "generate a synthetic spike-train dataset");
  gen->add_option("--neurons", gen_args.neurons, "number of neurons")->capture_default_str();
  gen->add_option("--duration", gen_args.duration, "duration in seconds")->capture_default_str();
  gen->add_option("--rate", gen_args.rate, "per-neuron background rate in Hz")
      ->capture_default_str();
  gen->add_option("--embed", gen_args.embeds,
                  "embedded episode as 'EPISODE:RATE', e.g. '0-(5,10]-1:1.0' (repeatable)");
  gen->add_option("--seed", gen_args.seed, "RNG seed")->capture_default_str();
  gen->add_option("--out", gen_args.out, "output event file")->required();

  CountArgs count_args;
  auto* count = app.add_subcommand("count", "count one episode's non-overlapped occurrences");
  count->add_option("--data", count_args.data, "event file")->required();
  count->add_option("--episode", count_args.episode, "episode, e.g. 'A-(5,10]-B'")->required();
  count->add_option("--algo", count_args.algo, "fsm|tracking|mapconcat|oracle")
      ->capture_default_str();
  count->add_option("--strategy", count_args.strategy, "csw|flag|append")->capture_default_str();
  count->add_option("--direction", count_args.direction, "fwd|bwd")->capture_default_str();
  count->add_option("--workers", count_args.workers, "worker count")
      ->envname("EPISODIC_WORKERS")
      ->capture_default_str();
  count->add_option("--segments", count_args.segments, "mapconcat segment count")
      ->capture_default_str();

  MineArgs mine_args;
  auto* mine_cmd = app.add_subcommand("mine", "level-wise frequent episode discovery");
  mine_cmd->add_option("--data", mine_args.data, "event file")->required();
  mine_cmd->add_option("--threshold", mine_args.threshold, "minimum non-overlapped count")
      ->required();
  mine_cmd->add_option("--constraints", mine_args.constraints,
                       "constraint alphabet, e.g. '(5,10];(10,15]'")
      ->required();
  mine_cmd->add_option("--max-level", mine_args.max_level, "maximum episode size")
      ->capture_default_str();
  mine_cmd->add_option("--algo", mine_args.algo, "fsm|tracking|mapconcat")->capture_default_str();
  mine_cmd->add_option("--switch-level", mine_args.switch_level,
                       "level switching to within-episode parallelism")
      ->capture_default_str();
  mine_cmd->add_option("--workers", mine_args.workers, "worker count")
      ->envname("EPISODIC_WORKERS")
      ->capture_default_str();
  mine_cmd->add_option("--segments", mine_args.segments, "mapconcat segment count")
      ->capture_default_str();
  mine_cmd->add_option("--out-csv", mine_args.out_csv, "per-level CSV file (default stdout)");
  mine_cmd->add_option("--out-json", mine_args.out_json, "JSON summary file");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "timing sweeps over datasets/length/frequency");
  bench->add_option("--suite", bench_args.suite, "datasets|length|frequency")->required();
  bench->add_option("--sizes", bench_args.sizes,
                    "suite sizes: durations (datasets), lengths (length) or rates (frequency)")
      ->delimiter(',');
  bench->add_option("--repeats", bench_args.repeats, "rows per cell")->capture_default_str();
  bench->add_option("--out", bench_args.out, "CSV output file")->required();
  bench->add_option("--workers", bench_args.workers, "pinned worker count")
      ->envname("EPISODIC_WORKERS")
      ->capture_default_str();
  bench->add_option("--seed", bench_args.seed, "RNG seed")->capture_default_str();
  bench->add_option("--neurons", bench_args.neurons, "neurons")->capture_default_str();
  bench->add_option("--rate", bench_args.rate, "background rate Hz")->capture_default_str();
  bench->add_option("--duration", bench_args.duration, "dataset duration seconds")
      ->capture_default_str();
  bench->add_option("--episode-len", bench_args.episode_len, "embedded episode length")
      ->capture_default_str();
  bench->add_option("--gap-low", bench_args.gap_low, "constraint low bound ms")
      ->capture_default_str();
  bench->add_option("--gap-high", bench_args.gap_high, "constraint high bound ms")
      ->capture_default_str();
  bench->add_option("--embed-rate", bench_args.embed_rate, "injection rate Hz")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) return cmd_generate(gen_args);
    if (count->parsed()) return cmd_count(count_args);
    if (mine_cmd->parsed()) return cmd_mine(mine_args);
    if (bench->parsed()) return cmd_bench(bench_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
