#include "pathrules/cli/commands.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "pathrules/asm_graph.hpp"
#include "pathrules/cli/experiment.hpp"
#include "pathrules/dataset.hpp"
#include "pathrules/extraction.hpp"
#include "pathrules/fsa_io.hpp"
#include "pathrules/markov.hpp"
#include "pathrules/rng.hpp"
#include "pathrules/rnn.hpp"
#include "pathrules/simdist.hpp"

namespace pathrules::cli {
namespace {

namespace fs = std::filesystem;

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void add_target_options(CLI::App* cmd, TargetSource& target) {
  cmd->add_option("--target", target.pattern, "Target language pattern")->capture_default_str();
  cmd->add_option("--target-fsa", target.fsa_file, "Target FSA file (overrides --target)");
  cmd->add_option("--alphabet", target.alphabet, "Alphabet symbols in one-hot order")->capture_default_str();
}

fs::path with_extension(const fs::path& p, const std::string& ext) {
  fs::path out = p;
  out.replace_extension(ext);
  return out;
}

struct GenOptions {
  TargetSource target;
  std::size_t count = 1000;
  std::size_t test_count = 10000;
  std::size_t min_len = 1;
  std::size_t max_len = 12;
  double ratio = 0.5;
  std::uint64_t seed = 1;
  fs::path out;
};

int cmd_gen(const GenOptions& o, std::ostream& out) {
  if (o.count == 0) throw UsageError("--count must be >= 1");
  const Fsa target = o.target.load();
  SamplerConfig cfg;
  cfg.count = o.count;
  cfg.min_len = o.min_len;
  cfg.max_len = o.max_len;
  cfg.positive_ratio = o.ratio;
  cfg.seed = derive_seed(o.seed, "train");
  const Dataset train = sample_strings(target, cfg);
  const std::string train_text = write_dataset(train);
  write_text_file(o.out / "train.txt", train_text);
  std::ostringstream meta;
  meta << "sampler: length-stratified uniform\n";
  meta << "seed: " << o.seed << "\n";
  meta << "min_len: " << o.min_len << "\nmax_len: " << o.max_len << "\n";
  meta << "positive_ratio: " << o.ratio << "\n";
  meta << "train_count: " << train.size() << "\ntrain_seed: " << cfg.seed << "\ntrain_checksum: " << hex(fnv1a(train_text))
       << "\n";
  out << "train: " << (o.out / "train.txt").string() << " (" << train.size() << " words, " << train.positives()
      << " positive)\n";
  if (o.test_count > 0) {
    SamplerConfig test_cfg = cfg;
    test_cfg.count = o.test_count;
    test_cfg.seed = derive_seed(o.seed, "test");
    const Dataset test = sample_strings(target, test_cfg, train.words());
    const std::string test_text = write_dataset(test);
    write_text_file(o.out / "test.txt", test_text);
    meta << "test_count: " << test.size() << "\ntest_seed: " << test_cfg.seed
         << "\ntest_checksum: " << hex(fnv1a(test_text)) << "\n";
    out << "test: " << (o.out / "test.txt").string() << " (" << test.size() << " words, " << test.positives()
        << " positive)\n";
  }
  write_text_file(o.out / "gen.meta", meta.str());
  return 0;
}

struct TraceOptions {
  TargetSource target;
  fs::path asm_file;
  std::size_t k = 10;
  double ratio = 0.3;
  bool keep_all = false;
  std::uint64_t seed = 1;
  fs::path out;
};

int cmd_trace(const TraceOptions& o, std::ostream& out) {
  if (o.k == 0) throw UsageError("--k must be >= 1");
  const Fsa target = o.target.load();
  const Dataset traced = trace_asm(load_asm(o.asm_file), o.k, target);
  Dataset d = o.keep_all ? traced : rebalance(traced, o.ratio, std::nullopt, derive_seed(o.seed, "trace-rebalance"));
  d.seed = o.seed;
  if (d.size() == 0) {
    out << "traced " << traced.size() << " words (" << traced.positives()
        << " positive); no subset matches the requested positive ratio\n";
    return 1;
  }
  save_dataset(o.out, d);
  out << "traced " << traced.size() << " words (" << traced.positives() << " positive), wrote " << d.size() << " ("
      << d.positives() << " positive) to " << o.out.string() << "\n";
  return 0;
}

struct MarkovOptions {
  TargetSource target;
  fs::path data;
  double threshold = 0.1;
};

int cmd_markov(const MarkovOptions& o, std::ostream& out) {
  const Fsa target = o.target.load();
  const auto annotation = estimate_markov(target, load_dataset(o.data));
  out << format_markov(annotation, o.threshold);
  return 0;
}

struct TrainOptionsCli {
  fs::path train;
  fs::path test;
  std::string cell = "gru";
  std::size_t hidden = 4;
  double dropout = 0.0;
  std::size_t epochs = 5000;
  double lr = 0.01;
  std::uint64_t seed = 1;
  std::size_t eval_every = 100;
  fs::path out;
  fs::path loss_csv;
};

int cmd_train(const TrainOptionsCli& o, std::ostream& out) {
  const Dataset train_set = load_dataset(o.train);
  const Dataset test_set = o.test.empty() ? Dataset{train_set.alphabet, {}, 0} : load_dataset(o.test);
  ModelConfig mc;
  mc.cell = parse_cell_kind(o.cell);
  mc.hidden_size = o.hidden;
  mc.input_size = train_set.alphabet.size();
  mc.dropout = o.dropout;
  mc.epochs = o.epochs;
  mc.learning_rate = o.lr;
  mc.seed = o.seed;
  try {
    mc.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  RnnModel model = RnnModel::initialized(mc, train_set.alphabet);
  TrainOptions options;
  options.eval_every = o.test.empty() ? 0 : o.eval_every;
  const TrainReport report = train(model, train_set, test_set, options);
  save_model(o.out, model);
  if (!o.loss_csv.empty()) {
    std::ostringstream csv;
    csv << "epoch,loss\n";
    for (std::size_t i = 0; i < report.loss.size(); ++i) csv << i + 1 << ',' << report.loss[i] << "\n";
    write_text_file(o.loss_csv, csv.str());
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "epochs %zu, final loss %.6g, train error %.6f", report.epochs_run,
                report.loss.empty() ? 0.0 : report.loss.back(), evaluate(model, train_set));
  out << buf;
  if (!o.test.empty()) {
    std::snprintf(buf, sizeof buf, ", test error %.6f", evaluate(model, test_set));
    out << buf;
  }
  out << ", checksum " << hex(report.checksum) << ", " << report.wall_seconds << " s\n";
  out << "optimizer: " << report.optimizer << "\n";
  return 0;
}

struct ExtractOptions {
  fs::path model;
  std::vector<fs::path> data;
  fs::path train;
  std::size_t max_iterations = 100;
  bool forced = false;
  fs::path out;
};

int cmd_extract(const ExtractOptions& o, std::ostream& out) {
  const RnnModel model = load_model(o.model);
  std::vector<TraceRecord> traces;
  Dataset first;
  for (std::size_t i = 0; i < o.data.size(); ++i) {
    Dataset d = load_dataset(o.data[i]);
    for (auto& t : record_traces(model, d)) traces.push_back(std::move(t));
    if (i == 0) first = std::move(d);
  }
  const Dataset train_set = o.train.empty() ? first : load_dataset(o.train);
  ExtractionConfig cfg;
  cfg.max_iterations = o.max_iterations;
  ExtractedMachine m = extract(traces, model.alphabet(), cfg);
  m.initial_state = choose_initial_state(m, train_set);
  const std::string meta = write_extraction_metadata(m);
  write_text_file(with_extension(o.out, ".meta"), meta);
  if (!m.deterministic && !o.forced) {
    out << "extraction did not converge after " << m.iterations
        << " iterations; metadata written, rerun with --forced for a majority projection\n";
    return 1;
  }
  const Projection p = project(m, m.initial_state, o.forced, false);
  const Fsa fsa = minimize(p.fsa);
  save_fsa(o.out, fsa);
  write_text_file(with_extension(o.out, ".dot"), to_dot(fsa, "extracted"));
  out << "extracted " << fsa.state_count() << " states after " << m.iterations << " iterations ("
      << (m.deterministic ? "deterministic" : "lossy majority projection") << ") -> " << o.out.string() << "\n";
  return 0;
}

struct CompareOptions {
  TargetSource target;
  std::vector<fs::path> files;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  fs::path csv;
};

int cmd_compare(const CompareOptions& o, std::ostream& out) {
  if (o.files.empty() || o.files.size() > 2) throw UsageError("compare takes one or two FSA files");
  const Fsa a = load_fsa(o.files[0]);
  const Fsa b = o.files.size() == 2 ? load_fsa(o.files[1]) : o.target.load();
  const auto report = dissimilarity(a, b, o.samples, o.seed);
  out << "A: " << o.files[0].string() << "\nB: " << (o.files.size() == 2 ? o.files[1].string() : "target") << "\n";
  out << format_report(report);
  if (!o.csv.empty()) {
    const bool fresh = !fs::exists(o.csv);
    std::ofstream f(o.csv, std::ios::app);
    if (!f) throw Error("cannot write " + o.csv.string());
    if (fresh) f << "a,b," << report_csv_header() << "\n";
    f << o.files[0].string() << ',' << (o.files.size() == 2 ? o.files[1].string() : "target") << ','
      << report_csv_row(report) << "\n";
  }
  return 0;
}

struct SelectOptions {
  TargetSource target;
  std::vector<fs::path> files;
  bool with_target = false;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  fs::path matrix_csv;
};

int cmd_select(const SelectOptions& o, std::ostream& out) {
  if (o.files.size() < 2) throw UsageError("select needs at least two FSA files");
  std::vector<Fsa> machines;
  for (const auto& f : o.files) machines.push_back(load_fsa(f));
  for (std::size_t i = 0; i < machines.size(); ++i) {
    if (language_empty(machines[i])) out << "warning: " << o.files[i].string() << " accepts no words\n";
  }
  const ComparisonMatrix m = pairwise_matrix(machines, o.samples, o.seed);
  std::ostringstream csv;
  csv << "file";
  for (const auto& f : o.files) csv << ',' << f.string();
  csv << ",row_mean";
  if (o.with_target) csv << ",delta_to_target";
  csv << "\n";
  std::optional<Fsa> target;
  if (o.with_target) target = o.target.load();
  for (std::size_t i = 0; i < machines.size(); ++i) {
    csv << o.files[i].string();
    for (const auto& r : m.delta[i]) csv << ',' << r.to_string();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", m.row_mean[i]);
    csv << ',' << buf;
    if (target) csv << ',' << dissimilarity(machines[i], *target, o.samples, o.seed).delta.to_string();
    csv << "\n";
  }
  if (!o.matrix_csv.empty()) write_text_file(o.matrix_csv, csv.str());
  out << csv.str();
  try {
    const std::size_t chosen = select_representative(m);
    out << "selected: " << chosen << " " << o.files[chosen].string() << "\n";
  } catch (const InfeasibleRequest& e) {
    out << "no representative: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

struct GridOptions {
  fs::path spec_file;
  std::vector<std::pair<std::string, std::string>> overrides;
  std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
  bool quiet = false;
};

int cmd_grid(const GridOptions& o, std::ostream& out) {
  std::string text = o.spec_file.empty() ? std::string() : read_text_file(o.spec_file);
  text += "\n";
  for (const auto& [key, value] : o.overrides) text += key + ": " + value + "\n";
  const ExperimentSpec spec = parse_spec(text);
  spec.validate();
  const GridResult result = run_grid(spec, o.jobs, o.quiet ? nullptr : &out);
  std::size_t zero = 0;
  for (const auto& r : result.records) zero += r.delta_zero() ? 1 : 0;
  out << result.records.size() << " records, " << zero << " with Delta = 0, " << result.failures
      << " without artifacts; summary in " << (spec.output_dir / "summary.csv").string() << "\n";
  return result.failures == 0 ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"learn path-classification rules with recurrent networks and extract automata", "pathrules"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "Sample a labeled train set and a disjoint test pool from the target");
  add_target_options(g, gen.target);
  g->add_option("--count", gen.count, "Training words")->capture_default_str();
  g->add_option("--test-count", gen.test_count, "Test pool words (0 skips the pool)")->capture_default_str();
  g->add_option("--min-len", gen.min_len)->capture_default_str();
  g->add_option("--max-len", gen.max_len)->capture_default_str();
  g->add_option("--ratio", gen.ratio, "Fraction of accepted words")->capture_default_str();
  g->add_option("--seed", gen.seed)->capture_default_str();
  g->add_option("--out", gen.out, "Output directory")->required();

  TraceOptions tr;
  auto* t = app.add_subcommand("trace", "Enumerate k shortest ASM walks, label and rebalance them");
  add_target_options(t, tr.target);
  t->add_option("--asm", tr.asm_file, "ASM file")->required()->check(CLI::ExistingFile);
  t->add_option("--k", tr.k, "Number of shortest walks")->capture_default_str();
  t->add_option("--ratio", tr.ratio, "Positive ratio after rebalancing")->capture_default_str();
  t->add_flag("--keep-all", tr.keep_all, "Skip rebalancing");
  t->add_option("--seed", tr.seed)->capture_default_str();
  t->add_option("--out", tr.out, "Output dataset file")->required();

  MarkovOptions mk;
  auto* mcmd = app.add_subcommand("markov", "Per-state symbol frequencies of a corpus on the target");
  add_target_options(mcmd, mk.target);
  mcmd->add_option("--data", mk.data, "Dataset file")->required()->check(CLI::ExistingFile);
  mcmd->add_option("--threshold", mk.threshold, "Flag probabilities below this")->capture_default_str();

  TrainOptionsCli tn;
  auto* tc = app.add_subcommand("train", "Train a GRU or LSTM classifier");
  tc->add_option("--train", tn.train, "Training dataset")->required()->check(CLI::ExistingFile);
  tc->add_option("--test", tn.test, "Test dataset")->check(CLI::ExistingFile);
  tc->add_option("--cell", tn.cell, "gru or lstm")->capture_default_str();
  tc->add_option("--hidden", tn.hidden)->capture_default_str();
  tc->add_option("--dropout", tn.dropout, "Input dropout in [0, 0.10]")->capture_default_str();
  tc->add_option("--epochs", tn.epochs, "At most 5000")->capture_default_str();
  tc->add_option("--lr", tn.lr)->capture_default_str();
  tc->add_option("--seed", tn.seed)->capture_default_str();
  tc->add_option("--eval-every", tn.eval_every)->capture_default_str();
  tc->add_option("--out", tn.out, "Model file")->required();
  tc->add_option("--loss-csv", tn.loss_csv, "Per-epoch loss output");

  ExtractOptions ex;
  auto* ec = app.add_subcommand("extract", "Extract an FSA from a trained model");
  ec->add_option("--model", ex.model)->required()->check(CLI::ExistingFile);
  ec->add_option("--data", ex.data, "Datasets whose words are traced (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  ec->add_option("--train", ex.train, "Dataset for start-state selection (default: first --data)")
      ->check(CLI::ExistingFile);
  ec->add_option("--max-iterations", ex.max_iterations)->capture_default_str();
  ec->add_flag("--forced", ex.forced, "Project a nondeterministic machine by majority");
  ec->add_option("--out", ex.out, "FSA file; .dot and .meta are written next to it")->required();

  CompareOptions cp;
  auto* cc = app.add_subcommand("compare", "Sampled dissimilarity between two FSAs (or one FSA and the target)");
  add_target_options(cc, cp.target);
  cc->add_option("files", cp.files, "FSA files")->required()->check(CLI::ExistingFile);
  cc->add_option("--samples", cp.samples)->capture_default_str();
  cc->add_option("--seed", cp.seed)->capture_default_str();
  cc->add_option("--csv", cp.csv, "Append a CSV row here");

  SelectOptions se;
  auto* sc = app.add_subcommand("select", "Pick the machine with the lowest mean dissimilarity to the others");
  add_target_options(sc, se.target);
  sc->add_option("files", se.files, "FSA files")->required()->check(CLI::ExistingFile);
  sc->add_flag("--with-target", se.with_target, "Also report Delta to the target per machine");
  sc->add_option("--samples", se.samples)->capture_default_str();
  sc->add_option("--seed", se.seed)->capture_default_str();
  sc->add_option("--matrix-csv", se.matrix_csv, "Write the matrix here");

  GridOptions gr;
  auto* gc = app.add_subcommand("grid", "Train, extract and score a grid of network configurations");
  gc->add_option("--spec", gr.spec_file, "key: value spec file; flags override it")->check(CLI::ExistingFile);
  gc->add_option("--jobs", gr.jobs, "Parallel workers")->capture_default_str();
  gc->add_flag("--quiet", gr.quiet, "No per-cell progress lines");
  const std::vector<std::pair<std::string, std::string>> grid_keys = {
      {"target", "Target pattern"},
      {"target_fsa", "Target FSA file"},
      {"alphabet", "Alphabet"},
      {"cells", "Cell kinds, e.g. gru,lstm"},
      {"hidden", "Hidden sizes, e.g. 4,8,16"},
      {"checkpoints", "Epoch marks, e.g. 500,1000,3000,5000"},
      {"dropout", "Dropout values, e.g. 0,0.01,0.02"},
      {"train", "Train sizes, e.g. 400,1000"},
      {"test", "Test pool size"},
      {"seeds", "Seeds, e.g. 1,2,3"},
      {"min_len", "Shortest sampled word"},
      {"max_len", "Longest sampled word"},
      {"positive_ratio", "Fraction of accepted training words"},
      {"learning_rate", "Adam step size"},
      {"delta_samples", "Words sampled per language for Delta"},
      {"max_iterations", "Extraction iteration cap"},
      {"cell_time_limit", "Seconds per grid cell"},
      {"train_file", "Pre-built training set (practical setup)"},
      {"test_file", "Pre-built test set"},
      {"output", "Output directory"},
  };
  std::vector<std::string> grid_values(grid_keys.size());
  for (std::size_t i = 0; i < grid_keys.size(); ++i) {
    std::string flag = "--" + grid_keys[i].first;
    std::replace(flag.begin(), flag.end(), '_', '-');
    gc->add_option(flag, grid_values[i], grid_keys[i].second);
  }
  gc->footer(std::string("Outputs: <output>/spec.txt, data/, cells/<cell>/ep<E>/{model.txt,machine.fsa,machine.dot,"
                         "record.txt,extraction.meta}, summary.csv, comparison.csv.\n"
                         "summary.csv columns: ") +
             std::string(summary_columns()) +
             "\n  delta is defined only for deterministic extractions; lossy_delta scores the majority projection "
             "otherwise.\ncomparison.csv: GRU and LSTM side by side per (train_size, hidden, dropout, epoch).");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (g->parsed()) return cmd_gen(gen, out);
    if (t->parsed()) return cmd_trace(tr, out);
    if (mcmd->parsed()) return cmd_markov(mk, out);
    if (tc->parsed()) return cmd_train(tn, out);
    if (ec->parsed()) return cmd_extract(ex, out);
    if (cc->parsed()) return cmd_compare(cp, out);
    if (sc->parsed()) return cmd_select(se, out);
    if (gc->parsed()) {
      for (std::size_t i = 0; i < grid_keys.size(); ++i) {
        std::string flag = "--" + grid_keys[i].first;
        std::replace(flag.begin(), flag.end(), '_', '-');
        if (gc->count(flag)) gr.overrides.emplace_back(grid_keys[i].first, grid_values[i]);
      }
      return cmd_grid(gr, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace pathrules::cli
