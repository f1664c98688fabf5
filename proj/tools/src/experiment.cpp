#include "pathrules/cli/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "pathrules/extraction.hpp"
#include "pathrules/fsa_io.hpp"
#include "pathrules/regex.hpp"
#include "pathrules/rng.hpp"
#include "pathrules/ssm.hpp"
#include "pathrules/text.hpp"

namespace pathrules::cli {
namespace {

using Clock = std::chrono::steady_clock;

std::vector<std::string> comma_list(std::string_view value) {
  std::vector<std::string> out;
  std::string current;
  for (char c : value) {
    if (c == ',') {
      out.emplace_back(text::trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  out.emplace_back(text::trim(current));
  if (out.size() == 1 && out.front().empty()) out.clear();
  return out;
}

template <typename T, typename F>
std::vector<T> parse_list(std::string_view value, F parse) {
  std::vector<T> out;
  for (const auto& item : comma_list(value)) {
    if (item.empty()) throw UsageError("empty list element in '" + std::string(value) + "'");
    out.push_back(parse(item));
  }
  return out;
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F format) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += format(items[i]);
  }
  return out;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string ratio_or_na(const std::optional<Ratio>& r) { return r ? r->to_string() : "na"; }

}  // namespace

Fsa TargetSource::load() const {
  if (!fsa_file.empty()) return minimize(load_fsa(fsa_file));
  return regex_to_fsa(pattern, Alphabet(alphabet));
}

void ExperimentSpec::validate() const {
  if (cells.empty() || hidden_sizes.empty() || checkpoints.empty() || dropouts.empty() || train_sizes.empty() ||
      seeds.empty()) {
    throw UsageError("grid is empty: every list (cells, hidden, checkpoints, dropout, train, seeds) needs a value");
  }
  for (std::size_t n : hidden_sizes) {
    if (n < 1 || n > 256) throw UsageError("hidden size must be in [1, 256]");
  }
  for (double d : dropouts) {
    if (!(d >= 0.0 && d <= 0.10)) throw UsageError("dropout must be in [0, 0.10]");
  }
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < 1 || checkpoints[i] > 5000) throw UsageError("checkpoints must be in [1, 5000]");
    if (i && checkpoints[i] <= checkpoints[i - 1]) throw UsageError("checkpoints must be strictly increasing");
  }
  if (train_file.empty()) {
    for (std::size_t t : train_sizes) {
      if (t < 1) throw UsageError("train sizes must be >= 1");
    }
    if (test_size < 1) throw UsageError("test size must be >= 1");
    if (min_len < 1 || min_len > max_len) throw UsageError("lengths must satisfy 1 <= min_len <= max_len");
    if (!(positive_ratio > 0.0 && positive_ratio < 1.0)) throw UsageError("positive ratio must be in (0, 1)");
  }
  if (!(learning_rate > 0.0)) throw UsageError("learning rate must be positive");
  if (delta_samples < 1) throw UsageError("delta samples must be >= 1");
  if (max_iterations < 1) throw UsageError("max iterations must be >= 1");
  if (!(cell_time_limit > 0.0)) throw UsageError("cell time limit must be positive");
  if (output_dir.empty()) throw UsageError("output directory is required");
}

ExperimentSpec parse_spec(std::string_view content) {
  ExperimentSpec spec;
  auto as_size = [](const std::string& s) { return text::parse_uint<std::size_t>(s); };
  auto as_double = [](const std::string& s) { return text::parse_double(s); };
  for (const auto& line : text::content_lines(content)) {
    const auto colon = line.text.find(':');
    if (colon == std::string::npos) {
      throw UsageError("spec line " + std::to_string(line.number) + ": expected 'key: value'");
    }
    const std::string key(text::trim(std::string_view(line.text).substr(0, colon)));
    const std::string value(text::trim(std::string_view(line.text).substr(colon + 1)));
    try {
      if (key == "target") spec.target.pattern = value;
      else if (key == "target_fsa") spec.target.fsa_file = value;
      else if (key == "alphabet") spec.target.alphabet = value;
      else if (key == "cells") spec.cells = parse_list<CellKind>(value, [](const std::string& s) { return parse_cell_kind(s); });
      else if (key == "hidden") spec.hidden_sizes = parse_list<std::size_t>(value, as_size);
      else if (key == "checkpoints") spec.checkpoints = parse_list<std::size_t>(value, as_size);
      else if (key == "dropout") spec.dropouts = parse_list<double>(value, as_double);
      else if (key == "train") spec.train_sizes = parse_list<std::size_t>(value, as_size);
      else if (key == "test") spec.test_size = as_size(value);
      else if (key == "seeds") spec.seeds = parse_list<std::uint64_t>(value, [](const std::string& s) { return text::parse_uint<std::uint64_t>(s); });
      else if (key == "min_len") spec.min_len = as_size(value);
      else if (key == "max_len") spec.max_len = as_size(value);
      else if (key == "positive_ratio") spec.positive_ratio = as_double(value);
      else if (key == "learning_rate") spec.learning_rate = as_double(value);
      else if (key == "delta_samples") spec.delta_samples = as_size(value);
      else if (key == "max_iterations") spec.max_iterations = as_size(value);
      else if (key == "cell_time_limit") spec.cell_time_limit = as_double(value);
      else if (key == "train_file") spec.train_file = value;
      else if (key == "test_file") spec.test_file = value;
      else if (key == "output") spec.output_dir = value;
      else throw UsageError("unknown key '" + key + "'");
    } catch (const UsageError& e) {
      throw UsageError("spec line " + std::to_string(line.number) + ": " + e.what());
    } catch (const Error& e) {
      throw UsageError("spec line " + std::to_string(line.number) + ": " + e.what());
    }
  }
  return spec;
}

std::string write_spec(const ExperimentSpec& spec) {
  std::ostringstream out;
  auto num = [](auto v) { return std::to_string(v); };
  auto dbl = [](double v) { return fixed(v, 4); };
  if (spec.target.fsa_file.empty()) out << "target: " << spec.target.pattern << "\n";
  else out << "target_fsa: " << spec.target.fsa_file.string() << "\n";
  out << "alphabet: " << spec.target.alphabet << "\n";
  out << "cells: " << join(spec.cells, [](CellKind k) { return std::string(to_string(k)); }) << "\n";
  out << "hidden: " << join(spec.hidden_sizes, num) << "\n";
  out << "checkpoints: " << join(spec.checkpoints, num) << "\n";
  out << "dropout: " << join(spec.dropouts, dbl) << "\n";
  out << "train: " << join(spec.train_sizes, num) << "\n";
  out << "test: " << spec.test_size << "\n";
  out << "seeds: " << join(spec.seeds, num) << "\n";
  out << "min_len: " << spec.min_len << "\n";
  out << "max_len: " << spec.max_len << "\n";
  out << "positive_ratio: " << dbl(spec.positive_ratio) << "\n";
  out << "learning_rate: " << fixed(spec.learning_rate, 6) << "\n";
  out << "delta_samples: " << spec.delta_samples << "\n";
  out << "max_iterations: " << spec.max_iterations << "\n";
  out << "cell_time_limit: " << fixed(spec.cell_time_limit, 1) << "\n";
  if (!spec.train_file.empty()) out << "train_file: " << spec.train_file.string() << "\n";
  if (!spec.test_file.empty()) out << "test_file: " << spec.test_file.string() << "\n";
  out << "output: " << spec.output_dir.string() << "\n";
  return out.str();
}

std::string GridCell::name() const {
  return std::string(to_string(cell)) + "-n" + std::to_string(hidden) + "-d" + fixed(dropout, 2) + "-t" +
         std::to_string(train_size) + "-s" + std::to_string(seed);
}

std::vector<GridCell> expand(const ExperimentSpec& spec) {
  std::vector<GridCell> out;
  for (auto seed : spec.seeds) {
    for (auto t : spec.train_sizes) {
      for (auto kind : spec.cells) {
        for (auto n : spec.hidden_sizes) {
          for (auto d : spec.dropouts) out.push_back({kind, n, d, t, seed});
        }
      }
    }
  }
  return out;
}

SeedData make_seed_data(const ExperimentSpec& spec, const Fsa& target, std::uint64_t seed) {
  SeedData data{{}, Dataset{target.alphabet(), {}, seed}};
  if (!spec.train_file.empty()) {
    Dataset train = load_dataset(spec.train_file);
    data.test = spec.test_file.empty() ? train : load_dataset(spec.test_file);
    for (auto t : spec.train_sizes) {
      data.train.emplace_back(t, t >= train.size() ? train
                                                   : rebalance(train, train.positive_ratio(), t,
                                                               derive_seed(seed, "subset-" + std::to_string(t))));
    }
    return data;
  }
  SamplerConfig cfg;
  cfg.count = *std::max_element(spec.train_sizes.begin(), spec.train_sizes.end());
  cfg.min_len = spec.min_len;
  cfg.max_len = spec.max_len;
  cfg.positive_ratio = spec.positive_ratio;
  cfg.seed = derive_seed(seed, "train");
  const Dataset pool = sample_strings(target, cfg);
  SamplerConfig test_cfg = cfg;
  test_cfg.count = spec.test_size;
  test_cfg.seed = derive_seed(seed, "test");
  data.test = sample_strings(target, test_cfg, pool.words());
  for (auto t : spec.train_sizes) {
    data.train.emplace_back(t, t == pool.size() ? pool
                                                : rebalance(pool, spec.positive_ratio, t,
                                                            derive_seed(seed, "subset-" + std::to_string(t))));
  }
  return data;
}

std::string write_record(const RunRecord& r) {
  std::ostringstream out;
  out << "cell: " << r.cell.name() << "\n";
  out << "cell_kind: " << to_string(r.cell.cell) << "\n";
  out << "hidden: " << r.cell.hidden << "\n";
  out << "dropout: " << fixed(r.cell.dropout, 4) << "\n";
  out << "train_size: " << r.cell.train_size << "\n";
  out << "seed: " << r.cell.seed << "\n";
  out << "epoch: " << r.epoch << "\n";
  out << "status: " << r.status << "\n";
  out << "train_error: " << fixed(r.train_error, 6) << "\n";
  out << "test_error: " << fixed(r.test_error, 6) << "\n";
  out << "deterministic: " << (r.deterministic ? "true" : "false") << "\n";
  out << "lossy: " << (r.lossy ? "true" : "false") << "\n";
  out << "extraction_iterations: " << r.extraction_iterations << "\n";
  out << "fsa_states: " << r.fsa_states << "\n";
  out << "delta: " << ratio_or_na(r.delta) << "\n";
  out << "lossy_delta: " << ratio_or_na(r.lossy_delta) << "\n";
  out << "seconds: " << fixed(r.seconds, 3) << "\n";
  out << "model_file: " << r.model_file.filename().string() << "\n";
  out << "fsa_file: " << r.fsa_file.filename().string() << "\n";
  out << "dot_file: " << r.dot_file.filename().string() << "\n";
  out << "metadata_file: " << r.metadata_file.filename().string() << "\n";
  return out.str();
}

RunRecord evaluate_snapshot(const RnnModel& model, const Dataset& train, const Dataset& test, const Fsa& target,
                            const ExperimentSpec& spec, const std::filesystem::path& dir, std::uint64_t delta_seed) {
  const auto t0 = Clock::now();
  RunRecord r;
  r.train_error = evaluate(model, train);
  r.test_error = evaluate(model, test);

  std::vector<TraceRecord> traces = record_traces(model, train);
  for (auto& t : record_traces(model, test)) traces.push_back(std::move(t));
  ExtractionConfig ecfg;
  ecfg.max_iterations = spec.max_iterations;
  ExtractedMachine machine = extract(traces, model.alphabet(), ecfg);
  machine.initial_state = choose_initial_state(machine, train);
  const Projection projection = project(machine, machine.initial_state, true, false);
  const Fsa fsa = minimize(projection.fsa);
  r.deterministic = machine.deterministic;
  r.lossy = projection.lossy;
  r.extraction_iterations = machine.iterations;
  r.fsa_states = fsa.state_count();
  const Ratio delta = dissimilarity(fsa, target, spec.delta_samples, delta_seed).delta;
  if (machine.deterministic) r.delta = delta;
  else r.lossy_delta = delta;

  if (!dir.empty()) {
    r.model_file = dir / "model.txt";
    r.fsa_file = dir / "machine.fsa";
    r.dot_file = dir / "machine.dot";
    r.metadata_file = dir / "extraction.meta";
    r.record_file = dir / "record.txt";
    save_model(r.model_file, model);
    save_fsa(r.fsa_file, fsa);
    write_text_file(r.dot_file, to_dot(fsa, "extracted"));
    write_text_file(r.metadata_file, write_extraction_metadata(machine));
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

GridResult run_grid(const ExperimentSpec& spec, std::size_t jobs, std::ostream* log) {
  spec.validate();
  const Fsa target = spec.target.load();
  const auto cells = expand(spec);
  const std::size_t marks = spec.checkpoints.size();
  std::filesystem::create_directories(spec.output_dir);
  write_text_file(spec.output_dir / "spec.txt", write_spec(spec));

  // Datasets are shared by every cell of a seed; build them up front.
  std::map<std::uint64_t, SeedData> data;
  for (auto seed : spec.seeds) {
    SeedData d = make_seed_data(spec, target, seed);
    for (const auto& [size, train] : d.train) {
      const auto dir = spec.output_dir / "data" / ("s" + std::to_string(seed));
      save_dataset(dir / ("train-" + std::to_string(size) + ".txt"), train);
    }
    save_dataset(spec.output_dir / "data" / ("s" + std::to_string(seed)) / "test.txt", d.test);
    data.emplace(seed, std::move(d));
  }

  GridResult result;
  result.records.resize(cells.size() * marks);
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;

  auto run_cell = [&](std::size_t index) {
    const GridCell& cell = cells[index];
    const SeedData& sd = data.at(cell.seed);
    const Dataset& train_set =
        std::find_if(sd.train.begin(), sd.train.end(), [&](const auto& p) { return p.first == cell.train_size; })->second;
    const auto cell_dir = spec.output_dir / "cells" / cell.name();
    for (std::size_t k = 0; k < marks; ++k) {
      RunRecord& r = result.records[index * marks + k];
      r.cell = cell;
      r.epoch = spec.checkpoints[k];
      r.status = "failed: not reached";
    }
    ModelConfig mc;
    mc.cell = cell.cell;
    mc.hidden_size = cell.hidden;
    mc.input_size = target.alphabet().size();
    mc.dropout = cell.dropout;
    mc.epochs = spec.checkpoints.back();
    mc.learning_rate = spec.learning_rate;
    mc.seed = derive_seed(cell.seed, "model-" + cell.name());
    const auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                             std::chrono::duration<double>(spec.cell_time_limit));
    try {
      RnnModel model = RnnModel::initialized(mc, target.alphabet());
      TrainOptions options;
      options.eval_every = 0;
      options.checkpoints = spec.checkpoints;
      options.deadline = deadline;
      std::size_t k = 0;
      options.on_checkpoint = [&](std::size_t epoch, const RnnModel& snapshot, double) {
        while (k < marks && spec.checkpoints[k] != epoch) ++k;
        if (k == marks) return;
        RunRecord& r = result.records[index * marks + k];
        const auto dir = cell_dir / ("ep" + std::to_string(epoch));
        try {
          RunRecord scored = evaluate_snapshot(snapshot, train_set, sd.test, target, spec, dir,
                                               derive_seed(cell.seed, "delta"));
          scored.cell = cell;
          scored.epoch = epoch;
          r = std::move(scored);
          r.status = "ok";
          write_text_file(r.record_file, write_record(r));
        } catch (const std::exception& e) {
          r.status = std::string("failed: ") + e.what();
        }
      };
      const TrainReport report = train(model, train_set, sd.test, options);
      if (report.timed_out) {
        for (std::size_t j = 0; j < marks; ++j) {
          RunRecord& r = result.records[index * marks + j];
          if (r.status == "failed: not reached") r.status = "timeout";
        }
      }
    } catch (const std::exception& e) {
      for (std::size_t j = 0; j < marks; ++j) {
        RunRecord& r = result.records[index * marks + j];
        if (r.status == "failed: not reached") r.status = std::string("failed: ") + e.what();
      }
    }
    if (log) {
      std::lock_guard lock(log_mutex);
      *log << cell.name() << ":";
      for (std::size_t j = 0; j < marks; ++j) {
        const RunRecord& r = result.records[index * marks + j];
        *log << " ep" << r.epoch << "=" << (r.produced() ? "err " + fixed(r.test_error, 4) + " delta " +
                                                               (r.delta ? r.delta->to_string() : "nondet")
                                                         : r.status);
      }
      *log << std::endl;
    }
  };

  auto worker = [&] {
    for (std::size_t i; (i = next++) < cells.size();) run_cell(i);
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min(jobs, cells.size()));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (const auto& r : result.records) {
    if (!r.produced()) ++result.failures;
  }
  write_text_file(spec.output_dir / "summary.csv", summary_csv(result));
  write_text_file(spec.output_dir / "comparison.csv", comparison_csv(result));
  return result;
}

std::string_view summary_columns() {
  return "cell,cell_kind,hidden,dropout,train_size,seed,epoch,status,train_error,test_error,"
         "deterministic,lossy,extraction_iterations,fsa_states,delta,lossy_delta,seconds,dir";
}

std::string summary_csv(const GridResult& result) {
  std::ostringstream out;
  out << summary_columns() << "\n";
  for (const auto& r : result.records) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    out << r.cell.name() << ',' << to_string(r.cell.cell) << ',' << r.cell.hidden << ',' << fixed(r.cell.dropout, 4)
        << ',' << r.cell.train_size << ',' << r.cell.seed << ',' << r.epoch << ',' << status << ','
        << fixed(r.train_error, 6) << ',' << fixed(r.test_error, 6) << ',' << (r.deterministic ? 1 : 0) << ','
        << (r.lossy ? 1 : 0) << ',' << r.extraction_iterations << ',' << r.fsa_states << ','
        << ratio_or_na(r.delta) << ',' << ratio_or_na(r.lossy_delta) << ',' << fixed(r.seconds, 3) << ','
        << (r.record_file.empty() ? "" : r.record_file.parent_path().string()) << "\n";
  }
  return out.str();
}

std::string comparison_csv(const GridResult& result) {
  struct Acc {
    double error = 0.0;
    double delta = 0.0;
    std::size_t runs = 0;
    std::size_t scored = 0;
    std::size_t zero = 0;
  };
  using Key = std::tuple<std::size_t, std::size_t, std::string, std::size_t>;
  std::map<Key, std::map<CellKind, Acc>> table;
  for (const auto& r : result.records) {
    if (!r.produced()) continue;
    Acc& a = table[{r.cell.train_size, r.cell.hidden, fixed(r.cell.dropout, 4), r.epoch}][r.cell.cell];
    a.error += r.test_error;
    ++a.runs;
    if (r.delta && !r.delta->infinite) {
      a.delta += r.delta->value();
      ++a.scored;
      if (r.delta->is_zero()) ++a.zero;
    }
  }
  std::ostringstream out;
  out << "train_size,hidden,dropout,epoch,"
         "gru_runs,gru_mean_test_error,gru_mean_delta,gru_delta_zero,"
         "lstm_runs,lstm_mean_test_error,lstm_mean_delta,lstm_delta_zero\n";
  for (const auto& [key, kinds] : table) {
    const auto& [t, n, d, ep] = key;
    out << t << ',' << n << ',' << d << ',' << ep;
    for (CellKind kind : {CellKind::Gru, CellKind::Lstm}) {
      const auto it = kinds.find(kind);
      if (it == kinds.end()) {
        out << ",0,na,na,0";
        continue;
      }
      const Acc& a = it->second;
      out << ',' << a.runs << ',' << fixed(a.error / static_cast<double>(a.runs), 6) << ','
          << (a.scored ? fixed(a.delta / static_cast<double>(a.scored), 6) : "na") << ',' << a.zero;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace pathrules::cli
