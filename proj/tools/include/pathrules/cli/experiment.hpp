#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "pathrules/dataset.hpp"
#include "pathrules/fsa.hpp"
#include "pathrules/rnn.hpp"
#include "pathrules/simdist.hpp"
#include "pathrules/targets.hpp"

namespace pathrules::cli {

/// Thrown for invalid command lines or spec files; maps to exit status 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Where the target language comes from: an FSA file wins over a pattern.
struct TargetSource {
  std::string pattern{kSecurityPattern};
  std::string alphabet{kSecurityAlphabet};
  std::filesystem::path fsa_file;
  Fsa load() const;
};

struct ExperimentSpec {
  TargetSource target;
  std::vector<CellKind> cells{CellKind::Gru};
  std::vector<std::size_t> hidden_sizes{4};
  std::vector<std::size_t> checkpoints{500, 1000, 3000, 5000};
  std::vector<double> dropouts{0.0};
  std::vector<std::size_t> train_sizes{800};
  std::size_t test_size = 10000;
  std::vector<std::uint64_t> seeds{1};
  std::size_t min_len = 1;
  std::size_t max_len = 12;
  double positive_ratio = 0.5;
  double learning_rate = 0.01;
  std::size_t delta_samples = 10000;
  std::size_t max_iterations = 100;
  double cell_time_limit = 600.0;  // seconds per grid cell
  /// Pre-built datasets (practical setup); when set they replace sampling.
  std::filesystem::path train_file;
  std::filesystem::path test_file;
  std::filesystem::path output_dir = "runs";

  /// Throws UsageError on an empty grid or out-of-range value.
  void validate() const;
};

/// "key: value" lines; lists are comma separated. Unknown keys are errors.
ExperimentSpec parse_spec(std::string_view text);
std::string write_spec(const ExperimentSpec& spec);

struct GridCell {
  CellKind cell = CellKind::Gru;
  std::size_t hidden = 4;
  double dropout = 0.0;
  std::size_t train_size = 800;
  std::uint64_t seed = 1;
  std::string name() const;  // e.g. gru-n4-d0.00-t800-s1
};

/// Cartesian product in the order seed, train size, cell, hidden, dropout.
std::vector<GridCell> expand(const ExperimentSpec& spec);

struct RunRecord {
  GridCell cell;
  std::size_t epoch = 0;
  std::string status = "ok";  // ok | timeout | failed: <reason>
  double train_error = 1.0;
  double test_error = 1.0;
  bool deterministic = false;
  bool lossy = false;
  std::size_t extraction_iterations = 0;
  std::size_t fsa_states = 0;
  /// Dissimilarity to the target, defined only for a deterministic extraction.
  std::optional<Ratio> delta;
  /// Dissimilarity of the majority-resolved projection when extraction did
  /// not converge.
  std::optional<Ratio> lossy_delta;
  double seconds = 0.0;
  std::filesystem::path model_file;
  std::filesystem::path fsa_file;
  std::filesystem::path dot_file;
  std::filesystem::path record_file;
  std::filesystem::path metadata_file;

  bool produced() const { return status == "ok"; }
  bool delta_zero() const { return delta && delta->is_zero(); }
};

struct GridResult {
  std::vector<RunRecord> records;  // cell order, then checkpoint order
  std::size_t failures = 0;        // records whose artifacts are missing
};

/// Trains every cell once, snapshotting at each checkpoint; extracts,
/// scores and writes artifacts per snapshot. Cells run on `jobs` workers.
/// `log` receives one line per finished cell.
GridResult run_grid(const ExperimentSpec& spec, std::size_t jobs, std::ostream* log = nullptr);

/// Column list shown by `grid --help`.
std::string_view summary_columns();
std::string summary_csv(const GridResult& result);

/// Per (train size, hidden, dropout, epoch): test error and Delta for each
/// cell kind, averaged over seeds.
std::string comparison_csv(const GridResult& result);

std::string write_record(const RunRecord& r);

/// Train and test sets for one seed: the largest train size is sampled
/// once and smaller sets are balanced subsets of it; the test pool excludes
/// every pooled training word.
struct SeedData {
  std::vector<std::pair<std::size_t, Dataset>> train;  // by train size
  Dataset test;
};
SeedData make_seed_data(const ExperimentSpec& spec, const Fsa& target, std::uint64_t seed);

/// Extracts a machine from traces of every train and test word, picks its
/// start state on `train`, scores it against `target` and, when `dir` is
/// not empty, writes model, FSA, DOT, record and metadata files there.
RunRecord evaluate_snapshot(const RnnModel& model, const Dataset& train, const Dataset& test, const Fsa& target,
                            const ExperimentSpec& spec, const std::filesystem::path& dir, std::uint64_t delta_seed);

}  // namespace pathrules::cli
