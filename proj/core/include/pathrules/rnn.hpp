#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pathrules/alphabet.hpp"
#include "pathrules/dataset.hpp"
#include "pathrules/error.hpp"

namespace pathrules {

enum class CellKind { Gru, Lstm };

std::string_view to_string(CellKind kind);
/// "gru" / "lstm", case-insensitive; throws InvalidArgument.
CellKind parse_cell_kind(std::string_view text);

struct ModelConfig {
  CellKind cell = CellKind::Gru;
  std::size_t hidden_size = 4;
  std::size_t input_size = 3;
  /// Input-layer dropout probability, applied during training only.
  double dropout = 0.0;
  std::size_t epochs = 5000;
  double learning_rate = 0.01;
  std::uint64_t seed = 1;

  /// Hidden size in [1, 256], dropout in [0, 0.10], epochs <= 5000,
  /// positive learning rate. Throws InvalidArgument.
  void validate() const;
  bool operator==(const ModelConfig&) const = default;
};

/// One recurrent step as seen by the extractor.
struct StepTrace {
  char symbol;
  std::vector<double> hidden;  // post-step hidden state, length N
  double output;               // sigmoid of the output head at this step
};

struct TraceRecord {
  std::string word;
  std::vector<StepTrace> steps;
  /// State before the first symbol (the zero vector for an RNN) and the
  /// output the network assigns to it.
  std::vector<double> initial_hidden;
  double initial_output = 0.5;
  double probability = 0.5;  // output after the last step
  bool prediction = false;   // probability > 0.5
};

/// Length-L vector with a single 1 at the symbol's index. Throws UnknownSymbol.
std::vector<double> encode_one_hot(char symbol, const Alphabet& alphabet);

/// Single-layer GRU or LSTM followed by a logistic output head that reads
/// the final hidden state.
///
/// All parameters live in one flat vector in this order (G = 3 gates for
/// GRU, 4 for LSTM; gate blocks stacked row-wise):
///   input weights   W  (G*N x L, row-major)
///   recurrent       U  (G*N x N, row-major)
///   bias            b  (G*N)
///   head weights    v  (N)
///   head bias       c  (1)
/// GRU gate order is (update z, reset r, candidate n) with
///   h' = (1 - z) * n + z * h.
/// LSTM gate order is (input i, forget f, candidate g, output o).
class RnnModel {
 public:
  /// All parameters zero: every word scores exactly 0.5.
  static RnnModel zeros(const ModelConfig& config, const Alphabet& alphabet);
  /// Uniform(-1/sqrt(N), 1/sqrt(N)) parameters drawn from config.seed.
  static RnnModel initialized(const ModelConfig& config, const Alphabet& alphabet);
  /// Throws InvalidArgument when the vector length does not match the layout.
  static RnnModel from_parameters(const ModelConfig& config, const Alphabet& alphabet,
                                  std::vector<double> parameters);
  static std::size_t parameter_count_for(const ModelConfig& config);

  const ModelConfig& config() const noexcept { return config_; }
  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t hidden_size() const noexcept { return config_.hidden_size; }
  std::size_t gate_count() const noexcept { return config_.cell == CellKind::Gru ? 3 : 4; }
  std::size_t parameter_count() const noexcept { return params_.size(); }

  std::span<const double> parameters() const noexcept { return params_; }
  std::span<double> parameters() noexcept { return params_; }

  /// Inference-mode output probability. Throws on an empty word or an
  /// unknown symbol.
  double probability(std::string_view word) const;
  TraceRecord trace(std::string_view word) const;

  /// FNV-1a over the parameter bit patterns.
  std::uint64_t checksum() const noexcept;

  /// Mean binary cross-entropy over `examples` and its gradient with
  /// respect to parameters(). Inference mode (no dropout).
  double loss_and_gradient(std::span<const LabeledString> examples, std::vector<double>& gradient) const;
  /// Loss only.
  double loss(std::span<const LabeledString> examples) const;

  bool operator==(const RnnModel&) const = default;

 private:
  RnnModel(ModelConfig config, Alphabet alphabet);

  ModelConfig config_;
  Alphabet alphabet_;
  std::vector<double> params_;
};

std::pair<double, TraceRecord> forward(const RnnModel& model, std::string_view word);

/// Fraction of examples whose thresholded prediction (probability > 0.5,
/// so exactly 0.5 means reject) differs from the label. 0 for an empty set.
double evaluate(const RnnModel& model, const Dataset& d);

std::vector<TraceRecord> record_traces(const RnnModel& model, const Dataset& d);

struct TrainReport {
  std::vector<double> loss;                                   // per epoch
  std::vector<std::pair<std::size_t, double>> test_error;     // (epoch, misclassification)
  double wall_seconds = 0.0;
  std::uint64_t checksum = 0;                                 // of the final model
  std::size_t epochs_run = 0;
  bool timed_out = false;
  std::string optimizer = "adam(beta1=0.9,beta2=0.999,eps=1e-8),full-batch,bce";
};

struct TrainOptions {
  /// Test-set evaluation period in epochs; 0 disables periodic evaluation.
  std::size_t eval_every = 100;
  /// Epoch marks (1-based, ascending) after which `on_checkpoint` runs.
  std::vector<std::size_t> checkpoints;
  std::function<void(std::size_t epoch, const RnnModel& model, double test_error)> on_checkpoint;
  /// Training stops (timed_out = true) once this instant has passed.
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

class TrainingDiverged : public Error {
 public:
  TrainingDiverged(const std::string& what, TrainReport report) : Error(what), report_(std::move(report)) {}
  const TrainReport& report() const noexcept { return report_; }

 private:
  TrainReport report_;
};

/// Full-batch Adam on mean BCE for config().epochs epochs, backpropagating
/// through time. Dropout masks are drawn from a generator derived from the
/// model seed, so the run is deterministic. Throws TrainingDiverged on a
/// non-finite loss.
TrainReport train(RnnModel& model, const Dataset& train_set, const Dataset& test_set,
                  const TrainOptions& options = {});

/// Largest relative error between the analytic gradient and central finite
/// differences (step 1e-5, loss evaluated in long double) over all parameters
/// for one example. The relative error of a component is
/// |a - n| / max(|a|, |n|, 1e-7).
double gradient_check(const RnnModel& model, const LabeledString& example);

// Model file: "rnn v1", key: value config lines, "parameters: K", then K
// values printed with 17 significant digits.
std::string write_model(const RnnModel& model);
RnnModel read_model(std::string_view text);
void save_model(const std::filesystem::path& path, const RnnModel& model);
RnnModel load_model(const std::filesystem::path& path);

}  // namespace pathrules
