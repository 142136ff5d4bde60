#pragma once

#include <string>
#include <vector>

#include "bilstm/cells.hpp"

namespace bilstm {

// Every trainable tensor belongs to exactly one group; the trainer assigns
// each group its own learning rate and reports per-group gradient norms.
enum class ParamGroupKind { linear, bilinear, head, embedding };
inline constexpr std::array<std::string_view, 4> kGroupNames = {"linear", "bilinear", "head",
                                                                "embedding"};
std::string_view group_name(ParamGroupKind group);
std::optional<ParamGroupKind> group_from_name(std::string_view name);

enum class HeadKind { regression, classifier, siamese };
std::string_view head_kind_name(HeadKind kind);
std::optional<HeadKind> head_kind_from_name(std::string_view name);

struct HeadSpec {
  HeadKind kind = HeadKind::regression;
  int out_dim = 1;  // regression width or class count
};

// Vector input feeds the cell directly with dim-wide columns; token input
// goes through an embedding table with `dim` rows and `vocab` columns.
struct InputSpec {
  bool tokens = false;
  int dim = 0;
  int vocab = 0;
};

struct ModelConfig {
  CellType cell = CellType::linear;
  int m = 0;
  int c = 0;
  int layers = 1;  // sequential stack, 1..3; each layer owns its pool
  InputSpec input;
  HeadSpec head;
  // When true, the per-gate integration maps W_mu are assigned to the linear
  // group instead of the bilinear group.
  bool integration_in_linear_group = false;
  uint64_t seed = 0;

  CellDims layer_dims(int layer) const {
    return CellDims{layer == 0 ? input.dim : m, m, cell == CellType::bilinear ? c : 0};
  }
};

struct Model {
  ModelConfig config;
  std::vector<CellParams> cells;
  Tensor embedding;  // (dim x vocab) when input.tokens
  Tensor head_w;
  Tensor head_b;
};

// Validates the config and initializes all parameters from config.seed.
Model build_model(const ModelConfig& config);

// Fixed enumeration of every trainable tensor (name, group, storage).
// Checkpoints, optimizer state, gradients and finite differences all share
// this order.
struct TensorRef {
  std::string name;
  ParamGroupKind group;
  Tensor* tensor;
};
struct ConstTensorRef {
  std::string name;
  ParamGroupKind group;
  const Tensor* tensor;
};
std::vector<TensorRef> model_tensors(Model& model);
std::vector<ConstTensorRef> model_tensors(const Model& model);

// Exact per-group counts of trainable scalars for a configuration.
struct ParamCount {
  int64_t linear = 0;
  int64_t bilinear = 0;
  int64_t head = 0;
  int64_t embedding = 0;
  int64_t total() const { return linear + bilinear + head + embedding; }
};
ParamCount count_params(const ModelConfig& config);

// Largest hidden size m such that the bilinear variant of `reference` with
// pool size c stays within the reference parameter budget. The reference must
// be a linear-cell config. Throws ErrorKind::infeasible when even m = 1 does
// not fit.
struct ParityResult {
  int m = 0;
  int64_t slack = 0;
  int64_t reference_count = 0;
  int64_t bilinear_count = 0;
};
ParityResult solve_parity(const ModelConfig& reference, int c);

// ---- sequence batches ----

// Vector-sequence batch: steps[t] is (n x B); targets[t] is (out x B).
struct VectorSeqBatch {
  std::vector<Tensor> steps;
  std::vector<Tensor> targets;
  bool final_step_only = false;
};

// Token sequences (variable length) with one label per sequence.
struct TokenBatch {
  std::vector<std::vector<int>> tokens;
  std::vector<int> labels;
  int pad_id = 0;
};

// Sentence pairs for the siamese head.
struct PairBatch {
  std::vector<std::vector<int>> tokens_a;
  std::vector<std::vector<int>> tokens_b;
  std::vector<int> labels;
  int pad_id = 0;
};

// A fully built forward graph with handles into it.
struct SequenceGraph {
  Graph graph;
  std::vector<Graph::NodeId> param_ids;  // aligned with model_tensors order
  Graph::NodeId loss = Graph::kNone;
  std::vector<Graph::NodeId> outputs;                // per supervised timestep, or {logits}
  std::vector<std::vector<StepNodeIds>> step_nodes;  // [layer][t] (first sequence only)
};

SequenceGraph build_graph(const Model& model, const VectorSeqBatch& batch);
SequenceGraph build_graph(const Model& model, const TokenBatch& batch);
SequenceGraph build_graph(const Model& model, const PairBatch& batch);

// Forward pass over one sequence (batch of one), with traces. For regression
// the outputs hold the head value at every timestep; for classifier/siamese
// the single final logits vector.
struct SequenceForwardResult {
  std::vector<Tensor> outputs;
  std::vector<std::vector<StepTrace>> traces;  // [layer][t]
  double loss = 0.0;
};
SequenceForwardResult sequence_forward(const Model& model, const VectorSeqBatch& batch);
SequenceForwardResult sequence_forward(const Model& model, const TokenBatch& batch);
SequenceForwardResult sequence_forward(const Model& model, const PairBatch& batch);

// Mean-batch loss and exact reverse-mode gradients for every trainable
// tensor, aligned with model_tensors order. Throws ErrorKind::divergence on a
// non-finite loss.
template <typename Batch>
std::pair<double, std::vector<Tensor>> sequence_backward(const Model& model,
                                                         const Batch& batch);

}  // namespace bilstm
