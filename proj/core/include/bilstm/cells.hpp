#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "bilstm/graph.hpp"
#include "bilstm/rng.hpp"
#include "bilstm/tensor.hpp"

namespace bilstm {

enum class CellType { linear, bilinear, shared_weight };

std::string_view cell_type_name(CellType type);
std::optional<CellType> cell_type_from_name(std::string_view name);

// n = input width, m = hidden width, c = pool width (bilinear cells only).
struct CellDims {
  int n = 0;
  int m = 0;
  int c = 0;
};

// Gate order everywhere: input, forget, output, candidate.
inline constexpr std::array<std::string_view, 4> kGateNames = {"i", "f", "o", "g"};

// Parameters of one recurrent cell. All three variants carry the four gate
// blocks; only the bilinear variant adds pool projections and per-gate
// integration maps. The shared-weight variant synthesizes its second-order
// term from the gate weights and owns nothing extra.
struct CellParams {
  CellType type = CellType::linear;
  CellDims dims;
  std::array<Tensor, 4> w_x;   // (m x n)
  std::array<Tensor, 4> w_h;   // (m x m)
  std::array<Tensor, 4> bias;  // (m)
  Tensor pool_x;               // (n x c)
  Tensor pool_h;               // (c x m)
  std::array<Tensor, 4> w_mu;  // (m x c)

  bool has_pool() const { return type == CellType::bilinear && dims.c > 0; }
};

// Zero-initialized parameters; rejects n < 1, m < 1, c < 0.
CellParams make_cell_params(CellType type, CellDims dims);

// Glorot-uniform gate weights, forget bias 1, other biases 0, Glorot pool
// projections, integration maps Glorot scaled by 0.1.
void init_cell_params(CellParams& params, RngStream& rng);

int64_t count_cell_params(CellType type, CellDims dims);

// Everything one step exposes for inspection: the additive decomposition of
// each gate pre-activation into its linear and second-order parts, the pool
// vector, gate activations, and the new state.
struct StepTrace {
  std::array<Tensor, 4> linear_pre;
  std::array<Tensor, 4> bilinear_pre;  // zeros for the linear cell
  Tensor pool;                         // empty for non-bilinear cells
  std::array<Tensor, 4> gates;
  Tensor h;
  Tensor c;
};

struct StepResult {
  Tensor h;
  Tensor c;
  StepTrace trace;
};

// Single-vector steps (x: n, h_prev/c_prev: m). Each dispatches into the same
// graph construction used for training, so there is exactly one definition of
// the recurrence.
StepResult lstm_step(const CellParams& p, const Tensor& x, const Tensor& h_prev,
                     const Tensor& c_prev);
StepResult bilinear_lstm_step(const CellParams& p, const Tensor& x, const Tensor& h_prev,
                              const Tensor& c_prev);
StepResult shared_weight_bilinear_step(const CellParams& p, const Tensor& x,
                                       const Tensor& h_prev, const Tensor& c_prev);
StepResult cell_step(const CellParams& p, const Tensor& x, const Tensor& h_prev,
                     const Tensor& c_prev);

// Pool vector from aggregated matrix form: (x^T W_x_pool)^T o (W_h_pool h).
Tensor bilinear_pool(const Tensor& pool_x, const Tensor& pool_h, const Tensor& x,
                     const Tensor& h_prev);

// Reference oracle: the same c rank-1 second-order terms evaluated one neuron
// at a time with explicit scalar dot products. w_x_rows is (c x n), w_h_rows
// is (c x m); row i holds the input/context weights of neuron i.
Tensor naive_per_neuron_bilinear(const Tensor& w_x_rows, const Tensor& w_h_rows,
                                 const Tensor& x, const Tensor& h);

// ---- graph-side builders ----

struct CellLeafRefs {
  std::array<Graph::NodeId, 4> w_x{};
  std::array<Graph::NodeId, 4> w_h{};
  std::array<Graph::NodeId, 4> bias{};
  Graph::NodeId pool_x = Graph::kNone;
  Graph::NodeId pool_h = Graph::kNone;
  Graph::NodeId pool_x_t = Graph::kNone;  // transpose node, shared across steps
  std::array<Graph::NodeId, 4> w_mu{};
  CellType type = CellType::linear;
  CellDims dims;
};

CellLeafRefs add_cell_leaves(Graph& g, const CellParams& p, bool trainable);

struct StepNodeIds {
  Graph::NodeId h = Graph::kNone;
  Graph::NodeId c = Graph::kNone;
  std::array<Graph::NodeId, 4> linear_pre{};
  std::array<Graph::NodeId, 4> bilinear_pre{};  // kNone when absent
  std::array<Graph::NodeId, 4> gates{};
  Graph::NodeId pool = Graph::kNone;
};

// One recurrence step on (n x B) input and (m x B) state columns.
StepNodeIds build_cell_step(Graph& g, const CellLeafRefs& cell, Graph::NodeId x,
                            Graph::NodeId h_prev, Graph::NodeId c_prev);

// Materializes trace values from a finished forward pass; column `col` of a
// batched step, reshaped to vectors.
StepTrace extract_trace(const Graph& g, const StepNodeIds& ids, const CellDims& dims);

}  // namespace bilstm
