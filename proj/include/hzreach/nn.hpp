#pragma once

/**
 * @file nn.hpp
 * @brief ReLU feed-forward networks and exact layer-by-layer propagation of hybrid zonotopes.
 */

#include "hzreach/hybrid_zonotope.hpp"

#include <vector>

namespace hzreach
{

struct Layer
{
    Matrix W;
    Vector v;
};

/// Affine layers with ReLU after every layer but the last.
class NeuralNetwork
{
public:
    NeuralNetwork() = default;
    /// Throws ShapeError when layer dimensions do not chain, ContractError on non-finite weights.
    explicit NeuralNetwork(std::vector<Layer> layers);

    const std::vector<Layer>& layers() const noexcept { return layers_; }
    std::size_t num_layers() const noexcept { return layers_.size(); }
    Eigen::Index input_dim() const;
    Eigen::Index output_dim() const;
    /// Total hidden (ReLU) neurons.
    Eigen::Index num_hidden_neurons() const;

    Vector evaluate(const Vector& x) const;

private:
    std::vector<Layer> layers_;
};

enum class BoundsMode
{
    Exact, ///< two support MILPs per neuron
    Fast,  ///< centre ± generator row sums, constraints ignored
};

struct NeuronBounds
{
    Vector lb;
    Vector ub;
};

/// Neurons with lb >= -kReluTol are treated as active, ub <= kReluTol as inactive.
inline constexpr double kReluTol = 1e-9;

/// Sound bounds on each coordinate of R.
NeuronBounds neuron_bounds(const HybridZonotope& R, BoundsMode mode);

/**
 * Tracks how the factors of a propagated set relate to the factors of the set the
 * propagation started from: parent xi_c = Sc xi_c, parent xi_b = Sb xi_b + s0.
 */
struct FactorMap
{
    Matrix Sc;
    Matrix Sb;
    Vector s0;

    static FactorMap identity(const HybridZonotope& Z);
    Vector parent_xi_c(const Vector& xi_c) const { return Sc * xi_c; }
    Vector parent_xi_b(const Vector& xi_b) const { return Sb * xi_b + s0; }
};

/// What one call of step_relu did.
enum class ReluCase
{
    Skipped,   ///< lb >= 0, identity
    Zeroed,    ///< ub <= 0, coordinate zeroed
    Split,     ///< both halves nonempty, union formed
    OnlyUpper, ///< lower half empty, upper half kept
    OnlyLower, ///< upper half empty, zeroed lower half kept
};

/// Exact ReLU of coordinate i given valid bounds [lb, ub] on it. Throws ContractError if lb > ub.
HybridZonotope step_relu(const HybridZonotope& R, Eigen::Index i, double lb, double ub);

struct LayerRecord
{
    std::size_t layer = 0;
    Eigen::Index crossing = 0;       ///< neurons with lb < 0 < ub
    Eigen::Index empty_branches = 0; ///< crossings where one half was empty
    Eigen::Index inactive = 0;
    Eigen::Index nb_in = 0;
    Eigen::Index nb_out = 0;
    Complexity complexity;
};

struct TracedReach
{
    HybridZonotope set;
    FactorMap factors;
    std::vector<LayerRecord> layers;

    Eigen::Index empty_branches() const;
};

/// One affine layer followed (optionally) by elementwise ReLU.
HybridZonotope layer_reach(const HybridZonotope& Z, const Matrix& W, const Vector& v, BoundsMode mode,
                           bool relu = true);

HybridZonotope network_reach(const HybridZonotope& Z, const NeuralNetwork& net, BoundsMode mode);

/// network_reach plus the factor map back to Z and per-layer statistics.
TracedReach network_reach_traced(const HybridZonotope& Z, const NeuralNetwork& net, BoundsMode mode);

} // namespace hzreach
