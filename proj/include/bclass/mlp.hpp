#pragma once

#include <vector>

#include "bclass/energy.hpp"

namespace bclass {

enum class Activation { Tanh, Relu };

/// Layer widths include input and output: {2, 16, 16, 2}.
struct MlpSpec {
    std::vector<int> widths{2, 16, 16, 2};
    Activation activation = Activation::Tanh;
    double init_scale = 0.3;

    int num_layers() const { return static_cast<int>(widths.size()) - 1; }
    Eigen::Index num_params() const;
    void validate() const;
};

/// Slices of the flat parameter vector for one affine layer.
struct LayerView {
    Eigen::Index weight_offset;
    Eigen::Index bias_offset;
    int in;
    int out;
};

std::vector<LayerView> layer_views(const MlpSpec& spec);

/// Pack per-layer (weight, bias) pairs into a flat vector; inverse of unpack.
Vector pack_params(const MlpSpec& spec, const std::vector<Matrix>& weights,
                   const std::vector<Vector>& biases);
void unpack_params(const MlpSpec& spec, const Vector& theta, std::vector<Matrix>& weights,
                   std::vector<Vector>& biases);

/// Each parameter ~ N(0, init_scale^2), seed-deterministic.
Vector init_params(const MlpSpec& spec, RngStream& rng);

class MlpModel final : public Model {
public:
    explicit MlpModel(MlpSpec spec);

    const MlpSpec& spec() const { return spec_; }
    Eigen::Index num_params() const override { return spec_.num_params(); }
    int num_outputs() const override { return spec_.widths.back(); }
    Vector logits(const Vector& theta, const Vector& x) const override;
    Vector backward(const Vector& theta, const Matrix& batch,
                    const Matrix& upstream) const override;

private:
    MlpSpec spec_;
    std::vector<LayerView> views_;
};

}  // namespace bclass
