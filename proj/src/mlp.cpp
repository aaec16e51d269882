#include "bclass/mlp.hpp"

#include <cmath>

namespace bclass {

void MlpSpec::validate() const {
    if (widths.size() < 3) throw std::invalid_argument("MlpSpec: need at least one hidden layer");
    for (int w : widths) {
        if (w < 1) throw std::invalid_argument("MlpSpec: widths must be >= 1");
    }
    if (init_scale < 0.0) throw std::invalid_argument("MlpSpec: init_scale must be >= 0");
}

Eigen::Index MlpSpec::num_params() const {
    Eigen::Index n = 0;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        n += static_cast<Eigen::Index>(widths[l]) * widths[l + 1] + widths[l + 1];
    }
    return n;
}

std::vector<LayerView> layer_views(const MlpSpec& spec) {
    std::vector<LayerView> views;
    Eigen::Index off = 0;
    for (std::size_t l = 0; l + 1 < spec.widths.size(); ++l) {
        LayerView v;
        v.in = spec.widths[l];
        v.out = spec.widths[l + 1];
        v.weight_offset = off;
        off += static_cast<Eigen::Index>(v.in) * v.out;
        v.bias_offset = off;
        off += v.out;
        views.push_back(v);
    }
    return views;
}

Vector pack_params(const MlpSpec& spec, const std::vector<Matrix>& weights,
                   const std::vector<Vector>& biases) {
    const auto views = layer_views(spec);
    if (weights.size() != views.size() || biases.size() != views.size()) {
        throw std::invalid_argument("pack_params: layer count mismatch");
    }
    Vector theta(spec.num_params());
    for (std::size_t l = 0; l < views.size(); ++l) {
        const LayerView& v = views[l];
        if (weights[l].rows() != v.out || weights[l].cols() != v.in ||
            biases[l].size() != v.out) {
            throw std::invalid_argument("pack_params: shape mismatch");
        }
        Eigen::Map<Matrix>(theta.data() + v.weight_offset, v.out, v.in) = weights[l];
        theta.segment(v.bias_offset, v.out) = biases[l];
    }
    return theta;
}

void unpack_params(const MlpSpec& spec, const Vector& theta, std::vector<Matrix>& weights,
                   std::vector<Vector>& biases) {
    if (theta.size() != spec.num_params()) {
        throw std::invalid_argument("unpack_params: parameter count mismatch");
    }
    const auto views = layer_views(spec);
    weights.resize(views.size());
    biases.resize(views.size());
    for (std::size_t l = 0; l < views.size(); ++l) {
        const LayerView& v = views[l];
        weights[l] = Eigen::Map<const Matrix>(theta.data() + v.weight_offset, v.out, v.in);
        biases[l] = theta.segment(v.bias_offset, v.out);
    }
}

Vector init_params(const MlpSpec& spec, RngStream& rng) {
    spec.validate();
    Vector theta(spec.num_params());
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        theta[i] = spec.init_scale * rng.normal();
    }
    return theta;
}

MlpModel::MlpModel(MlpSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    views_ = layer_views(spec_);
}

namespace {

double act_fn(Activation a, double x) {
    return a == Activation::Tanh ? std::tanh(x) : (x > 0.0 ? x : 0.0);
}

// relu derivative uses subgradient 0 at exactly 0
double act_deriv(Activation a, double pre, double post) {
    return a == Activation::Tanh ? 1.0 - post * post : (pre > 0.0 ? 1.0 : 0.0);
}

}  // namespace

Vector MlpModel::logits(const Vector& theta, const Vector& x) const {
    if (theta.size() != num_params()) throw std::invalid_argument("logits: bad theta size");
    if (x.size() != spec_.widths.front()) throw std::invalid_argument("logits: bad input size");
    Vector h = x;
    for (std::size_t l = 0; l < views_.size(); ++l) {
        const LayerView& v = views_[l];
        const Eigen::Map<const Matrix> w(theta.data() + v.weight_offset, v.out, v.in);
        Vector a = w * h + theta.segment(v.bias_offset, v.out);
        if (l + 1 < views_.size()) {
            for (Eigen::Index i = 0; i < a.size(); ++i) a[i] = act_fn(spec_.activation, a[i]);
        }
        h = std::move(a);
    }
    return h;
}

Vector MlpModel::backward(const Vector& theta, const Matrix& batch,
                          const Matrix& upstream) const {
    if (theta.size() != num_params()) throw std::invalid_argument("backward: bad theta size");
    if (batch.cols() != spec_.widths.front() || upstream.cols() != spec_.widths.back() ||
        batch.rows() != upstream.rows()) {
        throw std::invalid_argument("backward: shape mismatch");
    }
    const std::size_t nl = views_.size();
    // forward, keeping pre- and post-activation values per layer
    std::vector<Matrix> pre(nl), post(nl + 1);
    post[0] = batch;
    for (std::size_t l = 0; l < nl; ++l) {
        const LayerView& v = views_[l];
        const Eigen::Map<const Matrix> w(theta.data() + v.weight_offset, v.out, v.in);
        pre[l] = post[l] * w.transpose();
        pre[l].rowwise() += theta.segment(v.bias_offset, v.out).transpose();
        if (l + 1 < nl) {
            post[l + 1] = pre[l].unaryExpr(
                [&](double z) { return act_fn(spec_.activation, z); });
        } else {
            post[l + 1] = pre[l];
        }
    }

    Vector grad = Vector::Zero(num_params());
    Matrix delta = upstream;
    for (std::size_t li = nl; li-- > 0;) {
        const LayerView& v = views_[li];
        Eigen::Map<Matrix> dw(grad.data() + v.weight_offset, v.out, v.in);
        dw = delta.transpose() * post[li];
        grad.segment(v.bias_offset, v.out) = delta.colwise().sum().transpose();
        if (li > 0) {
            const Eigen::Map<const Matrix> w(theta.data() + v.weight_offset, v.out, v.in);
            const Matrix dh = delta * w;  // gradient w.r.t. post[li]
            const Matrix dact = pre[li - 1].binaryExpr(post[li], [&](double a, double p) {
                return act_deriv(spec_.activation, a, p);
            });
            delta = dh.cwiseProduct(dact);
        }
    }
    return grad;
}

}  // namespace bclass
