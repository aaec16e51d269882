#include "doctest.h"

#include "bclass/mlp.hpp"

using namespace bclass;

TEST_CASE("parameter packing round-trips bitwise") {
    MlpSpec spec;
    spec.widths = {2, 4, 3};
    RngStream rng(41);
    const Vector theta = init_params(spec, rng);

    std::vector<Matrix> weights;
    std::vector<Vector> biases;
    unpack_params(spec, theta, weights, biases);
    REQUIRE(weights.size() == 2);
    CHECK(weights[0].rows() == 4);
    CHECK(weights[0].cols() == 2);
    CHECK(biases[1].size() == 3);

    const Vector repacked = pack_params(spec, weights, biases);
    CHECK((repacked - theta).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("init_params statistics and determinism") {
    MlpSpec spec;
    spec.widths = {2, 64, 64, 64, 2};  // large parameter count for tight stats
    spec.init_scale = 0.3;

    RngStream a(42), b(42);
    const Vector ta = init_params(spec, a);
    const Vector tb = init_params(spec, b);
    CHECK((ta - tb).cwiseAbs().maxCoeff() == 0.0);

    // pooled draws across seeds to exceed 1e5 samples
    double sq = 0.0;
    long n = 0;
    for (int seed = 0; seed < 12; ++seed) {
        RngStream rng(100 + seed);
        const Vector th = init_params(spec, rng);
        sq += th.squaredNorm();
        n += th.size();
    }
    REQUIRE(n >= 100000);
    CHECK(sq / static_cast<double>(n) == doctest::Approx(0.09).epsilon(0.02));

    MlpSpec zero = spec;
    zero.init_scale = 0.0;
    RngStream rng(1);
    CHECK(init_params(zero, rng).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("forward pass structure") {
    MlpSpec spec;
    spec.widths = {2, 3, 2};
    MlpModel model(spec);

    Vector x(2);
    x << 0.7, -0.4;
    CHECK(model.logits(Vector::Zero(spec.num_params()), x).cwiseAbs().maxCoeff() == 0.0);

    // tanh output bound: |logit_c| <= ||W_out row||_1 + |b_out_c|
    RngStream rng(43);
    const Vector theta = init_params(spec, rng);
    std::vector<Matrix> weights;
    std::vector<Vector> biases;
    unpack_params(spec, theta, weights, biases);
    const Vector z = model.logits(theta, x);
    for (int c = 0; c < 2; ++c) {
        CHECK(std::abs(z[c]) <=
              weights[1].row(c).cwiseAbs().sum() + std::abs(biases[1][c]) + 1e-12);
    }
}

TEST_CASE("single affine layer equals matrix-vector algebra") {
    // zero hidden contribution: drive the check through a known hand case
    MlpSpec spec;
    spec.widths = {2, 2, 2};
    MlpModel model(spec);
    std::vector<Matrix> weights = {Matrix::Zero(2, 2), Matrix::Zero(2, 2)};
    std::vector<Vector> biases = {Vector::Zero(2), Vector::Zero(2)};
    weights[0] << 0.3, -0.2, 0.1, 0.4;
    biases[0] << 0.05, -0.1;
    weights[1] << 1.0, 0.5, -0.7, 0.2;
    biases[1] << 0.2, -0.3;
    const Vector theta = pack_params(spec, weights, biases);

    Vector x(2);
    x << 0.6, -1.1;
    const Vector h = (weights[0] * x + biases[0]).array().tanh();
    const Vector expected = weights[1] * h + biases[1];
    CHECK((model.logits(theta, x) - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("backward additivity and zero upstream") {
    MlpSpec spec;
    spec.widths = {2, 4, 2};
    MlpModel model(spec);
    RngStream rng(44);
    const Vector theta = init_params(spec, rng);

    Matrix batch(3, 2);
    batch << 0.5, -0.3, -1.0, 0.7, 0.2, 0.2;
    CHECK(model.backward(theta, batch, Matrix::Zero(3, 2)).cwiseAbs().maxCoeff() == 0.0);

    Matrix upstream(3, 2);
    for (Eigen::Index i = 0; i < upstream.size(); ++i) {
        upstream(i / 2, i % 2) = rng.normal();
    }
    const Vector whole = model.backward(theta, batch, upstream);
    const Vector part_a = model.backward(theta, batch.topRows(2), upstream.topRows(2));
    const Vector part_b = model.backward(theta, batch.bottomRows(1), upstream.bottomRows(1));
    CHECK((whole - part_a - part_b).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("backward matches finite differences for both activations") {
    RngStream rng(45);
    int cases = 0;
    for (Activation act : {Activation::Tanh, Activation::Relu}) {
        MlpSpec spec;
        spec.widths = {2, 4, 2};
        spec.activation = act;
        MlpModel model(spec);
        for (int trial = 0; trial < 55; ++trial) {
            const Vector theta = init_params(spec, rng);
            Matrix batch(2, 2);
            for (Eigen::Index i = 0; i < 4; ++i) batch(i / 2, i % 2) = rng.normal();
            Matrix upstream(2, 2);
            for (Eigen::Index i = 0; i < 4; ++i) upstream(i / 2, i % 2) = rng.normal();

            auto objective = [&](const Vector& v) {
                double s = 0.0;
                for (Eigen::Index r = 0; r < batch.rows(); ++r) {
                    s += upstream.row(r).dot(model.logits(v, batch.row(r)).transpose());
                }
                return s;
            };
            if (act == Activation::Relu) {
                // skip parameter draws that place a pre-activation near a kink
                std::vector<Matrix> weights;
                std::vector<Vector> biases;
                unpack_params(spec, theta, weights, biases);
                bool near_kink = false;
                for (Eigen::Index r = 0; r < batch.rows(); ++r) {
                    const Vector pre =
                        weights[0] * batch.row(r).transpose() + biases[0];
                    if (pre.cwiseAbs().minCoeff() < 1e-6) near_kink = true;
                }
                if (near_kink) continue;
            }
            const Vector grad = model.backward(theta, batch, upstream);
            const Vector fd = finite_diff_grad(objective, theta, 1e-6);
            CHECK((grad - fd).norm() / std::max(1.0, fd.norm()) < 1e-5);
            ++cases;
        }
    }
    CHECK(cases >= 100);
}
