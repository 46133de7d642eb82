#include "doctest.h"

#include <cmath>

#include "qwalk/oracle.hpp"
#include "test_util.hpp"

using namespace qwalk;
using qwalk_test::random_sequence;
using qwalk_test::random_spinor;
using qwalk_test::random_unitary_coin;

TEST_CASE("every explicit step matrix is unitary") {
    SplitMix64 gen(23);
    for (int ell : {1, 2, 3}) {
        CHECK(unitarity_defect(build_step_matrix(CoinOperator::hadamard(), ell, 6)) < 1e-12);
        CHECK(unitarity_defect(build_step_matrix(random_unitary_coin(gen), ell, 6)) < 1e-12);
    }
}

TEST_CASE("dense evolution matches the walker kernel on random realizations") {
    SplitMix64 gen(29);
    for (int trial = 0; trial < 40; ++trial) {
        RunConfig cfg;
        cfg.coin = trial % 2 == 0 ? CoinOperator::hadamard() : random_unitary_coin(gen);
        cfg.spinor = random_spinor(gen);
        const int t = 1 + static_cast<int>(gen.next() % 8);
        const std::vector<int> seq = random_sequence(gen, t, 4);

        const WalkerState dense = dense_evolve(cfg, seq);
        Walker fast(cfg.spinor, cfg.coin, dense.capacity());
        for (int ell : seq) fast.step(ell);
        const WalkerState& f = fast.state();

        for (int x = -dense.capacity(); x <= dense.capacity(); ++x) {
            CHECK(std::abs(dense.left_at(x) - f.left_at(x)) < 1e-12);
            CHECK(std::abs(dense.right_at(x) - f.right_at(x)) < 1e-12);
        }
    }
}

TEST_CASE("dense single tick reproduces the hand-computed amplitudes") {
    RunConfig cfg;
    const WalkerState s = dense_evolve(cfg, {1});
    const double expect_l = (std::sqrt(1.0 / 3.0) + std::sqrt(2.0 / 3.0)) / std::sqrt(2.0);
    const double expect_r = (std::sqrt(1.0 / 3.0) - std::sqrt(2.0 / 3.0)) / std::sqrt(2.0);
    CHECK(std::abs(s.left_at(-1) - cplx(expect_l)) < 1e-15);
    CHECK(std::abs(s.right_at(+1) - cplx(expect_r)) < 1e-15);
}

TEST_CASE("dense refuses sequences beyond the time limit") {
    RunConfig cfg;
    CHECK_THROWS_AS(dense_evolve(cfg, std::vector<int>(13, 1)), std::invalid_argument);
    CHECK_THROWS_AS(dense_evolve(cfg, {}), std::invalid_argument);
    CHECK_THROWS_AS(dense_evolve(cfg, {1, 0, 1}), std::invalid_argument);
}

TEST_CASE("exact ensemble at alpha = 1 is the constant-1 walk") {
    RunConfig cfg;
    cfg.schedule = RandomTwoPoint{1.0, 1};
    cfg.t_max = 8;
    const Density exact = exact_ensemble(cfg);

    Walker w(cfg.spinor, cfg.coin, 16);
    for (int t = 0; t < 8; ++t) w.step(1);
    const Density single = occupation(w.state());
    for (int x = -8; x <= 8; ++x) CHECK(std::abs(exact.at(x) - single.at(x)) < 1e-14);
}

TEST_CASE("exact ensemble at alpha = 0.5, t = 2 is the uniform four-sequence mix") {
    RunConfig cfg;
    cfg.schedule = RandomTwoPoint{0.5, 1};
    cfg.t_max = 2;
    const Density exact = exact_ensemble(cfg);
    CHECK(exact.time == 2);

    const std::vector<std::vector<int>> seqs = {{1, 1}, {1, 2}, {2, 1}, {2, 2}};
    std::vector<double> mix(exact.values.size(), 0.0);
    for (const auto& seq : seqs) {
        Walker w(cfg.spinor, cfg.coin, 4);
        for (int ell : seq) w.step(ell);
        const Density d = occupation(w.state());
        for (int x = -4; x <= 4; ++x) mix[static_cast<std::size_t>(x + 4)] += 0.25 * d.at(x);
    }
    for (std::size_t i = 0; i < mix.size(); ++i)
        CHECK(std::abs(exact.values[i] - mix[i]) < 1e-14);
}

TEST_CASE("exact ensemble is normalized and symmetric for the symmetric spinor") {
    RunConfig cfg;
    cfg.schedule = RandomTwoPoint{0.7, 1};
    cfg.spinor = InitialSpinor::symmetric();
    cfg.t_max = 9;
    const Density exact = exact_ensemble(cfg);
    CHECK(std::abs(exact.sum() - 1.0) < 1e-10);
    for (int x = 1; x <= exact.x_max(); ++x)
        CHECK(std::abs(exact.at(x) - exact.at(-x)) < 1e-12);
}

TEST_CASE("exact ensemble guards its preconditions") {
    RunConfig cfg;
    cfg.schedule = RandomTwoPoint{0.5, 1};
    cfg.t_max = 30;
    CHECK_THROWS_AS(exact_ensemble(cfg), std::invalid_argument);
    cfg.t_max = 8;
    cfg.schedule = Constant{1};
    CHECK_THROWS_AS(exact_ensemble(cfg), std::invalid_argument);
}

TEST_CASE("monte carlo agrees with the enumeration at small scale") {
    RunConfig cfg;
    cfg.schedule = RandomTwoPoint{0.5, 1};
    cfg.t_max = 6;
    cfg.master_seed = 2024;
    const McComparison cmp = compare_exact_vs_mc(cfg, 20000);
    CHECK(cmp.sites_with_error > 0);
    CHECK(cmp.max_abs_z < 5.0);
    CHECK(cmp.fraction_above_2 < 0.25);
    CHECK(std::abs(cmp.mc_mean.sum() - 1.0) < 1e-9);
}
