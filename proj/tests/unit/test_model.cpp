// Copyright 2026 The shapfair Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <doctest.h>

#include "shapfair/error.hpp"
#include "shapfair/gbdt.hpp"
#include "shapfair/metrics.hpp"
#include "shapfair/model.hpp"
#include "test_support.hpp"

using namespace shapfair;
using shapfair::testing::uniform;

namespace {

// x0 <= 0.5 ? (x1 <= -1 ? -1 : +1) : +1
DecisionTree hand_tree() {
  DecisionTree t;
  t.nodes.resize(5);
  t.nodes[0] = {0, 0.5, 1, 2, 0.0};
  t.nodes[1] = {1, -1.0, 3, 4, 0.0};
  t.nodes[2].value = 1.0;
  t.nodes[3].value = -1.0;
  t.nodes[4].value = 1.0;
  return t;
}

Matrix random_features(Rng& rng, std::size_t n, std::size_t m) {
  Matrix x(n, m);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < m; ++c) x(r, c) = standard_normal(rng);
  return x;
}

}  // namespace

TEST_SUITE("tree") {
  TEST_CASE("hand-evaluated paths, ties go left") {
    const auto t = hand_tree();
    const std::vector<double> a{0.0, -2.0}, b{0.5, -1.0}, c{0.5, 3.0}, d{0.6, -5.0};
    CHECK(t.evaluate(a) == -1.0);
    CHECK(t.evaluate(b) == -1.0);
    CHECK(t.evaluate(c) == 1.0);
    CHECK(t.evaluate(d) == 1.0);
    CHECK(t.depth() == 2);
  }

  TEST_CASE("malformed trees are rejected") {
    DecisionTree cyc;
    cyc.nodes.resize(3);
    cyc.nodes[0] = {0, 0.0, 0, 2, 0.0};
    CHECK_THROWS_AS(cyc.validate(1), ValidationError);
    DecisionTree dangling;
    dangling.nodes.resize(1);
    dangling.nodes[0] = {0, 0.0, 1, 2, 0.0};
    CHECK_THROWS_AS(dangling.validate(1), ValidationError);
    CHECK_THROWS_AS(hand_tree().validate(1), ValidationError);
    CHECK_NOTHROW(hand_tree().validate(2));
  }
}

TEST_SUITE("ensemble") {
  TEST_CASE("zero trees predict sigmoid(base)") {
    const GradientBoostedModel m({}, 0.1, 0.7, Objective::logistic, 3);
    const std::vector<double> row{1, 2, 3};
    CHECK(m.predict(row) == doctest::Approx(sigmoid(0.7)).epsilon(1e-15));
    CHECK(m.link() == Link::logistic);
  }

  TEST_CASE("raw score is base plus scaled tree sum") {
    const GradientBoostedModel m({hand_tree(), hand_tree()}, 0.25, -0.1, Objective::squared, 2);
    const std::vector<double> row{0.0, -2.0};
    CHECK(m.predict_raw(row) == doctest::Approx(-0.1 + 0.25 * -2.0));
    CHECK(m.predict(row) == m.predict_raw(row));
  }

  TEST_CASE("batch equals row by row; width mismatch throws") {
    Rng rng = make_rng(8);
    const auto m = testing::random_ensemble(rng, 4, 10, 3, Objective::logistic);
    const auto x = testing::grid_matrix(rng, 30, 4);
    const auto batch = m.predict(x);
    for (std::size_t r = 0; r < x.rows(); ++r) CHECK(batch[r] == m.predict(x.row(r)));
    CHECK_THROWS_AS(m.predict(testing::grid_matrix(rng, 3, 5)), ValidationError);
  }

  TEST_CASE("dropping the last tree removes exactly lr * tree(x)") {
    Rng rng = make_rng(9);
    for (int trial = 0; trial < 20; ++trial) {
      const auto m = testing::random_ensemble(rng, 5, 8, 4);
      const auto shorter = m.truncated(7);
      const auto x = testing::grid_matrix(rng, 20, 5);
      for (std::size_t r = 0; r < x.rows(); ++r) {
        const double diff = m.predict_raw(x.row(r)) - shorter.predict_raw(x.row(r));
        CHECK(diff == doctest::Approx(m.learning_rate() * m.trees().back().evaluate(x.row(r)))
                          .epsilon(1e-12));
      }
    }
  }

  TEST_CASE("json round trip preserves predictions bit for bit") {
    Rng rng = make_rng(10);
    const auto m = testing::random_ensemble(rng, 6, 12, 4, Objective::logistic);
    const auto back = GradientBoostedModel::from_json(nlohmann::json::parse(m.to_json().dump()));
    const auto x = testing::grid_matrix(rng, 50, 6);
    CHECK(back.predict_raw(x) == m.predict_raw(x));
  }
}

TEST_SUITE("training") {
  TEST_CASE("constant positive targets push predictions above 0.99") {
    Rng rng = make_rng(1);
    const auto x = random_features(rng, 100, 3);
    const std::vector<double> y(100, 1.0);
    GbdtParams p;
    p.n_trees = 50;
    const auto m = train_gbdt(x, y, Objective::logistic, p, 1);
    for (double s : m.predict(x)) CHECK(s >= 0.99);
  }

  TEST_CASE("one perfectly separating feature gives accuracy 1 at depth 1") {
    Rng rng = make_rng(2);
    const auto x = random_features(rng, 200, 3);
    std::vector<double> y(200);
    for (std::size_t r = 0; r < 200; ++r) y[r] = x(r, 1) > 0.2 ? 1.0 : 0.0;
    GbdtParams p;
    p.n_trees = 5;
    p.max_depth = 1;
    p.learning_rate = 0.5;
    p.min_child_rows = 1;
    const auto m = train_gbdt(x, y, Objective::logistic, p, 2);
    const auto s = m.predict(x);
    for (std::size_t r = 0; r < 200; ++r) CHECK((s[r] >= 0.5) == (y[r] == 1.0));
  }

  TEST_CASE("training loss is non-increasing for both objectives") {
    Rng rng = make_rng(3);
    for (int trial = 0; trial < 12; ++trial) {
      const std::size_t n = 20 + uniform_index(rng, 150);
      const auto x = random_features(rng, n, 1 + uniform_index(rng, 5));
      std::vector<double> y(n);
      const auto obj = trial % 2 ? Objective::logistic : Objective::squared;
      for (double& v : y) v = obj == Objective::logistic ? double(uniform_index(rng, 2)) : uniform(rng, -3, 3);
      GbdtParams p;
      p.n_trees = 30;
      p.max_depth = 1 + static_cast<int>(uniform_index(rng, 5));
      p.learning_rate = uniform(rng, 0.05, 1.5);
      p.min_child_rows = 1 + uniform_index(rng, 10);
      p.subsample = trial % 3 ? 1.0 : 0.7;
      const auto m = train_gbdt(x, y, obj, p, trial);
      const auto& h = m.loss_history();
      REQUIRE(h.size() == m.trees().size() + 1);
      for (std::size_t i = 1; i < h.size(); ++i) CHECK(h[i] <= h[i - 1]);
      CHECK(h.back() == doctest::Approx(mean_loss(obj, m.predict_raw(x), y)).epsilon(1e-12));
    }
  }

  TEST_CASE("same seed, same model") {
    Rng rng = make_rng(4);
    const auto x = random_features(rng, 150, 4);
    std::vector<double> y(150);
    for (double& v : y) v = uniform_unit(rng);
    GbdtParams p;
    p.subsample = 0.6;
    const auto a = train_gbdt(x, y, Objective::squared, p, 77);
    const auto b = train_gbdt(x, y, Objective::squared, p, 77);
    CHECK(a.to_json() == b.to_json());
  }

  TEST_CASE("precondition errors") {
    const std::vector<double> none;
    CHECK_THROWS_AS(train_gbdt(Matrix(), none, Objective::squared, {}, 0), TrainingError);
    const Matrix x(3, 1, 0.0);
    const std::vector<double> two{1, 0};
    CHECK_THROWS_AS(train_gbdt(x, two, Objective::squared, {}, 0), TrainingError);
    GbdtParams p;
    p.max_depth = 0;
    const std::vector<double> three{1, 0, 1};
    CHECK_THROWS_AS(train_gbdt(x, three, Objective::squared, p, 0), TrainingError);
    const std::vector<double> bad{1, 0, 2};
    CHECK_THROWS_AS(train_gbdt(x, bad, Objective::logistic, {}, 0), TrainingError);
  }
}

TEST_SUITE("auc") {
  TEST_CASE("hand-enumerated pairs") {
    const std::vector<double> s{0.1, 0.4, 0.35, 0.8};
    const std::vector<int> y{0, 0, 1, 1};
    CHECK(auc(s, y) == doctest::Approx(0.75));
  }

  TEST_CASE("perfect ranking and constant scores") {
    const std::vector<int> y{0, 1, 1, 0, 1};
    const std::vector<double> same{0, 1, 1, 0, 1}, flat(5, 0.3);
    CHECK(auc(same, y) == 1.0);
    CHECK(auc(flat, y) == 0.5);
  }

  TEST_CASE("matches the pairwise definition on random data") {
    Rng rng = make_rng(6);
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t n = 2 + uniform_index(rng, 60);
      std::vector<double> s(n);
      std::vector<int> y(n);
      for (std::size_t i = 0; i < n; ++i) {
        s[i] = 0.1 * static_cast<double>(uniform_index(rng, 6));
        y[i] = static_cast<int>(uniform_index(rng, 2));
      }
      y[0] = 0;
      y[1] = 1;
      double wins = 0, pairs = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (y[i] == 1 && y[j] == 0) {
            pairs += 1;
            wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
          }
      CHECK(auc(s, y) == doctest::Approx(wins / pairs).epsilon(1e-12));
    }
  }

  TEST_CASE("one class only is an error") {
    const std::vector<double> s{0.2, 0.4};
    const std::vector<int> y{1, 1};
    CHECK_THROWS_AS(auc(s, y), ValidationError);
  }
}

TEST_SUITE("calibration") {
  TEST_CASE("all ones, labels one: single occupied bin, gap 0") {
    const std::vector<double> s(10, 1.0);
    const std::vector<int> y(10, 1);
    const auto t = calibration_table(s, y, 10);
    REQUIRE(t.size() == 10);
    CHECK(t.back().count == 10);
    for (std::size_t b = 0; b + 1 < t.size(); ++b) CHECK(t[b].count == 0);
    CHECK(max_calibration_gap(t) == 0.0);
  }

  TEST_CASE("all ones, labels zero: gap 1 in top bin") {
    const std::vector<double> s(10, 1.0);
    const std::vector<int> y(10, 0);
    const auto t = calibration_table(s, y, 5);
    CHECK(t.back().gap() == 1.0);
    CHECK(max_calibration_gap(t) == 1.0);
  }

  TEST_CASE("Bernoulli(score) labels are calibrated as n grows") {
    Rng rng = make_rng(12);
    const std::size_t n = 200000;
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = uniform_unit(rng);
      y[i] = uniform_unit(rng) < s[i] ? 1 : 0;
    }
    CHECK(max_calibration_gap(calibration_table(s, y, 10)) < 0.01);
  }

  TEST_CASE("fewer than two bins is an error") {
    const std::vector<double> s{0.5};
    const std::vector<int> y{1};
    CHECK_THROWS_AS(calibration_table(s, y, 1), ValidationError);
  }
}
