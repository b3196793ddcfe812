// Copyright 2026 The pulsekit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>

#include "pulsekit/errors.hpp"
#include "pulsekit/lbfgsb.hpp"

using namespace pulsekit;
using Eigen::VectorXd;

TEST_CASE("unconstrained quadratic converges to its center") {
  const Eigen::Index n = 20;
  VectorXd center = VectorXd::LinSpaced(n, -1.0, 1.0) * 0.4;
  auto objective = [&](const VectorXd& x, VectorXd& g) {
    g = 2.0 * (x - center);
    return (x - center).squaredNorm();
  };
  const VectorXd lo = VectorXd::Constant(n, -10.0);
  const VectorXd hi = VectorXd::Constant(n, 10.0);
  const BoxMinResult r =
      minimize_lbfgsb(objective, VectorXd::Zero(n), lo, hi, {});
  CHECK(r.status == BoxMinStatus::grad_tol);
  CHECK((r.x - center).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("active bounds pin the constrained quadratic solution") {
  // Minimum of |x - (2, -3)|^2 inside [-1, 1]^2 sits at the corner (1, -1).
  auto objective = [](const VectorXd& x, VectorXd& g) {
    VectorXd c(2);
    c << 2.0, -3.0;
    g = 2.0 * (x - c);
    return (x - c).squaredNorm();
  };
  const VectorXd lo = VectorXd::Constant(2, -1.0);
  const VectorXd hi = VectorXd::Constant(2, 1.0);
  const BoxMinResult r = minimize_lbfgsb(objective, VectorXd::Zero(2), lo, hi, {});
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.x[1] == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("Rosenbrock in 8 dimensions reaches the global minimum") {
  const Eigen::Index n = 8;
  auto objective = [](const VectorXd& x, VectorXd& g) {
    double f = 0.0;
    g.setZero(x.size());
    for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
      const double a = x[i + 1] - x[i] * x[i];
      const double b = 1.0 - x[i];
      f += 100.0 * a * a + b * b;
      g[i] += -400.0 * a * x[i] - 2.0 * b;
      g[i + 1] += 200.0 * a;
    }
    return f;
  };
  const VectorXd lo = VectorXd::Constant(n, -5.0);
  const VectorXd hi = VectorXd::Constant(n, 5.0);
  BoxMinOptions opts;
  opts.max_iters = 2000;
  opts.grad_tol = 1e-10;
  const BoxMinResult r =
      minimize_lbfgsb(objective, VectorXd::Constant(n, -1.2), lo, hi, opts);
  CHECK(r.f < 1e-14);
  CHECK((r.x - VectorXd::Ones(n)).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("degenerate box returns the start unchanged") {
  auto objective = [](const VectorXd& x, VectorXd& g) {
    g = x;
    return 0.5 * x.squaredNorm();
  };
  const VectorXd fixed = VectorXd::Constant(3, 0.25);
  const BoxMinResult r = minimize_lbfgsb(objective, fixed, fixed, fixed, {});
  CHECK(r.status == BoxMinStatus::grad_tol);
  CHECK((r.x - fixed).cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.iterations == 0);
}

TEST_CASE("f_target stops the run early") {
  auto objective = [](const VectorXd& x, VectorXd& g) {
    g = 2.0 * x;
    return x.squaredNorm();
  };
  BoxMinOptions opts;
  opts.f_target = 1e-4;
  const VectorXd lo = VectorXd::Constant(4, -2.0);
  const VectorXd hi = VectorXd::Constant(4, 2.0);
  const BoxMinResult r =
      minimize_lbfgsb(objective, VectorXd::Constant(4, 1.0), lo, hi, opts);
  CHECK(r.status == BoxMinStatus::target_reached);
  CHECK(r.f <= 1e-4);
}

TEST_CASE("trace decreases monotonically") {
  auto objective = [](const VectorXd& x, VectorXd& g) {
    g.setZero(x.size());
    double f = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      f += std::pow(x[i], 4) - 2.0 * x[i] * x[i] + 0.5 * x[i];
      g[i] = 4.0 * std::pow(x[i], 3) - 4.0 * x[i] + 0.5;
    }
    return f;
  };
  const VectorXd lo = VectorXd::Constant(6, -3.0);
  const VectorXd hi = VectorXd::Constant(6, 3.0);
  const BoxMinResult r =
      minimize_lbfgsb(objective, VectorXd::Constant(6, 0.3), lo, hi, {});
  for (std::size_t i = 1; i < r.f_trace.size(); ++i) {
    CHECK(r.f_trace[i] <= r.f_trace[i - 1] + 1e-15);
  }
}

TEST_CASE("non-finite objectives abort with a diagnostic") {
  auto objective = [](const VectorXd& x, VectorXd& g) {
    g = x;
    return std::numeric_limits<double>::quiet_NaN();
  };
  const VectorXd lo = VectorXd::Constant(2, -1.0);
  const VectorXd hi = VectorXd::Constant(2, 1.0);
  CHECK_THROWS_AS(minimize_lbfgsb(objective, VectorXd::Zero(2), lo, hi, {}),
                  NaNCostError);
}
