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

#include "pulsekit/errors.hpp"
#include "pulsekit/jsonio.hpp"
#include "pulsekit/schedule.hpp"

using namespace pulsekit;

namespace {

PulseProgram xy_pulse() {
  ShapeSpec shape;
  shape.kind = ShapeKind::drag;
  shape.amplitude = 0.4;
  shape.sigma = 2.0;
  shape.beta = 0.25;
  return make_initial(shape, 24, 0.2222, {"X", "Y"});
}

}  // namespace

TEST_CASE("a single-qubit pulse exports to one complex drive channel") {
  const PulseProgram p = xy_pulse();
  const ScheduleDoc doc = export_schedule(p, "X", "cafe");
  REQUIRE(doc.channels.size() == 1);
  CHECK(doc.channels[0].name == "d0");
  CHECK(doc.gate == "X");
  CHECK(doc.spec_hash == "cafe");
  for (Eigen::Index k = 0; k < p.n_slots(); ++k) {
    CHECK(doc.channels[0].samples[k].real() == p.channel("X")->samples[k]);
    CHECK(doc.channels[0].samples[k].imag() == p.channel("Y")->samples[k]);
  }
}

TEST_CASE("CR pulse channels map to d0, d1 and the u0 control line") {
  PulseProgram p;
  p.dt = 0.2222;
  p.channels.push_back({"X1", Eigen::VectorXd::Constant(8, 0.1), Bounds{-1, 1}});
  p.channels.push_back({"X2", Eigen::VectorXd::Constant(8, 0.2), Bounds{-1, 1}});
  p.channels.push_back({"ZX", Eigen::VectorXd::Constant(8, 0.3), Bounds{-1, 1}});
  const ScheduleDoc doc = export_schedule(p, "CNOT", "beef");
  REQUIRE(doc.channels.size() == 3);
  CHECK(doc.channels[0].name == "d0");
  CHECK(doc.channels[1].name == "d1");
  CHECK(doc.channels[2].name == "u0");
  CHECK(doc.channels[2].samples[0].real() == 0.3);
}

TEST_CASE("unmapped pulse channels are rejected") {
  PulseProgram p;
  p.dt = 0.5;
  p.channels.push_back({"W", Eigen::VectorXd::Zero(4), Bounds{-1, 1}});
  CHECK_THROWS_AS(export_schedule(p, "X", "00"), UnmappedChannelError);
}

TEST_CASE("export then import reproduces the samples bit for bit") {
  const PulseProgram p = xy_pulse();
  const ScheduleDoc doc = export_schedule(p, "X", "1234");
  const PulseProgram back = import_schedule(doc, {"X", "Y"});
  REQUIRE(back.channels.size() == 2);
  for (std::size_t c = 0; c < 2; ++c) {
    CHECK((back.channels[c].samples - p.channels[c].samples)
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }

  // A quadrature of exact zeros still comes back when requested by label.
  ShapeSpec flat;
  flat.kind = ShapeKind::drag;
  flat.amplitude = 0.4;
  flat.sigma = 2.0;
  flat.beta = 0.0;
  const PulseProgram no_y = make_initial(flat, 16, 0.25, {"X", "Y"});
  const ScheduleDoc doc2 = export_schedule(no_y, "X", "00");
  const PulseProgram back2 = import_schedule(doc2, {"X", "Y"});
  CHECK(back2.channels.size() == 2);
  CHECK(back2.channel("Y")->samples.cwiseAbs().maxCoeff() == 0.0);
  // Auto-detect collapses it to the in-phase channel only.
  const PulseProgram detected = import_schedule(doc2);
  CHECK(detected.channels.size() == 1);
  CHECK(detected.channels[0].label == "X");
}

TEST_CASE("schedule JSON round-trips byte-exactly") {
  const PulseProgram p = xy_pulse();
  const ScheduleDoc doc = export_schedule(p, "X", "f00d");
  const std::string text = schedule_to_json_string(doc);
  const ScheduleDoc parsed = schedule_from_json_string(text);
  CHECK(schedule_to_json_string(parsed) == text);
  CHECK(parsed.version == doc.version);
  CHECK(parsed.dt_ns == doc.dt_ns);
}

TEST_CASE("schedule validation rejects over-unit samples") {
  ScheduleDoc doc;
  doc.dt_ns = 0.5;
  doc.channels.push_back({"d0", {{1.2, 0.0}}});
  CHECK_THROWS_AS(doc.validate(), ValidationError);
}

TEST_CASE("content hash is stable and content-sensitive") {
  CHECK(fnv1a_hex("abc") == fnv1a_hex("abc"));
  CHECK(fnv1a_hex("abc") != fnv1a_hex("abd"));
  CHECK(fnv1a_hex("").size() == 16);
}
