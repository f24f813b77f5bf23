#include <cmath>
#include <limits>

#include "doctest.h"
#include "provsim/elasticity.hpp"
#include "provsim/sim_core.hpp"

using namespace provsim;

namespace {

ElasticityPolicy dynamic_policy(int b, int64_t r_milli) {
  ElasticityPolicy p;
  p.regime = Regime::Dynamic;
  p.initial_nodes = b;
  p.threshold_milli = r_milli;
  return p;
}

}  // namespace

TEST_CASE("ratio of obtaining") {
  CHECK(ratio_of_obtaining(9, 4) == doctest::Approx(2.25));
  CHECK(ratio_of_obtaining(0, 4) == 0.0);
  CHECK(std::isinf(ratio_of_obtaining(3, 0)));
  CHECK(ratio_of_obtaining(0, 0) == 0.0);
}

TEST_CASE("threshold comparison is strict and exact") {
  ElasticityPolicy p = dynamic_policy(0, 1500);
  CHECK_FALSE(ratio_exceeds_threshold(3, 2, p));   // 1.5 > 1.5 is false
  CHECK(ratio_exceeds_threshold(31, 20, p));       // 1.55
  CHECK_FALSE(ratio_exceeds_threshold(29, 20, p)); // 1.45
  CHECK(ratio_exceeds_threshold(5, 0, p));         // +inf exceeds any R
  CHECK_FALSE(ratio_exceeds_threshold(0, 0, p));   // empty queue never does
  p.threshold_infinite = true;
  CHECK_FALSE(ratio_exceeds_threshold(1'000'000, 1, p));
  CHECK_FALSE(ratio_exceeds_threshold(5, 0, p));
}

TEST_CASE("acquisition rule requests the unmet demand") {
  ElasticityPolicy p = dynamic_policy(4, 100'000);  // R = 100
  QueueSnapshot q;
  q.total_demand = 6;
  q.biggest_job = 6;
  auto dr = evaluate_demand(q, 4, p);  // ratio 1.5 stays under R
  REQUIRE(dr.has_value());             // but the biggest job cannot fit
  CHECK(*dr == 2);
}

TEST_CASE("acquisition rule triggers on the ratio alone") {
  ElasticityPolicy p = dynamic_policy(4, 1500);
  QueueSnapshot q;
  q.total_demand = 7;  // 7/4 = 1.75 > 1.5
  q.biggest_job = 3;
  auto dr = evaluate_demand(q, 4, p);
  REQUIRE(dr.has_value());
  CHECK(*dr == 3);
}

TEST_CASE("acquisition rule stays quiet when capacity suffices") {
  ElasticityPolicy p = dynamic_policy(4, 1500);
  QueueSnapshot q;
  q.total_demand = 5;  // 1.25 <= 1.5 and biggest fits
  q.biggest_job = 4;
  CHECK_FALSE(evaluate_demand(q, 4, p).has_value());
  q.total_demand = 0;
  q.biggest_job = 0;
  CHECK_FALSE(evaluate_demand(q, 4, p).has_value());
  ElasticityPolicy st;
  st.regime = Regime::Static;
  q.total_demand = 100;
  q.biggest_job = 100;
  CHECK_FALSE(evaluate_demand(q, 4, st).has_value());  // not dynamic
}

TEST_CASE("infinite threshold leaves only the biggest-job trigger") {
  ElasticityPolicy p = dynamic_policy(4, 1500);
  p.threshold_infinite = true;
  QueueSnapshot q;
  q.total_demand = 400;
  q.biggest_job = 4;
  CHECK_FALSE(evaluate_demand(q, 4, p).has_value());
  q.biggest_job = 5;
  auto dr = evaluate_demand(q, 4, p);
  REQUIRE(dr.has_value());
  CHECK(*dr == 396);
}

TEST_CASE("release rule hands back idle nodes and retires the timer") {
  DynamicLease lease;
  lease.size = 5;
  lease.outstanding = 5;
  ReleaseDecision d = release_tick(lease, 2);
  CHECK(d.release_now == 2);
  CHECK(d.outstanding_after == 3);
  CHECK_FALSE(d.deregister_timer);
  d = release_tick(lease, 7);
  CHECK(d.release_now == 5);  // capped at outstanding
  CHECK(d.outstanding_after == 0);
  CHECK(d.deregister_timer);
  d = release_tick(lease, 0);
  CHECK(d.release_now == 0);
  CHECK_FALSE(d.deregister_timer);
  d = release_tick(lease, -3);  // defensive clamp
  CHECK(d.release_now == 0);
}

TEST_CASE("billed durations round up to whole lease units") {
  CHECK(billed_duration_ms(0, 3'600'000) == 0);
  CHECK(billed_duration_ms(1, 3'600'000) == 3'600'000);
  CHECK(billed_duration_ms(575'000, 3'600'000) == 3'600'000);
  CHECK(billed_duration_ms(3'600'000, 3'600'000) == 3'600'000);
  CHECK(billed_duration_ms(3'600'001, 3'600'000) == 7'200'000);
  CHECK(billed_duration_ms(25'200'000, 3'600'000) == 25'200'000);  // 7 units
  CHECK_THROWS_AS(billed_duration_ms(10, 0), SimError);
}

TEST_CASE("regime names parse and print consistently") {
  bool leased = false;
  CHECK(parse_regime("static", &leased) == Regime::Static);
  CHECK_FALSE(leased);
  CHECK(parse_regime("static_leased", &leased) == Regime::Static);
  CHECK(leased);
  CHECK(parse_regime("per_job", &leased) == Regime::PerJob);
  CHECK(parse_regime("per-job", &leased) == Regime::PerJob);
  CHECK(parse_regime("dynamic", &leased) == Regime::Dynamic);
  CHECK_FALSE(parse_regime("magic", &leased).has_value());
  CHECK(std::string(regime_name(Regime::Static, false)) == "static");
  CHECK(std::string(regime_name(Regime::Static, true)) == "static_leased");
  CHECK(std::string(regime_name(Regime::PerJob, false)) == "per_job");
  CHECK(std::string(regime_name(Regime::Dynamic, false)) == "dynamic");
}

TEST_CASE("policy validation catches bad knobs") {
  ElasticityPolicy p;
  p.regime = Regime::Static;
  p.initial_nodes = -1;
  CHECK_FALSE(p.validate().empty());
  p.initial_nodes = 4;
  CHECK(p.validate().empty());

  ElasticityPolicy pj;
  pj.regime = Regime::PerJob;
  pj.initial_nodes = 3;
  CHECK_FALSE(pj.validate().empty());  // per-job leasing takes no pool
  pj.initial_nodes = 0;
  CHECK(pj.validate().empty());
  pj.lease_unit_ms = 0;
  CHECK_FALSE(pj.validate().empty());

  ElasticityPolicy dy = dynamic_policy(4, 999);  // R < 1
  CHECK_FALSE(dy.validate().empty());
  dy.threshold_milli = 1000;
  CHECK(dy.validate().empty());
  dy.check_cycle_ms = 0;
  CHECK_FALSE(dy.validate().empty());
  dy.check_cycle_ms = 60'000;
  dy.threshold_milli = 999;
  dy.threshold_infinite = true;  // infinite R overrides the milli value
  CHECK(dy.validate().empty());
}

TEST_CASE("provision service keeps a conservation ledger") {
  ProvisionService svc;
  svc.provision(0, 0, 40, AdjustCause::Initial);
  svc.provision(60'000, 0, 168, AdjustCause::DynamicGrant);
  CHECK(svc.granted_total() == 208);
  svc.reclaim(25'260'000, 0, 168, AdjustCause::Release);
  svc.reclaim(25'260'000, 0, 40, AdjustCause::Destroy);
  CHECK(svc.granted_total() == 0);
  REQUIRE(svc.log().size() == 4);
  CHECK(svc.log()[1].delta_nodes == 168);
  CHECK(svc.log()[2].delta_nodes == -168);
  CHECK(svc.log()[3].cause == AdjustCause::Destroy);
  CHECK_THROWS_AS(svc.reclaim(0, 0, 1, AdjustCause::Release), SimError);
  CHECK_THROWS_AS(svc.provision(0, 0, 0, AdjustCause::Initial), SimError);
}

TEST_CASE("adjust cause names") {
  CHECK(std::string(adjust_cause_name(AdjustCause::Initial)) == "initial");
  CHECK(std::string(adjust_cause_name(AdjustCause::DynamicGrant)) ==
        "dynamic_grant");
  CHECK(std::string(adjust_cause_name(AdjustCause::Release)) == "release");
  CHECK(std::string(adjust_cause_name(AdjustCause::Destroy)) == "destroy");
  CHECK(std::string(adjust_cause_name(AdjustCause::PerJob)) == "per_job");
}
