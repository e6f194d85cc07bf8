// Copyright 2026 The srx Authors
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "srx/error.hpp"
#include "srx/sources.hpp"

using namespace srx;

TEST_CASE("counter generator stream is frozen") {
  // Golden values derived independently from the documented recurrence.
  Rng a(0);
  CHECK(a.next_u64() == 0xe220a8397b1dcdafull);
  CHECK(a.next_u64() == 0x6e789e6aa1b965f4ull);
  CHECK(a.next_u64() == 0x06c45d188009454full);
  Rng b(42);
  CHECK(b.next_u64() == 0xbdd732262feb6e95ull);
  Rng c(0xdeadbeefull);
  CHECK(c.next_u64() == 0x4adfb90f68c9eb9bull);

  Rng d(7), e(7);
  CHECK(d.next_bits(10).to_hex() == "10:63c");
  CHECK(e.next_bits(70).to_hex() == "70:63cbe1e459320dd704");
}

TEST_CASE("min_entropy examples") {
  CHECK(DiscreteSource::uniform(3).min_entropy() == doctest::Approx(3.0));

  Rng rng(1);
  std::set<BitString> sup;
  while (sup.size() < 4) sup.insert(rng.next_bits(8));
  DiscreteSource flat = DiscreteSource::flat(8, {sup.begin(), sup.end()});
  CHECK(flat.min_entropy() == doctest::Approx(2.0));

  DiscreteSource table = DiscreteSource::table(
      2, {{BitString::from_binary("00"), 0.5},
          {BitString::from_binary("01"), 0.25},
          {BitString::from_binary("10"), 0.25}});
  CHECK(table.min_entropy() == doctest::Approx(1.0));

  DiscreteSource sampler = DiscreteSource::from_sampler(4, [](Rng& r) { return r.next_bits(4); });
  CHECK_THROWS_AS(sampler.min_entropy(), DomainError);
}

TEST_CASE("table constructor validates probabilities") {
  CHECK_THROWS_AS(DiscreteSource::table(1, {{BitString::from_binary("0"), 0.7}}), DomainError);
  CHECK_THROWS_AS(DiscreteSource::table(1, {{BitString::from_binary("0"), 1.5},
                                            {BitString::from_binary("1"), -0.5}}),
                  DomainError);
  CHECK_THROWS_AS(DiscreteSource::flat(3, {BitString::from_binary("0110")}), DomainError);
}

TEST_CASE("conditional min-entropy of block sources") {
  // Independent uniform blocks: conditional entropy equals the block length.
  BlockSource indep({2, 2}, DiscreteSource::uniform(4), {2.0, 2.0});
  CHECK(indep.conditional_min_entropy(0, BitString(0)) == doctest::Approx(2.0));
  CHECK(indep.conditional_min_entropy(1, BitString::from_binary("01")) == doctest::Approx(2.0));
  CHECK(indep.validate());

  // Copied block: conditioned on the prefix the next block is deterministic.
  std::vector<std::pair<BitString, double>> copy_entries;
  for (std::uint64_t v = 0; v < 4; ++v) {
    BitString b = BitString::from_uint(v, 2);
    copy_entries.emplace_back(concat(b, b), 0.25);
  }
  BlockSource copied({2, 2}, DiscreteSource::table(4, copy_entries), {2.0, 1.0});
  CHECK(copied.conditional_min_entropy(1, BitString::from_binary("10")) == doctest::Approx(0.0));
  std::string why;
  CHECK_FALSE(copied.validate(&why));
  CHECK(why.find("block 1") != std::string::npos);

  // Specified 4-bit joint; expected value from exhaustive conditional
  // tabulation done right here.
  std::vector<std::pair<BitString, double>> joint = {
      {BitString::from_binary("0000"), 0.50},
      {BitString::from_binary("0001"), 0.10},
      {BitString::from_binary("0110"), 0.15},
      {BitString::from_binary("1110"), 0.15},
      {BitString::from_binary("1101"), 0.10},
  };
  BlockSource two({2, 2}, DiscreteSource::table(4, joint), {0.0, 0.0});
  std::map<BitString, double> cond;
  double mass = 0.0;
  for (const auto& [v, p] : joint) {
    if (v.prefix(2) == BitString::from_binary("00")) {
      cond[v.slice(2, 2)] += p;
      mass += p;
    }
  }
  double max_p = 0.0;
  for (const auto& [v, p] : cond) max_p = std::max(max_p, p / mass);
  CHECK(two.conditional_min_entropy(0, BitString(0)) == doctest::Approx(-std::log2(0.6)));
  CHECK(two.conditional_min_entropy(1, BitString::from_binary("00")) ==
        doctest::Approx(-std::log2(max_p)));
  CHECK_THROWS_AS(two.conditional_min_entropy(1, BitString::from_binary("10")), DomainError);
}

TEST_CASE("sampling: point mass, determinism, empirical frequency") {
  Rng rng(3);
  DiscreteSource pm = DiscreteSource::point_mass(BitString::from_binary("1010"));
  CHECK(pm.sample(rng) == BitString::from_binary("1010"));

  DiscreteSource flat =
      DiscreteSource::flat(1, {BitString::from_binary("0"), BitString::from_binary("1")});
  Rng r1(42), r2(42);
  for (int i = 0; i < 50; ++i) CHECK(flat.sample(r1) == flat.sample(r2));

  DiscreteSource u2 = DiscreteSource::uniform(2);
  std::map<BitString, int> counts;
  Rng r3(99);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++counts[u2.sample(r3)];
  for (const auto& [v, c] : counts)
    CHECK(std::fabs(static_cast<double>(c) / draws - 0.25) < 0.01);
  CHECK(counts.size() == 4);
}

TEST_CASE("adversarial battery: shapes and entropy") {
  Rng rng(17);
  auto full = adversarial_flat_battery(4, 4, 1, rng);
  REQUIRE(full.size() == 1);
  CHECK(full[0].support.size() == 16);

  auto battery = adversarial_flat_battery(8, 3, 10, rng);
  REQUIRE(battery.size() == 10);
  for (const auto& s : battery) {
    CHECK(s.support.size() == 8);
    CHECK(s.min_entropy() == doctest::Approx(3.0));
    std::set<BitString> uniq(s.support.begin(), s.support.end());
    CHECK(uniq.size() == 8);
  }

  // The prefix-fixed member has all elements sharing the first n-k bits.
  const FlatSource& prefix_member = battery[2];
  BitString head = prefix_member.support[0].prefix(4);
  for (const auto& v : prefix_member.support) CHECK(v.prefix(4) == head);

  CHECK_THROWS_AS(adversarial_flat_battery(4, 5, 1, rng), DomainError);
}

TEST_CASE("flat sources have exact min entropy (exhaustive over sizes)") {
  Rng rng(23);
  for (int k = 0; k <= 6; ++k) {
    std::set<BitString> sup;
    while (sup.size() < (std::size_t{1} << k)) sup.insert(rng.next_bits(12));
    FlatSource f{12, {sup.begin(), sup.end()}};
    CHECK(f.min_entropy() == doctest::Approx(static_cast<double>(k)));
    CHECK(f.to_source().min_entropy() == doctest::Approx(static_cast<double>(k)));
  }
}

TEST_CASE("source description files round-trip") {
  Rng rng(31);
  auto battery = adversarial_flat_battery(6, 2, 1, rng);
  DiscreteSource flat = battery[0].to_source();
  std::stringstream ss;
  save_source(ss, flat);
  DiscreteSource back = load_source(ss);
  CHECK(back.n() == flat.n());
  REQUIRE(back.entries().size() == flat.entries().size());
  for (std::size_t i = 0; i < back.entries().size(); ++i) {
    CHECK(back.entries()[i].first == flat.entries()[i].first);
    CHECK(back.entries()[i].second == doctest::Approx(flat.entries()[i].second));
  }

  DiscreteSource table = DiscreteSource::table(
      2, {{BitString::from_binary("00"), 0.5},
          {BitString::from_binary("01"), 0.25},
          {BitString::from_binary("10"), 0.25}});
  std::stringstream ts;
  save_source(ts, table);
  DiscreteSource tback = load_source(ts);
  CHECK(tback.min_entropy() == doctest::Approx(1.0));

  BlockSource block({2, 2}, DiscreteSource::uniform(4), {2.0, 2.0});
  std::stringstream bs;
  save_block_source(bs, block);
  BlockSource bback = load_block_source(bs);
  CHECK(bback.block_lens() == block.block_lens());
  CHECK(bback.validate());

  CHECK_THROWS_AS(load_source_file("/nonexistent/path.src"), ParseError);
}
