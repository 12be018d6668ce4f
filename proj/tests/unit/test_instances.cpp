#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "kocrs/instances.hpp"
#include "support.hpp"

using namespace kocrs;
using kocrs::testing::code_of;
using kocrs::testing::R;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("kocrs_test_" + name);
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

}  // namespace

TEST(Fixtures, ExampleGreedy) {
  const auto inst = example_greedy();
  EXPECT_EQ(inst.items.size(), 3u);
  EXPECT_EQ(inst.total_mean(), Rational(1));
  EXPECT_EQ(inst.setting, Setting::Hard);
}

TEST(Fixtures, Thm31) {
  const auto inst = thm31_instance(R("1/10"));
  EXPECT_EQ(inst.items.size(), 4u);
  EXPECT_EQ(inst.total_mean(), Rational(104, 125));
  const auto d = thm31_instance(R("1/100"));
  const auto atoms = d.items[1].atoms();
  ASSERT_EQ(atoms.size(), 2u);
  EXPECT_EQ(atoms[0], (Atom{R("1/10000"), R("51/100")}));
  EXPECT_EQ(atoms[1], (Atom{Rational(1), R("49/100")}));
  EXPECT_EQ(code_of([] { thm31_instance(R("1/2")); }), ErrorCode::DeltaOutOfRange);
  EXPECT_EQ(code_of([] { thm31_instance(Rational(0)); }), ErrorCode::DeltaOutOfRange);
}

TEST(Fixtures, Thm31MeanApproachesOne) {
  Rational prev;
  for (long k = 10; k <= 100000; k *= 10) {
    const Rational m = thm31_instance(Rational(1, k)).total_mean();
    EXPECT_LT(m, Rational(1));
    EXPECT_GT(m, prev);
    prev = m;
  }
  EXPECT_GT(prev, R("0.9999"));
}

TEST(Fixtures, Thm33) {
  const Rational delta = R("1/1000");
  const auto inst = thm33_instance(delta);
  EXPECT_EQ(inst.items.size(), 3u);
  EXPECT_EQ(inst.total_mean(), Rational(1));
  EXPECT_EQ(inst.items[1].cdf(R("1/2")), Rational(2) * delta);
  EXPECT_EQ(code_of([] { thm33_instance(R("-1/10")); }), ErrorCode::DeltaOutOfRange);
}

TEST(Fixtures, Thm41) {
  EXPECT_EQ(thm41_item_count(R("1/10")), 12u);
  EXPECT_EQ(thm41_item_count(R("3/10")), 6u);
  const auto inst = thm41_instance(R("1/10"), R("1/200"));
  EXPECT_EQ(inst.items.size(), 12u);
  EXPECT_EQ(inst.setting, Setting::Soft);
  // 1 - delta + n delta^2 with n = 12, delta = 1/200.
  EXPECT_EQ(inst.total_mean(), Rational(9953, 10000));
  EXPECT_EQ(code_of([] { thm41_instance(R("1/10"), R("1/120")); }), ErrorCode::DeltaTooLarge);
  EXPECT_EQ(code_of([] { thm41_instance(R("1/10"), R("1/100")); }), ErrorCode::DeltaTooLarge);
}

TEST(FixtureProperty, ClosedFormsForRandomDelta) {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 10; ++rep) {
    const Rational d(1 + static_cast<long>(rng() % 997), 2000);  // in (0, 1/2)
    const Rational one(1), two(2), three(3);
    EXPECT_EQ(thm31_instance(d).total_mean(), one - two * d + three * d * d + two * d * d * d);
    EXPECT_EQ(thm33_instance(d).total_mean(), one);
    const Rational eps(1 + static_cast<long>(rng() % 40), 100);
    const auto n = static_cast<long>(thm41_item_count(eps));
    const Rational small = eps / Rational(n) / Rational(2 + static_cast<long>(rng() % 5));
    EXPECT_EQ(thm41_instance(eps, small).total_mean(), one - small + Rational(n) * small * small);
  }
}

TEST(Random, ContractAndDeterminism) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    RandomKocrsSpec spec;
    spec.n = 1 + seed % 6;
    spec.max_atoms = 1 + seed % 3;
    spec.seed = seed;
    spec.setting = seed % 2 ? Setting::Soft : Setting::Hard;
    const auto a = random_kocrs(spec);
    EXPECT_LE(a.total_mean(), Rational(1));
    EXPECT_EQ(a.items.size(), spec.n);
    for (const auto& item : a.items) EXPECT_LE(item.support_size(), spec.max_atoms);
    EXPECT_EQ(a, random_kocrs(spec));
  }
}

TEST(Random, BinaryMode) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    RandomKocrsSpec spec;
    spec.n = 1 + seed % 8;
    spec.binary = true;
    spec.seed = seed;
    const auto inst = random_kocrs(spec);
    const Rational eps = R(inst.params.at("epsilon").c_str());
    EXPECT_LT(Rational(static_cast<long>(spec.n + 1)) * eps, Rational(1));
    Rational p_total;
    for (const auto& item : inst.items) {
      for (const auto& a : item.atoms()) EXPECT_TRUE(a.size == eps || a.size == Rational(1));
      p_total += item.prob_of(Rational(1));
    }
    EXPECT_LE(p_total, Rational(1));
    EXPECT_LE(inst.total_mean(), Rational(1));
  }
  RandomKocrsSpec bad;
  bad.n = 3;
  bad.binary = true;
  bad.epsilon = R("1/4");
  EXPECT_EQ(code_of([&] { random_kocrs(bad); }), ErrorCode::InvalidArgument);
}

TEST(Io, RoundTripFixtures) {
  const std::vector<KocrsInstance> all{example_greedy(), example_greedy(Setting::Soft), thm31_instance(R("1/100")),
                                       thm33_instance(R("1/1000")), thm41_instance(R("1/10"), R("1/200"))};
  const auto path = temp_file("roundtrip.json");
  for (const auto& inst : all) {
    save_instance(inst, path);
    EXPECT_EQ(load_instance(path), inst);
    EXPECT_EQ(parse_instance(serialize_instance(inst)), inst);
  }
  std::filesystem::remove(path);
}

TEST(Io, DecimalAndFractionParseExactly) {
  const auto inst = parse_instance(R"({"setting": "hard", "items": [
    {"atoms": [{"size": "1/3", "prob": "0.25"}, {"size": "0.5", "prob": "3/4"}]}]})");
  EXPECT_EQ(inst.items[0].atoms()[0], (Atom{R("1/3"), R("1/4")}));
  EXPECT_EQ(inst.items[0].atoms()[1], (Atom{R("1/2"), R("3/4")}));
}

TEST(Io, Errors) {
  EXPECT_EQ(code_of([] { parse_instance(R"({"setting": "hard", "items": [{"atoms": [{"size": "1/2", "prob": "0.9"}]}]})"); }),
            ErrorCode::ValidationError);
  EXPECT_EQ(code_of([] { parse_instance(R"({"setting": "hard", "items": [{"atoms": [{"size": "3/5", "prob": "1"}]}, {"atoms": [{"size": "3/5", "prob": "1"}]}]})"); }),
            ErrorCode::ValidationError);
  EXPECT_EQ(code_of([] { parse_instance("{\"setting\": \"hard\",\n \"items\": [ }"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_instance(R"({"items": []})"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_instance(R"({"setting": "hard", "items": [{"atoms": [{"size": "x", "prob": "1"}]}]})"); }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { load_instance("/nonexistent/kocrs.json"); }), ErrorCode::ParseError);
}

TEST(Io, ParseErrorCarriesLocation) {
  try {
    parse_instance("{\"setting\": \"hard\",\n \"items\": [ }");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  try {
    parse_instance(R"({"setting": "hard", "items": [{"atom": []}]})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("items[0].atoms"), std::string::npos) << e.what();
  }
}

TEST(Io, FileWithBadProbSum) {
  const auto path = temp_file("bad_sum.json");
  write_text(path, R"({"setting": "soft", "items": [{"atoms": [{"size": "1/2", "prob": "0.9"}]}]})");
  EXPECT_EQ(code_of([&] { load_instance(path); }), ErrorCode::ValidationError);
  std::filesystem::remove(path);
}

TEST(Fixtures, MakeFixtureNames) {
  EXPECT_EQ(make_fixture("example", std::nullopt, std::nullopt), example_greedy());
  EXPECT_EQ(make_fixture("thm31", R("1/10"), std::nullopt), thm31_instance(R("1/10")));
  EXPECT_EQ(make_fixture("thm41", std::nullopt, std::nullopt), thm41_instance(R("1/10"), R("1/200")));
  EXPECT_EQ(code_of([] { make_fixture("nope", std::nullopt, std::nullopt); }), ErrorCode::InvalidArgument);
}
