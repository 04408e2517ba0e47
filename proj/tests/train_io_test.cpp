#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "noise_logic/train_io.hpp"

using namespace noise_logic;

TEST(TrainText, ExactLayout) {
  TrainCollection c{{4, 0.25, 7}, {SpikeTrain::from_string("0101"), SpikeTrain::from_string("1100")}};
  std::ostringstream os;
  write_trains_text(os, c);
  EXPECT_EQ(os.str(), "n_steps=4 p=0.25 seed=7\n0101\n1100\n");
}

TEST(TrainText, RoundTripProperty) {
  std::mt19937_64 gen(1);
  for (int i = 0; i < 30; ++i) {
    const ClockConfig clock{1 + gen() % 200, std::uniform_real_distribution<>(0, 1)(gen), gen()};
    TrainCollection c{clock, {}};
    for (std::uint64_t k = 0; k < gen() % 4; ++k) c.trains.push_back(generate_random_train(clock, k));

    std::ostringstream os;
    write_trains_text(os, c);
    std::istringstream is(os.str());
    const auto back = read_trains_text(is);
    EXPECT_EQ(back.clock, c.clock);
    EXPECT_EQ(back.trains, c.trains);

    const auto j = trains_from_json(nlohmann::json::parse(trains_to_json(c).dump()));
    EXPECT_EQ(j.clock, c.clock);
    EXPECT_EQ(j.trains, c.trains);
  }
}

TEST(TrainText, RejectsMalformed) {
  auto parse = [](const std::string& s) {
    std::istringstream is(s);
    return read_trains_text(is);
  };
  EXPECT_THROW(parse(""), FormatError);
  EXPECT_THROW(parse("n_steps=4 p=0.5\n0101\n"), FormatError);
  EXPECT_THROW(parse("n_steps=4 p=0.5 seed=1\n010\n"), FormatError);
  EXPECT_THROW(parse("n_steps=4 p=0.5 seed=1\n01a1\n"), FormatError);
  EXPECT_THROW(parse("n_steps=4 p=1.5 seed=1\n"), DomainError);
  EXPECT_THROW(parse("steps=4 p=0.5 seed=1\n"), FormatError);
}

TEST(TrainJson, FieldNames) {
  TrainCollection c{{3, 0.5, 9}, {SpikeTrain::from_string("101")}};
  EXPECT_EQ(trains_to_json(c).dump(), R"({"n_steps":3,"p":0.5,"seed":9,"trains":["101"]})");
  EXPECT_THROW(trains_from_json(nlohmann::json::parse(R"({"n_steps":3})")), FormatError);
}
