#include "dtc/config.hpp"
#include "dtc/errors.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace dtc;

namespace {

constexpr double kPi = std::numbers::pi;

std::string path_of(std::string_view source) {
  try {
    parse_config(source);
  } catch (const ParseError& e) {
    return e.key_path();
  }
  return "<no error>";
}

}  // namespace

TEST(Config, DimensionlessExample) {
  const auto cfg = parse_config(R"({"command": "series", "L": 12, "OmegaT1": "pi/2",
      "epsT1": 0.3, "VT1": 0.1, "FT2": 0.25, "n_cycles": 100})");
  EXPECT_EQ(cfg.command, Command::Series);
  EXPECT_EQ(cfg.params.L, 12);
  EXPECT_EQ(cfg.params.T1, 1.0);
  EXPECT_EQ(cfg.params.T2, 10.0);
  EXPECT_EQ(cfg.params.Omega, kPi / 2);
  EXPECT_DOUBLE_EQ(cfg.params.epsilon, 0.3);
  EXPECT_DOUBLE_EQ(cfg.params.V, 0.1);
  EXPECT_DOUBLE_EQ(cfg.params.F, 0.025);
  EXPECT_EQ(cfg.params.kernel, KernelRange::NN);
  EXPECT_EQ(cfg.n_cycles, 100);
}

TEST(Config, GroupsUseTheGivenDurations) {
  const auto cfg = parse_config(R"({"L": 4, "T1": 2, "T2": 4, "OmegaT1": 1, "epsT1": 0.5,
      "VT2": 2, "FT2": 1})");
  EXPECT_DOUBLE_EQ(cfg.params.Omega, 0.5);
  EXPECT_DOUBLE_EQ(cfg.params.epsilon, 0.25);
  EXPECT_DOUBLE_EQ(cfg.params.V, 0.5);
  EXPECT_DOUBLE_EQ(cfg.params.F, 0.25);
  const auto raw = parse_config(R"({"L": 4, "T1": 2, "Omega": 1, "V": 0.3, "F": 0.02})");
  EXPECT_EQ(raw.params.Omega, 1.0);
  EXPECT_EQ(raw.params.V, 0.3);
  EXPECT_EQ(raw.params.F, 0.02);
}

TEST(Config, OmegaDefaultsToHalfPiOverT1) {
  EXPECT_DOUBLE_EQ(parse_config(R"({"L": 3, "T1": 2})").params.Omega, kPi / 4);
}

TEST(Config, ConflictingKeys) {
  EXPECT_THROW(parse_config(R"({"L": 4, "Omega": 1.5, "OmegaT1": 1.5})"), InvalidInput);
  EXPECT_THROW(parse_config(R"({"L": 4, "VT1": 0.1, "VT2": 1.0})"), InvalidInput);
}

TEST(Config, SiteCountRange) {
  EXPECT_THROW(parse_config(R"({"L": 0})"), InvalidInput);
  EXPECT_THROW(parse_config(R"({"L": 25})"), InvalidInput);
  EXPECT_EQ(path_of(R"({"command": "series"})"), "L");
  EXPECT_EQ(path_of(R"({"L": 2.5})"), "L");
}

TEST(Config, SymbolicScalars) {
  EXPECT_EQ(parse_scalar("pi/2", "x"), kPi / 2);
  EXPECT_EQ(parse_scalar("pi", "x"), kPi);
  EXPECT_EQ(parse_scalar("-pi/2", "x"), -kPi / 2);
  EXPECT_DOUBLE_EQ(parse_scalar("3*pi/4", "x"), 3 * kPi / 4);
  EXPECT_DOUBLE_EQ(parse_scalar("2pi", "x"), 2 * kPi);
  EXPECT_EQ(parse_scalar("0.25", "x"), 0.25);
  EXPECT_EQ(parse_scalar(0.25, "x"), 0.25);
  EXPECT_THROW(parse_scalar("pi/0", "x"), ParseError);
  EXPECT_THROW(parse_scalar("tau", "x"), ParseError);
  EXPECT_THROW(parse_scalar(true, "x"), ParseError);
}

TEST(Config, UnknownKeysCarryTheirPath) {
  EXPECT_EQ(path_of(R"({"L": 4, "omega": 1})"), "omega");
  EXPECT_EQ(path_of(R"({"command": "sweep", "L": 4,
      "sweep": {"axes": [{"name": "epsilon", "values": [0.1]}], "bogus": 1}})"),
            "sweep.bogus");
  EXPECT_EQ(path_of(R"({"command": "sweep", "L": 4,
      "sweep": {"axes": [{"name": "epsilon", "values": [0.1], "step": 1}]}})"),
            "sweep.axes[0].step");
  EXPECT_EQ(path_of(R"({"L": 4, "kernel": "far"})"), "kernel");
  EXPECT_EQ(path_of("{not json"), "");
}

TEST(Config, InitialStates) {
  auto cfg = parse_config(R"({"L": 4, "initial_state": "1100"})");
  EXPECT_EQ(cfg.initial_state.label(), "1100");
  EXPECT_THROW(parse_config(R"({"L": 4, "initial_state": "110"})"), InvalidInput);
  cfg = parse_config(R"({"L": 2, "initial_state": [[0, 0.7071067811865476, 0], [3, 0, 0.7071067811865476]]})");
  const auto psi = cfg.initial_state.materialize(BasisConfig(2));
  EXPECT_NEAR(psi.amplitudes()[3].imag(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(path_of(R"({"L": 2, "initial_state": [[-1, 1, 0]]})"), "initial_state[0]");
}

TEST(Config, SweepBlock) {
  const auto cfg = parse_config(R"({"command": "sweep", "L": 6, "epsT1": 0.3, "VT1": 0.1,
      "sweep": {"axes": [{"name": "F_T2", "range": [0, 0.5, 0.05]},
                         {"name": "kernel", "values": ["NN", "ALL"]}],
                "observable": "a_pi", "journal": "j.jsonl"}})");
  ASSERT_TRUE(cfg.sweep.has_value());
  EXPECT_EQ(cfg.sweep->axes[0].values.size(), 11u);
  EXPECT_EQ(cfg.sweep->size(), 22u);
  EXPECT_DOUBLE_EQ(cfg.sweep->base.epsilon, 0.3);
  EXPECT_EQ(cfg.journal->string(), "j.jsonl");
}

TEST(Config, CommandConsistency) {
  EXPECT_THROW(parse_config(R"({"command": "sweep", "L": 4})"), ParseError);
  EXPECT_THROW(parse_config(R"({"command": "series", "L": 4,
      "sweep": {"axes": [{"name": "epsilon", "values": [0.1]}]}})"),
               InvalidInput);
  EXPECT_THROW(parse_config(R"({"command": "figure", "L": 4})"), ParseError);
  EXPECT_THROW(parse_config(R"({"command": "spectrum", "L": 4, "n_cycles": 99})"), InvalidInput);
  EXPECT_THROW(parse_config(R"({"command": "dance", "L": 4})"), InvalidInput);
}

TEST(Config, OptionalFields) {
  const auto cfg = parse_config(R"({"command": "lifetime", "L": 4, "n_max": 200, "seed": 9,
      "format": "json", "method": "spectral", "pi_pair_tolerance": 0.1, "output": "res"})");
  EXPECT_EQ(cfg.n_max, 200);
  EXPECT_EQ(cfg.seed, 9);
  EXPECT_EQ(cfg.format, OutputFormat::Json);
  EXPECT_EQ(cfg.method, EvolutionMethod::SpectralPowering);
  EXPECT_EQ(cfg.pi_pair_tolerance, 0.1);
  EXPECT_EQ(cfg.output_dir, "res");
  const auto echo = config_to_json(cfg);
  EXPECT_EQ(echo.at("command"), "lifetime");
  EXPECT_EQ(echo.at("method"), "spectral");
}
