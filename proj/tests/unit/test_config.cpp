#include "cdois/config.hpp"
#include "cdois/errors.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

using namespace cdois;
using namespace cdois::config;

namespace {

int error_line(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

}  // namespace

TEST(Config, EmptyDocumentGivesDefaults) {
    const auto cfg = parse_config("{}");
    EXPECT_EQ(cfg, RunConfig{});
    EXPECT_EQ(cfg.model, ModelParams(0.05, 10.0));
    EXPECT_FALSE(cfg.altered.has_value());
    EXPECT_EQ(cfg.simulation_params(), cfg.model);
    EXPECT_EQ(cfg.tranches, standard_tranches());
    EXPECT_EQ(cfg.contract.grid_steps(), 20);
    const auto sim = cfg.sim_config();
    EXPECT_EQ(sim.real, sim.altered);
    EXPECT_EQ(sim.n_paths, 100000);
}

TEST(Config, FullDocument) {
    const std::string text = R"({
  "model": {"rho": 0.1, "mu": 0.2},
  "altered": {"rho": 0.3, "lambda": 4},
  "contract": {"maturity": 3, "rate": 0.02, "periods_per_year": 12},
  "tranches": [[0, 0.03], {"a": 0.3, "d": 1}],
  "loss_spec": "linear",
  "mc": {"paths": 5000, "seed": 18446744073709551615, "chunk_size": 100, "threads": 2},
  "surface": {"time_bins": 4, "loss_bins": 8},
  "sweep": {"axis": "rho_alt", "values": [0.1, 0.2], "rho_ratios": [1, 2], "lambda_ratios": [1, 3],
            "timing_c": 0.1, "timing_b": 0.5},
  "outputs": {"dir": "out", "format": "tsv"}
})";
    const auto cfg = parse_config(text);
    EXPECT_DOUBLE_EQ(cfg.model.lambda(), 5.0);
    EXPECT_EQ(cfg.altered, ModelParams(0.3, 4.0));
    EXPECT_EQ(cfg.contract, Contract(3.0, 0.02, 12));
    ASSERT_EQ(cfg.tranches.size(), 2u);
    EXPECT_EQ(cfg.tranches[1], Tranche(0.3, 1.0));
    EXPECT_EQ(cfg.loss_spec, LossSpec::Linear);
    EXPECT_EQ(cfg.mc.seed, 18446744073709551615ULL);
    EXPECT_EQ(cfg.surface->loss_bins, 8);
    EXPECT_EQ(cfg.sweep.axis, "rho_alt");
    EXPECT_EQ(*cfg.sweep.timing_b, 0.5);
    EXPECT_EQ(cfg.outputs.format, "tsv");
    const auto sim = cfg.sim_config();
    EXPECT_EQ(sim.altered, ModelParams(0.3, 4.0));
    EXPECT_EQ(sim.threads, 2);
    EXPECT_TRUE(sim.surface.has_value());
}

TEST(Config, RoundTripIsIdentityOnCanonicalForm) {
    const std::string inputs[] = {
        "{}",
        R"({"model": {"rho": 0.07, "mu": 0.3}, "tranches": [[0.1, 0.2]], "mc": {"paths": 7}})",
        R"({"altered": {"rho": 0.2, "lambda": 3.3}, "surface": {}, "sweep": {"timing_c": 1, "timing_b": 2}})",
        R"({"contract": {"rate": 0.031, "maturity": 7.25}, "tranches": [], "outputs": {"format": "tsv"}})",
    };
    for (const auto& in : inputs) {
        const auto first = parse_config(in);
        const std::string canon = serialize_config(first);
        const auto second = parse_config(canon);
        EXPECT_EQ(first, second) << in;
        EXPECT_EQ(serialize_config(second), canon) << in;
    }
}

TEST(Config, EmptyTrancheListIsAllowed) { EXPECT_TRUE(parse_config(R"({"tranches": []})").tranches.empty()); }

TEST(Config, ErrorsCarryLineNumbers) {
    EXPECT_EQ(error_line("{\n  \"model\": {\n    \"rho\": -1,\n    \"lambda\": 10\n  }\n}"), 3);
    EXPECT_EQ(error_line("{\n  \"model\": {\"rho\": 0.05, \"lambda\": 10},\n  \"tranches\": [\n    [0, 0.03],\n    [0.5, 0.2]\n  ]\n}"), 5);
    EXPECT_EQ(error_line("{\n  \"mc\": {\n    \"paths\": 0\n  }\n}"), 3);
    EXPECT_EQ(error_line("{\n\n  \"colour\": 1\n}"), 3);
    EXPECT_EQ(error_line("{\n  \"model\": {\"rho\": 0.05,,}\n}"), 2);
    EXPECT_EQ(error_line("{\n  \"model\": {\"rho\": 0.05}\n}"), 2);
    EXPECT_EQ(error_line("{\n  \"sweep\": {\n    \"axis\": \"nu\"\n  }\n}"), 3);
    EXPECT_EQ(error_line("{\n  \"outputs\": {\"format\":\n \"xml\"}\n}"), 3);
}

TEST(Config, SchemaViolations) {
    EXPECT_THROW(parse_config("[]"), ConfigError);
    EXPECT_THROW(parse_config(R"({"model": {"rho": 0.05, "lambda": 10, "mu": 0.1}})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"model": {"lambda": 10}})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"tranches": "senior"})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"tranches": [[0.1]]})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"mc": {"seed": -4}})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"mc": {"paths": 1.5}})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"sweep": {"timing_c": 1}})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"sweep": {"rho_ratios": []}})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"loss_spec": "quadratic"})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"contract": {"rate": -0.01}})"), ConfigError);
}

TEST(Config, LineOfPointer) {
    const std::string text = "{\n  \"a\": [\n    1,\n    {\"b\": 2}\n  ]\n}";
    EXPECT_EQ(line_of(text, "/a"), 2);
    EXPECT_EQ(line_of(text, "/a/0"), 3);
    EXPECT_EQ(line_of(text, "/a/1/b"), 4);
    EXPECT_EQ(line_of(text, "/missing"), 0);
}

TEST(Config, LoadFromFile) {
    const std::string path = testing::TempDir() + "cdois_cfg.json";
    {
        std::ofstream os(path);
        os << R"({"mc": {"paths": 42}})";
    }
    EXPECT_EQ(load_config(path).mc.paths, 42);
    std::remove(path.c_str());
    try {
        load_config(path);
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.line(), 0);
    }
}
