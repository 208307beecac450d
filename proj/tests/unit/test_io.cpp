#include <gtest/gtest.h>

#include <filesystem>

#include "predlab/error.hpp"
#include "predlab/io.hpp"
#include "predlab/svg.hpp"

using namespace predlab;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "predlab_io_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Io, KernelJsonPairedForm) {
  const Json j = Json::parse(R"({"omega": 1, "poles": [[0.5, 0.8, 1], [2, 0]], "numerator": [1, 0.5], "paired": true})");
  const auto k = kernel_from_json(j);
  EXPECT_EQ(k.poles().size(), 3u);
  EXPECT_EQ(k.denominator_degree(), 3);
  const auto again = kernel_from_json(kernel_to_json(k));
  for (double w : {-1.0, 0.3, 2.0}) EXPECT_EQ(eval_transfer(again, w), eval_transfer(k, w));
  EXPECT_EQ(kernel_to_json(again), kernel_to_json(k));
}

TEST(Io, KernelJsonRejectsBadInput) {
  EXPECT_THROW(kernel_from_json(Json::parse(R"({"omega": 1, "poles": [[1, 0]]})")), Error);
  EXPECT_THROW(kernel_from_json(Json::parse(R"({"omega": 1, "poles": [[1, -0.5]], "numerator": [1], "paired": true})")),
               Error);
  try {
    kernel_from_json(Json::parse(R"({"omega": 1, "poles": [[1, 0.5]], "numerator": [1]})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonConjugateSymmetric);
  }
}

TEST(Io, PredictorJson) {
  const auto p = predictor_from_json(Json::parse(R"({"omega": 1, "poles": [[1, 0]], "numerator": [1], "gamma": -3})"));
  EXPECT_EQ(p.gamma(), -3.0);
  EXPECT_EQ(predictor_to_json(p).at("gamma"), -3.0);
}

TEST(Io, MixedSpectrumRoundTrip) {
  const Json j = Json::parse(R"({"atoms": [[0.2, 1, -1], [-0.5, 2]],
    "density": {"components": [{"kind": "raised_cosine", "lo": -0.4, "hi": 0.1, "amplitude": [0, 1]},
                               {"kind": "sampled", "nodes": [0.1, 0.3, 0.6], "values": [0, [1, 1], 0]}]},
    "class": "LOW", "epsilon": 0.1, "omega": 1})");
  const MixedSpectrum ms = mixed_spectrum_from_json(j);
  EXPECT_EQ(ms.atoms().size(), 2u);
  EXPECT_EQ(ms.density().size(), 2u);
  const MixedSpectrum again = mixed_spectrum_from_json(mixed_spectrum_to_json(ms));
  EXPECT_EQ(mixed_spectrum_to_json(again), mixed_spectrum_to_json(ms));
  EXPECT_EQ(again.eval(1.3), ms.eval(1.3));
}

TEST(Io, CsvRoundTripIsExact) {
  const SampledSignal s{-1.5, 0.1, {{0.1, -1e-300}, {1.0 / 3.0, 2.0}, {-7e10, 0.0}}};
  write_signal_csv(scratch("sig.csv"), s);
  const SampledSignal back = read_signal_csv(scratch("sig.csv"));
  EXPECT_EQ(back.values, s.values);
  EXPECT_EQ(back.t0, s.t0);
  EXPECT_NEAR(back.dt, s.dt, 1e-15);

  const SampledSpectrum x{-2.0, 0.5, {{1.0, 2.0}, {3.0, 4.0}}};
  write_spectrum_csv(scratch("spec.csv"), x);
  EXPECT_EQ(read_spectrum_csv(scratch("spec.csv")).values, x.values);
}

TEST(Io, PredictionFilesCarryMetadata) {
  PredictionResult r;
  r.y = {0.0, 1.0, {1.0, 2.0}};
  r.yhat = {0.0, 1.0, {1.5, 2.0}};
  r.err_l2 = 0.25;
  r.err_linf = 0.5;
  r.gamma = 5.0;
  r.kernel_id = "k";
  write_prediction(scratch("pred"), r, {{"bound", 0.75}});
  const Json meta = read_json_file(scratch("pred.json"));
  EXPECT_EQ(meta.at("gamma"), 5.0);
  EXPECT_EQ(meta.at("bound"), 0.75);
  EXPECT_EQ(meta.at("grid").at("n"), 2);
  EXPECT_FALSE(meta.contains("horizon"));
}

TEST(Io, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 6.02e23, -5e-300}) EXPECT_EQ(std::stod(format_double(v)), v);
}

TEST(Svg, PlotHasOnePolylinePerSeries) {
  const std::string svg = svg_plot({{"a", {1, 10, 100}, {1e-1, 1e-3, 1e-6}}, {"b", {1, 10}, {0.5, 0.0}}}, "t", "x",
                                   "y", true, true);
  std::size_t count = 0;
  for (std::size_t pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) ++count;
  EXPECT_EQ(count, 2u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}
