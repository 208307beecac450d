#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "predlab/fourier.hpp"
#include "predlab/kernel.hpp"
#include "predlab/predictor.hpp"
#include "predlab/signals.hpp"
#include "predlab/spectral.hpp"

namespace predlab {

using Json = nlohmann::json;

/// Shortest text that round-trips a double exactly (%.17g).
std::string format_double(double v);

/// {"omega", "poles": [[a,b,mult],...], "numerator": [c0,...], "paired"}. With "paired": true
/// each pole with b > 0 implies its mate at -b.
Json kernel_to_json(const RationalAnticausalKernel& kernel);
RationalAnticausalKernel kernel_from_json(const Json& j);

/// Kernel object plus "gamma".
Json predictor_to_json(const PredictorTransfer& predictor);
PredictorTransfer predictor_from_json(const Json& j);

/// {"atoms": [[omega,re,im],...], "density": {"components": [...]}, "class", "epsilon", "omega"}.
Json mixed_spectrum_to_json(const MixedSpectrum& ms);
MixedSpectrum mixed_spectrum_from_json(const Json& j);

DensityComponent density_component_from_json(const Json& j);
Band band_from_json(const Json& j);

void write_signal_csv(const std::filesystem::path& path, const SampledSignal& signal);
SampledSignal read_signal_csv(const std::filesystem::path& path);
void write_spectrum_csv(const std::filesystem::path& path, const SampledSpectrum& spectrum);
SampledSpectrum read_spectrum_csv(const std::filesystem::path& path);

/// <stem>.csv with (t, y_re, y_im, yhat_re, yhat_im) and <stem>.json with the scalars, the
/// grid and whatever `extra` carries (bound values).
void write_prediction(const std::filesystem::path& stem, const PredictionResult& result, const Json& extra = Json::object());

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace predlab
