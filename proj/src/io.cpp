#include "predlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "predlab/error.hpp"

namespace predlab {
namespace {

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw Error(ErrorCode::InvalidConfig, std::string(what) + " must be a number");
  return j.get<double>();
}

Json complex_pair(Complex c) { return Json::array({c.real(), c.imag()}); }

Complex complex_from(const Json& j, const char* what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {number(j[0], what), number(j[1], what)};
  throw Error(ErrorCode::InvalidConfig, std::string(what) + " must be a number or [re, im]");
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

std::vector<std::vector<double>> read_csv_rows(const std::filesystem::path& path, std::size_t columns) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != columns) throw Error(ErrorCode::IoError, "bad row in " + path.string() + ": " + line);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::pair<double, double> uniform_step(const std::vector<std::vector<double>>& rows, const std::filesystem::path& path) {
  if (rows.size() < 2) throw Error(ErrorCode::IoError, path.string() + " needs at least two rows");
  const double step = rows[1][0] - rows[0][0];
  for (std::size_t i = 2; i < rows.size(); ++i) {
    const double expected = rows[0][0] + static_cast<double>(i) * step;
    if (std::abs(rows[i][0] - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
      throw Error(ErrorCode::GridMismatch, path.string() + " is not uniformly sampled");
    }
  }
  return {rows[0][0], step};
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json kernel_to_json(const RationalAnticausalKernel& kernel) {
  Json poles = Json::array();
  for (const Pole& p : kernel.poles()) {
    if (p.b < 0.0) continue;
    poles.push_back(Json::array({p.a, p.b, p.multiplicity}));
  }
  return {{"omega", kernel.omega()}, {"poles", poles}, {"numerator", kernel.numerator()}, {"paired", true}};
}

RationalAnticausalKernel kernel_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "kernel must be an object");
  for (const char* key : {"omega", "poles", "numerator"}) {
    if (!j.contains(key)) throw Error(ErrorCode::InvalidConfig, std::string("kernel needs \"") + key + "\"");
  }
  const bool paired = j.value("paired", false);
  std::vector<Pole> poles;
  for (const Json& entry : j.at("poles")) {
    if (!entry.is_array() || entry.size() < 2 || entry.size() > 3) {
      throw Error(ErrorCode::InvalidConfig, "pole must be [a, b] or [a, b, mult]");
    }
    Pole p;
    p.a = number(entry[0], "pole a");
    p.b = number(entry[1], "pole b");
    p.multiplicity = entry.size() == 3 ? entry[2].get<int>() : 1;
    if (p.multiplicity < 1) throw Error(ErrorCode::InvalidConfig, "pole multiplicity must be >= 1");
    if (paired && p.b < 0.0) throw Error(ErrorCode::InvalidConfig, "paired kernels list only b >= 0");
    poles.push_back(p);
    if (paired && p.b > 0.0) poles.push_back({p.a, -p.b, p.multiplicity});
  }
  std::vector<double> numerator;
  for (const Json& c : j.at("numerator")) numerator.push_back(number(c, "numerator coefficient"));
  return build_kernel(std::move(poles), std::move(numerator), number(j.at("omega"), "omega"));
}

Json predictor_to_json(const PredictorTransfer& predictor) {
  Json j = kernel_to_json(predictor.kernel());
  j["gamma"] = predictor.gamma();
  return j;
}

PredictorTransfer predictor_from_json(const Json& j) {
  if (!j.contains("gamma")) throw Error(ErrorCode::InvalidConfig, "predictor needs \"gamma\"");
  return make_predictor(kernel_from_json(j), number(j.at("gamma"), "gamma"));
}

namespace {

std::string_view kind_name(DensityComponent::Kind k) {
  switch (k) {
    case DensityComponent::Kind::RaisedCosine: return "raised_cosine";
    case DensityComponent::Kind::GaussianBump: return "gaussian";
    case DensityComponent::Kind::Sampled: return "sampled";
  }
  return "raised_cosine";
}

}  // namespace

DensityComponent density_component_from_json(const Json& j) {
  DensityComponent c;
  const std::string kind = j.value("kind", "raised_cosine");
  if (kind == "raised_cosine") {
    c.kind = DensityComponent::Kind::RaisedCosine;
  } else if (kind == "gaussian") {
    c.kind = DensityComponent::Kind::GaussianBump;
  } else if (kind == "sampled") {
    c.kind = DensityComponent::Kind::Sampled;
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown density kind " + kind);
  }
  if (c.kind == DensityComponent::Kind::Sampled) {
    for (const Json& n : j.at("nodes")) c.nodes.push_back(number(n, "node"));
    for (const Json& v : j.at("values")) c.values.push_back(complex_from(v, "value"));
    if (c.nodes.size() < 2 || c.nodes.size() != c.values.size()) {
      throw Error(ErrorCode::InvalidConfig, "sampled density needs matching nodes and values");
    }
    for (std::size_t i = 1; i < c.nodes.size(); ++i) {
      if (!(c.nodes[i] > c.nodes[i - 1])) throw Error(ErrorCode::InvalidConfig, "density nodes must increase");
    }
  } else {
    c.lo = number(j.at("lo"), "lo");
    c.hi = number(j.at("hi"), "hi");
    if (!(c.hi > c.lo)) throw Error(ErrorCode::InvalidConfig, "density needs lo < hi");
    c.amplitude = complex_from(j.value("amplitude", Json(1.0)), "amplitude");
    c.sigma = j.value("sigma", 0.0);
  }
  return c;
}

Json mixed_spectrum_to_json(const MixedSpectrum& ms) {
  Json atoms = Json::array();
  for (const Atom& a : ms.atoms()) atoms.push_back(Json::array({a.omega, a.c.real(), a.c.imag()}));
  Json components = Json::array();
  for (const DensityComponent& c : ms.density()) {
    Json e = {{"kind", kind_name(c.kind)}};
    if (c.kind == DensityComponent::Kind::Sampled) {
      e["nodes"] = c.nodes;
      Json values = Json::array();
      for (Complex v : c.values) values.push_back(complex_pair(v));
      e["values"] = values;
    } else {
      e["lo"] = c.lo;
      e["hi"] = c.hi;
      e["amplitude"] = complex_pair(c.amplitude);
      if (c.sigma > 0.0) e["sigma"] = c.sigma;
    }
    components.push_back(e);
  }
  return {{"atoms", atoms},
          {"density", {{"components", components}}},
          {"class", std::string(to_string(ms.class_tag()))},
          {"epsilon", ms.epsilon()},
          {"omega", ms.omega()}};
}

MixedSpectrum mixed_spectrum_from_json(const Json& j) {
  std::vector<Atom> atoms;
  for (const Json& a : j.value("atoms", Json::array())) {
    if (!a.is_array() || (a.size() != 2 && a.size() != 3)) {
      throw Error(ErrorCode::InvalidConfig, "atom must be [omega, re] or [omega, re, im]");
    }
    atoms.push_back({number(a[0], "atom omega"), {number(a[1], "atom re"), a.size() == 3 ? number(a[2], "atom im") : 0.0}});
  }
  std::vector<DensityComponent> density;
  if (j.contains("density")) {
    for (const Json& c : j.at("density").value("components", Json::array())) {
      density.push_back(density_component_from_json(c));
    }
  }
  return make_mixed_signal(std::move(atoms), std::move(density),
                           target_class_from_string(j.value("class", std::string("LOW"))), j.value("epsilon", 0.1),
                           j.value("omega", 1.0));
}

Band band_from_json(const Json& j) {
  Band b;
  const std::string shape = j.value("shape", "raised_cosine");
  if (shape == "raised_cosine") {
    b.shape = EnvelopeShape::RaisedCosine;
  } else if (shape == "gaussian") {
    b.shape = EnvelopeShape::TruncatedGaussian;
  } else if (shape == "indicator") {
    b.shape = EnvelopeShape::Indicator;
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown band shape " + shape);
  }
  b.lo = number(j.at("lo"), "lo");
  b.hi = number(j.at("hi"), "hi");
  if (!(b.hi > b.lo)) throw Error(ErrorCode::InvalidConfig, "band needs lo < hi");
  b.amplitude = complex_from(j.value("amplitude", Json(1.0)), "amplitude");
  b.sigma = j.value("sigma", 0.0);
  b.mirror = j.value("mirror", false);
  return b;
}

void write_signal_csv(const std::filesystem::path& path, const SampledSignal& signal) {
  auto out = open_out(path);
  out << "t,re,im\n";
  for (std::size_t i = 0; i < signal.values.size(); ++i) {
    out << format_double(signal.time(i)) << ',' << format_double(signal.values[i].real()) << ','
        << format_double(signal.values[i].imag()) << '\n';
  }
}

SampledSignal read_signal_csv(const std::filesystem::path& path) {
  const auto rows = read_csv_rows(path, 3);
  const auto [t0, dt] = uniform_step(rows, path);
  SampledSignal s{t0, dt, {}};
  for (const auto& r : rows) s.values.emplace_back(r[1], r[2]);
  return s;
}

void write_spectrum_csv(const std::filesystem::path& path, const SampledSpectrum& spectrum) {
  auto out = open_out(path);
  out << "omega,re,im\n";
  for (std::size_t k = 0; k < spectrum.values.size(); ++k) {
    out << format_double(spectrum.frequency(k)) << ',' << format_double(spectrum.values[k].real()) << ','
        << format_double(spectrum.values[k].imag()) << '\n';
  }
}

SampledSpectrum read_spectrum_csv(const std::filesystem::path& path) {
  const auto rows = read_csv_rows(path, 3);
  const auto [w0, dw] = uniform_step(rows, path);
  SampledSpectrum s{w0, dw, {}};
  for (const auto& r : rows) s.values.emplace_back(r[1], r[2]);
  return s;
}

void write_prediction(const std::filesystem::path& stem, const PredictionResult& result, const Json& extra) {
  if (result.y.values.size() != result.yhat.values.size()) {
    throw Error(ErrorCode::GridMismatch, "prediction and target lengths differ");
  }
  std::filesystem::path csv = stem;
  csv += ".csv";
  {
    auto out = open_out(csv);
    out << "t,y_re,y_im,yhat_re,yhat_im\n";
    for (std::size_t i = 0; i < result.y.values.size(); ++i) {
      out << format_double(result.y.time(i)) << ',' << format_double(result.y.values[i].real()) << ','
          << format_double(result.y.values[i].imag()) << ',' << format_double(result.yhat.values[i].real()) << ','
          << format_double(result.yhat.values[i].imag()) << '\n';
    }
  }
  Json meta = {{"gamma", result.gamma},
               {"err_l2", result.err_l2},
               {"err_linf", result.err_linf},
               {"kernel", result.kernel_id},
               {"grid", {{"t0", result.y.t0}, {"dt", result.y.dt}, {"n", result.y.values.size()}}}};
  if (!std::isnan(result.horizon)) meta["horizon"] = result.horizon;
  for (const auto& [key, value] : extra.items()) meta[key] = value;
  std::filesystem::path json = stem;
  json += ".json";
  write_text_file(json, meta.dump(2) + "\n");
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

}  // namespace predlab
