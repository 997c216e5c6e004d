#include "hawkesdp/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hawkesdp/errors.hpp"
#include "json.hpp"

namespace hawkesdp {

using nlohmann::json;

namespace {

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw config_error("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot write " + path);
  out << text;
}

json kernel_to_json(const KernelSpec& spec) {
  switch (spec.kind) {
    case KernelKind::zero:
      return json{{"kind", "zero"}};
    case KernelKind::exponential:
      return json{{"kind", "exp"}, {"alpha", spec.alpha}, {"beta", spec.beta}};
    case KernelKind::box:
      return json{{"kind", "box"},
                  {"lo", spec.lo},
                  {"hi", spec.hi},
                  {"height", spec.height}};
    case KernelKind::sum: {
      json terms = json::array();
      for (const KernelSpec& term : spec.terms)
        terms.push_back(kernel_to_json(term));
      return json{{"kind", "sum"}, {"terms", std::move(terms)}};
    }
  }
  throw config_error("unknown kernel kind");
}

KernelSpec kernel_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw config_error("kernel spec must be an object with a \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "zero") return KernelSpec::zero();
    if (kind == "exp")
      return KernelSpec::exponential(j.at("alpha").get<double>(),
                                     j.at("beta").get<double>());
    if (kind == "box")
      return KernelSpec::box(j.at("lo").get<double>(), j.at("hi").get<double>(),
                             j.at("height").get<double>());
    if (kind == "sum") {
      std::vector<KernelSpec> terms;
      for (const json& t : j.at("terms")) terms.push_back(kernel_from_json(t));
      return KernelSpec::sum(std::move(terms));
    }
  } catch (const json::exception& e) {
    throw config_error(std::string("bad kernel spec: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw config_error(std::string("bad kernel spec: ") + e.what());
  }
  throw config_error("unknown kernel kind \"" + kind + "\"");
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty())
    throw config_error("expected a non-empty array of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(j.at(0).size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j.at(r);
    if (static_cast<Eigen::Index>(row.size()) != cols)
      throw config_error("ragged matrix rows");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row.at(c).get<double>();
  }
  return m;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

HawkesModel read_model_json(const std::string& path) {
  const json j = load_json_file(path);
  HawkesModel model;
  try {
    model.dim = j.at("dim").get<int>();
    const auto& baseline = j.at("baseline");
    model.baseline.resize(static_cast<Eigen::Index>(baseline.size()));
    for (Eigen::Index i = 0; i < model.baseline.size(); ++i)
      model.baseline(i) = baseline.at(i).get<double>();
    for (const json& row : j.at("kernels")) {
      std::vector<KernelSpec> specs;
      for (const json& spec : row) specs.push_back(kernel_from_json(spec));
      model.kernels.push_back(std::move(specs));
    }
  } catch (const json::exception& e) {
    throw config_error("bad model file " + path + ": " + e.what());
  }
  try {
    validate_model(model);
  } catch (const std::invalid_argument& e) {
    throw config_error("bad model file " + path + ": " + e.what());
  }
  return model;
}

void write_model_json(const std::string& path, const HawkesModel& model) {
  validate_model(model);
  json j;
  j["dim"] = model.dim;
  j["baseline"] = json::array();
  for (Eigen::Index i = 0; i < model.baseline.size(); ++i)
    j["baseline"].push_back(model.baseline(i));
  j["kernels"] = json::array();
  for (const auto& row : model.kernels) {
    json jrow = json::array();
    for (const KernelSpec& spec : row) jrow.push_back(kernel_to_json(spec));
    j["kernels"].push_back(std::move(jrow));
  }
  write_text_file(path, j.dump(2) + "\n");
}

EventStream read_events_csv(const std::string& path,
                            std::optional<double> horizon,
                            std::optional<int> dim) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("dim,time", 0) != 0)
    throw config_error(path + ": expected header \"dim,time\"");

  EventStream stream;
  int max_dim = -1;
  double max_time = 0.0;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Event e;
    char extra;
    if (std::sscanf(line.c_str(), "%d,%lf%c", &e.dim, &e.time, &extra) != 2 ||
        e.dim < 0 || !(e.time > 0.0)) {
      std::ostringstream msg;
      msg << path << ":" << line_no << ": bad event row \"" << line << "\"";
      throw config_error(msg.str());
    }
    max_dim = std::max(max_dim, e.dim);
    max_time = std::max(max_time, e.time);
    stream.events.push_back(e);
  }
  std::stable_sort(stream.events.begin(), stream.events.end(),
                   [](const Event& a, const Event& b) {
                     return a.time != b.time ? a.time < b.time : a.dim < b.dim;
                   });
  stream.dim = dim.value_or(max_dim + 1);
  stream.horizon = horizon.value_or(max_time);
  if (stream.dim <= 0) throw config_error(path + ": no events and no dim given");
  try {
    validate_stream(stream);
  } catch (const std::invalid_argument& e) {
    throw config_error(path + ": " + e.what());
  }
  return stream;
}

void write_events_csv(const std::string& path, const EventStream& stream) {
  validate_stream(stream);
  std::ostringstream out;
  out << "dim,time\n";
  for (const Event& e : stream.events)
    out << e.dim << "," << format_double(e.time) << "\n";
  write_text_file(path, out.str());
}

CountMatrix read_bins_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open " + path);
  std::vector<std::vector<std::uint32_t>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::uint32_t> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      long v = 0;
      try {
        size_t pos = 0;
        v = std::stol(cell, &pos);
        if (pos != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        std::ostringstream msg;
        msg << path << ":" << line_no << ": bad count \"" << cell << "\"";
        throw config_error(msg.str());
      }
      if (v < 0) {
        std::ostringstream msg;
        msg << path << ":" << line_no << ": negative count " << v;
        throw config_error(msg.str());
      }
      row.push_back(static_cast<std::uint32_t>(v));
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw config_error(path + ": ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw config_error(path + ": empty bin file");
  CountMatrix counts(rows.size(), rows.front().size());
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < rows.front().size(); ++c)
      counts(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rows[r][c];
  return counts;
}

void write_bins_csv(const std::string& path, const CountMatrix& counts) {
  std::ostringstream out;
  for (Eigen::Index r = 0; r < counts.rows(); ++r) {
    for (Eigen::Index c = 0; c < counts.cols(); ++c) {
      if (c) out << ",";
      out << counts(r, c);
    }
    out << "\n";
  }
  write_text_file(path, out.str());
}

void write_estimate_json(const std::string& path, const EstimateRecord& rec) {
  json j;
  j["theta"] = matrix_to_json(rec.theta);
  j["H_blocks"] = json::array();
  for (const Eigen::MatrixXd& block : rec.estimate.blocks)
    j["H_blocks"].push_back(matrix_to_json(block));
  j["eta"] = json::array();
  for (Eigen::Index i = 0; i < rec.estimate.eta_hat.size(); ++i)
    j["eta"].push_back(rec.estimate.eta_hat(i));
  j["delta_bin"] = rec.estimate.delta_bin;
  j["lag"] = rec.estimate.lag();
  j["sigma2"] = rec.sigma2;
  if (std::isinf(rec.epsilon))
    j["epsilon"] = "inf";
  else
    j["epsilon"] = rec.epsilon;
  if (std::isnan(rec.delta))
    j["delta"] = nullptr;
  else
    j["delta"] = rec.delta;
  j["K"] = rec.iterations;
  j["seed"] = rec.seed;
  j["method"] = rec.method;
  write_text_file(path, j.dump(2) + "\n");
}

EstimateRecord read_estimate_json(const std::string& path) {
  const json j = load_json_file(path);
  EstimateRecord rec;
  try {
    rec.theta = matrix_from_json(j.at("theta"));
    rec.estimate.delta_bin = j.at("delta_bin").get<double>();
    for (const json& block : j.at("H_blocks"))
      rec.estimate.blocks.push_back(matrix_from_json(block));
    const auto& eta = j.at("eta");
    rec.estimate.eta_hat.resize(static_cast<Eigen::Index>(eta.size()));
    for (Eigen::Index i = 0; i < rec.estimate.eta_hat.size(); ++i)
      rec.estimate.eta_hat(i) = eta.at(i).get<double>();
    rec.sigma2 = j.at("sigma2").get<double>();
    rec.epsilon = j.at("epsilon").is_string()
                      ? std::numeric_limits<double>::infinity()
                      : j.at("epsilon").get<double>();
    rec.delta = j.at("delta").is_null()
                    ? std::numeric_limits<double>::quiet_NaN()
                    : j.at("delta").get<double>();
    rec.iterations = j.at("K").get<int>();
    rec.seed = j.at("seed").get<std::uint64_t>();
    rec.method = j.at("method").get<std::string>();
  } catch (const json::exception& e) {
    throw config_error("bad estimate file " + path + ": " + e.what());
  }
  if (static_cast<int>(rec.estimate.blocks.size()) != j.at("lag").get<int>())
    throw config_error("bad estimate file " + path + ": lag mismatch");
  return rec;
}

}  // namespace hawkesdp
