#include "model_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "errors.hpp"

namespace rsub {

using json = nlohmann::json;

namespace {

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_from_json(const json& arr) {
  Vector v(static_cast<Index>(arr.size()));
  for (Index i = 0; i < v.size(); ++i) v[i] = arr[static_cast<std::size_t>(i)].get<double>();
  return v;
}

Method method_from_string(const std::string& s) {
  if (s == "robust_residual") return Method::robust_residual;
  if (s == "classical_pca") return Method::classical_pca;
  if (s == "pca_l1") return Method::pca_l1;
  throw data_error("unknown method '" + s + "' in model document");
}

TerminalStatus status_from_string(const std::string& s) {
  if (s == "converged") return TerminalStatus::converged;
  if (s == "anchor_local_min") return TerminalStatus::anchor_local_min;
  if (s == "max_iters") return TerminalStatus::max_iters;
  throw data_error("unknown terminal status '" + s + "' in model document");
}

}  // namespace

std::string model_document_to_json(const ModelDocument& doc) {
  const SubspaceModel& m = doc.model;
  json stages = json::array();
  Index total_iterations = 0;
  for (const auto& s : m.stages) {
    stages.push_back({{"iterations", s.iterations},
                      {"status", to_string(s.status)},
                      {"final_step_norm", s.final_step_norm},
                      {"energy", s.energy}});
    total_iterations += s.iterations;
  }
  json directions = json::array();
  for (Index k = 0; k < m.basis.count(); ++k) {
    directions.push_back(vector_to_json(m.basis.column(k).vec()));
  }

  json doc_json = {
      {"format", "rsub-model"},
      {"version", 1},
      {"model",
       {{"method", to_string(m.method)},
        {"dim", m.dim()},
        {"k", m.k()},
        {"offset", vector_to_json(m.offset)},
        {"directions", directions},
        {"energies", m.energies},
        {"stages", stages}}},
      {"trace_summary",
       {{"final_energy", m.energies.empty() ? 0.0 : m.energies.back()},
        {"total_iterations", total_iterations},
        {"terminal_status", to_string(m.terminal_status())}}},
  };
  doc_json["config"] = doc.config_json.empty() ? json() : json::parse(doc.config_json);
  return doc_json.dump(2) + "\n";
}

ModelDocument model_document_from_json(const std::string& text, const std::string& source) {
  json doc_json;
  try {
    doc_json = json::parse(text);
  } catch (const json::parse_error& e) {
    throw data_error(source + ": not valid JSON: " + e.what());
  }
  try {
    if (doc_json.at("format").get<std::string>() != "rsub-model") {
      throw data_error(source + ": not a model document");
    }
    const json& mj = doc_json.at("model");
    ModelDocument doc;
    doc.model.method = method_from_string(mj.at("method").get<std::string>());
    doc.model.offset = vector_from_json(mj.at("offset"));
    for (const auto& dir : mj.at("directions")) {
      doc.model.basis.append(UnitDirection(vector_from_json(dir)));
    }
    doc.model.energies = mj.at("energies").get<std::vector<double>>();
    for (const auto& sj : mj.at("stages")) {
      StageSummary s;
      s.iterations = sj.at("iterations").get<Index>();
      s.status = status_from_string(sj.at("status").get<std::string>());
      s.final_step_norm = sj.at("final_step_norm").get<double>();
      s.energy = sj.at("energy").get<double>();
      doc.model.stages.push_back(s);
    }
    if (doc_json.contains("config") && !doc_json.at("config").is_null()) {
      doc.config_json = doc_json.at("config").dump();
    }
    return doc;
  } catch (const json::exception& e) {
    throw data_error(source + ": malformed model document: " + e.what());
  }
}

void write_model_document(const ModelDocument& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  out << model_document_to_json(doc);
  if (!out) throw io_error("failed writing '" + path + "'");
}

ModelDocument read_model_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_document_from_json(buf.str(), path);
}

}  // namespace rsub
