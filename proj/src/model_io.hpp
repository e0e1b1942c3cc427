#pragma once

#include <string>

#include "subspace.hpp"

namespace rsub {

/// A fitted model together with the run configuration that produced it.
/// `config_json` is an arbitrary JSON object supplied by the caller (the CLI
/// stores its parsed flags there); it round-trips untouched.
struct ModelDocument {
  SubspaceModel model;
  std::string config_json;  // "" means no configuration recorded
};

/// JSON text of the document. Floating-point fields are written as
/// shortest-round-trip decimals, so write/read reproduces the model exactly.
std::string model_document_to_json(const ModelDocument& doc);

ModelDocument model_document_from_json(const std::string& text, const std::string& source);

void write_model_document(const ModelDocument& doc, const std::string& path);
ModelDocument read_model_document(const std::string& path);

}  // namespace rsub
