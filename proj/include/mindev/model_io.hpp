#pragma once

#include <string>

#include "mindev/model.hpp"

// JSON ingestion and emission of model-spec documents and strategy documents.
// All loaders throw std::runtime_error: parse errors carry line/column,
// schema errors name the offending field, validation failures embed the
// validation report.

namespace mindev {

struct ModelSpec {
  FiniteObject obj;
  LearningData learn;
  LossMatrix loss;
};

// Parses a model-spec document.  Label order in the document becomes index
// order; "learning" defaults to |Z| = 1 and "loss" to 0/1; probability rows
// within the normalization tolerance are renormalized exactly once.
ModelSpec load_model_spec(const std::string& text);

// Inverse of load_model_spec up to formatting: loading the emitted text
// yields index-for-index identical structures.
std::string emit_model_spec(const ModelSpec& spec);

// Strategy document: {"x-label": {"z-label": [prob per y']}}.  The strategy
// must be dense; labels must be unique within their axis.
std::string emit_strategy_doc(const FiniteObject& obj, const LearningData& ld,
                              const Strategy& q);
Strategy load_strategy_doc(const std::string& text, const FiniteObject& obj,
                           const LearningData& ld);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace mindev
