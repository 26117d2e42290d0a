#pragma once

#include <iosfwd>
#include <string>

#include "matquad/extensions.hpp"
#include "matquad/measure.hpp"
#include "matquad/moments.hpp"

namespace matquad {

/// Moment input document: {"p": int, "moments": [S_0, S_1, ...]} with each
/// S_i given as a row-major nested array. Strong sequences additionally set
/// "min_index" to -2n1.
MomentSequence read_moment_sequence(std::istream& in);
MomentSequence read_moment_sequence_file(const std::string& path);

StrongSequence read_strong_sequence(std::istream& in);
StrongSequence read_strong_sequence_file(const std::string& path);

/// True when the document carries a negative "min_index".
bool is_strong_document_file(const std::string& path);

/// Measure document: {"atoms": [{"x": ..., "mass": [[...]]}], optional
/// "infinity_mass", "residual"}. Numbers are written with 17 significant
/// digits so reruns are byte-identical and round-trip exactly.
std::string measure_to_json(const AtomicMeasure& measure, double residual);
void write_measure_file(const std::string& path, const AtomicMeasure& measure, double residual);

AtomicMeasure read_measure(std::istream& in);
AtomicMeasure read_measure_file(const std::string& path);

}  // namespace matquad
