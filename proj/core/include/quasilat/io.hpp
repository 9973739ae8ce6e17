#pragma once

#include <complex>
#include <string>
#include <vector>

#include "quasilat/cutproject.hpp"
#include "quasilat/diffraction.hpp"
#include "quasilat/group.hpp"
#include "quasilat/pisot.hpp"
#include "quasilat/pointset.hpp"
#include "quasilat/spectral.hpp"

namespace quasilat {

// All writers print floating values with 12 significant digits. Readers reject
// unknown keys and malformed values with a kParse error naming the field.

// v rounded to 12 significant digits, and its printed form.
double round12(double v);
std::string format_number(double v);

std::string group_to_json(const CentralExtensionGroup& G);
CentralExtensionGroup group_from_json(const std::string& text);

std::string patch_to_json(const PointPatch& P);
PointPatch patch_from_json(const std::string& text);

std::string scheme_to_json(const CutProjectScheme& scheme);
CutProjectScheme scheme_from_json(const std::string& text);

std::string measure_to_json(const WeightedPointMeasure& eta);

std::string classification_to_json(const IntPolynomial& p, const SpectrumClassification& c);

struct SpectrumRow {
  std::vector<double> theta;
  std::complex<double> density;
  double c_xi = 0.0;
  double T = 0.0;
  double cauchy_tail = 0.0;
};

std::string fibers_csv(const AlignmentReport& report);
std::string spectrum_csv(const std::vector<SpectrumRow>& rows);
std::string bragg_csv(const BraggResult& result);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace quasilat
