#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "ddfilter/coherence.hpp"
#include "ddfilter/filter.hpp"
#include "ddfilter/metrics.hpp"
#include "ddfilter/optimize.hpp"
#include "ddfilter/oracle.hpp"
#include "ddfilter/sequences.hpp"
#include "ddfilter/spectra.hpp"

namespace ddfilter::io {

using nlohmann::json;

/// %.17g; non-finite values print as nan / inf / -inf.
std::string format_double(double v);

/// Compact JSON with every floating-point number at 17 significant digits
/// (non-finite numbers become null), so equal inputs give identical bytes.
std::string dump(const json& j);

/// Writes to a sibling temporary file and renames it over `path`; the
/// temporary is removed if anything fails.
void write_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// {"variant": name, params...}. Tabulated takes "omega"/"density" arrays or
/// "csv": path (relative paths resolve against `base`). Throws BadConfig on
/// unknown variants, unknown keys and missing parameters.
NoiseSpectrum spectrum_from_json(const json& j, const std::filesystem::path& base = {});
NoiseSpectrum load_spectrum(const std::filesystem::path& path);
json to_json(const NoiseSpectrum& spec);

/// Two columns (omega, S) after a header line.
NoiseSpectrum read_tabulated_csv(const std::filesystem::path& path);

/// {"family", "n", "deltas", "width_ratio"}. When deltas are present they
/// are used as given; otherwise the canonical family of order n is built.
json to_json(const PulseSequence& seq);
PulseSequence sequence_from_json(const json& j);

/// "udd:10", "cpmg:4", "fid", or "@path.json" for a serialized sequence.
PulseSequence parse_sequence(std::string_view token);

/// Multiplies every frequency parameter of the model by `factor`, leaving
/// densities untouched (unit conversion of the frequency axis).
NoiseSpectrum rescale_frequency(const NoiseSpectrum& spec, double factor);

std::string filter_csv(const FilterSamples& samples);
std::string curve_csv(const CoherenceCurve& curve);
std::string ratio_csv(const RatioSamples& ratio);

std::string_view to_string(RatioFlag flag) noexcept;

json to_json(const ChiResult& r);
json to_json(const CoherenceCurve& curve);
json to_json(const FilterMetrics& m);
json to_json(const BandpassProfile& p);
json to_json(const OptimizationResult& r);
json to_json(const BaddResult& r);
json to_json(const OracleReport& r);

}  // namespace ddfilter::io
