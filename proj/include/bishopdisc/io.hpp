#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "bishopdisc/disc_function.hpp"
#include "bishopdisc/structure.hpp"
#include "bishopdisc/submanifold.hpp"

namespace bishopdisc {

using json = nlohmann::json;

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Structure descriptor:
///   {"n": 2, "add_standard": true, "retract": false, "name": "...",
///    "terms": [{"monomial": [0,0,1,0], "matrix": [[...], ...]},
///              {"monomial": [...], "entries": [[row, col, value], ...]}]}
/// or {"n": 2, "standard": true}.
AlmostComplexStructure structure_from_json(const json& j);

/// Manifold descriptor {Re z = h(ξ)}, ξ = (y_1..y_m, Re w_1, Im w_1, ...):
///   {"n": 2, "m": 1, "name": "...", "terms": [{"monomial": [...], "coeff": [...]}]}
GenericSubmanifold manifold_from_json(const json& j);

/// Grid descriptor plus row-major [re, im] pairs; doubles round-trip exactly.
json to_json(const DiscFunction& f);
DiscFunction disc_function_from_json(const json& j);
json to_json(const Disc& f);
Disc disc_from_json(const json& j);
/// Fourier coefficients as [mode, re, im] triples, modes in FFT order.
json to_json(const BoundarySignal& b);
BoundarySignal boundary_signal_from_json(const json& j);

/// Sorted keys, floats printed with %.12e, two-space indentation. Non-finite
/// numbers are written as the strings "inf", "-inf", "nan".
std::string dump_report(const json& j);

}  // namespace bishopdisc
