#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>

#include "qtomo/types.hpp"

// nlohmann/json ships as a single header in vendor/, exposed here through a
// thin layer so numeric payloads round-trip exactly (doubles serialize with
// shortest-round-trip precision).

namespace qtomo {

using Json = nlohmann::json;

// {"rows": r, "cols": c, "re": [...], "im": [...]} with row-major entries
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json matrix_list_to_json(const std::vector<Matrix>& ops);
std::vector<Matrix> matrix_list_from_json(const Json& j);

void write_json_file(const std::filesystem::path& path, const Json& j);
Json read_json_file(const std::filesystem::path& path);

// counts CSV: header "outcome_index,count"
void write_counts_csv(const std::filesystem::path& path,
                      const std::vector<std::int64_t>& counts);
std::vector<std::int64_t> read_counts_csv(const std::filesystem::path& path);

// coefficients CSV: header "outcome_index,re,im"
void write_coefficients_csv(const std::filesystem::path& path,
                            const Vector& coeffs);
Vector read_coefficients_csv(const std::filesystem::path& path);

}  // namespace qtomo
