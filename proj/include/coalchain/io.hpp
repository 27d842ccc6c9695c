#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "coalchain/model.hpp"

namespace coalchain {

/// JSON text for instances and solutions. Doubles are written with shortest
/// round-trip precision, so parse(emit(x)) == x exactly.
///
/// Parsing throws InputError on malformed text, unknown names, dangling ids
/// or negative quantities.
std::string emit_instance(const Instance& inst);
Instance parse_instance(std::string_view text);

/// The solution file also records the instance's seed and config hash.
std::string emit_solution(const Solution& sol, const Instance& inst);
Solution parse_solution(std::string_view text);

Instance read_instance(const std::filesystem::path& path);
void write_instance(const std::filesystem::path& path, const Instance& inst);
Solution read_solution(const std::filesystem::path& path);
void write_solution(const std::filesystem::path& path, const Solution& sol, const Instance& inst);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace coalchain
