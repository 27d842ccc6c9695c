#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace coalchain {

// Time is measured in hours from the start of the horizon, tonnages in
// tonnes and pad positions in metres.
using Hours = double;
using Tonnes = double;
using Metres = double;

inline constexpr Hours kHoursPerDay = 24.0;
inline constexpr Hours kTimeTol = 1e-9;
inline constexpr Tonnes kTonneTol = 1e-6;

enum class Terminal : std::uint8_t { CCT = 0, KCT = 1, NCT = 2 };
inline constexpr std::array<Terminal, 3> kTerminals{Terminal::CCT, Terminal::KCT, Terminal::NCT};

enum class Pad : std::uint8_t { A = 0, B = 1, C = 2, D = 3 };
inline constexpr std::array<Pad, 4> kPads{Pad::A, Pad::B, Pad::C, Pad::D};

enum class Reclaimer : std::uint8_t { R459 = 0, R460 = 1, R411 = 2, R412 = 3 };
inline constexpr std::array<Reclaimer, 4> kReclaimers{Reclaimer::R459, Reclaimer::R460,
                                                      Reclaimer::R411, Reclaimer::R412};

enum class StackerStream : std::uint8_t { One = 0, Two = 1, Three = 2 };

constexpr std::size_t index(Terminal t) { return static_cast<std::size_t>(t); }
constexpr std::size_t index(Pad p) { return static_cast<std::size_t>(p); }
constexpr std::size_t index(Reclaimer r) { return static_cast<std::size_t>(r); }
constexpr std::size_t index(StackerStream s) { return static_cast<std::size_t>(s); }

std::string_view to_string(Terminal t);
std::string_view to_string(Pad p);
std::string_view to_string(Reclaimer r);
Terminal parse_terminal(std::string_view s);
Pad parse_pad(std::string_view s);
Reclaimer parse_reclaimer(std::string_view s);

/// Day bucket containing `t`: day k covers [24k, 24(k+1)).
int day_of(Hours t);
constexpr Hours day_start(int day) { return kHoursPerDay * day; }

}  // namespace coalchain
