#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "qpww/timestepper.hpp"

namespace qpww {

inline constexpr std::uint32_t kSnapshotVersion = 1;

enum class StateKind : std::uint32_t { diff = 1, undiff = 2, coupled = 3 };

/// Per-field class flags stored alongside the coefficients.
enum FieldFlag : std::uint32_t { flag_real = 1u, flag_holomorphic = 2u, flag_zero_mean = 4u };

struct Snapshot {
  StateKind kind = StateKind::diff;
  double t = 0.0;
  long step = 0;
  std::vector<QPFunction> fields;  ///< diff: W, R; undiff: W, Q; coupled: W, R, w, r
  std::vector<std::uint32_t> flags;
};

Snapshot make_snapshot(const DiffState& s, double t, long step);
Snapshot make_snapshot(const SurfaceState& s, double t, long step);
Snapshot make_snapshot(const CoupledState& s, double t, long step);
DiffState diff_state(const Snapshot& snap);
SurfaceState surface_state(const Snapshot& snap);
CoupledState coupled_state(const Snapshot& snap);

/// Binary container, all integers and doubles little-endian:
///   "QPWWSNAP" u32 version u32 kind u32 d u32 N f64 tol f64 k[d] f64 t i64 step
///   u32 nfields { u32 flags u64 count f64 (re, im)[count] }* u64 fnv1a(previous bytes)
/// Written to a temporary file and renamed into place.
void export_snapshot(const Snapshot& snap, const std::filesystem::path& path);

/// Reads and verifies a snapshot. With a context lattice of the same d and k
/// but another N, fields are embedded (zero padded or truncated) and a note
/// is written to log. Throws CorruptSnapshot, FormatVersionMismatch, or
/// ValidationError when the base frequencies do not match the context.
Snapshot load_snapshot(const std::filesystem::path& path, const LatticePtr& context = nullptr,
                       std::ostream* log = nullptr);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(const void* data, std::size_t size, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace qpww
