#include "qpww/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <ostream>

#include "qpww/errors.hpp"

namespace qpww {
namespace {

constexpr char kMagic[8] = {'Q', 'P', 'W', 'W', 'S', 'N', 'A', 'P'};

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    buf_.insert(buf_.end(), c, c + n);
  }
  void u32(std::uint32_t v) { le(v); }
  void u64(std::uint64_t v) { le(v); }
  void i64(std::int64_t v) { le(static_cast<std::uint64_t>(v)); }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v)); }
  const std::vector<unsigned char>& data() const { return buf_; }

 private:
  template <class U>
  void le(U v) {
    for (std::size_t i = 0; i < sizeof(U); ++i) buf_.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  std::vector<unsigned char> buf_;
};

class Reader {
 public:
  Reader(const std::vector<unsigned char>& buf, std::size_t end) : buf_(buf), end_(end) {}
  void bytes(void* p, std::size_t n) {
    need(n);
    std::memcpy(p, buf_.data() + pos_, n);
    pos_ += n;
  }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  std::int64_t i64() { return static_cast<std::int64_t>(le(8)); }
  double f64() { return std::bit_cast<double>(le(8)); }
  std::size_t remaining() const { return end_ - pos_; }

 private:
  void need(std::size_t n) const {
    if (end_ - pos_ < n) throw CorruptSnapshot("snapshot truncated");
  }
  std::uint64_t le(std::size_t n) {
    need(n);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(buf_[pos_ + i]) << (8 * i);
    pos_ += n;
    return v;
  }
  const std::vector<unsigned char>& buf_;
  std::size_t end_;
  std::size_t pos_ = 0;
};

std::uint32_t classify(const QPFunction& u) {
  std::uint32_t f = 0;
  if (u.is_real()) f |= flag_real;
  if (u.is_holomorphic()) f |= flag_holomorphic;
  if (std::abs(u.mean()) == 0.0) f |= flag_zero_mean;
  return f;
}

Snapshot build(StateKind kind, std::vector<QPFunction> fields, double t, long step) {
  Snapshot s{kind, t, step, std::move(fields), {}};
  for (const auto& f : s.fields) s.flags.push_back(classify(f));
  return s;
}

void require(const Snapshot& snap, StateKind kind, std::size_t n) {
  if (snap.kind != kind || snap.fields.size() != n) throw ValidationError("snapshot holds a different state kind");
}

}  // namespace

std::uint64_t fnv1a64(const void* data, std::size_t size, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

Snapshot make_snapshot(const DiffState& s, double t, long step) { return build(StateKind::diff, {s.W, s.R}, t, step); }
Snapshot make_snapshot(const SurfaceState& s, double t, long step) {
  return build(StateKind::undiff, {s.W, s.Q}, t, step);
}
Snapshot make_snapshot(const CoupledState& s, double t, long step) {
  return build(StateKind::coupled, {s.bg.W, s.bg.R, s.lin.w, s.lin.r}, t, step);
}

DiffState diff_state(const Snapshot& snap) {
  require(snap, StateKind::diff, 2);
  return {snap.fields[0], snap.fields[1]};
}
SurfaceState surface_state(const Snapshot& snap) {
  require(snap, StateKind::undiff, 2);
  return {snap.fields[0], snap.fields[1]};
}
CoupledState coupled_state(const Snapshot& snap) {
  require(snap, StateKind::coupled, 4);
  return {{snap.fields[0], snap.fields[1]}, {snap.fields[2], snap.fields[3]}};
}

void export_snapshot(const Snapshot& snap, const std::filesystem::path& path) {
  if (snap.fields.empty()) throw Error("export_snapshot: no fields");
  const Lattice& lat = snap.fields.front().lattice();
  Writer w;
  w.bytes(kMagic, sizeof kMagic);
  w.u32(kSnapshotVersion);
  w.u32(static_cast<std::uint32_t>(snap.kind));
  w.u32(static_cast<std::uint32_t>(lat.dim()));
  w.u32(static_cast<std::uint32_t>(lat.radius()));
  w.f64(lat.tolerance());
  for (double k : lat.k()) w.f64(k);
  w.f64(snap.t);
  w.i64(snap.step);
  w.u32(static_cast<std::uint32_t>(snap.fields.size()));
  for (std::size_t i = 0; i < snap.fields.size(); ++i) {
    const QPFunction& f = snap.fields[i];
    if (!f.lattice().same_as(lat)) throw Error("export_snapshot: fields on different lattices");
    w.u32(i < snap.flags.size() ? snap.flags[i] : classify(f));
    w.u64(f.coeffs().size());
    for (cplx c : f.coeffs()) {
      w.f64(c.real());
      w.f64(c.imag());
    }
  }
  const std::uint64_t sum = fnv1a64(w.data().data(), w.data().size());
  w.u64(sum);

  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(reinterpret_cast<const char*>(w.data().data()), static_cast<std::streamsize>(w.data().size()));
    if (!out) throw Error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Snapshot load_snapshot(const std::filesystem::path& path, const LatticePtr& context, std::ostream* log) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorruptSnapshot("cannot open snapshot " + path.string());
  const std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < sizeof kMagic + 4 + 8) throw CorruptSnapshot("snapshot truncated: " + path.string());
  if (std::memcmp(buf.data(), kMagic, sizeof kMagic) != 0) throw CorruptSnapshot("not a snapshot file: " + path.string());

  const std::size_t body = buf.size() - 8;
  Reader tail(buf, buf.size());
  {
    char skip[8];
    tail.bytes(skip, 8);
  }
  const std::uint32_t version = tail.u32();
  if (version != kSnapshotVersion)
    throw FormatVersionMismatch("snapshot format version " + std::to_string(version) + ", expected " +
                                std::to_string(kSnapshotVersion));
  std::uint64_t stored = 0;
  for (int i = 0; i < 8; ++i) stored |= static_cast<std::uint64_t>(buf[body + i]) << (8 * i);
  if (fnv1a64(buf.data(), body) != stored) throw CorruptSnapshot("snapshot checksum mismatch: " + path.string());

  Reader r(buf, body);
  char magic[8];
  r.bytes(magic, 8);
  r.u32();
  Snapshot snap;
  const std::uint32_t kind = r.u32();
  if (kind < 1 || kind > 3) throw CorruptSnapshot("unknown state kind " + std::to_string(kind));
  snap.kind = static_cast<StateKind>(kind);
  const std::uint32_t d = r.u32(), N = r.u32();
  if (d < 1 || d > 16 || N < 1 || N > 4096) throw CorruptSnapshot("implausible lattice header");
  const double tol = r.f64();
  std::vector<double> k(d);
  for (auto& x : k) x = r.f64();
  snap.t = r.f64();
  snap.step = r.i64();
  const LatticePtr lat = validate_lattice(k, static_cast<int>(N), tol);
  const std::uint32_t nfields = r.u32();
  if (nfields > 16) throw CorruptSnapshot("implausible field count");
  for (std::uint32_t i = 0; i < nfields; ++i) {
    snap.flags.push_back(r.u32());
    const std::uint64_t count = r.u64();
    if (count != lat->size()) throw CorruptSnapshot("field size does not match lattice");
    std::vector<cplx> c(count);
    for (auto& v : c) {
      const double re = r.f64();
      v = cplx(re, r.f64());
    }
    snap.fields.emplace_back(lat, std::move(c));
  }
  if (r.remaining() != 0) throw CorruptSnapshot("trailing bytes in snapshot");

  if (context && !context->same_as(*lat)) {
    if (context->dim() != lat->dim()) throw ValidationError("snapshot dimension differs from the run lattice");
    for (int i = 0; i < lat->dim(); ++i)
      if (context->k()[i] != lat->k()[i]) throw ValidationError("snapshot base frequencies differ from the run lattice");
    if (log)
      *log << "note: snapshot " << path.string() << " with N=" << lat->radius()
           << (context->radius() > lat->radius() ? " zero-padded into N=" : " truncated to N=") << context->radius()
           << '\n';
    for (auto& f : snap.fields) f = resample(f, context);
  }
  return snap;
}

}  // namespace qpww
