#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "nlsthresh/errors.hpp"
#include "nlsthresh/evolution.hpp"
#include "nlsthresh/ground_state.hpp"
#include "nlsthresh/profile.hpp"
#include "nlsthresh/thresholds.hpp"

namespace nls {

/// Shortest round-trippable decimal form ("%.17g").
inline std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
    return v;
  }
}

class ByteWriter {
 public:
  template <class T>
  void put(T v) {
    v = to_little(v);
    const auto* p = reinterpret_cast<const unsigned char*>(&v);
    bytes_.insert(bytes_.end(), p, p + sizeof(T));
  }
  void raw(const char* s, std::size_t n) { bytes_.insert(bytes_.end(), s, s + n); }
  const std::vector<unsigned char>& bytes() const { return bytes_; }

 private:
  std::vector<unsigned char> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(std::vector<unsigned char> b) : bytes_(std::move(b)) {}

  template <class T>
  T get(const char* what) {
    if (pos_ + sizeof(T) > bytes_.size()) {
      throw FormatError(ErrorKind::FormatError, std::string("truncated file while reading ") + what, pos_);
    }
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return to_little(v);
  }
  bool magic(const char* m) {
    if (pos_ + 4 > bytes_.size() || std::memcmp(bytes_.data() + pos_, m, 4) != 0) return false;
    pos_ += 4;
    return true;
  }
  std::uint64_t pos() const { return pos_; }
  std::uint64_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::vector<unsigned char> bytes_;
  std::uint64_t pos_ = 0;
};

inline std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::InvalidInput, "cannot open " + path.string());
  return std::vector<unsigned char>(std::istreambuf_iterator<char>(in), {});
}

inline void write_file(const std::filesystem::path& path, const std::vector<unsigned char>& bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorKind::InvalidInput, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  require(static_cast<bool>(out), ErrorKind::InvalidInput, "write failed for " + path.string());
}

}  // namespace detail

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Checkpoint layout (little-endian): "NLSF", u32 version, u32 N, u64 points
/// per axis (N of them), f64 spacing per axis, f64 λ, α, ω, t, then the
/// field as interleaved f64 real/imaginary parts.
inline std::vector<unsigned char> encode_checkpoint(const WaveField& f) {
  f.validate();
  detail::ByteWriter w;
  w.raw("NLSF", 4);
  w.put<std::uint32_t>(kCheckpointVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(f.grid.dim));
  for (int a = 0; a < f.grid.dim; ++a) w.put<std::uint64_t>(f.grid.points);
  for (int a = 0; a < f.grid.dim; ++a) w.put<double>(f.grid.spacing());
  w.put<double>(f.params.lambda);
  w.put<double>(f.params.alpha);
  w.put<double>(f.params.omega);
  w.put<double>(f.time);
  for (const auto& z : f.values) {
    w.put<double>(z.real());
    w.put<double>(z.imag());
  }
  return w.bytes();
}

inline WaveField decode_checkpoint(std::vector<unsigned char> bytes) {
  detail::ByteReader r(std::move(bytes));
  if (!r.magic("NLSF")) throw FormatError(ErrorKind::FormatError, "bad magic", 0);
  const auto version = r.get<std::uint32_t>("version");
  if (version != kCheckpointVersion) {
    throw FormatError(ErrorKind::UnsupportedVersion,
                      "checkpoint version " + std::to_string(version) + " is not supported", 4);
  }
  const std::uint64_t dim_at = r.pos();
  const auto dim = r.get<std::uint32_t>("dimension");
  if (dim != 1 && dim != 2) throw FormatError(ErrorKind::FormatError, "unsupported dimension", dim_at);
  std::vector<std::uint64_t> sizes(dim);
  for (auto& n : sizes) {
    const std::uint64_t at = r.pos();
    n = r.get<std::uint64_t>("axis size");
    if (!is_power_of_two(n) || n < 8 || n > (std::uint64_t{1} << 30)) {
      throw FormatError(ErrorKind::FormatError, "axis size must be a power of two >= 8", at);
    }
    if (n != sizes[0]) throw FormatError(ErrorKind::FormatError, "axes must have equal sizes", at);
  }
  std::vector<double> spacing(dim);
  for (auto& h : spacing) {
    const std::uint64_t at = r.pos();
    h = r.get<double>("axis spacing");
    if (!(std::isfinite(h) && h > 0.0)) throw FormatError(ErrorKind::FormatError, "bad spacing", at);
    if (h != spacing[0]) throw FormatError(ErrorKind::FormatError, "axes must share the spacing", at);
  }
  ModelParams p;
  p.dim = static_cast<int>(dim);
  p.lambda = r.get<double>("lambda");
  p.alpha = r.get<double>("alpha");
  p.omega = r.get<double>("omega");
  const double t = r.get<double>("time");
  const std::uint64_t total = dim == 1 ? sizes[0] : sizes[0] * sizes[0];
  if (r.remaining() != total * 16) {
    throw FormatError(ErrorKind::FormatError,
                      "payload holds " + std::to_string(r.remaining()) + " bytes, expected " +
                          std::to_string(total * 16),
                      r.pos() + std::min<std::uint64_t>(r.remaining(), total * 16));
  }
  std::vector<Complex> values(total);
  for (auto& z : values) {
    const double re = r.get<double>("field");
    const double im = r.get<double>("field");
    z = Complex(re, im);
  }
  const CartesianGrid g(p.dim, static_cast<double>(sizes[0]) * spacing[0] / 2.0, sizes[0]);
  WaveField f;
  f.grid = g;
  f.values = std::move(values);
  f.params = p;
  f.time = t;
  if (!f.all_finite()) throw FormatError(ErrorKind::FormatError, "field contains non-finite values", 0);
  return f;
}

inline void write_checkpoint(const WaveField& f, const std::filesystem::path& path) {
  detail::write_file(path, encode_checkpoint(f));
}

inline WaveField read_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(detail::read_file(path));
}

inline void write_observables_csv(const ObservableSeries& s, std::ostream& out) {
  out << "t,mass,energy,grad_sq,variance,Q,S,dt\n";
  for (const auto& r : s.records) {
    out << fmt_num(r.t) << ',' << fmt_num(r.mass) << ',' << fmt_num(r.energy) << ','
        << fmt_num(r.grad_sq) << ',' << fmt_num(r.variance) << ',' << fmt_num(r.Q) << ','
        << fmt_num(r.S) << ',' << fmt_num(r.dt) << '\n';
  }
}

inline void write_profile_csv(const RadialProfile& p, std::ostream& out) {
  out << "r,value\n";
  for (std::size_t j = 0; j < p.values.size(); ++j) {
    out << fmt_num(p.grid.node(j)) << ',' << fmt_num(p.values[j]) << '\n';
  }
}

/// Log-spaced samples of γ*, r*, ρ* on [a_min, a_max].
inline void write_thresholds_csv(const ThresholdSet& ts, double a_min, double a_max, std::size_t count,
                                 std::ostream& out) {
  require(a_min > 0.0 && a_max >= a_min && count >= 1, ErrorKind::InvalidInput, "bad threshold range");
  out << "a,gamma_star,r_star,rho_star\n";
  for (std::size_t i = 0; i < count; ++i) {
    const double a = count == 1 ? a_min
                                : std::exp(std::log(a_min) + (std::log(a_max) - std::log(a_min)) *
                                                                 static_cast<double>(i) / (count - 1));
    const auto t = evaluate_thresholds(ts, a);
    out << fmt_num(a) << ',' << fmt_num(t.gamma) << ',' << fmt_num(t.r) << ',' << fmt_num(t.rho) << '\n';
  }
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  detail::write_file(path, std::vector<unsigned char>(text.begin(), text.end()));
}

/// 64-bit FNV-1a over the bytes of the cache key.
inline std::uint64_t ground_state_key(const ModelParams& p, const RadialGrid& g) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](const void* data, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ULL;
    }
  };
  const std::int64_t dim = p.dim;
  const std::uint64_t n = g.n_points;
  mix(&dim, sizeof dim);
  mix(&p.alpha, sizeof p.alpha);
  mix(&p.lambda, sizeof p.lambda);
  mix(&p.omega, sizeof p.omega);
  mix(&g.r_max, sizeof g.r_max);
  mix(&n, sizeof n);
  return h;
}

/// Shooting ground state, read from `cache_dir` when present and stored there
/// otherwise. An empty directory disables caching.
inline GroundState cached_ground_state(const ModelParams& p, const RadialGrid& g,
                                       const std::filesystem::path& cache_dir) {
  if (cache_dir.empty()) return solve_shooting(p, g);
  char name[40];
  std::snprintf(name, sizeof name, "gs_%016llx.bin", static_cast<unsigned long long>(ground_state_key(p, g)));
  const auto path = cache_dir / name;
  if (std::filesystem::exists(path)) {
    try {
      detail::ByteReader r(detail::read_file(path));
      if (r.magic("NLSG") && r.get<std::uint32_t>("version") == 1) {
        const auto dim = r.get<std::int32_t>("dim");
        const double alpha = r.get<double>("alpha"), lambda = r.get<double>("lambda"),
                     omega = r.get<double>("omega"), rmax = r.get<double>("r_max");
        const auto n = r.get<std::uint64_t>("n");
        const double resid = r.get<double>("residual");
        if (dim == p.dim && alpha == p.alpha && lambda == p.lambda && omega == p.omega &&
            rmax == g.r_max && n == g.n_points && r.remaining() == n * 8) {
          std::vector<double> v(n);
          for (auto& x : v) x = r.get<double>("value");
          GroundState gs;
          gs.params = p;
          gs.profile = RadialProfile(g, std::move(v), p.dim);
          gs.norms = radial_norms(gs.profile, {p.alpha + 2.0}, true);
          gs.residual_linf = resid;
          gs.method = SolverMethod::Shooting;
          return gs;
        }
      }
    } catch (const Error&) {
      // unreadable cache entries are recomputed
    }
  }
  GroundState gs = solve_shooting(p, g);
  detail::ByteWriter w;
  w.raw("NLSG", 4);
  w.put<std::uint32_t>(1);
  w.put<std::int32_t>(p.dim);
  w.put<double>(p.alpha);
  w.put<double>(p.lambda);
  w.put<double>(p.omega);
  w.put<double>(g.r_max);
  w.put<std::uint64_t>(g.n_points);
  w.put<double>(gs.residual_linf);
  for (double x : gs.profile.values) w.put<double>(x);
  const auto tmp = path.string() + ".tmp";
  detail::write_file(tmp, w.bytes());
  std::filesystem::rename(tmp, path);
  return gs;
}

}  // namespace nls
